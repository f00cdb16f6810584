"""Normal-form rewriting, products, and involution over a presentation.

Rewriting is leftmost-first: at each position a single-letter rule is
tried before the two-letter rule.  Termination is guaranteed by the
deg-lex decrease checked at presentation construction; confluence is
certified empirically by check_local_confluence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exact import conj_scalar, scalar_is_zero
from .poly import NCPoly
from .presentations import Presentation

DEFAULT_STEP_BUDGET = 500_000


def _find_redex(word, pres):
    """Leftmost redex as (pos, kind) with kind 1 or 2, or None."""
    rules1, rules2 = pres.rules1, pres.rules2
    n = len(word)
    for i in range(n):
        if word[i] in rules1:
            return i, 1
        if i + 1 < n and (word[i], word[i + 1]) in rules2:
            return i, 2
    return None


def _nf_word(word, pres, budget):
    """Normal form of a single word as a dict word -> coefficient."""
    cached = pres.nf_cache.get(word)
    if cached is not None:
        return cached
    one = pres.ctx.one()
    pending = {word: one}
    done = {}
    steps = 0
    while pending:
        w, co = pending.popitem()
        hit = pres.nf_cache.get(w)
        if hit is not None:
            for w2, s in hit.items():
                _accum(done, w2, co * s)
            continue
        redex = _find_redex(w, pres)
        if redex is None:
            _accum(done, w, co)
            continue
        steps += 1
        if steps > budget:
            raise RuntimeError(
                f"rewrite budget exceeded in {pres.name} on a word of "
                f"length {len(word)}; mis-oriented rule set?")
        i, kind = redex
        if kind == 1:
            repl = pres.rules1[w[i]]
            head, tail = w[:i], w[i + 1:]
        else:
            repl = pres.rules2[(w[i], w[i + 1])]
            head, tail = w[:i], w[i + 2:]
        for mid, s in repl:
            _accum(pending, head + mid + tail, co * s)
    done = {w: c for w, c in done.items() if not scalar_is_zero(c)}
    pres.nf_cache[word] = done
    return done


def _accum(table, word, co):
    cur = table.get(word)
    if cur is None:
        table[word] = co
    else:
        cur = cur + co
        if scalar_is_zero(cur):
            del table[word]
        else:
            table[word] = cur


def normal_form(x: NCPoly, pres: Presentation,
                budget: int = DEFAULT_STEP_BUDGET) -> NCPoly:
    """Exhaustively rewrite x; the result contains no redex."""
    out = {}
    for word, co in x.terms.items():
        if not pres.owns(word):
            bad = [g for g in word if g not in pres.alphabet]
            raise ValueError(f"word {word} uses letters {bad} "
                             f"outside {pres.name}")
        for w2, s in _nf_word(word, pres, budget).items():
            _accum(out, w2, co * s)
    return NCPoly(out)


def multiply(x: NCPoly, y: NCPoly, pres: Presentation) -> NCPoly:
    """Concatenation-bilinear product followed by normal_form."""
    return normal_form(x * y, pres)


def involution(x: NCPoly, pres: Presentation) -> NCPoly:
    """The *-operation: conjugate-linear, anti-multiplicative, normal-formed."""
    table = pres.star_table
    out = NCPoly.zero()
    for word, co in x.terms.items():
        new_co = conj_scalar(co)
        new_word = []
        for g in reversed(word):
            g2, s = table[g]
            new_word.append(g2)
            new_co = new_co * s
        out = out + NCPoly.from_word(tuple(new_word), new_co)
    return normal_form(out, pres)


star = involution


@dataclass
class ConfluenceReport:
    presentation: str
    max_degree: int
    words_checked: int = 0
    branch_pairs: int = 0
    divergences: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.divergences


def _single_steps(word, pres):
    """All one-step rewrites of word as a list of term-lists."""
    rules1, rules2 = pres.rules1, pres.rules2
    out = []
    n = len(word)
    for i in range(n):
        if word[i] in rules1:
            head, tail = word[:i], word[i + 1:]
            out.append([(head + mid + tail, s) for mid, s in rules1[word[i]]])
        if i + 1 < n and (word[i], word[i + 1]) in rules2:
            head, tail = word[:i], word[i + 2:]
            out.append([(head + mid + tail, s)
                        for mid, s in rules2[(word[i], word[i + 1])]])
    return out


def check_local_confluence(pres: Presentation, max_degree: int,
                           tol: float = 1e-9) -> ConfluenceReport:
    """Certify that every reduction choice joins to one normal form.

    Enumerates all words up to max_degree over the full alphabet
    (including eliminated letters) and normal-forms every single-step
    rewrite of each word; any pair of distinct resulting normal forms is
    reported as a divergence.
    """
    if max_degree > 6:
        raise ValueError("max_degree > 6 is unreasonably expensive")
    report = ConfluenceReport(pres.name, max_degree)
    exact = pres.ctx.mode == "exact"
    alphabet = tuple(pres.letters) + tuple(pres.extra_letters)
    words = [()]
    for _ in range(max_degree):
        words = [w + (g,) for w in words for g in alphabet]
        for word in words:
            branches = _single_steps(word, pres)
            if len(branches) < 2:
                continue
            report.words_checked += 1
            nfs = []
            for terms in branches:
                acc = NCPoly.zero()
                for w2, s in terms:
                    acc = acc + normal_form(
                        NCPoly.from_word(w2, s), pres)
                nfs.append(acc)
            base = nfs[0]
            for other in nfs[1:]:
                report.branch_pairs += 1
                diff = base - other
                bad = not diff.is_zero() if exact else not diff.is_zero(tol)
                if bad:
                    report.divergences.append((word, repr(diff)))
    return report
