"""Buchberger engine with block elimination orders.

The order is a two-block graded-reverse-lex: monomials are compared first by
their total degree in the eliminated block, grevlex-tiebroken there, then the
same in the kept block.  Any monomial touching an eliminated variable is
therefore larger than every monomial in the kept variables alone, so basis
elements whose leading monomial lives in the kept block generate the
elimination ideal.

Coefficients are primitive integer vectors throughout; reductions cross-scale
by leading-coefficient gcds and strip content at the end, so no Fraction
arithmetic happens in the inner loops.

Saturation is the caller's job via a Rabinowitsch variable (a generator
``1 - t*h`` with ``t`` placed highest in the elimination block).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError
from .poly import SparsePoly, _int_form

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class EliminationBudget:
    """Hard caps; exceeding either aborts with a loud error."""

    max_basis: int = 5000
    max_degree: int = 400


def _block_key(ne: int):
    def key(e: Exponent):
        a = e[:ne]
        b = e[ne:]
        return (
            sum(a),
            tuple(-x for x in reversed(a)),
            sum(b),
            tuple(-x for x in reversed(b)),
        )

    return key


def _divides(a: Exponent, b: Exponent) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(map(max, a, b))


def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(map(int.__sub__, a, b))


def _add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(map(int.__add__, a, b))


class _GBPoly:
    __slots__ = ("terms", "lm", "lc", "sugar")

    def __init__(self, terms: dict[Exponent, int], lm: Exponent, sugar: int):
        self.terms = terms
        self.lm = lm
        self.lc = terms[lm]
        self.sugar = sugar


def _strip_content(terms: dict[Exponent, int]) -> None:
    g = 0
    for c in terms.values():
        g = math.gcd(g, c)
        if g == 1:
            return
    if g > 1:
        for e in terms:
            terms[e] //= g


def _make_gbpoly(terms: dict[Exponent, int], key, sugar=None) -> _GBPoly:
    _strip_content(terms)
    lm = max(terms, key=key)
    if terms[lm] < 0:
        for e in terms:
            terms[e] = -terms[e]
    if sugar is None:
        sugar = max(sum(e) for e in terms)
    return _GBPoly(terms, lm, sugar)


def _reduce_full(
    terms: dict[Exponent, int], sugar: int, basis: list[_GBPoly], key, max_degree: int
) -> tuple[dict[Exponent, int], int]:
    """Fully reduce an integer polynomial modulo the basis."""
    out: dict[Exponent, int] = {}
    work = dict(terms)
    steps = 0
    while work:
        steps += 1
        if steps % 64 == 0:
            # periodic content strip keeps the integer growth in check
            g = 0
            for c in work.values():
                g = math.gcd(g, c)
                if g == 1:
                    break
            if g > 1:
                for c in out.values():
                    g = math.gcd(g, c)
                    if g == 1:
                        break
            if g > 1:
                for e in work:
                    work[e] //= g
                for e in out:
                    out[e] //= g
        m = max(work, key=key)
        if sum(m) > max_degree:
            raise BudgetExceededError(
                f"elimination budget exceeded: monomial degree {sum(m)} > {max_degree}"
            )
        c = work[m]
        reducer = None
        for g in basis:
            if _divides(g.lm, m):
                reducer = g
                break
        if reducer is None:
            del work[m]
            out[m] = c
            continue
        d = math.gcd(c, reducer.lc)
        a = reducer.lc // d
        b = c // d
        if a != 1:
            for e in work:
                work[e] *= a
            for e in out:
                out[e] *= a
        shift = _sub(m, reducer.lm)
        sugar = max(sugar, reducer.sugar + sum(shift))
        for e, cg in reducer.terms.items():
            e2 = _add(e, shift)
            acc = work.get(e2, 0) - b * cg
            if acc:
                work[e2] = acc
            else:
                work.pop(e2, None)
    _strip_content(out)
    return out, sugar


def _spoly(f: _GBPoly, g: _GBPoly) -> tuple[dict[Exponent, int], int]:
    lcm = _lcm(f.lm, g.lm)
    sf = _sub(lcm, f.lm)
    sg = _sub(lcm, g.lm)
    d = math.gcd(f.lc, g.lc)
    cf = g.lc // d
    cg = f.lc // d
    terms: dict[Exponent, int] = {}
    for e, c in f.terms.items():
        e2 = _add(e, sf)
        terms[e2] = terms.get(e2, 0) + cf * c
    for e, c in g.terms.items():
        e2 = _add(e, sg)
        acc = terms.get(e2, 0) - cg * c
        if acc:
            terms[e2] = acc
        else:
            terms.pop(e2, None)
    sugar = max(f.sugar + sum(sf), g.sugar + sum(sg))
    return terms, sugar


def _gm_update(
    basis: list[_GBPoly],
    pairs: set[tuple[int, int]],
    new_index: int,
):
    """Gebauer-Moller pair list update for basis[new_index]."""
    h = basis[new_index]
    # candidate new pairs, pruned among themselves
    cand = []
    for i in range(new_index):
        cand.append(i)
    lcms = {i: _lcm(basis[i].lm, h.lm) for i in cand}
    kept: list[int] = []
    coprime: dict[int, bool] = {
        i: all(
            min(a, b) == 0 for a, b in zip(basis[i].lm, h.lm)
        )
        for i in cand
    }
    for i in cand:
        li = lcms[i]
        redundant = False
        for j in cand:
            if j == i:
                continue
            lj = lcms[j]
            if lj != li and _divides(lj, li):
                redundant = True
                break
        if not redundant:
            kept.append(i)
    # among equal lcms keep a single representative, prefer coprime (dropped)
    seen: dict[Exponent, int] = {}
    final: list[int] = []
    for i in kept:
        li = lcms[i]
        if li in seen:
            if coprime[i]:
                seen[li] = i  # coprime representative kills the pair entirely
            continue
        seen[li] = i
        final.append(i)
    new_pairs = set()
    for li, i in seen.items():
        if not coprime[i]:
            new_pairs.add((i, new_index))
    # prune old pairs by the chain criterion with h
    for (i, j) in list(pairs):
        lij = _lcm(basis[i].lm, basis[j].lm)
        if (
            _divides(h.lm, lij)
            and _lcm(basis[i].lm, h.lm) != lij
            and _lcm(basis[j].lm, h.lm) != lij
        ):
            pairs.discard((i, j))
    pairs.update(new_pairs)


def groebner_basis(
    gens: list[SparsePoly],
    n_elim: int = 0,
    budget: EliminationBudget | None = None,
) -> list[SparsePoly]:
    """Reduced Groebner basis under the two-block grevlex order.

    ``n_elim`` is the number of leading ring variables forming the
    elimination block; 0 gives plain grevlex.
    """
    if not gens:
        raise ValueError("empty generator list")
    budget = budget or EliminationBudget()
    ring = gens[0].ring
    key = _block_key(n_elim)
    basis: list[_GBPoly] = []
    pairs: set[tuple[int, int]] = set()

    def add_poly(terms: dict[Exponent, int], sugar=None) -> None:
        p = _make_gbpoly(terms, key, sugar)
        basis.append(p)
        if len(basis) > budget.max_basis:
            raise BudgetExceededError(
                f"elimination budget exceeded: basis size > {budget.max_basis}"
            )
        _gm_update(basis, pairs, len(basis) - 1)

    for g in gens:
        if g.ring != ring:
            raise ValueError("generators must share one ring")
        if g.is_zero():
            continue
        ints, _den = _int_form(g)
        red, sugar = _reduce_full(ints, max(sum(e) for e in ints), basis, key, budget.max_degree)
        if red:
            add_poly(red, sugar)
    if not basis:
        return [SparsePoly.zero(ring)]

    heap: list[tuple[int, tuple, int, int]] = []
    staged: set[tuple[int, int]] = set()

    def stage_pairs():
        for (i, j) in pairs - staged:
            staged.add((i, j))
            lcm = _lcm(basis[i].lm, basis[j].lm)
            sugar = max(
                basis[i].sugar + sum(_sub(lcm, basis[i].lm)),
                basis[j].sugar + sum(_sub(lcm, basis[j].lm)),
            )
            heapq.heappush(heap, (sugar, key(lcm), i, j))

    stage_pairs()
    while heap:
        _sug, _k, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue  # pruned since staging
        pairs.discard((i, j))
        sterms, ssugar = _spoly(basis[i], basis[j])
        if not sterms:
            continue
        red, rsugar = _reduce_full(sterms, ssugar, basis, key, budget.max_degree)
        if red:
            add_poly(red, rsugar)
            stage_pairs()

    return _interreduce(basis, ring, key, budget)


def _interreduce(basis: list[_GBPoly], ring, key, budget) -> list[SparsePoly]:
    # minimalize: drop elements whose lm is divisible by another's lm
    keep: list[_GBPoly] = []
    lms = [g.lm for g in basis]
    for idx, g in enumerate(basis):
        if any(
            _divides(lms[k], g.lm) and (lms[k] != g.lm or k < idx)
            for k in range(len(basis))
            if k != idx
        ):
            continue
        keep.append(g)
    # full tail reduction of each against the others
    out: list[SparsePoly] = []
    for idx, g in enumerate(keep):
        others = keep[:idx] + keep[idx + 1 :]
        red, _ = _reduce_full(dict(g.terms), g.sugar, others, key, budget.max_degree)
        if not red:
            continue
        lm = max(red, key=key)
        if red[lm] < 0:
            red = {e: -c for e, c in red.items()}
        out.append(SparsePoly(ring, {e: Fraction(c) for e, c in red.items()}))
    out.sort(key=lambda p: key(p.leading(key)[0]))
    return out


def groebner_eliminate(
    gens: list[SparsePoly],
    keep: tuple[str, ...],
    budget: EliminationBudget | None = None,
) -> list[SparsePoly]:
    """Generators of the elimination ideal in Q[keep].

    The variables not in ``keep`` are eliminated with a block order (they
    form the dominant block, in ring order, so a saturation variable listed
    first in the ring sits highest).  Saturation itself is the caller's
    responsibility via a ``1 - t*h`` generator.
    """
    if not gens:
        raise ValueError("empty generator list")
    ring = gens[0].ring
    elim = tuple(v for v in ring if v not in keep)
    kept = tuple(v for v in ring if v in keep)
    internal = elim + kept
    ne = len(elim)
    gens_internal = [g.map_variables(internal) for g in gens]
    gb = groebner_basis(gens_internal, n_elim=ne, budget=budget)
    out = []
    for p in gb:
        if p.is_zero():
            continue
        lm, _ = p.leading(_block_key(ne))
        if any(lm[:ne]):
            continue
        out.append(_restrict_ring(p, kept))
    return out


def _restrict_ring(p: SparsePoly, kept: tuple[str, ...]) -> SparsePoly:
    pos = [p.ring.index(v) for v in kept]
    terms = {}
    for e, c in p.terms.items():
        terms[tuple(e[i] for i in pos)] = c
    return SparsePoly(kept, terms)
