"""Truncated Laurent series with coefficients in Q[W]/(q(W)).

The ring modulus q is the squarefree defining polynomial of a fiber of
points (e.g. the points at infinity of a projective curve); q need not be
irreducible.  A single series with coefficients in the quotient ring then
tracks all conjugate branches at once, and valuation sums over the fiber are
recovered by gcd-splitting against q: no number-field arithmetic and no
factorization are ever required.

Representation: a series is a dict mapping (v_exponent, W_exponent) to an
integer numerator over one shared denominator, plus ``trunc``: the first
untrusted v-exponent.  Arithmetic tracks the worst-case trusted order of the
operands.  The rational-root case is simply deg q = 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

from .errors import TruncationError
from .poly import SparsePoly

INF = 10**9

IntPoly = tuple[int, ...]  # ascending coefficients, no trailing zeros


def intpoly_normalize(c: Sequence[int]) -> IntPoly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    g = 0
    for x in c:
        g = math.gcd(g, x)
        if g == 1:
            break
    if g > 1:
        c = [x // g for x in c]
    if c and c[-1] < 0:
        c = [-x for x in c]
    return tuple(c)


def intpoly_gcd(a: Sequence[int], b: Sequence[int]) -> IntPoly:
    """Primitive gcd of two integer polynomials (positive leading coeff)."""
    fa = [Fraction(x) for x in a]
    fb = [Fraction(x) for x in b]
    while fb and any(fb):
        while fb and fb[-1] == 0:
            fb.pop()
        if not fb:
            break
        if len(fa) < len(fb):
            fa, fb = fb, fa
            continue
        lc = fb[-1]
        shift = len(fa) - len(fb)
        factor = fa[-1] / lc
        for i, c in enumerate(fb):
            fa[i + shift] -= factor * c
        while fa and fa[-1] == 0:
            fa.pop()
        if len(fa) < len(fb):
            fa, fb = fb, fa
    den_lcm = 1
    for x in fa:
        den_lcm = den_lcm * x.denominator // math.gcd(den_lcm, x.denominator)
    return intpoly_normalize([int(x * den_lcm) for x in fa])


def intpoly_rem(a: Sequence[int], q: Sequence[int]) -> IntPoly:
    """Primitive remainder of a modulo q (content-insensitive)."""
    fa = [Fraction(x) for x in a]
    dq = len(q) - 1
    lc = Fraction(q[-1])
    while len(fa) - 1 >= dq and any(fa):
        while fa and fa[-1] == 0:
            fa.pop()
        if len(fa) - 1 < dq:
            break
        shift = len(fa) - 1 - dq
        factor = fa[-1] / lc
        for i, c in enumerate(q):
            fa[i + shift] -= factor * c
    den_lcm = 1
    for x in fa:
        den_lcm = den_lcm * x.denominator // math.gcd(den_lcm, x.denominator)
    return intpoly_normalize([int(x * den_lcm) for x in fa])


class SeriesRing:
    """Coefficient domain Q[W]/(q(W)) with precomputed reduction rows."""

    def __init__(self, q: Sequence[int]):
        q = intpoly_normalize(q)
        if len(q) < 2:
            raise ValueError("modulus must have degree >= 1")
        self.q = q
        self.deg = len(q) - 1
        D = self.deg
        # W^k for k in [D, 2D-2] as integer rows over one denominator lc^(D-1)
        lc = q[-1]
        rows: list[list[Fraction]] = []
        base = [Fraction(-q[i], lc) for i in range(D)]
        rows.append(base)
        for _ in range(D - 2):
            prev = rows[-1]
            nxt = [Fraction(0)] + prev[:-1]
            top = prev[-1]
            if top:
                nxt = [a + top * b for a, b in zip(nxt, base)]
            rows.append(nxt)
        self.row_den = lc ** max(D - 1, 1)
        self.rows: dict[int, tuple[int, ...]] = {}
        for i, row in enumerate(rows):
            self.rows[D + i] = tuple(int(x * self.row_den) for x in row)

    def __repr__(self):
        return f"SeriesRing(q={self.q})"

    def element(self, vec: Sequence[Fraction]) -> "TruncatedSeries":
        """Constant series from a W-vector of rationals (degree < deg q)."""
        den = 1
        for c in vec:
            c = Fraction(c)
            den = den * c.denominator // math.gcd(den, c.denominator)
        terms = {}
        for k, c in enumerate(vec):
            c = Fraction(c)
            n = c.numerator * (den // c.denominator)
            if n:
                terms[(0, k)] = n
        return TruncatedSeries(self, terms, den, INF)

    def generator(self) -> "TruncatedSeries":
        """The class of W itself (for deg 1 moduli this is the rational root)."""
        if self.deg == 1:
            return self.element([Fraction(-self.q[0], self.q[1])])
        vec = [Fraction(0)] * self.deg
        vec[1] = Fraction(1)
        return self.element(vec)

    def invert_vec(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """Inverse of an element modulo q via the extended Euclidean scheme.

        Raises ZeroDivisionError carrying the offending gcd if the element is
        a zero divisor (callers split the fiber on that gcd).
        """
        a = [Fraction(c) for c in self.q]
        b = [Fraction(c) for c in vec]
        # extended euclid tracking the b-cofactor only
        s0: list[Fraction] = [Fraction(0)]
        s1: list[Fraction] = [Fraction(1)]

        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        a, b = trim(a), trim(b)
        if not b:
            raise ZeroDivisionError("zero element")
        while True:
            if not b:
                a, b = b, a
                s0, s1 = s1, s0
                break
            if len(b) > len(a):
                a, b = b, a
                s0, s1 = s1, s0
                continue
            if len(b) <= 0:
                break
            # a = qb + r
            q_acc = [Fraction(0)] * (len(a) - len(b) + 1)
            r = a[:]
            while len(r) >= len(b) and trim(r):
                if len(r) < len(b):
                    break
                f = r[-1] / b[-1]
                sh = len(r) - len(b)
                q_acc[sh] += f
                for i, c in enumerate(b):
                    r[i + sh] -= f * c
                trim(r)
            # s_new = s0 - q*s1
            qs1 = [Fraction(0)] * (len(q_acc) + len(s1) - 1) if s1 else []
            for i, qa in enumerate(q_acc):
                if qa:
                    for j, sc in enumerate(s1):
                        qs1[i + j] += qa * sc
            s_new = [Fraction(0)] * max(len(s0), len(qs1))
            for i, c in enumerate(s0):
                s_new[i] += c
            for i, c in enumerate(qs1):
                s_new[i] -= c
            a, b = b, trim(r)
            s0, s1 = s1, trim(s_new)
            if not b:
                break
        # now a holds the gcd and s0 its b-cofactor
        if len(a) != 1:
            err = ZeroDivisionError("zero divisor modulo q")
            err.gcd = intpoly_normalize([int(x * _clear(a)) for x in a])  # type: ignore[attr-defined]
            raise err
        g = a[0]
        inv = [c / g for c in s0]
        inv += [Fraction(0)] * (self.deg - len(inv))
        return inv[: self.deg]


def _clear(fracs: Sequence[Fraction]) -> int:
    den = 1
    for x in fracs:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return den


class TruncatedSeries:
    """Laurent series over a SeriesRing, exponents trusted below ``trunc``."""

    __slots__ = ("ring", "terms", "den", "trunc")

    def __init__(self, ring: SeriesRing, terms: dict, den: int, trunc: int):
        self.ring = ring
        self.terms = terms
        self.den = den
        self.trunc = trunc

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: SeriesRing, trunc: int = INF) -> "TruncatedSeries":
        return cls(ring, {}, 1, trunc)

    @classmethod
    def constant(cls, ring: SeriesRing, c: Fraction) -> "TruncatedSeries":
        c = Fraction(c)
        if c == 0:
            return cls.zero(ring)
        return cls(ring, {(0, 0): c.numerator}, c.denominator, INF)

    @classmethod
    def variable(cls, ring: SeriesRing) -> "TruncatedSeries":
        return cls(ring, {(1, 0): 1}, 1, INF)

    # -- bookkeeping ---------------------------------------------------------

    def normalized(self) -> "TruncatedSeries":
        terms = {jk: c for jk, c in self.terms.items() if c and jk[0] < self.trunc}
        if not terms:
            return TruncatedSeries(self.ring, {}, 1, self.trunc)
        g = self.den
        for c in terms.values():
            g = math.gcd(g, c)
            if g == 1:
                break
        if g > 1:
            terms = {jk: c // g for jk, c in terms.items()}
            return TruncatedSeries(self.ring, terms, self.den // g, self.trunc)
        return TruncatedSeries(self.ring, terms, self.den, self.trunc)

    def with_trunc(self, trunc: int) -> "TruncatedSeries":
        terms = {jk: c for jk, c in self.terms.items() if jk[0] < trunc}
        return TruncatedSeries(self.ring, terms, self.den, trunc)

    def min_exp(self) -> int:
        """Lower bound of the support (trunc when nothing is known)."""
        if not self.terms:
            return self.trunc
        return min(j for j, _ in self.terms)

    def is_known_zero(self) -> bool:
        return not self.terms

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        trunc = min(self.trunc, other.trunc)
        den = self.den * other.den // math.gcd(self.den, other.den)
        fa = den // self.den
        fb = den // other.den
        terms = {}
        for jk, c in self.terms.items():
            if jk[0] < trunc:
                terms[jk] = c * fa
        for jk, c in other.terms.items():
            if jk[0] < trunc:
                acc = terms.get(jk, 0) + c * fb
                if acc:
                    terms[jk] = acc
                else:
                    terms.pop(jk, None)
        return TruncatedSeries(self.ring, terms, den, trunc)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(
            self.ring, {jk: -c for jk, c in self.terms.items()}, self.den, self.trunc
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c: Fraction) -> "TruncatedSeries":
        c = Fraction(c)
        if c == 0:
            return TruncatedSeries.zero(self.ring, self.trunc)
        terms = {jk: x * c.numerator for jk, x in self.terms.items()}
        return TruncatedSeries(self.ring, terms, self.den * c.denominator, self.trunc).normalized()

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by v^k."""
        terms = {(j + k, w): c for (j, w), c in self.terms.items()}
        return TruncatedSeries(self.ring, terms, self.den, self.trunc + k)

    def derivative(self) -> "TruncatedSeries":
        """d/dv (Laurent rule j -> j-1)."""
        terms = {}
        for (j, w), c in self.terms.items():
            if j != 0:
                terms[(j - 1, w)] = c * j
        return TruncatedSeries(self.ring, terms, self.den, self.trunc - 1)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        ring = self.ring
        va, vb = self.min_exp(), other.min_exp()
        trunc = min(self.trunc + vb, other.trunc + va, INF)
        if not self.terms or not other.terms:
            return TruncatedSeries(ring, {}, 1, trunc)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        acc: dict[tuple[int, int], int] = {}
        get = acc.get
        for (j1, k1), c1 in a.items():
            jmax = trunc - j1
            for (j2, k2), c2 in b.items():
                if j2 >= jmax:
                    continue
                key = (j1 + j2, k1 + k2)
                acc[key] = get(key, 0) + c1 * c2
        den = self.den * other.den
        D = ring.deg
        if D > 1 and any(k >= D for (_, k) in acc):
            rows = ring.rows
            rden = ring.row_den
            red: dict[tuple[int, int], int] = {}
            for (j, k), c in acc.items():
                if k < D:
                    red[(j, k)] = red.get((j, k), 0) + c * rden
                else:
                    row = rows[k]
                    for k2 in range(D):
                        r = row[k2]
                        if r:
                            red[(j, k2)] = red.get((j, k2), 0) + c * r
            acc = red
            den *= rden
        result = TruncatedSeries(ring, acc, den, trunc)
        return result.normalized()

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("use invert() for negative powers")
        result = TruncatedSeries.constant(self.ring, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- inspection ----------------------------------------------------------

    def coeff_vec(self, j: int) -> tuple[int, ...]:
        """Integer numerator W-vector at v-exponent j (denominator ignored)."""
        vec = [0] * self.ring.deg
        for (jj, k), c in self.terms.items():
            if jj == j:
                vec[k] = c
        return tuple(vec)

    def coeff_fractions(self, j: int) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.coeff_vec(j)]

    def valuation(self) -> int:
        """Smallest trusted exponent with a nonzero coefficient.

        Raises TruncationError when the series is zero to its trusted order,
        since the true valuation is then merely bounded below.
        """
        best: Optional[int] = None
        for (j, _k), c in self.terms.items():
            if c and (best is None or j < best):
                best = j
        if best is None:
            raise TruncationError(
                f"series is O(v^{self.trunc}): increase truncation to certify valuation"
            )
        return best

    def invert(self, prec: int) -> "TruncatedSeries":
        """Multiplicative inverse to v-precision ``prec`` past the valuation."""
        v = self.valuation()
        base = self.shift(-v)  # unit part
        c0 = base.coeff_fractions(0)
        inv0 = self.ring.invert_vec(c0)
        z = self.ring.element(inv0).with_trunc(1)
        two = TruncatedSeries.constant(self.ring, Fraction(2))
        p = 1
        while p < prec:
            p = min(2 * p, prec)
            zt = TruncatedSeries(self.ring, z.terms, z.den, p)
            z = (zt * (two - base.with_trunc(p) * zt)).with_trunc(p).normalized()
        return z.shift(-v)


def evaluate_poly_at_series(
    p: SparsePoly, assignment: dict[str, TruncatedSeries], ring: SeriesRing
) -> TruncatedSeries:
    """Evaluate a sparse polynomial with series values for its variables."""
    return evaluate_polys_at_series([p], assignment, ring)[0]


def evaluate_polys_at_series(
    polys: Sequence[SparsePoly],
    assignment: dict[str, TruncatedSeries],
    ring: SeriesRing,
    rel_cap: Optional[int] = None,
) -> list[TruncatedSeries]:
    """Evaluate several polynomials sharing one power-table cache.

    ``rel_cap`` truncates every intermediate product ``rel_cap`` orders past
    its first known term; relative precision is preserved by multiplication,
    so this is sound whenever downstream valuation queries stay within the
    cap (they raise TruncationError otherwise).
    """
    pows: dict[str, list[TruncatedSeries]] = {}
    one = TruncatedSeries.constant(ring, Fraction(1))

    def cap(s: TruncatedSeries) -> TruncatedSeries:
        if rel_cap is None:
            return s
        return s.with_trunc(min(s.trunc, s.min_exp() + rel_cap))

    def power(name: str, k: int) -> TruncatedSeries:
        tab = pows.setdefault(name, [one])
        while len(tab) <= k:
            tab.append(cap(tab[-1] * assignment[name]))
        return tab[k]

    out = []
    for p in polys:
        acc = TruncatedSeries.zero(ring)
        for e, c in p.terms.items():
            term = TruncatedSeries.constant(ring, c)
            for name, k in zip(p.ring, e):
                if k:
                    term = cap(term * power(name, k))
            acc = acc + term
        out.append(acc.normalized())
    return out


def newton_branch(
    H: SparsePoly,
    param: str,
    unknown: str,
    ring: SeriesRing,
    root0: TruncatedSeries,
    prec: int,
) -> TruncatedSeries:
    """Series solution u(t) of H(t, u) = 0 with u(0) = root0.

    ``root0`` must be a simple root of H(0, .) in the quotient ring: the
    derivative dH/du at it has to be invertible (true whenever the fiber
    modulus is squarefree and root0 is the generator).
    """
    dH = H.partial_derivative(unknown)
    t = TruncatedSeries.variable(ring)
    w = root0.with_trunc(1)
    p = 1
    while p < prec:
        p = min(2 * p, prec)
        w_ext = TruncatedSeries(ring, w.terms, w.den, p)
        assignment = {param: t.with_trunc(p), unknown: w_ext}
        hv = evaluate_poly_at_series(H, assignment, ring)
        dv = evaluate_poly_at_series(dH, assignment, ring)
        w = (w_ext - hv * dv.invert(p)).with_trunc(p).normalized()
    return w


# ---------------------------------------------------------------------------
# fiber valuation sums


def fiber_valuation_sum(series: TruncatedSeries, q: IntPoly) -> int:
    """Sum over the branches of the fiber V(q) of the valuation of ``series``.

    The coefficients are scanned in increasing v-order; whenever a coefficient
    is nonzero modulo the current modulus, the branches where it does not
    vanish are resolved (their valuation is the current exponent) and the
    scan continues on the gcd part.
    """
    return _fiber_scan([series], q)


def fiber_min_valuation_sum(
    components: Sequence[TruncatedSeries], q: IntPoly
) -> int:
    """Sum over the fiber of min_i val(component_i) (the ideal lower bound)."""
    return _fiber_scan(list(components), q)


def _fiber_scan(components: list[TruncatedSeries], q: IntPoly) -> int:
    modulus = intpoly_normalize(q)
    if len(modulus) < 2:
        return 0
    total = 0
    start = min(s.min_exp() for s in components)
    stop = min(s.trunc for s in components)
    for j in range(start, stop):
        vecs = []
        any_nonzero = False
        for s in components:
            r = intpoly_rem(s.coeff_vec(j), modulus)
            if r:
                any_nonzero = True
                vecs.append(r)
        if not any_nonzero:
            continue
        g = modulus
        for r in vecs:
            g = intpoly_gcd(g, r)
            if len(g) == 1:
                break
        resolved = (len(modulus) - 1) - (len(g) - 1)
        total += j * resolved
        if len(g) == 1:
            return total
        modulus = g
    raise TruncationError(
        f"fiber not resolved below truncation {stop}: increase truncation"
    )
