"""Degree prediction for signature polynomials.

The degree formula reads  n * deg(S) = d * deg(sigma) - sum of multiplicities
over the base locus of the projective extension sigma.  For the canonical
extensions all base-locus points of a generic curve sit on the line at
infinity, where the curve is a union of branches w(v) above v = 0 in the
chart (v, 1, w).  Intersection multiplicities are then valuations along
those branches, computed on truncated series whose coefficients live in
Q[W]/(q(W)) with q = Fh(0, 1, w): one series handles the whole conjugate
fiber and gcd-splitting against q recovers the per-fiber sums exactly.

Two routes produce the same sums: evaluating an explicit homogeneous triple
along the branches (feasible for small degrees), and assembling the
component series directly from the jet series of the branch (never builds
the T_i polynomials; the only route feasible for PGL(3) at d >= 4).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ExceptionalCurveError,
    NonIntegralSymmetryError,
    ShearRequiredError,
    TruncationError,
)
from .jets import (
    CURVE_RING,
    FY_EXPONENT,
    GROUP_THETAS,
    HOMOG_RING,
    SIGMA_DEGREE,
    SIGMA_RECIPES,
    TAU_COEFFS,
    CurveInput,
    GroupId,
    HomogeneousTriple,
    apply_group_element,
    require_non_exceptional,
    theta_table,
)
from .poly import SparsePoly, gcd, resultant
from .series import (
    INF,
    SeriesRing,
    TruncatedSeries,
    evaluate_poly_at_series,
    fiber_min_valuation_sum,
    fiber_valuation_sum,
    intpoly_normalize,
    newton_branch,
)

CHART_RING = ("v", "w")
DEFAULT_TRUNC = 80
MAX_TRUNC = 320

# starting truncation per group for the canonical multiplicity route: the
# per-branch valuations are degree-independent (0 / 16 / 12 / 72), so a
# small margin suffices; TruncationError doubles adaptively for special
# curves (Fermat corner tangencies etc.)
GROUP_START_TRUNC = {
    GroupId.SE2: 16,
    GroupId.SA2: 30,
    GroupId.A2: 26,
    GroupId.PGL3: 80,
}


# ---------------------------------------------------------------------------
# the chart at infinity


@dataclass(frozen=True)
class InfinityChart:
    """The curve seen around the line at infinity in the chart x1 = 1."""

    curve: CurveInput
    H: SparsePoly  # Fh(v, 1, w) over CHART_RING
    q: tuple[int, ...]  # Fh(0, 1, w), integer primitive
    sheared_with: Optional[tuple] = None  # 3x3 matrix applied to the input


def _chart_polys(curve: CurveInput) -> tuple[SparsePoly, tuple[int, ...], Fraction]:
    Fh = curve.homogenized()
    H = SparsePoly(
        CHART_RING, {(e[0], e[1]): c for e, c in Fh.dehomogenize("x1").terms.items()}
    )
    # q(w) = Fh(0,1,w) cuts out the finite-w fiber at infinity
    qpoly = H.evaluate_partial({"v": Fraction(0)})
    coeffs = [Fraction(0)] * (int(qpoly.degree_in("w")) + 1 if qpoly.terms else 1)
    for e, c in qpoly.terms.items():
        coeffs[e[1]] += c
    den = 1
    for c in coeffs:
        den = den * c.denominator // _g(den, c.denominator)
    q = intpoly_normalize([int(c * den) for c in coeffs])
    top = Fh.evaluate_partial({"x0": Fraction(0), "x1": Fraction(0), "x2": Fraction(1)})
    return H, q, top.constant_value()


def _g(a, b):
    import math

    return math.gcd(a, b)


def chart_conditions_hold(curve: CurveInput) -> bool:
    """Strict chart conditions: [0:0:1] off the curve and a simple fiber."""
    H, q, corner = _chart_polys(curve)
    if corner == 0:
        return False
    if len(q) - 1 != curve.d:
        return False
    dq = [i * q[i] for i in range(1, len(q))]
    from .series import intpoly_gcd

    return len(intpoly_gcd(q, dq)) == 1


def chart_workable(curve: CurveInput) -> bool:
    """Relaxed conditions the branch machinery can handle without shearing:
    the finite-w fiber must be simple, and when [0:0:1] lies on the curve it
    must be a smooth point (its branch gets its own chart)."""
    Fh = curve.homogenized()
    H, q, corner = _chart_polys(curve)
    if len(q) >= 2:
        dq = [i * q[i] for i in range(1, len(q))]
        from .series import intpoly_gcd

        if len(intpoly_gcd(q, dq)) != 1:
            return False
    if corner == 0:
        grad = [
            Fh.partial_derivative(v).evaluate(
                {"x0": Fraction(0), "x1": Fraction(0), "x2": Fraction(1)}
            )
            for v in HOMOG_RING
        ]
        if all(g == 0 for g in grad):
            return False
    return True


def _shear_matrix(group: GroupId, rng: random.Random, attempt: int) -> list[list[Fraction]]:
    if group is GroupId.SE2:
        m = Fraction(rng.randint(1, 40), rng.randint(1, 7))
        c = (1 - m * m) / (1 + m * m)
        s = 2 * m / (1 + m * m)
        return [[Fraction(1), 0, 0], [0, c, s], [0, -s, c]]
    lam = Fraction(rng.randint(1, 1000))
    if attempt % 2 == 0:
        # x -> x + lam*y restores a missing y^d term (condition (i))
        return [[Fraction(1), 0, 0], [0, Fraction(1), lam], [0, 0, Fraction(1)]]
    return [[Fraction(1), 0, 0], [0, Fraction(1), 0], [0, lam, Fraction(1)]]


def infinity_chart(
    curve: CurveInput, group: GroupId, seed: int = 0, max_retries: int = 5
) -> InfinityChart:
    """Chart data, shearing with an element of the group when even the
    relaxed conditions fail (multiplicity sums are group-invariant, so the
    sheared curve answers for the original)."""
    if chart_workable(curve):
        H, q, _ = _chart_polys(curve)
        return InfinityChart(curve, H, q)
    rng = random.Random(seed ^ 0x5EED)
    for attempt in range(max_retries):
        m = _shear_matrix(group, rng, attempt)
        cur2 = apply_group_element(curve, m, group)
        if chart_workable(cur2):
            H, q, _ = _chart_polys(cur2)
            return InfinityChart(cur2, H, q, sheared_with=tuple(map(tuple, m)))
    raise ShearRequiredError(
        "could not normalize the chart at infinity after shearing retries"
    )


# ---------------------------------------------------------------------------
# branch pieces of the infinite fiber


@dataclass
class BranchPiece:
    """One piece of the curve along the line at infinity: either the whole
    finite-w fiber (coefficients in Q[W]/q) or the corner [0:0:1] branch.

    Stores the homogeneous-coordinate series (x0, x1, x2) of the branch in
    its local parameter together with the fiber modulus (None = single
    rational branch)."""

    ring: SeriesRing
    q: Optional[tuple[int, ...]]
    x0: TruncatedSeries
    x1: TruncatedSeries
    x2: TruncatedSeries


def infinity_pieces(curve: CurveInput, trunc: int) -> list[BranchPiece]:
    """Branch pieces covering all points of the curve on the line at
    infinity: the finite-w fiber as one quotient-ring piece plus the corner
    branch when [0:0:1] lies on the (there smooth) curve."""
    Fh = curve.homogenized()
    H, q, corner = _chart_polys(curve)
    pieces: list[BranchPiece] = []
    if len(q) >= 2:
        dq = [i * q[i] for i in range(1, len(q))]
        from .series import intpoly_gcd

        if len(intpoly_gcd(q, dq)) != 1:
            raise ShearRequiredError("infinite fiber is not simple; shear required")
        ring = SeriesRing(q)
        w = newton_branch(H, "v", "w", ring, ring.generator(), trunc)
        one = TruncatedSeries.constant(ring, Fraction(1))
        pieces.append(BranchPiece(ring, q, TruncatedSeries.variable(ring), one, w))
    if corner == 0:
        ring = SeriesRing([0, 1])
        ring2 = ("s", "u")
        H2 = SparsePoly(
            ring2, {(e[0], e[1]): c for e, c in Fh.dehomogenize("x2").terms.items()}
        )
        zero_pt = {"s": Fraction(0), "u": Fraction(0)}
        ds = H2.partial_derivative("s").evaluate(zero_pt)
        du = H2.partial_derivative("u").evaluate(zero_pt)
        one = TruncatedSeries.constant(ring, Fraction(1))
        t = TruncatedSeries.variable(ring)
        if du != 0:
            br = newton_branch(H2, "s", "u", ring, ring.generator(), trunc)
            pieces.append(BranchPiece(ring, None, t, br, one))
        elif ds != 0:
            H2s = SparsePoly(ring2, {(e[1], e[0]): c for e, c in H2.terms.items()})
            br = newton_branch(H2s, "s", "u", ring, ring.generator(), trunc)
            pieces.append(BranchPiece(ring, None, br, t, one))
        else:
            raise ShearRequiredError("[0:0:1] is a singular point of the curve")
    return pieces


def canonical_components_on_piece(
    curve: CurveInput, group: GroupId, piece: BranchPiece, trunc: int, rel: int = 32
) -> list[TruncatedSeries]:
    """The three canonical sigma components along a branch piece, assembled
    from the jet series: T_i contributes x0^tau_i * Theta_i(jets) * F_y^d_i,
    never touching the T_i polynomials.

    ``rel`` caps every series ``rel`` orders past its first known term;
    relative precision survives multiplication, and insufficient caps
    surface as TruncationError in the downstream valuation queries."""
    from .series import evaluate_polys_at_series

    ring = piece.ring

    def rcap(s: TruncatedSeries) -> TruncatedSeries:
        return s.with_trunc(min(s.trunc, s.min_exp() + rel))

    x0_inv = piece.x0.invert(trunc + 8)
    x_series = rcap(piece.x1 * x0_inv)
    y_series = rcap(piece.x2 * x0_inv)
    dx = x_series.derivative()
    dx_inv = rcap(dx.invert(trunc + 8))
    needed = GROUP_THETAS[group]
    n_max = max(
        (n + 1 for i in needed for e in theta_table()[i].terms for n, k in enumerate(e) if k),
        default=1,
    )
    u: dict[str, TruncatedSeries] = {}
    cur = y_series
    for k in range(1, n_max + 1):
        cur = rcap(cur.derivative() * dx_inv)
        u[f"u{k}"] = cur
    for k in range(n_max + 1, 9):
        u[f"u{k}"] = TruncatedSeries.zero(ring, trunc)
    fy = evaluate_polys_at_series(
        [curve.fy()], {"x": x_series, "y": y_series}, ring, rel_cap=rel
    )[0]
    theta_series = evaluate_polys_at_series(
        [theta_table()[i] for i in needed], u, ring, rel_cap=rel
    )
    fy_pows: dict[int, TruncatedSeries] = {}

    def fy_pow(k: int) -> TruncatedSeries:
        if k not in fy_pows:
            fy_pows[k] = _pow_rel(fy, k, rel)
        return fy_pows[k]

    x0_pows: dict[int, TruncatedSeries] = {0: TruncatedSeries.constant(ring, Fraction(1))}

    def x0_pow(k: int) -> TruncatedSeries:
        if k not in x0_pows:
            x0_pows[k] = _pow_rel(piece.x0, k, rel)
        return x0_pows[k]

    d = curve.d
    t_series: dict[int, TruncatedSeries] = {}
    for i, th in zip(needed, theta_series):
        a, b = TAU_COEFFS[i]
        t_series[i] = rcap(th * fy_pow(FY_EXPONENT[i]) * x0_pow(a * d + b))
    comps = []
    for x0p, factors in SIGMA_RECIPES[group]:
        c = x0_pow(x0p)
        for i, p in factors:
            c = rcap(c * _pow_rel(t_series[i], p, rel))
        comps.append(c)
    return comps


def _pow_rel(s: TruncatedSeries, n: int, rel: int) -> TruncatedSeries:
    def rcap(x: TruncatedSeries) -> TruncatedSeries:
        return x.with_trunc(min(x.trunc, x.min_exp() + rel))

    result = TruncatedSeries.constant(s.ring, Fraction(1))
    base = s
    while n:
        if n & 1:
            result = rcap(result * base)
        n >>= 1
        if n:
            base = rcap(base * base)
    return result


# ---------------------------------------------------------------------------
# branch series and component series


@dataclass
class BranchData:
    """Jet and Theta series along the generic branch above v = 0."""

    ring: SeriesRing
    q: tuple[int, ...]
    w: TruncatedSeries  # w(v)
    fy_beta: TruncatedSeries
    theta_beta: dict[int, TruncatedSeries]
    trunc: int


def branch_data(
    chart: InfinityChart, needed_thetas: Sequence[int], trunc: int = DEFAULT_TRUNC
) -> BranchData:
    """Expand w(v), the jets u_k, F_y and the needed Thetas along the fiber."""
    ring = SeriesRing(chart.q)
    w = newton_branch(chart.H, "v", "w", ring, ring.generator(), trunc)
    v_inv = TruncatedSeries(ring, {(-1, 0): 1}, 1, INF)
    x_series = v_inv
    y_series = w * v_inv
    # u_{k+1} = -v^2 d/dv of u_k along x = 1/v
    n_max = max(
        (n + 1 for i in needed_thetas for e in theta_table()[i].terms for n, k in enumerate(e) if k),
        default=1,
    )
    u: dict[str, TruncatedSeries] = {}
    cur = y_series
    for k in range(1, n_max + 1):
        cur = -(cur.derivative().shift(2))
        u[f"u{k}"] = cur
    for k in range(n_max + 1, 9):
        u[f"u{k}"] = TruncatedSeries.zero(ring, trunc)
    fy = evaluate_poly_at_series(
        chart.curve.fy(), {"x": x_series, "y": y_series}, ring
    )
    thetas = {}
    for i in needed_thetas:
        thetas[i] = evaluate_poly_at_series(theta_table()[i], u, ring)
    return BranchData(ring, chart.q, w, fy, thetas, trunc)


def component_series(data: BranchData, group: GroupId, d: int) -> list[TruncatedSeries]:
    """The three sigma components along the branch: each T_i contributes
    v^tau_i * Theta_i(beta) * F_y(beta)^(d_i), and the recipe's x0 powers
    contribute plain v powers."""
    fy_pows: dict[int, TruncatedSeries] = {}

    def fy_pow(k: int) -> TruncatedSeries:
        if k not in fy_pows:
            fy_pows[k] = data.fy_beta**k
        return fy_pows[k]

    t_series: dict[int, TruncatedSeries] = {}
    for i, th in data.theta_beta.items():
        a, b = TAU_COEFFS[i]
        t_series[i] = (th * fy_pow(FY_EXPONENT[i])).shift(a * d + b)
    comps = []
    for x0_pow, factors in SIGMA_RECIPES[group]:
        c = TruncatedSeries.constant(data.ring, Fraction(1))
        for i, p in factors:
            c = c * t_series[i] ** p
        comps.append(c.shift(x0_pow))
    return comps


def sigma_series_from_triple(
    data: BranchData, sigma: HomogeneousTriple
) -> list[TruncatedSeries]:
    """Explicit-triple route: evaluate each component at (v, 1, w(v))."""
    v = TruncatedSeries.variable(data.ring)
    assignment = {"x0": v, "x1": TruncatedSeries.constant(data.ring, Fraction(1)), "x2": data.w}
    return [evaluate_poly_at_series(s, assignment, data.ring) for s in sigma.sigma]


# ---------------------------------------------------------------------------
# corner point [0:0:1] (only reachable on the explicit-triple route)


def _corner_valuation(curve: CurveInput, sigma: HomogeneousTriple, a: Sequence[Fraction]) -> int:
    """m_p(F, a.sigma) at [0:0:1] when that corner lies on the curve."""
    Fh = curve.homogenized()
    G = _combine(sigma, a)
    ring2 = ("s", "u")
    H2 = SparsePoly(ring2, {(e[0], e[1]): c for e, c in Fh.dehomogenize("x2").terms.items()})
    G2 = SparsePoly(ring2, {(e[0], e[1]): c for e, c in G.dehomogenize("x2").terms.items()})
    ds = H2.partial_derivative("s").evaluate({"s": Fraction(0), "u": Fraction(0)})
    du = H2.partial_derivative("u").evaluate({"s": Fraction(0), "u": Fraction(0)})
    ring = SeriesRing([0, 1])
    trunc = DEFAULT_TRUNC
    while True:
        try:
            if du != 0:
                br = newton_branch(H2, "s", "u", ring, ring.generator(), trunc)
                s_var = TruncatedSeries.variable(ring)
                val = evaluate_poly_at_series(G2, {"s": s_var, "u": br}, ring).valuation()
            elif ds != 0:
                H2s = SparsePoly(ring2, {(e[1], e[0]): c for e, c in H2.terms.items()})
                G2s = SparsePoly(ring2, {(e[1], e[0]): c for e, c in G2.terms.items()})
                br = newton_branch(H2s, "s", "u", ring, ring.generator(), trunc)
                s_var = TruncatedSeries.variable(ring)
                val = evaluate_poly_at_series(G2s, {"s": s_var, "u": br}, ring).valuation()
            else:
                raise ShearRequiredError(
                    "corner point [0:0:1] is singular on the curve; shear required"
                )
            return val
        except TruncationError:
            if trunc >= MAX_TRUNC:
                raise
            trunc *= 2


def _combine(sigma: HomogeneousTriple, a: Sequence[Fraction]) -> SparsePoly:
    acc = SparsePoly.zero(HOMOG_RING)
    for coeff, comp in zip(a, sigma.sigma):
        acc = acc + comp.scale(Fraction(coeff))
    return acc


# ---------------------------------------------------------------------------
# affine base points (non-generic inputs; absent for generic curves of
# degree >= 4, but present for special curves like the cubic fixture)


def _resultant_y(curve: CurveInput, g: SparsePoly) -> SparsePoly:
    return resultant(curve.F, g, "y")


def affine_base_candidates(
    curve: CurveInput, affine_components: Sequence[SparsePoly]
) -> Optional[SparsePoly]:
    """Squarefree polynomial in x cutting out the x-coordinates of possible
    affine base points on the curve; None when provably empty."""
    from .poly import square_free_part

    if curve.F.degree_in("y") <= 0:
        return None
    g: Optional[SparsePoly] = None
    for s in affine_components:
        if s.is_zero():
            continue
        if s.is_constant():
            return None
        r = _resultant_y(curve, s)
        g = r if g is None else gcd(g, r)
        if g.is_constant():
            return None
    if g is None or g.is_constant():
        return None
    gsf = square_free_part(g)
    lcy = _lc_y(curve.F)
    if not lcy.is_constant() and gcd(gsf, lcy).total_degree() > 0:
        raise ShearRequiredError(
            "affine base candidates collide with the leading y-coefficient of F"
        )
    return gsf


def _lc_y(F: SparsePoly) -> SparsePoly:
    d = int(F.degree_in("y"))
    terms = {}
    for e, c in F.terms.items():
        if e[1] == d:
            terms[(e[0], 0)] = c
    return SparsePoly(F.ring, terms)


def _ord_over_locus(R: SparsePoly, gsf: SparsePoly) -> int:
    """Sum over the roots of gsf of the vanishing order of R (R nonzero)."""
    from .poly import exact_div

    total = 0
    while True:
        h = gcd(R, gsf)
        if h.total_degree() <= 0:
            return total
        total += int(h.total_degree())
        R = exact_div(R, h)


def affine_trial_sum(
    curve: CurveInput, affine_combination: SparsePoly, gsf: SparsePoly
) -> int:
    """Sum over the curve points above V(gsf) of m_p(F, combination): with a
    non-vanishing leading y-coefficient the x-resultant order counts exactly
    the fiber multiplicities."""
    if affine_combination.is_zero():
        raise ValueError("zero combination")
    R = _resultant_y(curve, affine_combination)
    if R.is_zero():
        raise ValueError("combination shares a factor with F (unlucky line)")
    return _ord_over_locus(R, gsf)


def affine_ideal_sum(
    curve: CurveInput, affine_components: Sequence[SparsePoly], gsf: SparsePoly
) -> int:
    """Sum over curve points above V(gsf) of min_i m_p(F, component_i)."""
    from .poly import exact_div

    Rs = []
    for s in affine_components:
        if s.is_zero():
            continue
        R = _resultant_y(curve, s)
        if R.is_zero():
            raise ValueError("component vanishes on the curve")
        Rs.append(R)
    active = gsf
    level = 0
    total = 0
    while active.total_degree() > 0:
        g_all = active
        for R in Rs:
            g_all = gcd(g_all, R)
            if g_all.is_constant():
                break
        resolved_deg = int(active.total_degree()) - max(int(g_all.total_degree()), 0)
        total += level * resolved_deg
        if g_all.is_constant():
            return total
        active = g_all
        # every surviving root has ord >= level+1 in every component: divide
        # each resultant once by the (squarefree) active factor to descend
        Rs = [exact_div(R, active) for R in Rs]
        level += 1
        if level > 10_000:
            raise RuntimeError("affine ideal recursion did not terminate")
    return total


# ---------------------------------------------------------------------------
# multiplicity sums


@dataclass(frozen=True)
class MultiplicityReport:
    trials: tuple[tuple[tuple, int], ...]  # (a-vector, sum)
    min_sum: int
    route: str  # "resultant-order" | "series-valuation" | "generic-closed-form"
    lower_bound: Optional[int] = None
    sandwich_closed: Optional[bool] = None


def mult_sum_line(
    curve: CurveInput,
    sigma: HomogeneousTriple,
    a: Sequence,
    trunc: int = DEFAULT_TRUNC,
    _data_cache: Optional[dict] = None,
) -> int:
    """Sum over base-locus points on the curve of m_p(F, a0*s0+a1*s1+a2*s2).

    Covers the fiber at infinity (all base points of the canonical triples on
    generic curves); the corner [0:0:1] is handled in its own chart when it
    lies on the curve.  Affine base points are the caller's lookout (see
    base_locus_on_curve).
    """
    a = [Fraction(x) for x in a]
    Fh = curve.homogenized()
    corner_on_curve = (
        Fh.evaluate({"x0": Fraction(0), "x1": Fraction(0), "x2": Fraction(1)}) == 0
    )
    H, q, _corner = _chart_polys(curve)
    from .series import intpoly_gcd

    dq = [i * q[i] for i in range(1, len(q))]
    if len(q) >= 2 and len(intpoly_gcd(q, dq)) != 1:
        raise ShearRequiredError("infinite fiber is not simple; shear required")
    total = 0
    while True:
        try:
            if len(q) >= 2:
                chart = InfinityChart(curve, H, q)
                data = None if _data_cache is None else _data_cache.get(trunc)
                if data is None:
                    data = branch_data(chart, (), trunc)
                    if _data_cache is not None:
                        _data_cache[trunc] = data
                comps = sigma_series_from_triple(data, sigma)
                comb = TruncatedSeries.zero(data.ring)
                for coeff, comp in zip(a, comps):
                    comb = comb + comp.scale(coeff)
                total = fiber_valuation_sum(comb, q)
            break
        except TruncationError:
            if trunc >= MAX_TRUNC:
                raise
            trunc *= 2
    if corner_on_curve:
        total += _corner_valuation(curve, sigma, a)
    affine = [s.dehomogenize("x0").rename_ring(CURVE_RING) for s in sigma.sigma]
    gsf = affine_base_candidates(curve, affine)
    if gsf is not None:
        import warnings

        warnings.warn(
            "affine base-point candidates present (non-generic input): "
            "adding local multiplicities above V(%s)" % gsf
        )
        comb_aff = SparsePoly.zero(CURVE_RING)
        for coeff, comp in zip(a, affine):
            comb_aff = comb_aff + comp.scale(coeff)
        total += affine_trial_sum(curve, comb_aff, gsf)
    return total


def mult_sum_line_resultant(
    curve: CurveInput, sigma: HomogeneousTriple, a: Sequence
) -> int:
    """Reference route: the order at v = 0 of Res_w(Fh(v,1,w), G(v,1,w)).

    Valid when [0:0:1] is off the curve and the infinite fiber is simple;
    feasible only when the combined polynomial is small (the series route is
    the production path).
    """
    H, q, corner = _chart_polys(curve)
    if corner == 0:
        raise ShearRequiredError("corner [0:0:1] on curve: resultant route invalid")
    G = _combine(sigma, [Fraction(x) for x in a])
    G_chart = SparsePoly(
        CHART_RING, {(e[0], e[1]): c for e, c in G.dehomogenize("x1").terms.items()}
    )
    r = resultant(H, G_chart, "w")
    if r.is_zero():
        raise ValueError("resultant vanished: common factor (unlucky line)")
    return min(e[0] for e in r.terms)


def mult_min(
    curve: CurveInput,
    sigma: HomogeneousTriple,
    trials: int = 3,
    seed: int = 0,
    trunc: int = DEFAULT_TRUNC,
) -> MultiplicityReport:
    """Minimum over random lines of the base-locus multiplicity sum, plus the
    ideal lower bound; the sandwich closes on generic inputs."""
    if trials < 3:
        raise ValueError("at least 3 trials required")
    rng = random.Random(seed * 9176 + 11)
    cache: dict = {}
    results = []
    for _ in range(trials):
        a = tuple(Fraction(rng.randint(-10_000, 10_000)) for _ in range(3))
        while all(x == 0 for x in a):
            a = tuple(Fraction(rng.randint(-10_000, 10_000)) for _ in range(3))
        results.append((a, mult_sum_line(curve, sigma, a, trunc, _data_cache=cache)))
    min_sum = min(s for _, s in results)
    lower = _ideal_lower_bound(curve, sigma, cache, trunc)
    return MultiplicityReport(
        trials=tuple((tuple(a), s) for a, s in results),
        min_sum=min_sum,
        route="series-valuation",
        lower_bound=lower,
        sandwich_closed=(lower == min_sum) if lower is not None else None,
    )


def _ideal_lower_bound(curve, sigma, cache, trunc) -> Optional[int]:
    H, q, _ = _chart_polys(curve)
    if len(q) < 2:
        return None
    corner_on_curve = (
        curve.homogenized().evaluate(
            {"x0": Fraction(0), "x1": Fraction(0), "x2": Fraction(1)}
        )
        == 0
    )
    while True:
        try:
            data = cache.get(trunc)
            if data is None:
                chart = InfinityChart(curve, H, q)
                data = branch_data(chart, (), trunc)
                cache[trunc] = data
            comps = sigma_series_from_triple(data, sigma)
            total = fiber_min_valuation_sum(comps, q)
            break
        except TruncationError:
            if trunc >= MAX_TRUNC:
                return None
            trunc *= 2
    if corner_on_curve:
        # per-component corner valuations: use unit vectors
        vals = []
        for k in range(3):
            a = [Fraction(0)] * 3
            a[k] = Fraction(1)
            if sigma.sigma[k].is_zero():
                continue
            vals.append(_corner_valuation(curve, sigma, a))
        if vals:
            total += min(vals)
    affine = [s.dehomogenize("x0").rename_ring(CURVE_RING) for s in sigma.sigma]
    gsf = affine_base_candidates(curve, affine)
    if gsf is not None:
        total += affine_ideal_sum(curve, affine, gsf)
    return total


# ---------------------------------------------------------------------------
# multiplicity sums on the Theta route (canonical sigma, no polynomials)

# radical pair of T indices cutting out the base locus of the canonical triple
CANONICAL_AFFINE_PAIR = {
    GroupId.SE2: (1, 2),
    GroupId.SA2: (2, 4),
    GroupId.A2: (4, 5),
    GroupId.PGL3: (5, 7),
}


def canonical_affine_part(curve: CurveInput, group: GroupId) -> tuple[int, str]:
    """Affine base-point contribution for the canonical triple.

    Returns (sum, status).  For PGL(3) on dense curves of degree >= 4 the
    check is skipped (generic absence of affine base points holds there, and
    the required T_7/T_8 polynomials are not built at that scale); sparse
    inputs such as the Fermat family are always checked.  The fiber counting
    projects along y by default and falls back to projecting along x when
    base candidates collide with the leading y-coefficient of F.
    """
    if group is GroupId.PGL3 and curve.d >= 4 and len(curve.F.terms) > 6:
        return 0, "assumed-generic"
    try:
        return _canonical_affine_directional(curve, group, "y")
    except ShearRequiredError:
        return _canonical_affine_directional(curve, group, "x")


def _canonical_affine_directional(
    curve: CurveInput, group: GroupId, direction: str
) -> tuple[int, str]:
    from .jets import theta

    other = "x" if direction == "y" else "y"
    i, j = CANONICAL_AFFINE_PAIR[group]

    def res(p: SparsePoly) -> SparsePoly:
        r = resultant(curve.F, p, direction)
        if r.is_zero():
            raise ShearRequiredError("a base component vanishes on the curve")
        return r

    Ri = res(theta(curve, i).T)
    Rj = res(theta(curve, j).T)
    g = gcd(Ri, Rj)
    if g.is_constant():
        return 0, "verified-empty"
    from .poly import square_free_part

    gsf = square_free_part(g)
    lc = _lc_in_direction(curve.F, direction)
    if not lc.is_constant() and gcd(gsf, lc).total_degree() > 0:
        raise ShearRequiredError(
            f"affine base candidates collide with the leading {direction}-coefficient"
        )
    # per-component resultants via multiplicativity of the resultant:
    # Res(F, prod T_i^k) = prod Res(F, T_i)^k; plain x0 powers contribute 1
    t_res = {}
    for idx in GROUP_THETAS[group]:
        t_res[idx] = res(theta(curve, idx).T)
    Rs = []
    for _x0pow, factors in SIGMA_RECIPES[group]:
        R = SparsePoly.const(CURVE_RING, 1)
        for idx, p in factors:
            R = R * t_res[idx] ** p
        Rs.append(R)
    total = _affine_ideal_from_resultants(Rs, gsf)
    return total, ("included" if total else "verified-empty")


def _lc_in_direction(F: SparsePoly, direction: str) -> SparsePoly:
    axis = 1 if direction == "y" else 0
    d = int(F.degree_in(direction))
    terms = {}
    for e, c in F.terms.items():
        if e[axis] == d:
            e2 = list(e)
            e2[axis] = 0
            terms[tuple(e2)] = c
    return SparsePoly(F.ring, terms)


def _affine_ideal_from_resultants(Rs: list[SparsePoly], gsf: SparsePoly) -> int:
    from .poly import exact_div

    active = gsf
    level = 0
    total = 0
    Rs = list(Rs)
    while active.total_degree() > 0:
        g_all = active
        for R in Rs:
            g_all = gcd(g_all, R)
            if g_all.is_constant():
                break
        resolved_deg = int(active.total_degree()) - max(int(g_all.total_degree()), 0)
        total += level * resolved_deg
        if g_all.is_constant():
            return total
        active = g_all
        Rs = [exact_div(R, active) for R in Rs]
        level += 1
        if level > 10_000:
            raise RuntimeError("affine ideal recursion did not terminate")
    return total


def _certify_zero_components(
    curve: CurveInput, group: GroupId, comps: list[TruncatedSeries]
) -> list[TruncatedSeries]:
    """Replace component series that are empty to their trusted order by
    exact zeros once a factor is proven to vanish on the curve.

    Degenerate invariants (e.g. kappa_s on a circle) make a sigma component
    identically zero along every branch; without the exact certificate the
    valuation scans would keep doubling the truncation forever.
    """
    from .jets import _vanishes_on_curve, theta

    out = []
    for comps_idx, comp in enumerate(comps):
        if not comp.is_known_zero():
            out.append(comp)
            continue
        _x0p, factors = SIGMA_RECIPES[group][comps_idx]
        vanish = False
        for i, _pw in factors:
            if _vanishes_on_curve(theta(curve, i).T, curve):
                vanish = True
                break
        if vanish:
            out.append(TruncatedSeries.zero(comp.ring, INF))
        else:
            out.append(comp)
    if all(c.is_known_zero() and c.trunc >= INF for c in out):
        raise ExceptionalCurveError(
            "signature map undefined on curve: all components vanish"
        )
    return out


def _piece_val(comb: TruncatedSeries, piece: BranchPiece) -> int:
    if piece.q is not None:
        return fiber_valuation_sum(comb, piece.q)
    return comb.valuation()


def _piece_min(comps: Sequence[TruncatedSeries], piece: BranchPiece) -> int:
    if piece.q is not None:
        return fiber_min_valuation_sum(comps, piece.q)
    return min(c.valuation() for c in comps)


def mult_min_canonical(
    curve: CurveInput,
    group: GroupId,
    trials: int = 3,
    seed: int = 0,
    trunc: int = DEFAULT_TRUNC,
) -> tuple[MultiplicityReport, InfinityChart, str]:
    """mult_min for the canonical (uncancelled) projective extension, via the
    jet series of the infinite branches (fiber piece plus corner piece);
    shears with a group element only when the branches are not workable.

    Affine base contributions (non-generic inputs only) are added at their
    generic-line value, which coincides with the per-point minimum.
    """
    if trials < 3:
        trials = 3
    chart = infinity_chart(curve, group, seed)
    work = chart.curve
    rng = random.Random(seed * 9176 + 11)
    cur_trunc = min(trunc, GROUP_START_TRUNC[group]) if trunc == DEFAULT_TRUNC else trunc
    rel = 32
    while True:
        try:
            pieces = infinity_pieces(work, cur_trunc)
            all_comps = [
                canonical_components_on_piece(work, group, p, cur_trunc, rel)
                for p in pieces
            ]
            all_comps = [
                _certify_zero_components(work, group, comps) for comps in all_comps
            ]
            results = []
            for _ in range(trials):
                a = tuple(Fraction(rng.randint(-10_000, 10_000)) for _ in range(3))
                while all(x == 0 for x in a):
                    a = tuple(Fraction(rng.randint(-10_000, 10_000)) for _ in range(3))
                total = 0
                for piece, comps in zip(pieces, all_comps):
                    comb = TruncatedSeries.zero(piece.ring)
                    for coeff, comp in zip(a, comps):
                        comb = comb + comp.scale(coeff)
                    total += _piece_val(comb, piece)
                results.append((a, total))
            lower = sum(
                _piece_min(comps, piece) for piece, comps in zip(pieces, all_comps)
            )
            break
        except TruncationError:
            if cur_trunc >= MAX_TRUNC:
                raise
            cur_trunc *= 2
            rel *= 2
    affine_sum, affine_status = canonical_affine_part(work, group)
    min_sum = min(s for _, s in results) + affine_sum
    report = MultiplicityReport(
        trials=tuple((tuple(a), s + affine_sum) for a, s in results),
        min_sum=min_sum,
        route="series-valuation",
        lower_bound=lower + affine_sum,
        sandwich_closed=(lower + affine_sum == min_sum),
    )
    return report, chart, affine_status


# ---------------------------------------------------------------------------
# series valuation tables (rational infinite point)


@dataclass(frozen=True)
class ValuationTable:
    root_w: Fraction
    val_theta: tuple[int, ...]  # val Theta_i(beta), i = 1..8
    val_fy: int
    v_i: tuple[int, ...]  # val of the homogenized T_i along alpha


def series_valuations(
    curve: CurveInput, root_w: Fraction, trunc: int = DEFAULT_TRUNC
) -> ValuationTable:
    """Valuations of Theta_1..8 and of the homogenized T_i along the branch
    at [0:1:root_w]; the root must be simple and rational."""
    H, q, _ = _chart_polys(curve)
    root_w = Fraction(root_w)
    qv = sum(Fraction(c) * root_w**k for k, c in enumerate(q))
    if qv != 0:
        raise ValueError("root_w is not a root of the infinite fiber")
    dqv = sum(Fraction(k * c) * root_w ** (k - 1) for k, c in enumerate(q) if k)
    if dqv == 0:
        raise ShearRequiredError("root_w is a multiple root; shear required")
    ring = SeriesRing([-root_w.numerator, root_w.denominator])
    cur_trunc = trunc
    while True:
        try:
            chart = InfinityChart(curve, H, q)
            # rational-root branch: modulus W - root_w
            w = newton_branch(chart.H, "v", "w", ring, ring.generator(), cur_trunc)
            v_inv = TruncatedSeries(ring, {(-1, 0): 1}, 1, INF)
            y_series = w * v_inv
            u: dict[str, TruncatedSeries] = {}
            cur = y_series
            for k in range(1, 9):
                cur = -(cur.derivative().shift(2))
                u[f"u{k}"] = cur
            fy = evaluate_poly_at_series(
                curve.fy(), {"x": v_inv, "y": y_series}, ring
            )
            val_fy = fy.valuation()
            vth = []
            vi = []
            for i in range(1, 9):
                th = evaluate_poly_at_series(theta_table()[i], u, ring)
                vt = th.valuation()
                a, b = TAU_COEFFS[i]
                vth.append(vt)
                vi.append(a * curve.d + b + vt + FY_EXPONENT[i] * val_fy)
            return ValuationTable(root_w, tuple(vth), val_fy, tuple(vi))
        except TruncationError:
            if cur_trunc >= MAX_TRUNC:
                raise
            cur_trunc *= 2


# ---------------------------------------------------------------------------
# base locus evidence


@dataclass(frozen=True)
class BaseLocusReport:
    affine_empty: Optional[bool]  # None = unresolved candidates remain
    affine_evidence: str
    infinity_points: str


def base_locus_on_curve(curve: CurveInput, sigma: HomogeneousTriple) -> BaseLocusReport:
    """Partition of the base locus on the curve into affine and infinite
    parts.  The affine test is two bivariate resultants plus a gcd
    consistency check; a constant gcd certifies emptiness."""
    if all(s.is_zero() for s in sigma.sigma):
        raise ValueError("signature map undefined on curve: zero triple")
    affine = [s.dehomogenize("x0").rename_ring(CURVE_RING) for s in sigma.sigma]
    F = curve.F
    res = []
    for g in affine:
        if g.is_zero():
            continue
        if g.is_constant():
            return BaseLocusReport(True, "a component is a nonzero constant", _inf_points(curve, sigma))
        if gcd(F, g).total_degree() > 0:
            return BaseLocusReport(
                None, "a component shares a factor with F", _inf_points(curve, sigma)
            )
        res.append(resultant(F, g, "y"))
    g = res[0]
    for r in res[1:]:
        g = gcd(g, r)
        if g.is_constant():
            break
    if g.is_constant():
        return BaseLocusReport(True, "resultant gcd is constant", _inf_points(curve, sigma))
    return BaseLocusReport(
        None,
        f"common x-candidates cut out by a degree-{g.total_degree()} polynomial",
        _inf_points(curve, sigma),
    )


def _inf_points(curve: CurveInput, sigma: HomogeneousTriple) -> str:
    Fh = curve.homogenized()
    zero = Fraction(0)
    one = Fraction(1)
    corner = Fh.evaluate({"x0": zero, "x1": zero, "x2": one}) == 0
    corner_base = corner and all(
        s.evaluate({"x0": zero, "x1": zero, "x2": one}) == 0 for s in sigma.sigma
    )
    parts = []
    _, q, _ = _chart_polys(curve)
    if len(q) >= 2:
        from .series import intpoly_gcd

        g = list(q)
        for s in sigma.sigma:
            su = s.evaluate_partial({"x0": zero, "x1": one})
            coeffs = [0] * (int(su.degree_in("x2")) + 1 if su.terms else 1)
            den = 1
            for e, c in su.terms.items():
                den = den * c.denominator
            for e, c in su.terms.items():
                coeffs[e[2]] += int(c * den)
            g = list(intpoly_gcd(g, coeffs))
            if len(g) == 1:
                break
        if len(g) > 1:
            parts.append(f"fiber base points cut out by w-polynomial of degree {len(g)-1}")
        else:
            parts.append("no base points among the finite-w fiber")
    if corner_base:
        parts.append("corner [0:0:1] is a base point on the curve")
    elif corner:
        parts.append("corner [0:0:1] on curve, not a base point")
    return "; ".join(parts)


# ---------------------------------------------------------------------------
# degree prediction


@dataclass(frozen=True)
class DegreeReport:
    d: int
    deg_sigma: int
    mult_sum: int
    n: Optional[int]
    deg_S_predicted: Optional[int]  # None when n unknown: see n_times_deg_S
    n_times_deg_S: int
    group: GroupId
    affine_base_points_excluded: bool
    affine_status: str
    mult_report: MultiplicityReport
    sheared: bool = False


def generic_degree(group: GroupId, d: int) -> int:
    """Closed-form generic signature degree; tight for generic curves."""
    if d < 3:
        raise ValueError("generic degree formulas require d >= 3")
    if d == 3:
        import warnings

        warnings.warn("generic degree at d = 3 is outside the stated hypothesis (d >= 4)")
    return {
        GroupId.SE2: 6 * d * d - 6 * d,
        GroupId.SA2: 24 * d * d - 48 * d,
        GroupId.A2: 24 * d * d - 48 * d,
        GroupId.PGL3: 96 * d * d - 216 * d,
    }[group]


def predict_degree(
    curve: CurveInput,
    group: GroupId,
    n: Optional[int] = None,
    trials: int = 3,
    seed: int = 0,
    trunc: int = DEFAULT_TRUNC,
) -> DegreeReport:
    """Degree of the signature polynomial via the canonical projective
    extension: n * deg(S) = d * deg(sigma) - mult_sum."""
    require_non_exceptional(curve, group)
    report, chart, affine_status = mult_min_canonical(
        curve, group, trials=trials, seed=seed, trunc=trunc
    )
    d = curve.d
    a, b = SIGMA_DEGREE[group]
    deg_sigma = a * d + b
    total = d * deg_sigma - report.min_sum
    if n is not None:
        if n <= 0:
            raise ValueError("symmetry order must be positive")
        if total % n:
            raise NonIntegralSymmetryError(total, n, "d*deg(sigma) - mult_sum")
        deg_s = total // n
    else:
        deg_s = None
    return DegreeReport(
        d=d,
        deg_sigma=deg_sigma,
        mult_sum=report.min_sum,
        n=n,
        deg_S_predicted=deg_s,
        n_times_deg_S=total,
        group=group,
        affine_base_points_excluded=(affine_status != "included"),
        affine_status=affine_status,
        mult_report=report,
        sheared=chart.sheared_with is not None,
    )
