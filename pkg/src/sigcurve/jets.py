"""Implicit jets of plane curves and the differential functions built on them.

For a curve F(x, y) = 0 the derivatives of y along the curve are rational in
the partials of F:

    y^(n)|_X = P_n / (F_y)^(2n-1),   P_1 = -F_x,
    P_{n+1}  = F_y*(dP_n/dx * F_y - (2n-1) P_n F_xy)
             - F_x*(dP_n/dy * F_y - (2n-1) P_n F_yy).

Eight differential functions Theta_1..Theta_8 in the jet coordinates u_k
restrict to a curve as T_i / (F_y)^(d_i); the four classifying invariant
pairs and the projective extensions of the signature maps are fixed integer
monomial combinations of the T_i recorded in the recipe tables below.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ExceptionalCurveError, VerticalLineError
from .poly import RatFunc, SparsePoly, exact_div, gcd, pseudo_remainder
from .series import SeriesRing, newton_branch

CURVE_RING = ("x", "y")
JET_RING = ("u1", "u2", "u3", "u4", "u5", "u6", "u7", "u8")
HOMOG_RING = ("x0", "x1", "x2")


class GroupId(str, Enum):
    SE2 = "SE2"
    SA2 = "SA2"
    A2 = "A2"
    PGL3 = "PGL3"


# (tau_i, d_i) as affine functions of the curve degree: tau_i = a*d + b
TAU_COEFFS = {
    1: (2, -2),
    2: (3, -4),
    3: (6, -8),
    4: (8, -12),
    5: (12, -18),
    6: (16, -24),
    7: (32, -48),
    8: (48, -72),
}
FY_EXPONENT = {1: 2, 2: 3, 3: 6, 4: 8, 5: 12, 6: 16, 7: 32, 8: 48}

# K1 = Theta_a^p / Theta_b^q, K2 = Theta_c^r / Theta_e^s per group, as
# ((num_index, num_power), (den_index, den_power)) pairs.
CLASSIFYING_RECIPES = {
    GroupId.SE2: (((2, 2), (1, 3)), ((3, 1), (1, 3))),
    GroupId.SA2: (((4, 3), (2, 8)), ((5, 1), (2, 4))),
    GroupId.A2: (((5, 2), (4, 3)), ((6, 1), (4, 2))),
    GroupId.PGL3: (((7, 3), (5, 8)), ((8, 1), (5, 4))),
}

# projective extension components: (x0_power, ((T_index, power), ...))
SIGMA_RECIPES = {
    GroupId.SE2: ((0, ((1, 3),)), (2, ((2, 2),)), (2, ((3, 1),))),
    GroupId.SA2: ((0, ((2, 8),)), (4, ((4, 3),)), (2, ((2, 4), (5, 1)))),
    GroupId.A2: ((0, ((4, 3),)), (0, ((5, 2),)), (0, ((4, 1), (6, 1)))),
    GroupId.PGL3: ((0, ((5, 8),)), (0, ((7, 3),)), (0, ((8, 1), (5, 4)))),
}

# deg sigma = a*d + b
SIGMA_DEGREE = {
    GroupId.SE2: (6, -6),
    GroupId.SA2: (24, -32),
    GroupId.A2: (24, -36),
    GroupId.PGL3: (96, -144),
}

# T indices needed per group (denominator T listed first)
GROUP_THETAS = {
    GroupId.SE2: (1, 2, 3),
    GroupId.SA2: (2, 4, 5),
    GroupId.A2: (4, 5, 6),
    GroupId.PGL3: (5, 7, 8),
}
DENOMINATOR_THETA = {
    GroupId.SE2: 1,
    GroupId.SA2: 2,
    GroupId.A2: 4,
    GroupId.PGL3: 5,
}


@functools.lru_cache(maxsize=1)
def theta_table() -> dict[int, SparsePoly]:
    """The eight differential functions as polynomials in u1..u8."""
    R = JET_RING
    u1, u2, u3, u4, u5, u6, u7, u8 = (SparsePoly.var(R, v) for v in R)
    th1 = u1**2 + 1
    th2 = u2
    th3 = u3 * th1 - 3 * u1 * th2**2
    th4 = 3 * u4 * u2 - 5 * u3**2
    th5 = 9 * u5 * u2**2 - 45 * u4 * u3 * u2 + 40 * u3**3
    th6 = (
        9 * u6 * u2**3
        - 63 * u5 * u3 * u2**2
        - 45 * u4**2 * u2**2
        + 255 * u4 * u3**2 * u2
        - 160 * u3**4
    )
    th7 = (
        18 * u7 * u2**4 * th5
        - 189 * u6**2 * u2**6
        + 126 * u6 * u2**4 * (9 * u5 * u3 * u2 + 15 * u4**2 * u2 - 25 * u4 * u3**2)
        - 189 * u5**2 * u2**4 * (4 * u3**2 + 15 * u2 * u4)
        + 210
        * u5
        * u3
        * u2**2
        * (63 * u4**2 * u2**2 - 60 * u4 * u3**2 * u2 + 32 * u3**4)
        - 525
        * u4
        * u2
        * (9 * u4**3 * u2**3 + 15 * u4**2 * u3**2 * u2**2 - 60 * u4 * u3**4 * u2 + 64 * u3**6)
        + 11200 * u3**8
    ).scale(Fraction(9, 2))
    th8 = (
        u2**4
        * (
            2 * u8 * u2 * th5**2
            - 8
            * u7
            * th5
            * (
                9 * u6 * u2**3
                - 36 * u5 * u3 * u2**2
                - 45 * u4**2 * u2**2
                + 120 * u4 * u3**2 * u2
                - 40 * u3**4
            )
            + 504 * u6**3 * u2**5
            - 504 * u6**2 * u2**3 * (9 * u5 * u3 * u2 + 15 * u4**2 * u2 - 25 * u4 * u3**2)
            + 28
            * u6
            * (
                432 * u5**2 * u3**2 * u2**3
                + 243 * u5**2 * u4 * u2**4
                - 1800 * u5 * u4 * u3**3 * u2**2
                - 240 * u5 * u3**5 * u2
                + 540 * u5 * u4**2 * u3 * u2**3
                + 6600 * u4**2 * u3**4 * u2
                - 2000 * u4 * u3**6
                - 5175 * u4**3 * u3**2 * u2**2
                + 1350 * u4**4 * u2**3
            )
            - 2835 * u5**4 * u2**4
            + 252 * u5**3 * u3 * u2**2 * (9 * u4 * u2 - 136 * u3**2)
            - 35840 * u5**2 * u3**6
            - 630 * u5**2 * u4 * u2 * (69 * u4**2 * u2**2 - 160 * u3**4 - 153 * u4 * u3**2 * u2)
            + 2100 * u5 * u4**2 * u3 * (72 * u3**4 + 63 * u4**2 * u2**2 - 193 * u4 * u3**2 * u2)
            - 7875 * u4**4 * (8 * u4**2 * u2**2 - 22 * u4 * u3**2 * u2 + 9 * u3**4)
        )
    ).scale(Fraction(243, 2))
    return {1: th1, 2: th2, 3: th3, 4: th4, 5: th5, 6: th6, 7: th7, 8: th8}


# jet weight of u_k is 2k-1 (the F_y exponent of y^(k)|_X)
def _jet_weight(e: tuple[int, ...]) -> int:
    return sum(k * (2 * n + 1) for n, k in enumerate(e))


@functools.lru_cache(maxsize=1)
def theta_weights() -> dict[int, int]:
    """Maximal jet weight D_i of each Theta (its F_y denominator exponent
    before cancellation); D_i - d_i is the exact power of F_y dividing N_i."""
    return {i: max(_jet_weight(e) for e in th.terms) for i, th in theta_table().items()}


@dataclass(frozen=True)
class CurveInput:
    """An affine plane curve V(F), F primitive with integer coefficients.

    ``irreducible_asserted`` is the caller's promise; it is spot-checked
    (square-freeness via gcd(F, F_x)) but not proven.
    """

    F: SparsePoly
    d: int
    irreducible_asserted: bool = True

    @classmethod
    def from_poly(cls, F: SparsePoly, irreducible_asserted: bool = True) -> "CurveInput":
        if F.ring != CURVE_RING:
            F = F.map_variables(CURVE_RING)
        if F.is_zero() or F.is_constant():
            raise ValueError("curve polynomial must be nonconstant")
        F = F.primitive_part()
        return cls(F, int(F.total_degree()), irreducible_asserted)

    def fx(self) -> SparsePoly:
        return self.F.partial_derivative("x")

    def fy(self) -> SparsePoly:
        return self.F.partial_derivative("y")

    def squarefree_suspect(self) -> bool:
        """True when gcd(F, F_x) is nonconstant, i.e. F visibly not squarefree."""
        fx = self.fx()
        if fx.is_zero():
            return self.d > 1
        return gcd(self.F, fx).total_degree() > 0

    def homogenized(self) -> SparsePoly:
        return self.F.homogenize("x0", self.d).rename_ring(HOMOG_RING)


@dataclass(frozen=True)
class JetRestriction:
    curve: CurveInput
    entries: tuple[tuple[SparsePoly, int], ...]  # (P_n, n) with n = 1..n_max

    def p(self, n: int) -> SparsePoly:
        return self.entries[n - 1][0]


@functools.lru_cache(maxsize=64)
def implicit_jet(curve: CurveInput, n_max: int) -> JetRestriction:
    """P_1..P_{n_max} with y^(n)|_X = P_n/(F_y)^(2n-1)."""
    if n_max < 1 or n_max > 8:
        raise ValueError("jet order must be between 1 and 8")
    fy = curve.fy()
    if fy.is_zero():
        raise VerticalLineError()
    fx = curve.fx()
    fxy = fy.partial_derivative("x")
    fyy = fy.partial_derivative("y")
    entries = []
    p = -fx
    entries.append((p, 1))
    for n in range(1, n_max):
        px = p.partial_derivative("x")
        py = p.partial_derivative("y")
        k = 2 * n - 1
        p = fy * (px * fy - k * p * fxy) - fx * (py * fy - k * p * fyy)
        entries.append((p, n + 1))
    return JetRestriction(curve, tuple(entries))


@dataclass(frozen=True)
class ThetaRestriction:
    """Theta_i restricted to the curve: Theta_i|_X = T_i / (F_y)^(d_i).

    ``T`` carries the exact rational content of the table; ``primitive`` and
    ``content`` expose the split so invariant ratios stay exact.
    """

    index: int
    T: SparsePoly
    d_i: int
    tau_i: int
    content: Fraction
    primitive: SparsePoly


@functools.lru_cache(maxsize=256)
def theta(curve: CurveInput, index: int) -> ThetaRestriction:
    """Restrict Theta_index to the curve and cancel the F_y powers."""
    if index < 1 or index > 8:
        raise ValueError("theta index must be 1..8")
    table = theta_table()
    th = table[index]
    D = theta_weights()[index]
    d_i = FY_EXPONENT[index]
    n_max = max(
        (n + 1 for e in th.terms for n, k in enumerate(e) if k), default=1
    )
    jets = implicit_jet(curve, n_max)
    fy = curve.fy()
    ring = CURVE_RING
    pows_p: dict[int, list[SparsePoly]] = {}
    pows_fy = [SparsePoly.const(ring, 1)]

    def fy_pow(k: int) -> SparsePoly:
        while len(pows_fy) <= k:
            pows_fy.append(pows_fy[-1] * fy)
        return pows_fy[k]

    def p_pow(n: int, k: int) -> SparsePoly:
        tab = pows_p.setdefault(n, [SparsePoly.const(ring, 1)])
        while len(tab) <= k:
            tab.append(tab[-1] * jets.p(n))
        return tab[k]

    num = SparsePoly.zero(ring)
    for e, c in th.terms.items():
        w = _jet_weight(e)
        term = SparsePoly.const(ring, c) * fy_pow(D - w)
        for n, k in enumerate(e):
            if k:
                term = term * p_pow(n + 1, k)
        num = num + term
    extra = D - d_i
    T = exact_div(num, fy_pow(extra)) if extra else num
    a, b = TAU_COEFFS[index]
    tau = a * curve.d + b
    _spot_check_theta(curve, index, T, d_i, D)
    content, primitive = T.primitive()
    return ThetaRestriction(index, T, d_i, tau, content, primitive)


def _spot_check_theta(curve, index, T, d_i, D) -> None:
    """One random rational substitution: direct Theta evaluation on jet
    values must equal T/(F_y)^(d_i) (a rational-function identity)."""
    import random

    rng = random.Random(index * 7919 + curve.d)
    fy = curve.fy()
    for _ in range(32):
        pt = {"x": Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
              "y": Fraction(rng.randint(-9, 9), rng.randint(1, 4))}
        fyv = fy.evaluate(pt)
        if fyv == 0:
            continue
        jets = implicit_jet(curve, 8)
        uvals = {}
        for n in range(1, 9):
            uvals[f"u{n}"] = jets.p(n).evaluate(pt) / fyv ** (2 * n - 1)
        lhs = theta_table()[index].evaluate(uvals) * fyv**d_i
        rhs = T.evaluate(pt)
        if lhs != rhs:
            raise AssertionError(f"Theta_{index} restriction failed spot check")
        return


def thetas_for_group(curve: CurveInput, group: GroupId) -> dict[int, ThetaRestriction]:
    return {i: theta(curve, i) for i in GROUP_THETAS[group]}


# ---------------------------------------------------------------------------
# exceptional curves


@dataclass(frozen=True)
class ExceptionalVerdict:
    exceptional: bool
    reason: Optional[str] = None


def _vanishes_on_curve(p: SparsePoly, curve: CurveInput) -> bool:
    """Exact test that p is 0 modulo F (for irreducible F with deg_y F >= 1):
    pseudo-reduce with respect to y; the remainder has smaller y-degree than
    F, so it vanishes exactly when p was a multiple of F."""
    if p.is_zero():
        return True
    F = curve.F
    if F.degree_in("y") <= 0:
        # no y in F: reduce with respect to x instead
        r = pseudo_remainder(p, F, "x")
        return r.is_zero()
    r = pseudo_remainder(p, F, "y")
    return r.is_zero()


def exceptional_check(curve: CurveInput, group: GroupId) -> ExceptionalVerdict:
    """Lines are exceptional for every group; conics additionally for
    SA(2)/A(2)/PGL(3); otherwise test the group's denominator Theta on X."""
    if curve.d <= 1:
        return ExceptionalVerdict(True, "line")
    if curve.fy().is_zero():
        return ExceptionalVerdict(True, "vertical-line curve (F_y = 0)")
    if group is GroupId.SE2:
        for i in (1, 2):
            if _vanishes_on_curve(theta(curve, i).T, curve):
                return ExceptionalVerdict(True, f"Theta_{i} vanishes on the curve")
        return ExceptionalVerdict(False)
    if curve.d == 2:
        return ExceptionalVerdict(True, "conic")
    i = DENOMINATOR_THETA[group]
    if _vanishes_on_curve(theta(curve, i).T, curve):
        return ExceptionalVerdict(True, f"Theta_{i} vanishes on the curve")
    return ExceptionalVerdict(False)


def require_non_exceptional(curve: CurveInput, group: GroupId) -> None:
    verdict = exceptional_check(curve, group)
    if verdict.exceptional:
        raise ExceptionalCurveError(verdict.reason or "unknown")


# ---------------------------------------------------------------------------
# classifying pairs and projective extensions


@dataclass(frozen=True)
class ClassifyingPair:
    group: GroupId
    K1: RatFunc
    K2: RatFunc


def classifying_pair(curve: CurveInput, group: GroupId) -> ClassifyingPair:
    """The pair of classifying invariants restricted to the curve, fully
    reduced; every F_y power cancels identically before reduction."""
    require_non_exceptional(curve, group)
    ts = thetas_for_group(curve, group)
    ((na, npow), (da, dpow)), ((nc, cpow), (de, epow)) = CLASSIFYING_RECIPES[group]
    K1 = RatFunc.build(ts[na].T ** npow, ts[da].T ** dpow)
    K2 = RatFunc.build(ts[nc].T ** cpow, ts[de].T ** epow)
    return ClassifyingPair(group, K1, K2)


@dataclass(frozen=True)
class HomogeneousTriple:
    """Projective extension [sigma0 : sigma1 : sigma2] of a signature map."""

    sigma: tuple[SparsePoly, SparsePoly, SparsePoly]
    deg: int
    group: GroupId
    cancelled: bool = False

    def dehomogenized(self) -> tuple[SparsePoly, SparsePoly, SparsePoly]:
        return tuple(s.dehomogenize("x0") for s in self.sigma)  # type: ignore[return-value]


def homogeneous_gcd(polys: Sequence[SparsePoly]) -> SparsePoly:
    """gcd of homogeneous trivariate polynomials via the affine chart.

    Strips the common x0 power, computes the bivariate gcd of the
    dehomogenizations, and rehomogenizes; valid because dehomogenization at
    x0=1 is injective on homogeneous polynomials of known degree.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise ValueError("gcd of empty or all-zero list")
    x0_common = min(min(e[0] for e in p.terms) for p in polys)
    affine = [p.dehomogenize("x0") for p in polys]
    g = affine[0]
    for p in affine[1:]:
        g = gcd(g, p)
        if g.is_constant():
            break
    if g.is_constant():
        gh = SparsePoly.const(HOMOG_RING, 1)
    else:
        gh = g.homogenize("x0", int(g.total_degree())).rename_ring(HOMOG_RING)
    if x0_common:
        x0 = SparsePoly.var(HOMOG_RING, "x0")
        gh = gh * x0**x0_common
    return gh


def projective_extension(
    curve: CurveInput, group: GroupId, cancel: bool = False
) -> HomogeneousTriple:
    """The canonical homogeneous triple for the group; with ``cancel`` the
    common factor of the three components is removed (the degree formula
    holds for either normalization, with matching multiplicity sums)."""
    require_non_exceptional(curve, group)
    ts = thetas_for_group(curve, group)
    homog = {}
    for i, t in ts.items():
        homog[i] = t.T.homogenize("x0", t.tau_i).rename_ring(HOMOG_RING)
    x0 = SparsePoly.var(HOMOG_RING, "x0")
    comps = []
    for x0_pow, factors in SIGMA_RECIPES[group]:
        c = x0**x0_pow if x0_pow else SparsePoly.const(HOMOG_RING, 1)
        for i, p in factors:
            c = c * homog[i] ** p
        comps.append(c)
    a, b = SIGMA_DEGREE[group]
    deg = a * curve.d + b
    for c in comps:
        if not c.is_zero() and c.total_degree() != deg:
            raise AssertionError("projective extension degree mismatch")
    if cancel:
        g = homogeneous_gcd(comps)
        if g.total_degree() > 0:
            comps = [exact_div(c, g) for c in comps]
            deg -= int(g.total_degree())
    return HomogeneousTriple(tuple(comps), deg, group, cancelled=cancel)


# ---------------------------------------------------------------------------
# group elements


def _mat_inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [a / pv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _check_group_shape(m: list[list[Fraction]], group: GroupId) -> list[list[Fraction]]:
    m = [[Fraction(x) for x in row] for row in m]
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    if det == 0:
        raise ValueError("singular matrix")
    if group is GroupId.PGL3:
        return m
    if m[0][1] != 0 or m[0][2] != 0 or m[0][0] == 0:
        raise ValueError(f"{group.value} matrix must have first row [c, 0, 0]")
    if m[0][0] != 1:
        s = m[0][0]
        m = [[x / s for x in row] for row in m]
    lower_det = m[1][1] * m[2][2] - m[1][2] * m[2][1]
    if group is GroupId.SA2 and lower_det != 1:
        raise ValueError("SA2 requires unit determinant of the linear block")
    if group is GroupId.SE2:
        c, s = m[1][1], m[1][2]
        if m[2][1] != -s or m[2][2] != c or c * c + s * s != 1:
            raise ValueError("SE2 requires a rotation block [[c, s], [-s, c]], c^2+s^2=1")
    return m


def apply_group_element(
    curve: CurveInput, matrix: Sequence[Sequence[Fraction]], group: GroupId
) -> CurveInput:
    """Defining polynomial of the transformed curve g.X: substitute the
    inverse action into the homogenization, clear x0, take the primitive
    part."""
    m = _check_group_shape([list(r) for r in matrix], group)
    minv = _mat_inverse(m)
    Fh = curve.homogenized()
    xs = [SparsePoly.var(HOMOG_RING, v) for v in HOMOG_RING]
    images = []
    for j in range(3):
        img = SparsePoly.zero(HOMOG_RING)
        for k in range(3):
            if minv[j][k]:
                img = img + xs[k].scale(minv[j][k])
        images.append(img)
    G = Fh.compose_linear(images)
    affine = G.dehomogenize("x0").rename_ring(CURVE_RING)
    return CurveInput.from_poly(affine, curve.irreducible_asserted)


def transform_point(
    matrix: Sequence[Sequence[Fraction]], p: tuple[Fraction, Fraction]
) -> tuple[Fraction, Fraction]:
    """Affine action of a 3x3 matrix on (x, y); raises on the line at
    infinity (vanishing 0th homogeneous coordinate)."""
    vec = (Fraction(1), Fraction(p[0]), Fraction(p[1]))
    out = [sum(Fraction(matrix[j][k]) * vec[k] for k in range(3)) for j in range(3)]
    if out[0] == 0:
        raise ZeroDivisionError("point maps to the line at infinity")
    return (out[1] / out[0], out[2] / out[0])


# ---------------------------------------------------------------------------
# pointwise jets and invariants (exact path)


def jets_at_point(
    curve: CurveInput, p: tuple[Fraction, Fraction], n_max: int = 8
) -> list[Fraction]:
    """u_1..u_{n_max} at a rational regular point of the curve, computed by
    a local Taylor expansion of the branch through p (never builds T_i)."""
    x0, y0 = Fraction(p[0]), Fraction(p[1])
    if curve.F.evaluate({"x": x0, "y": y0}) != 0:
        raise ValueError("point does not lie on the curve")
    ring2 = ("h", "u")
    h = SparsePoly.var(ring2, "h")
    u = SparsePoly.var(ring2, "u")
    H = curve.F.compose_linear([h + x0, u])
    sring = SeriesRing([-y0.numerator, y0.denominator])
    root0 = sring.generator()
    dH = H.partial_derivative("u")
    d0 = dH.evaluate({"h": Fraction(0), "u": y0})
    if d0 == 0:
        raise ValueError("F_y vanishes at the point (not a regular point)")
    branch = newton_branch(H, "h", "u", sring, root0, n_max + 1)
    fact = 1
    out = []
    for k in range(1, n_max + 1):
        fact *= k
        out.append(branch.coeff_fractions(k)[0] * fact)
    return out


def invariants_at_point(
    curve: CurveInput, group: GroupId, p: tuple[Fraction, Fraction]
) -> tuple[Fraction, Fraction]:
    """Exact (K1, K2) at a rational regular point; raises PoleError-style
    ZeroDivisionError at zeros of the denominator Thetas."""
    uvals = jets_at_point(curve, p, 8)
    assignment = {f"u{k}": uvals[k - 1] for k in range(1, 9)}
    table = theta_table()
    ((na, npow), (da, dpow)), ((nc, cpow), (de, epow)) = CLASSIFYING_RECIPES[group]
    vals = {i: table[i].evaluate(assignment) for i in {na, da, nc, de}}
    if vals[da] == 0 or vals[de] == 0:
        raise ZeroDivisionError("denominator Theta vanishes at the point")
    return (
        vals[na] ** npow / vals[da] ** dpow,
        vals[nc] ** cpow / vals[de] ** epow,
    )
