"""Frozen super-signature for conics under the special Euclidean group.

For a general conic c00 + c10 x + c01 y + c20 x^2 + c11 x y + c02 y^2 the
signature polynomial of every non-exceptional member is one specialization
of a single polynomial in the coefficients, expressed through the classical
conic invariants

    U1 = c02 + c20
    U2 = 4 c20 c02 - c11^2
    U3 = 4 c00 c02 c20 - c00 c11^2 - c01^2 c20 + c01 c10 c11 - c02 c10^2

(U3 is four times the determinant of the symmetric matrix of the conic).
This is a frozen fixture: it is validated by specializing at random conics
against direct elimination, never computed symbolically.
"""

from __future__ import annotations

from fractions import Fraction

from .jets import CurveInput
from .poly import SparsePoly
from .signature import SIG_RING, canonical_signature_poly


def conic_invariants(curve: CurveInput) -> tuple[Fraction, Fraction, Fraction]:
    if curve.d != 2:
        raise ValueError("conic invariants need a degree-2 curve")
    c = {e: curve.F.terms.get(e, Fraction(0)) for e in
         [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]}
    c00, c10, c01 = c[(0, 0)], c[(1, 0)], c[(0, 1)]
    c20, c11, c02 = c[(2, 0)], c[(1, 1)], c[(0, 2)]
    u1 = c02 + c20
    u2 = 4 * c20 * c02 - c11 * c11
    u3 = (
        4 * c00 * c02 * c20
        - c00 * c11 * c11
        - c01 * c01 * c20
        + c01 * c10 * c11
        - c02 * c10 * c10
    )
    return u1, u2, u3


def conic_se2_super_signature(curve: CurveInput) -> SparsePoly:
    """Specialized super-signature polynomial of a conic, canonicalized."""
    u1, u2, u3 = conic_invariants(curve)
    terms = {
        (6, 0): 2916 * u3**2,
        (5, 0): 2916 * u3 * u1 * (4 * u1**2 - 3 * u2),
        (4, 2): 972 * u3**2,
        (4, 0): 729 * u2**3,
        (3, 2): -972 * u3 * u2 * u1,
        (2, 4): 108 * u3**2,
        (0, 6): 4 * u3**2,
    }
    S = SparsePoly(SIG_RING, {e: c for e, c in terms.items() if c})
    if S.is_zero():
        raise ValueError("degenerate conic: super-signature vanishes")
    return canonical_signature_poly(S)
