"""Exact constructors for the classified degree-4 curves in G(2, 6).

The one-parameter family lives over rational t in (0, 3]; all matrix entries
stay inside the radical field, so every check downstream is exact.  The
`jiao_curve` member is the known constantly curved example whose second form
has non-constant norm, which the checks must flag rather than pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb

from .curve import CurveForm, second_wedge
from .polysurface import herm_surface
from .scalars import RadicalComplex, RadicalScalar

Z = RadicalComplex.zero


@dataclass(frozen=True)
class FamilyParam:
    """Rational family parameter t in (0, 3]; sin^2(theta) = t/3."""

    t: Fraction

    def __post_init__(self):
        t = Fraction(self.t)
        object.__setattr__(self, "t", t)
        if not 0 < t <= 3:
            raise ValueError(f"t must lie in (0, 3], got {t}")

    @property
    def sin_sq_theta(self) -> Fraction:
        return self.t / 3


def _rc_sqrt(q: Fraction) -> RadicalComplex:
    return RadicalComplex(RadicalScalar.sqrt(q))


def family_curve(p: FamilyParam) -> CurveForm:
    """The family member at t, n = 4: rows of F are

        [ |t-2| z^3,  sqrt(t) z,          sqrt((3-t)/(4-t))|t-2| z^2,  sqrt(t/(4-t)) z^2 ]
        [ sqrt(3-t) z^2,  0,              sqrt(4-t) z,                 0                 ]
    """
    t = p.t
    abs_t2 = abs(t - 2)
    a1 = [
        [Z(), _rc_sqrt(t), Z(), Z()],
        [Z(), Z(), _rc_sqrt(4 - t), Z()],
    ]
    a2 = [
        [
            Z(),
            Z(),
            _rc_sqrt(Fraction(3 - t, 4 - t)) * abs_t2,
            _rc_sqrt(Fraction(t, 4 - t)),
        ],
        [_rc_sqrt(3 - t), Z(), Z(), Z()],
    ]
    a3 = [
        [RadicalComplex.from_rational(abs_t2), Z(), Z(), Z()],
        [Z(), Z(), Z(), Z()],
    ]
    return CurveForm(4, "exact", [a1, a2, a3])


@dataclass(frozen=True)
class FamilyInvariants:
    t: Fraction
    d: int
    c: Fraction
    K: Fraction
    det_a1_sq: Fraction
    S: Fraction


def family_invariants(p: FamilyParam) -> FamilyInvariants:
    """Closed forms: d=4, c = 4t - t^2, S = t^2 - 4t + 6, K = 1."""
    t = p.t
    c = 4 * t - t * t
    return FamilyInvariants(
        t=t,
        d=4,
        c=c,
        K=Fraction(1),
        det_a1_sq=c / 16,
        S=t * t - 4 * t + 6,
    )


def jiao_curve() -> CurveForm:
    """Constantly curved degree-4 curve whose |det A_1|^2 is not constant.

    Rows of F:
        [ (1/sqrt2) z,  (sqrt31/(2 sqrt7)) z^2,  (9/(2 sqrt7)) z^2,  0        ]
        [ 0,            0,                       (sqrt7/sqrt2) z,    (1/2) z^2 ]
    """
    half = Fraction(1, 2)
    a1 = [
        [_rc_sqrt(half), Z(), Z(), Z()],
        [Z(), Z(), _rc_sqrt(Fraction(7, 2)), Z()],
    ]
    a2 = [
        [Z(), _rc_sqrt(Fraction(31, 28)), _rc_sqrt(Fraction(81, 28)), Z()],
        [Z(), Z(), Z(), RadicalComplex.from_rational(half)],
    ]
    return CurveForm(4, "exact", [a1, a2])


JIAO_PROFILE_NUMERATOR = (112, 1024, 1176, 376, 31)
JIAO_PROFILE_DENOMINATOR = 64


def jiao_second_wedge_profile() -> list[RadicalScalar]:
    """Diagonal of the second-wedge norm surface, with off-diagonals checked."""
    H = herm_surface(second_wedge(jiao_curve()))
    diag = []
    for j in range(H.size):
        for k in range(H.size):
            e = H.entry(j, k)
            if j == k:
                if not e.is_real():
                    raise AssertionError("second-wedge Gram diagonal not real")
                diag.append(e.re)
            elif not e.is_zero():
                raise AssertionError("second-wedge Gram has off-diagonal mass")
    return diag


def jiao_detA1_check() -> bool:
    """Exact check of the known |det A_1|^2 profile for the jiao curve.

    With |w|^2 = sum_k h_k u^k (u = z zbar) and d = 4, the claim
    |det A_1|^2 = N(u) / (1024 (1+u)^4) is equivalent to h_k = N_k / 64.
    """
    diag = jiao_second_wedge_profile()
    want = [
        RadicalScalar.from_rational(Fraction(nk, JIAO_PROFILE_DENOMINATOR))
        for nk in JIAO_PROFILE_NUMERATOR
    ]
    return len(diag) == len(want) and all(a == b for a, b in zip(diag, want))


# ---------------------------------------------------------------------------
# direct sums and degenerate identifications


def direct_sum_v0_v0(n1: int, n2: int) -> CurveForm:
    """[I_2, F] with the degree-n1 base curve in row 1 and degree-n2 in row 2.

    Row 1 occupies F columns 0..n1-1 with sqrt(C(n1, k)) z^k, k = 1..n1;
    row 2 the remaining columns likewise.  n = n1 + n2.
    """
    n = n1 + n2
    m = max(n1, n2)
    mats = []
    for alpha in range(1, m + 1):
        row1 = [Z()] * n
        row2 = [Z()] * n
        if alpha <= n1:
            row1[alpha - 1] = _rc_sqrt(comb(n1, alpha))
        if alpha <= n2:
            row2[n1 + alpha - 1] = _rc_sqrt(comb(n2, alpha))
        mats.append([row1, row2])
    return CurveForm(n, "exact", mats)


@dataclass(frozen=True)
class SignedPermutation:
    """Column relabeling j -> perm[j] with sign signs[j], acting on F columns."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]


def apply_column_permutation(curve: CurveForm, sp: SignedPermutation) -> CurveForm:
    mats = []
    for A in curve.coeffs:
        rows = []
        for row in A:
            new = [Z()] * curve.n
            for j, x in enumerate(row):
                v = x if sp.signs[j] > 0 else -x
                new[sp.perm[j]] = v
            rows.append(new)
        mats.append(rows)
    return CurveForm(curve.n, "exact", mats)


def find_column_permutation(src: CurveForm, dst: CurveForm):
    """Signed column permutation carrying src onto dst exactly, or None."""
    if src.n != dst.n or src.mode != dst.mode:
        return None
    n = src.n
    m = max(src.m, dst.m)

    def column(curve: CurveForm, j: int):
        return [
            curve.row(alpha, i)[j] for alpha in range(1, m + 1) for i in (1, 2)
        ]

    src_cols = [column(src, j) for j in range(n)]
    dst_cols = [column(dst, j) for j in range(n)]
    for perm in permutations(range(n)):
        signs = []
        for j in range(n):
            target = dst_cols[perm[j]]
            source = src_cols[j]
            sign = None
            for a, b in zip(source, target):
                if a.is_zero() != b.is_zero():
                    break
                if not a.is_zero():
                    if a == b:
                        s = 1
                    elif a == -b:
                        s = -1
                    else:
                        break
                    if sign is None:
                        sign = s
                    elif sign != s:
                        break
            else:
                signs.append(1 if sign is None else sign)
                continue
            break
        else:
            sp = SignedPermutation(perm=tuple(perm), signs=tuple(signs))
            return sp
    return None
