"""Holomorphic curves S^2 -> G(2, n+2) in the normal form [I_2, F(z)], F(0)=0.

A curve is stored by the coefficient matrices of F = sum_a A_a z^a, each A_a
a 2 x n matrix over exact or float complex scalars.  This module computes the
frame vectors, the Pluecker norm surface, the second wedge, the invariant
chain (degree d, wedge constant c, curvature K = 4/d, |det A_1|^2 = c/d^2,
second-fundamental-form norm S), the block constraint matrices U and Q with
their diagonal targets, reducibility and ramification, and normalization of a
general frame pair into [I_2, F] form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from typing import Optional

from .exterior import KVector, kv_inner, wedge
from .polysurface import (
    BinomialMatch,
    HermitianSurface,
    PolyKVector,
    common_roots,
    herm_surface,
    match_binomial,
    pv_derivative,
    pv_wedge,
)
from .scalars import (
    RadicalComplex,
    RadicalScalar,
    as_complex,
    scalar_is_zero,
)

REDUCIBLE_TOL = 1e-12
CONSTRAINT_RESIDUAL_TOL = 1e-9
PIVOT_TOL = 1e-9


class CurveError(Exception):
    pass


class NotConstantlyCurvedError(CurveError):
    pass


class SecondFormNotConstantError(CurveError):
    pass


class ReducibleCurveError(CurveError):
    pass


class NormalizationError(CurveError):
    pass


class CurveFileError(ValueError):
    pass


class CurveForm:
    """Coefficient matrices A_1..A_m of F; rows are the two frame rows."""

    __slots__ = ("n", "mode", "coeffs")

    def __init__(self, n: int, mode: str, coeffs):
        if mode not in ("exact", "float"):
            raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")
        if n < 1:
            raise ValueError(f"need at least one F column, got n={n}")
        mats = []
        for A in coeffs:
            rows = [list(A[0]), list(A[1])]
            if len(rows[0]) != n or len(rows[1]) != n:
                raise ValueError("coefficient matrix is not 2 x n")
            mats.append(rows)
        while len(mats) > 1 and all(
            scalar_is_zero(x) for row in mats[-1] for x in row
        ):
            mats.pop()
        if not mats:
            mats = [self._zero_matrix(n, mode)]
        self.n = n
        self.mode = mode
        self.coeffs = mats

    @staticmethod
    def _zero_matrix(n: int, mode: str):
        z = RadicalComplex.zero() if mode == "exact" else 0j
        return [[z] * n, [z] * n]

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def row(self, alpha: int, i: int) -> list:
        """Row a_i^(alpha), i in {1, 2}; zero row above the top degree."""
        if 1 <= alpha <= self.m:
            return self.coeffs[alpha - 1][i - 1]
        return self._zero_matrix(self.n, self.mode)[i - 1]

    def to_float(self) -> "CurveForm":
        if not self.exact:
            return self
        mats = [
            [[as_complex(x) for x in row] for row in A] for A in self.coeffs
        ]
        return CurveForm(self.n, "float", mats)

    def __repr__(self):
        return f"CurveForm(n={self.n}, m={self.m}, mode={self.mode!r})"


# ---------------------------------------------------------------------------
# frames and wedges


def _embedded_row(curve: CurveForm, alpha: int, i: int) -> KVector:
    """Row a_i^(alpha) as a vector of C^(n+2), columns shifted past I_2."""
    z = RadicalComplex.zero() if curve.exact else 0j
    comps = [z, z] + list(curve.row(alpha, i))
    return KVector.from_components(comps, exact=curve.exact)


def frames(curve: CurveForm) -> tuple[PolyKVector, PolyKVector]:
    """Frame vectors v_i = eps_i + sum_a embed(a_i^(a)) z^a in C^(n+2)."""
    N = curve.n + 2
    out = []
    for i in (1, 2):
        coeffs = [KVector.basis(N, (i - 1,), exact=curve.exact)]
        coeffs += [_embedded_row(curve, alpha, i) for alpha in range(1, curve.m + 1)]
        out.append(PolyKVector(coeffs))
    return out[0], out[1]


def plucker_poly(curve: CurveForm) -> PolyKVector:
    v1, v2 = frames(curve)
    return pv_wedge(v1, v2)


def plucker_surface(
    curve: CurveForm,
) -> tuple[HermitianSurface, Optional[BinomialMatch]]:
    H = herm_surface(plucker_poly(curve))
    return H, match_binomial(H)


def second_wedge(curve: CurveForm) -> PolyKVector:
    """v1 ^ v2 ^ dv1 ^ dv2; identically zero exactly for reducible curves."""
    v1, v2 = frames(curve)
    return pv_wedge(pv_wedge(v1, v2), pv_wedge(pv_derivative(v1), pv_derivative(v2)))


def is_reducible(curve: CurveForm) -> bool:
    w = second_wedge(curve)
    if curve.exact:
        return w.is_zero()
    return w.max_abs() <= REDUCIBLE_TOL


# ---------------------------------------------------------------------------
# invariant chain


@dataclass(frozen=True)
class CurveInvariants:
    """The chain (d, c, K=4/d, |det A_1|^2 = c/d^2, S = 8 - 16c/d^2 - 8/d)."""

    mode: str
    d: int
    c: object
    K: object
    det_a1_sq: object
    S: object

    def as_floats(self) -> dict:
        conv = (lambda x: x.to_float()) if self.mode == "exact" else float
        return {
            "d": self.d,
            "c": conv(self.c),
            "K": conv(self.K),
            "det_a1_sq": conv(self.det_a1_sq),
            "S": conv(self.S),
        }


def _plucker_degree(curve: CurveForm) -> int:
    return plucker_poly(curve).zdegree


def invariant_chain(curve: CurveForm) -> CurveInvariants:
    H, match = plucker_surface(curve)
    if match is None:
        raise NotConstantlyCurvedError("not constantly curved")
    if curve.exact:
        if match.c0 != Fraction(1):
            raise NotConstantlyCurvedError("not constantly curved")
    elif abs(match.c0 - 1.0) > CONSTRAINT_RESIDUAL_TOL:
        raise NotConstantlyCurvedError("not constantly curved")
    d = match.m
    if is_reducible(curve):
        c = RadicalScalar.zero() if curve.exact else 0.0
    else:
        H2 = herm_surface(second_wedge(curve))
        match2 = match_binomial(H2)
        if match2 is None or match2.m != 2 * d - 4:
            raise SecondFormNotConstantError("second form not constant")
        c = match2.c0
    if curve.exact:
        K = RadicalScalar.from_rational(Fraction(4, d))
        det_a1_sq = c * Fraction(1, d * d)
        S = RadicalScalar.from_rational(8) - det_a1_sq * 16 - Fraction(8, d)
        return CurveInvariants("exact", d, c, K, det_a1_sq, S)
    det_a1_sq = c / d**2
    return CurveInvariants(
        "float", d, c, 4.0 / d, det_a1_sq, 8.0 - 16.0 * c / d**2 - 8.0 / d
    )


# ---------------------------------------------------------------------------
# constraint matrices


@dataclass(frozen=True)
class ConstraintMatrices:
    """Rows of U and Q with their diagonal targets Lambda_1, Lambda_2.

    Row counts are d+1 and 2d-3 whenever the curve satisfies the identities;
    trailing rows carrying excess-degree blocks are kept (with zero targets)
    so that the Gram checks see exactly the same mass as the norm surfaces.
    """

    mode: str
    d: int
    c: object
    u_rows: tuple
    q_rows: tuple
    lambda1: tuple
    lambda2: tuple


def _scalar_conv(curve: CurveForm, value):
    return RadicalComplex.from_rational(value) if curve.exact else complex(value)


def _f_polys(curve: CurveForm) -> tuple[PolyKVector, PolyKVector]:
    """F rows as vector polynomials over C^n (not embedded)."""
    zvec = KVector.zero(curve.n, 1, curve.exact)
    polys = []
    for i in (1, 2):
        coeffs = [zvec] + [
            KVector.from_components(curve.row(alpha, i), exact=curve.exact)
            for alpha in range(1, curve.m + 1)
        ]
        polys.append(PolyKVector(coeffs))
    return polys[0], polys[1]


def _block_row(vectors: list[KVector], sizes: list[int], exact: bool) -> list:
    row = []
    for v, size in zip(vectors, sizes):
        coeffs = list(v.coeffs)
        if len(coeffs) != size:
            raise AssertionError("block width mismatch")
        row.extend(coeffs)
    return row


def assemble_constraints(
    curve: CurveForm, c, d: Optional[int] = None
) -> ConstraintMatrices:
    """Build U, Q and their targets from the coefficient blocks of F.

    U rows stack (1|0|0) and (0|W_a|V_a); Q rows stack (R_p|S_p|T_p|X_p)
    where V, R, S, T, X are the coefficient blocks of F1^F2, dF1^dF2,
    dF1^dF2^F1, dF1^dF2^F2 and dF1^dF2^F1^F2.  Lambda-column order within
    each block is the lexicographic multi-index rank.
    """
    n = curve.n
    exact = curve.exact
    if d is None:
        d = _plucker_degree(curve)
    F1, F2 = _f_polys(curve)
    dF1, dF2 = pv_derivative(F1), pv_derivative(F2)
    vpoly = pv_wedge(F1, F2)  # V_j at z^j
    rpoly = pv_wedge(dF1, dF2)  # R_j at z^(j-2)
    spoly = pv_wedge(rpoly, F1)  # S_p at z^(p-2)
    tpoly = pv_wedge(rpoly, F2)  # T_p at z^(p-2)
    xpoly = pv_wedge(rpoly, vpoly)  # X_p at z^(p-2)

    zero1 = KVector.zero(n, 1, exact)
    one = _scalar_conv(curve, 1)
    zero = _scalar_conv(curve, 0)

    u_row_count = max(d, curve.m, vpoly.zdegree) + 1
    u_sizes = [n, n, comb(n, 2)]
    u_rows = []
    for alpha in range(u_row_count):
        if alpha == 0:
            head, w1, w2, v = one, zero1, zero1, KVector.zero(n, 2, exact)
        else:
            head = zero
            w1 = KVector.from_components(curve.row(alpha, 1), exact=exact)
            w2 = KVector.from_components(curve.row(alpha, 2), exact=exact)
            v = vpoly.coefficient(alpha)
        u_rows.append([head] + _block_row([w1, w2, v], u_sizes, exact))

    q_sizes = [comb(n, 2), comb(n, 3), comb(n, 3), comb(n, 4)]
    q_row_count = max(
        2 * d - 4,
        rpoly.zdegree,
        spoly.zdegree,
        tpoly.zdegree,
        xpoly.zdegree,
    ) + 1
    q_rows = []
    for k in range(q_row_count):
        q_rows.append(
            _block_row(
                [
                    rpoly.coefficient(k),
                    spoly.coefficient(k),
                    tpoly.coefficient(k),
                    xpoly.coefficient(k),
                ],
                q_sizes,
                exact,
            )
        )

    u_rows = _trim_zero_rows(u_rows, d + 1)
    q_rows = _trim_zero_rows(q_rows, max(2 * d - 3, 0))

    def binom_or_zero(total: int, k: int) -> int:
        return comb(total, k) if 0 <= k <= total else 0

    if exact:
        lam1 = tuple(
            RadicalScalar.from_rational(binom_or_zero(d, k))
            for k in range(len(u_rows))
        )
        c_rad = c if isinstance(c, RadicalScalar) else RadicalScalar.from_rational(c)
        lam2 = tuple(
            c_rad * binom_or_zero(2 * d - 4, k) for k in range(len(q_rows))
        )
        c_out = c_rad
    else:
        lam1 = tuple(float(binom_or_zero(d, k)) for k in range(len(u_rows)))
        c_out = float(c)
        lam2 = tuple(
            c_out * binom_or_zero(2 * d - 4, k) for k in range(len(q_rows))
        )
    return ConstraintMatrices(
        mode=curve.mode,
        d=d,
        c=c_out,
        u_rows=tuple(tuple(r) for r in u_rows),
        q_rows=tuple(tuple(r) for r in q_rows),
        lambda1=lam1,
        lambda2=lam2,
    )


def _trim_zero_rows(rows: list, keep_at_least: int) -> list:
    while len(rows) > keep_at_least and all(scalar_is_zero(x) for x in rows[-1]):
        rows.pop()
    return rows


def _gram_deviation(rows, lam, exact: bool):
    """(all targets met exactly/within tol, squared Frobenius deviation)."""
    dev = 0.0
    ok = True
    for j, rj in enumerate(rows):
        for k, rk in enumerate(rows):
            acc = RadicalComplex.zero() if exact else 0j
            for a, b in zip(rj, rk):
                acc = acc + a * b.conjugate()
            target = lam[j] if j == k else None
            if exact:
                want = (
                    RadicalComplex(target) if target is not None
                    else RadicalComplex.zero()
                )
                if acc != want:
                    ok = False
                diff = acc - want
                dev += abs(as_complex(diff)) ** 2
            else:
                want = complex(target) if target is not None else 0j
                dev += abs(acc - want) ** 2
    if not exact:
        ok = dev <= CONSTRAINT_RESIDUAL_TOL
    return ok, dev


def check_constraints(cm: ConstraintMatrices) -> tuple[bool, bool, tuple[float, float]]:
    """(UU* == Lambda_1, QQ* == Lambda_2, squared-deviation residuals)."""
    exact = cm.mode == "exact"
    u_ok, u_dev = _gram_deviation(cm.u_rows, cm.lambda1, exact)
    q_ok, q_dev = _gram_deviation(cm.q_rows, cm.lambda2, exact)
    return u_ok, q_ok, (u_dev, q_dev)


# ---------------------------------------------------------------------------
# ramification


def ramification(curve: CurveForm):
    """Zeros of the second wedge; requires an irreducible curve."""
    if is_reducible(curve):
        raise ReducibleCurveError("curve is reducible")
    try:
        d = invariant_chain(curve).d
    except CurveError:
        d = _plucker_degree(curve)
    return common_roots(second_wedge(curve), expected_degree=2 * d - 4)


# ---------------------------------------------------------------------------
# normalization of an arbitrary frame pair


def _sqrt_scalar_exact(value: RadicalComplex) -> RadicalScalar:
    if not value.is_real():
        raise NormalizationError("norm is not real")
    r = value.re
    if not r.is_rational():
        raise NormalizationError(
            "cannot orthonormalize exactly: squared norm is irrational"
        )
    return RadicalScalar.sqrt(r.as_rational())


def _poly_mul_scalar(p: list, q: list, zero):
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def normalize_span(v1: PolyKVector, v2: PolyKVector) -> CurveForm:
    """Rotate span{v1(0), v2(0)} onto span{eps_1, eps_2} and reduce to [I_2, F].

    Succeeds only when the leading 2x2 minor of the rotated frame has constant
    nonzero determinant; otherwise F would be rational.
    """
    if v1.dim != v2.dim:
        raise ValueError("frame ambient mismatch")
    N = v1.dim
    exact = v1.exact
    u1, u2 = v1.coefficient(0), v2.coefficient(0)
    if wedge(u1, u2).is_zero() if exact else wedge(u1, u2).max_abs() <= 1e-12:
        raise NormalizationError("dependent frame at origin")

    def normalize(vec: KVector) -> KVector:
        nsq = kv_inner(vec, vec)
        if exact:
            norm = _sqrt_scalar_exact(nsq)
            inv = RadicalComplex(norm.inverse())
        else:
            inv = 1.0 / sqrt(nsq.real)
        return vec.scale(inv)

    def orthogonalize(vec: KVector, basis: list[KVector]) -> KVector:
        out = vec
        for b in basis:
            out = out - b.scale(kv_inner(out, b))
        return out

    cols = [normalize(u1)]
    cols.append(normalize(orthogonalize(u2, cols)))
    for j in range(N):
        if len(cols) == N:
            break
        cand = orthogonalize(KVector.basis(N, (j,), exact=exact), cols)
        if cand.is_zero() if exact else cand.max_abs() <= 1e-12:
            continue
        cols.append(normalize(cand))
    if len(cols) != N:
        raise NormalizationError("could not complete a unitary basis")

    # adjoint rotation: component p of the new vector is <old, col_p>
    def rotate(poly: PolyKVector) -> list[list]:
        return [
            [kv_inner(coeff, col) for col in cols] for coeff in poly.coeffs
        ]

    w1, w2 = rotate(v1), rotate(v2)
    zero = RadicalComplex.zero() if exact else 0j
    one = RadicalComplex.one() if exact else 1 + 0j
    deg = max(len(w1), len(w2))
    w1 += [[zero] * N for _ in range(deg - len(w1))]
    w2 += [[zero] * N for _ in range(deg - len(w2))]

    g11 = [row[0] for row in w1]
    g12 = [row[1] for row in w1]
    g21 = [row[0] for row in w2]
    g22 = [row[1] for row in w2]
    det = [
        a - b
        for a, b in zip(
            _poly_mul_scalar(g11, g22, zero), _poly_mul_scalar(g12, g21, zero)
        )
    ]
    det0 = det[0]
    tail_ok = (
        all(scalar_is_zero(x) for x in det[1:])
        if exact
        else all(abs(x) <= PIVOT_TOL for x in det[1:])
    )
    det0_ok = (not scalar_is_zero(det0)) if exact else abs(det0) > PIVOT_TOL
    if not (tail_ok and det0_ok):
        raise NormalizationError("nonconstant pivot minor")
    inv_det = det0.inverse() if exact else 1.0 / det0

    # rows of adj(G) * W / det0: row1 = (g22*w1 - g12*w2)/det0, etc.
    def combine(pa, wa, pb, wb):
        rows = [[zero] * N for _ in range(2 * deg - 1)]
        for i, s in enumerate(pa):
            for j, vec in enumerate(wa):
                for p in range(N):
                    rows[i + j][p] = rows[i + j][p] + s * vec[p]
        for i, s in enumerate(pb):
            for j, vec in enumerate(wb):
                for p in range(N):
                    rows[i + j][p] = rows[i + j][p] - s * vec[p]
        return [[inv_det * x for x in row] for row in rows]

    new1 = combine(g22, w1, g12, w2)
    new2 = combine(g11, w2, g21, w1)

    def is_small(x) -> bool:
        return scalar_is_zero(x) if exact else abs(x) <= PIVOT_TOL

    # sanity of the reduction: leading block must be the constant identity
    for degi, (r1, r2) in enumerate(zip(new1, new2)):
        want11 = one if degi == 0 else zero
        if not (
            is_small(r1[0] - want11)
            and is_small(r1[1])
            and is_small(r2[0])
            and is_small(r2[1] - want11)
        ):
            raise NormalizationError("nonconstant pivot minor")

    m = max(len(new1), len(new2), 2)
    mats = []
    for alpha in range(1, m):
        row1 = new1[alpha][2:] if alpha < len(new1) else [zero] * (N - 2)
        row2 = new2[alpha][2:] if alpha < len(new2) else [zero] * (N - 2)
        mats.append([row1, row2])
    if not mats:
        mats = [CurveForm._zero_matrix(N - 2, "exact" if exact else "float")]
    return CurveForm(N - 2, "exact" if exact else "float", mats)


# ---------------------------------------------------------------------------
# curve files


def _scalar_to_json(x, exact: bool):
    if exact:
        return {"re": str(x.re), "im": str(x.im)}
    z = complex(x)
    return [z.real, z.imag]


def _scalar_from_json(obj, exact: bool):
    if exact:
        if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
            raise CurveFileError(f"bad exact scalar entry: {obj!r}")
        return RadicalComplex(
            RadicalScalar.parse(obj["re"]), RadicalScalar.parse(obj["im"])
        )
    if not isinstance(obj, list) or len(obj) != 2:
        raise CurveFileError(f"bad float scalar entry: {obj!r}")
    return complex(float(obj[0]), float(obj[1]))


def curve_to_dict(curve: CurveForm) -> dict:
    return {
        "n": curve.n,
        "mode": curve.mode,
        "coeffs": [
            {
                "alpha": alpha,
                "rows": [
                    [_scalar_to_json(x, curve.exact) for x in row]
                    for row in curve.coeffs[alpha - 1]
                ],
            }
            for alpha in range(1, curve.m + 1)
        ],
    }


def curve_from_dict(data: dict) -> CurveForm:
    try:
        n = int(data["n"])
        mode = data["mode"]
        entries = data["coeffs"]
        if mode not in ("exact", "float"):
            raise CurveFileError(f"bad mode {mode!r}")
        if not isinstance(entries, list) or not entries:
            raise CurveFileError("empty coefficient list")
        exact = mode == "exact"
        top = max(int(e["alpha"]) for e in entries)
        if any(int(e["alpha"]) < 1 for e in entries):
            raise CurveFileError("alpha must be >= 1")
        mats = [CurveForm._zero_matrix(n, mode) for _ in range(top)]
        for e in entries:
            rows = e["rows"]
            if len(rows) != 2:
                raise CurveFileError("each entry needs exactly two rows")
            mats[int(e["alpha"]) - 1] = [
                [_scalar_from_json(x, exact) for x in rows[0]],
                [_scalar_from_json(x, exact) for x in rows[1]],
            ]
        return CurveForm(n, mode, mats)
    except CurveFileError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CurveFileError(f"malformed curve file: {exc}") from exc


def save_curve(curve: CurveForm, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(curve_to_dict(curve), fh, indent=1)
        fh.write("\n")


def load_curve(path) -> CurveForm:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CurveFileError(f"not valid JSON: {exc}") from exc
    return curve_from_dict(data)
