"""Polynomials in z with exterior-algebra coefficients and their norm surfaces.

The squared norm of such a polynomial is the real-analytic function
sum_{j,k} <c_j, c_k> z^j zbar^k, stored as the Gram matrix H of the
coefficients.  Recognition of the constant-curvature shape c0*(1+z*zbar)^m
amounts to H being diagonal with binomial diagonal, which is tested exactly
in exact mode and to a relative tolerance in float mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from .exterior import KVector, kv_inner, wedge
from .scalars import (
    InversionError,
    RadicalComplex,
    RadicalScalar,
    as_complex,
    scalar_is_zero,
)

BINOMIAL_MATCH_TOL = 1e-9
NUMERIC_GCD_TOL = 1e-8
ROOT_CLUSTER_TOL = 1e-5
IMAG_RESIDUE_TOL = 1e-9


class PolyKVector:
    """Polynomial sum c_j z^j with KVector coefficients of a common shape."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        dim, degree = coeffs[0].dim, coeffs[0].degree
        for c in coeffs:
            if c.dim != dim or c.degree != degree:
                raise ValueError("coefficient shapes disagree")
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs

    @property
    def dim(self) -> int:
        return self.coeffs[0].dim

    @property
    def kdegree(self) -> int:
        return self.coeffs[0].degree

    @property
    def zdegree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return self.coeffs[0].exact

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def max_abs(self) -> float:
        return max(c.max_abs() for c in self.coeffs)

    def coefficient(self, j: int) -> KVector:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return KVector.zero(self.dim, self.kdegree, self.exact)

    def __add__(self, other: "PolyKVector") -> "PolyKVector":
        long = max(len(self.coeffs), len(other.coeffs))
        return PolyKVector(
            [self.coefficient(j) + other.coefficient(j) for j in range(long)]
        )

    def __neg__(self) -> "PolyKVector":
        return PolyKVector([-c for c in self.coeffs])

    def __sub__(self, other: "PolyKVector") -> "PolyKVector":
        return self + (-other)

    def map_coeffs(self, f) -> "PolyKVector":
        return PolyKVector([f(c) for c in self.coeffs])

    def __repr__(self):
        return f"PolyKVector(zdeg={self.zdegree}, kdeg={self.kdegree}, dim={self.dim})"


def pv_derivative(w: PolyKVector) -> PolyKVector:
    """d/dz; the derivative of a constant is the zero polynomial."""
    if len(w.coeffs) == 1:
        return PolyKVector([KVector.zero(w.dim, w.kdegree, w.exact)])
    scaled = []
    for j, c in enumerate(w.coeffs[1:], start=1):
        factor = RadicalComplex.from_rational(j) if w.exact else complex(j)
        scaled.append(c.scale(factor))
    return PolyKVector(scaled)


def pv_wedge(a: PolyKVector, b: PolyKVector) -> PolyKVector:
    """Cauchy-product convolution of coefficients under the exterior wedge."""
    if a.dim != b.dim:
        raise ValueError(f"ambient mismatch: {a.dim} vs {b.dim}")
    out_deg = a.kdegree + b.kdegree
    out = [
        KVector.zero(a.dim, out_deg, a.exact)
        for _ in range(a.zdegree + b.zdegree + 1)
    ]
    for i, ca in enumerate(a.coeffs):
        if ca.is_zero():
            continue
        for j, cb in enumerate(b.coeffs):
            if cb.is_zero():
                continue
            out[i + j] = out[i + j] + wedge(ca, cb)
    return PolyKVector(out)


@dataclass(frozen=True)
class HermitianSurface:
    """Gram matrix H[j][k] = <c_j, c_k> of polynomial coefficients."""

    entries: tuple
    exact: bool

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, j: int, k: int):
        return self.entries[j][k]

    def to_float_matrix(self) -> np.ndarray:
        return np.array(
            [[as_complex(x) for x in row] for row in self.entries], dtype=complex
        )


def herm_surface(w: PolyKVector) -> HermitianSurface:
    rows = []
    for cj in w.coeffs:
        rows.append(tuple(kv_inner(cj, ck) for ck in w.coeffs))
    return HermitianSurface(entries=tuple(rows), exact=w.exact)


@dataclass(frozen=True)
class BinomialMatch:
    """Successful recognition of H as c0 * binomial-diagonal of order m."""

    c0: object  # RadicalScalar in exact mode, float in float mode
    m: int

    def c0_float(self) -> float:
        if isinstance(self.c0, RadicalScalar):
            return self.c0.to_float()
        return float(self.c0)


def match_binomial(
    H: HermitianSurface, tol: float = BINOMIAL_MATCH_TOL
) -> Optional[BinomialMatch]:
    """Recognize H[k][k] = c0*C(m,k), zero off-diagonal; None otherwise."""
    m = H.size - 1
    if H.exact:
        c0 = H.entry(0, 0)
        if not c0.is_real():
            return None
        for j in range(H.size):
            for k in range(H.size):
                want = (
                    RadicalComplex(c0.re * comb(m, j))
                    if j == k
                    else RadicalComplex.zero()
                )
                if H.entry(j, k) != want:
                    return None
        return BinomialMatch(c0=c0.re, m=m)
    A = H.to_float_matrix()
    c0 = A[0, 0].real
    if c0 < 0:
        return None
    scale = tol * max(c0, 0.0)
    if c0 == 0.0:
        scale = 0.0
    for j in range(H.size):
        for k in range(H.size):
            want = c0 * comb(m, j) if j == k else 0.0
            if abs(A[j, k] - want) > scale:
                return None
    return BinomialMatch(c0=c0, m=m)


def surface_eval(H: HermitianSurface, z: complex) -> float:
    """Evaluate sum H[j][k] z^j zbar^k; raises if H is not numerically real."""
    A = H.to_float_matrix()
    n = H.size
    zp = np.array([z**j for j in range(n)])
    value = zp @ A @ np.conj(zp)
    scale = max(1.0, abs(value))
    if abs(value.imag) > IMAG_RESIDUE_TOL * scale:
        raise ValueError(f"surface not real at {z}: imaginary residue {value.imag}")
    return float(value.real)


# ---------------------------------------------------------------------------
# scalar polynomial helpers for common-root analysis


@dataclass(frozen=True)
class RootRecord:
    """A common zero; point None marks the zero at infinity."""

    point: Optional[complex]
    multiplicity: int

    @property
    def at_infinity(self) -> bool:
        return self.point is None


def _trim(p):
    p = list(p)
    while len(p) > 1 and scalar_is_zero(p[-1]):
        p.pop()
    return p


def _trim_float(p, tol):
    p = list(p)
    scale = max((abs(x) for x in p), default=0.0)
    while len(p) > 1 and abs(p[-1]) <= tol * scale:
        p.pop()
    return p


def _poly_is_zero(p) -> bool:
    return all(scalar_is_zero(x) for x in p)


def _exact_monic(p):
    inv = p[-1].inverse()
    return [x * inv for x in p]


def _exact_rem(a, b):
    """Remainder of a by b over the exact complex field (b trimmed, nonzero)."""
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    inv = lead.inverse()
    while len(a) - 1 >= db and not _poly_is_zero(a):
        a = _trim(a)
        da = len(a) - 1
        if da < db:
            break
        q = a[-1] * inv
        shift = da - db
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - q * bi
        a.pop()
    return _trim(a)

def _exact_gcd(a, b):
    a, b = _trim(a), _trim(b)
    if _poly_is_zero(a):
        return _exact_monic(b) if not _poly_is_zero(b) else b
    if _poly_is_zero(b):
        return _exact_monic(a)
    while not _poly_is_zero(b):
        a, b = b, _exact_rem(a, b)
        b = _trim(b)
        if _poly_is_zero(b):
            break
    return _exact_monic(_trim(a))


def _float_monic(p):
    lead = p[-1]
    return [x / lead for x in p]


def _float_gcd(a, b, tol=NUMERIC_GCD_TOL):
    a = _trim_float(a, 1e-14)
    b = _trim_float(b, 1e-14)
    if len(a) < len(b):
        a, b = b, a
    while True:
        if len(b) == 1 and b[0] == 0:
            return _float_monic(a)
        if len(b) == 1:
            return [1.0 + 0j]
        scale = max(abs(x) for x in a)
        r = np.polydiv(np.array(a[::-1]), np.array(b[::-1]))[1][::-1].tolist()
        r = _trim_float(r, 1e-14)
        if max(abs(x) for x in r) <= tol * scale:
            return _float_monic(b)
        a, b = b, r


def component_polynomials(w: PolyKVector):
    """Scalar polynomials (one per basis rank) with any nonzero coefficient."""
    n_components = len(w.coeffs[0].coeffs)
    polys = []
    for r in range(n_components):
        p = [c.coeffs[r] for c in w.coeffs]
        if not _poly_is_zero(p):
            polys.append(_trim(p))
    return polys


def _cluster_roots(roots) -> list[tuple[complex, int]]:
    clusters: list[list[complex]] = []
    for z in sorted(roots, key=lambda v: (round(v.real, 8), round(v.imag, 8))):
        for cl in clusters:
            center = sum(cl) / len(cl)
            if abs(z - center) <= ROOT_CLUSTER_TOL * max(1.0, abs(center)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    out = []
    for cl in clusters:
        center = sum(cl) / len(cl)
        out.append((complex(center), len(cl)))
    out.sort(key=lambda rc: (rc[0].real, rc[0].imag))
    return out


def common_roots(
    w: PolyKVector, expected_degree: Optional[int] = None
) -> list[RootRecord]:
    """Common zeros of all scalar components of w, with multiplicities.

    The finite zeros are the roots of the gcd of the component polynomials;
    exact gcd is used whenever the scalars are exact and stays invertible,
    with a monic numeric remainder sequence as fallback.  When the caller
    supplies the expected top degree and w falls short, the deficit is
    reported as a zero at infinity.
    """
    if w.is_zero():
        raise ValueError("common_roots of the identically zero polynomial")
    polys = component_polynomials(w)
    if w.exact:
        try:
            g = polys[0]
            for p in polys[1:]:
                g = _exact_gcd(g, p)
                if len(g) == 1:
                    break
            gf = [as_complex(x) for x in g]
        except InversionError:
            gf = None
        if gf is None:
            fpolys = [[as_complex(x) for x in p] for p in polys]
            gf = fpolys[0]
            for p in fpolys[1:]:
                gf = _float_gcd(gf, p)
                if len(gf) == 1:
                    break
    else:
        fpolys = [list(p) for p in polys]
        gf = fpolys[0]
        for p in fpolys[1:]:
            gf = _float_gcd(gf, p)
            if len(gf) == 1:
                break

    records: list[RootRecord] = []
    # exact zeros at the origin come off as a monomial factor
    k0 = 0
    while k0 < len(gf) - 1 and gf[k0] == 0:
        k0 += 1
    if k0:
        records.append(RootRecord(point=0j, multiplicity=k0))
        gf = gf[k0:]
    if len(gf) > 1:
        roots = np.roots(np.array(gf[::-1], dtype=complex))
        records.extend(
            RootRecord(point=z, multiplicity=m) for z, m in _cluster_roots(roots)
        )
    if expected_degree is not None and expected_degree > w.zdegree:
        records.append(
            RootRecord(point=None, multiplicity=expected_degree - w.zdegree)
        )
    return records
