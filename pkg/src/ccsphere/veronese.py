"""Veronese curves, their harmonic sequence, and reducible direct sums.

The base curve in CP^n has components sqrt(C(n,p)) z^p.  Later elements of
the harmonic sequence are not holomorphic, so they are handled pointwise:
either by the closed component formula or by Gram-Schmidt on the jets, and
the two constructions are cross-checked as projective points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .exterior import KVector
from .polysurface import PolyKVector, herm_surface, match_binomial, pv_wedge
from .scalars import RadicalComplex, RadicalScalar

JET_DEPENDENCE_TOL = 1e-12


def v0(n: int) -> PolyKVector:
    """The degree-n curve with components sqrt(C(n,p)) z^p, exact scalars."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    dim = n + 1
    coeffs = []
    for p in range(n + 1):
        scale = RadicalComplex(RadicalScalar.sqrt(comb(n, p)))
        coeffs.append(KVector.basis(dim, (p,), scale=scale, exact=True))
    return PolyKVector(coeffs)


def jet_poly(n: int, order: int) -> PolyKVector:
    """order-th z-derivative of v0(n) as an exact polynomial."""
    dim = n + 1
    if order > n:
        return PolyKVector([KVector.zero(dim, 1, exact=True)])
    # coefficient index is the z-power p - order
    out = [KVector.zero(dim, 1, exact=True) for _ in range(n - order + 1)]
    for p in range(order, n + 1):
        fall = Fraction(factorial(p), factorial(p - order))
        scale = RadicalComplex(RadicalScalar.sqrt(comb(n, p)) * fall)
        out[p - order] = KVector.basis(dim, (p,), scale=scale, exact=True)
    return PolyKVector(out)


def _jet_at(n: int, order: int, z: complex) -> np.ndarray:
    comps = np.zeros(n + 1, dtype=complex)
    for p in range(order, n + 1):
        fall = factorial(p) // factorial(p - order)
        comps[p] = np.sqrt(comb(n, p)) * fall * z ** (p - order)
    return comps


def f_closed(n: int, i: int, z: complex) -> np.ndarray:
    """Closed-form components of the i-th harmonic-sequence element at z.

    Binomials vanish outside 0 <= b <= a, which fixes the inner sum range;
    the z-power is combined with (z zbar)^k so negative exponents never occur.
    """
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    z = complex(z)
    u = (z * z.conjugate()).real
    pref = factorial(i) / (1.0 + u) ** i
    out = np.zeros(n + 1, dtype=complex)
    for p in range(n + 1):
        acc = 0j
        for k in range(max(0, i - p), min(i, n - p) + 1):
            acc += (
                (-1) ** k
                * comb(p, i - k)
                * comb(n - p, k)
                * z ** (p - i + k)
                * z.conjugate() ** k
            )
        out[p] = pref * np.sqrt(comb(n, p)) * acc
    return out


def f_gram_schmidt(n: int, i: int, z: complex) -> np.ndarray:
    """Component of the i-th jet orthogonal to all lower jets at z."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    z = complex(z)
    basis: list[np.ndarray] = []
    out = None
    for j in range(i + 1):
        vec = _jet_at(n, j, z)
        scale = np.linalg.norm(vec)
        for b in basis:
            vec = vec - np.vdot(b, vec) / np.vdot(b, b) * b
        if np.linalg.norm(vec) < JET_DEPENDENCE_TOL * max(scale, 1.0):
            raise ValueError(f"jets numerically dependent at order {j}, z={z}")
        if j == i:
            out = vec
        else:
            basis.append(vec)
    return out


def projector_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius distance of the rank-1 projectors onto the two lines."""
    pa = np.outer(a, np.conj(a)) / np.vdot(a, a)
    pb = np.outer(b, np.conj(b)) / np.vdot(b, b)
    return float(np.linalg.norm(pa - pb))


@dataclass(frozen=True)
class SequenceConstants:
    """Curvature and Kaehler-angle cosine of sequence element i."""

    n: int
    i: int
    K: Fraction
    cos_alpha: Fraction


def sequence_constants(n: int, i: int) -> SequenceConstants:
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    denom = n + 2 * i * (n - i)
    return SequenceConstants(
        n=n, i=i, K=Fraction(4, denom), cos_alpha=Fraction(n - 2 * i, denom)
    )


def osculating_wedge(n: int, k: int) -> PolyKVector:
    """Exact wedge of the jets of order 0..k."""
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got k={k}, n={n}")
    w = jet_poly(n, 0)
    for order in range(1, k + 1):
        w = pv_wedge(w, jet_poly(n, order))
    return w


def osculating_degree(n: int, k: int) -> int:
    """Polynomial degree of the k-th osculating wedge.

    Also verifies that the wedge's norm surface has the constant-curvature
    shape c0*(1+z zbar)^degree with c0 > 0, which must hold for every
    osculating curve of the base curve.
    """
    w = osculating_wedge(n, k)
    match = match_binomial(herm_surface(w))
    if match is None or match.c0.is_zero():
        raise AssertionError(
            f"osculating wedge surface is not a positive binomial at n={n}, k={k}"
        )
    return match.m


def _pad(poly: PolyKVector, extra: int) -> PolyKVector:
    """Append `extra` zero components to every coefficient vector."""
    dim = poly.dim + extra
    zero = RadicalComplex.zero()
    out = []
    for c in poly.coeffs:
        out.append(KVector.from_components(list(c.coeffs) + [zero] * extra, exact=True))
    return PolyKVector(out)


def reducible_type_a(n: int) -> tuple[PolyKVector, PolyKVector]:
    """Frame spanning {base curve of degree n+1, its first jet}, in C^(n+2)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return v0(n + 1), jet_poly(n + 1, 1)


def reducible_type_b(n: int) -> tuple[PolyKVector, PolyKVector]:
    """Frame spanning {degree-n base curve, a constant unit vector}, in C^(n+2)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    base = _pad(v0(n), 1)
    const = PolyKVector([KVector.basis(n + 2, (n + 1,), exact=True)])
    return base, const
