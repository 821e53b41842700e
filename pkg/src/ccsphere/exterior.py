"""Dense exterior algebra over C^N with the standard orthonormal basis.

Degree-k basis elements are strictly increasing multi-indices, ranked in
lexicographic order; a KVector stores the full coefficient list of length
C(N, k).  Coefficients are either RadicalComplex (exact mode) or complex
(float mode), never mixed.  Degrees above the ambient dimension give the
zero module (empty coefficient list), which keeps block assembly uniform.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

from .scalars import RAD_ZERO, RadicalComplex, as_complex, scalar_is_zero


@lru_cache(maxsize=None)
def basis_indices(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All degree-`degree` multi-indices on [0, dim), lexicographic order."""
    return tuple(combinations(range(dim), degree))


@lru_cache(maxsize=None)
def _rank_table(dim: int, degree: int) -> dict[tuple[int, ...], int]:
    return {idx: r for r, idx in enumerate(basis_indices(dim, degree))}


def rank_of(dim: int, indices: tuple[int, ...]) -> int:
    return _rank_table(dim, len(indices))[indices]


def merge_indices(a: tuple[int, ...], b: tuple[int, ...]):
    """Merge two increasing index tuples; returns (merged, sign) or None.

    None signals a repeated index (wedge contribution vanishes).  The sign
    is the parity of the shuffle sorting the concatenation a + b.
    """
    if set(a) & set(b):
        return None
    inversions = 0
    for x in a:
        for y in b:
            if y < x:
                inversions += 1
    merged = tuple(sorted(a + b))
    return merged, (-1 if inversions % 2 else 1)


class KVector:
    """Degree-k element of the exterior algebra over C^dim."""

    __slots__ = ("dim", "degree", "coeffs", "_exact")

    def __init__(self, dim: int, degree: int, coeffs, exact: bool | None = None):
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        coeffs = list(coeffs)
        if len(coeffs) != comb(dim, degree):
            raise ValueError(
                f"expected {comb(dim, degree)} coefficients, got {len(coeffs)}"
            )
        if exact is None:
            if not coeffs:
                raise ValueError("empty KVector needs an explicit exact flag")
            exact = isinstance(coeffs[0], RadicalComplex)
        self.dim = dim
        self.degree = degree
        self.coeffs = coeffs
        self._exact = exact

    @classmethod
    def zero(cls, dim: int, degree: int, exact: bool) -> "KVector":
        fill = RAD_ZERO if exact else 0j
        return cls(dim, degree, [fill] * comb(dim, degree), exact=exact)

    @classmethod
    def basis(cls, dim: int, indices: tuple[int, ...], scale=None, exact: bool = True):
        indices = tuple(indices)
        v = cls.zero(dim, len(indices), exact)
        one = RadicalComplex.one() if exact else 1 + 0j
        v.coeffs[rank_of(dim, indices)] = one if scale is None else scale
        return v

    @classmethod
    def from_components(cls, components, exact: bool | None = None) -> "KVector":
        """Degree-1 vector from its component list."""
        components = list(components)
        return cls(len(components), 1, components, exact=exact)

    @property
    def exact(self) -> bool:
        return self._exact

    def _check_like(self, other: "KVector"):
        if self.dim != other.dim:
            raise ValueError(f"ambient mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "KVector") -> "KVector":
        self._check_like(other)
        if self.degree != other.degree:
            raise ValueError("degree mismatch in addition")
        return KVector(
            self.dim,
            self.degree,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            exact=self._exact,
        )

    def __sub__(self, other: "KVector") -> "KVector":
        return self + (-other)

    def __neg__(self) -> "KVector":
        return KVector(
            self.dim, self.degree, [-a for a in self.coeffs], exact=self._exact
        )

    def scale(self, s) -> "KVector":
        return KVector(
            self.dim, self.degree, [s * a for a in self.coeffs], exact=self._exact
        )

    def is_zero(self) -> bool:
        return all(scalar_is_zero(c) for c in self.coeffs)

    def max_abs(self) -> float:
        return max((abs(as_complex(c)) for c in self.coeffs), default=0.0)

    def nonzero_items(self):
        idx = basis_indices(self.dim, self.degree)
        for r, c in enumerate(self.coeffs):
            if not scalar_is_zero(c):
                yield idx[r], c

    def __repr__(self):
        items = ", ".join(f"{i}:{c!s}" for i, c in self.nonzero_items())
        return f"KVector(dim={self.dim}, deg={self.degree}, {{{items}}})"


def wedge(a: KVector, b: KVector) -> KVector:
    """Graded-anticommutative product; zero on repeated basis indices."""
    a._check_like(b)
    out = KVector.zero(a.dim, a.degree + b.degree, a.exact)
    if a.degree + b.degree > a.dim:
        return out
    table = _rank_table(a.dim, a.degree + b.degree)
    for ia, ca in a.nonzero_items():
        for ib, cb in b.nonzero_items():
            merged = merge_indices(ia, ib)
            if merged is None:
                continue
            idx, sign = merged
            term = ca * cb
            out.coeffs[table[idx]] = (
                out.coeffs[table[idx]] + (term if sign > 0 else -term)
            )
    return out


def kv_inner(a: KVector, b: KVector):
    """Hermitian inner product, conjugate-linear in the second slot."""
    a._check_like(b)
    if a.degree != b.degree:
        raise ValueError("degree mismatch in inner product")
    total = RAD_ZERO if a.exact else 0j
    for ca, cb in zip(a.coeffs, b.coeffs):
        total = total + ca * cb.conjugate()
    return total


def norm_sq(a: KVector):
    return kv_inner(a, a)


def apply_signed_permutation(a: KVector, perm: list[int], signs: list[int]) -> KVector:
    """Image of `a` under e_i -> signs[i] * e_perm[i] (a unitary in exact mode)."""
    out = KVector.zero(a.dim, a.degree, a.exact)
    table = _rank_table(a.dim, a.degree)
    for idx, c in a.nonzero_items():
        mapped = [perm[i] for i in idx]
        sgn = 1
        for i in idx:
            sgn *= signs[i]
        # parity of the sort bringing mapped into increasing order
        swaps = sum(
            1 for i in range(len(mapped)) for j in range(i + 1, len(mapped))
            if mapped[i] > mapped[j]
        )
        if swaps % 2:
            sgn = -sgn
        target = tuple(sorted(mapped))
        term = c if sgn > 0 else -c
        out.coeffs[table[target]] = out.coeffs[table[target]] + term
    return out
