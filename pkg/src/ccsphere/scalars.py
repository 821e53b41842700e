"""Exact scalars: rational combinations of square roots of square-free integers.

A value is stored as a sparse map ``{d: q_d}`` meaning ``sum q_d * sqrt(d)``
over square-free positive integers ``d``; the key 1 carries the rational
part.  Since square roots of distinct square-free integers are linearly
independent over the rationals, equality and zero tests are coefficient-wise
and exact.  ``RadicalComplex`` pairs two such values as real and imaginary
parts.  Float-mode code uses the built-in ``complex`` type throughout.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

FACTOR_LIMIT = 10**6

# inversion cost grows as 2**k in the number of distinct prime atoms
MAX_INVERSION_ATOMS = 8


class FactorLimitError(ValueError):
    """Radicand too large to factor by trial division."""


class InversionError(ValueError):
    """Inverse not computable (zero input or too many radical atoms)."""


@lru_cache(maxsize=None)
def split_square(n: int) -> tuple[int, int]:
    """Write n = s*s*f with f square-free; returns (s, f).

    Trial division only, refusing radicands whose unfactored part exceeds
    FACTOR_LIMIT squared: better to fail loudly than mis-canonicalize.
    """
    if n <= 0:
        raise ValueError(f"radicand must be positive, got {n}")
    s, f = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if p > FACTOR_LIMIT:
            raise FactorLimitError(f"cannot factor radicand {n} by trial division")
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        if m % p == 0:
            m //= p
            f *= p
        p += 1 if p == 2 else 2
    f *= m
    return s, f


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected rational, got {type(x).__name__}")


class RadicalScalar:
    """Element of the real field Q(sqrt(d) : d square-free), canonical form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for d, q in terms.items():
                if d <= 0:
                    raise ValueError(f"radical index must be positive, got {d}")
                s, f = split_square(d)
                if s != 1:
                    raise ValueError(f"radical index {d} is not square-free")
                q = _as_fraction(q)
                if q != 0:
                    clean[f] = clean.get(f, Fraction(0)) + q
        self._terms = {d: q for d, q in clean.items() if q != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "RadicalScalar":
        return cls({1: _as_fraction(q)})

    @classmethod
    def zero(cls) -> "RadicalScalar":
        return cls()

    @classmethod
    def one(cls) -> "RadicalScalar":
        return cls({1: Fraction(1)})

    @classmethod
    def sqrt(cls, q) -> "RadicalScalar":
        """Canonical sqrt of a non-negative rational: sqrt(a/b) = sqrt(ab)/b."""
        q = _as_fraction(q)
        if q < 0:
            raise ValueError(f"cannot take square root of negative rational {q}")
        if q == 0:
            return cls.zero()
        a, b = q.numerator, q.denominator
        s, f = split_square(a * b)
        return cls({f: Fraction(s, b)})

    # -- canonical accessors ----------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coefficient(self, d: int) -> Fraction:
        return self._terms.get(d, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(d == 1 for d in self._terms)

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.rational_part()

    def atoms(self) -> frozenset[int]:
        """Primes occurring in the square-free radical indices."""
        primes: set[int] = set()
        for d in self._terms:
            m = d
            p = 2
            while m > 1:
                if m % p == 0:
                    primes.add(p)
                    while m % p == 0:
                        m //= p
                p += 1 if p == 2 else 2
        return frozenset(primes)

    # -- arithmetic ---------------------------------------------------------

    def _coerced(self, other) -> "RadicalScalar | None":
        if isinstance(other, RadicalScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return RadicalScalar.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for d, q in o._terms.items():
            terms[d] = terms.get(d, Fraction(0)) + q
        return RadicalScalar(terms)

    __radd__ = __add__

    def __neg__(self):
        return RadicalScalar({d: -q for d, q in self._terms.items()})

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        terms: dict[int, Fraction] = {}
        for d1, q1 in self._terms.items():
            for d2, q2 in o._terms.items():
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                q = q1 * q2 * g
                terms[d] = terms.get(d, Fraction(0)) + q
        return RadicalScalar(terms)

    __rmul__ = __mul__

    def inverse(self) -> "RadicalScalar":
        """Exact inverse by iterated sign-flip conjugation, one atom at a time."""
        if self.is_zero():
            raise InversionError("cannot invert zero")
        atoms = sorted(self.atoms())
        if len(atoms) > MAX_INVERSION_ATOMS:
            raise InversionError(
                f"{len(atoms)} radical atoms exceed the inversion bound "
                f"{MAX_INVERSION_ATOMS}"
            )
        value = self
        multiplier = RadicalScalar.one()
        for p in reversed(atoms):
            conj = value._flip_atom(p)
            multiplier = multiplier * conj
            value = value * conj
        q = value.as_rational()
        return multiplier * RadicalScalar.from_rational(1 / q)

    def _flip_atom(self, p: int) -> "RadicalScalar":
        return RadicalScalar(
            {d: (-q if d % p == 0 else q) for d, q in self._terms.items()}
        )

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- comparisons, hashing, conversion -----------------------------------

    def __eq__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        # rational values hash like their Fraction so == across types is safe
        if self.is_rational():
            return hash(self.rational_part())
        return hash(tuple(sorted(self._terms.items())))

    def __bool__(self):
        return not self.is_zero()

    def to_float(self) -> float:
        return float(sum(float(q) * math.sqrt(d) for d, q in sorted(self._terms.items())))

    def conjugate(self) -> "RadicalScalar":
        return self

    # -- textual form --------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for d in sorted(self._terms):
            q = self._terms[d]
            sign = "-" if q < 0 else "+"
            mag = abs(q)
            if d == 1:
                body = str(mag)
            elif mag == 1:
                body = f"sqrt({d})"
            else:
                body = f"{mag}*sqrt({d})"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __repr__(self) -> str:
        return f"RadicalScalar({self})"

    _TOKEN = re.compile(
        r"(?P<coeff>\d+(?:/\d+)?)?(?:(?<=\d)\*)?(?:sqrt\((?P<rad>\d+)\))?"
    )

    @classmethod
    def parse(cls, text: str) -> "RadicalScalar":
        """Inverse of ``str``; accepts ASCII '-' and unicode minus."""
        s = text.replace("−", "-").replace(" ", "")
        if not s:
            raise ValueError("empty radical literal")
        if s == "0":
            return cls.zero()
        terms: dict[int, Fraction] = {}
        pos = 0
        sign = 1
        if s[0] in "+-":
            sign = -1 if s[0] == "-" else 1
            pos = 1
        while pos < len(s):
            m = cls._TOKEN.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse radical literal {text!r} at {pos}")
            coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
            if m.group("rad") is not None:
                d = int(m.group("rad"))
                sd, f = split_square(d)
                coeff, d = coeff * sd, f
            else:
                d = 1
            terms[d] = terms.get(d, Fraction(0)) + sign * coeff
            pos = m.end()
            if pos < len(s):
                if s[pos] not in "+-":
                    raise ValueError(f"cannot parse radical literal {text!r} at {pos}")
                sign = -1 if s[pos] == "-" else 1
                pos += 1
        return cls(terms)


class RadicalComplex:
    """Complexification of RadicalScalar: re + i*im, componentwise canonical."""

    __slots__ = ("re", "im")

    def __init__(self, re=None, im=None):
        self.re = self._part(re)
        self.im = self._part(im)

    @staticmethod
    def _part(x) -> RadicalScalar:
        if x is None:
            return RadicalScalar.zero()
        if isinstance(x, RadicalScalar):
            return x
        return RadicalScalar.from_rational(x)

    @classmethod
    def zero(cls) -> "RadicalComplex":
        return cls()

    @classmethod
    def one(cls) -> "RadicalComplex":
        return cls(RadicalScalar.one())

    @classmethod
    def from_rational(cls, q) -> "RadicalComplex":
        return cls(RadicalScalar.from_rational(q))

    @classmethod
    def sqrt_rational(cls, q) -> "RadicalComplex":
        return cls(RadicalScalar.sqrt(q))

    def _coerced(self, other) -> "RadicalComplex | None":
        if isinstance(other, RadicalComplex):
            return other
        if isinstance(other, (RadicalScalar, int, Fraction)):
            return RadicalComplex(other)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RadicalComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return RadicalComplex(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RadicalComplex(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "RadicalComplex":
        return RadicalComplex(self.re, -self.im)

    def abs2(self) -> RadicalScalar:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "RadicalComplex":
        n = self.abs2()
        if n.is_zero():
            raise InversionError("cannot invert zero")
        inv = n.inverse()
        return RadicalComplex(self.re * inv, -self.im * inv)

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def is_real(self) -> bool:
        return self.im.is_zero()

    def __eq__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def to_complex(self) -> complex:
        return complex(self.re.to_float(), self.im.to_float())

    def __str__(self):
        return f"({self.re})+({self.im})i"

    def __repr__(self):
        return f"RadicalComplex({self.re!s}, {self.im!s})"


def as_complex(x) -> complex:
    """Uniform float view of an exact or float scalar."""
    if isinstance(x, RadicalComplex):
        return x.to_complex()
    if isinstance(x, RadicalScalar):
        return complex(x.to_float())
    return complex(x)


def scalar_is_zero(x) -> bool:
    """Structural zero test: exact for radical scalars, == 0 for floats."""
    if isinstance(x, (RadicalComplex, RadicalScalar)):
        return x.is_zero()
    return x == 0


RAD_ZERO = RadicalComplex.zero()
RAD_ONE = RadicalComplex.one()
