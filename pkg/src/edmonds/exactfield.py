"""Exact scalar rings.

Three kinds of coefficient rings are used throughout the package:

* ``RationalField`` -- elements are :class:`fractions.Fraction`.
* ``PrimeField`` -- elements are stored raw as ints in ``[0, p)``; the
  :class:`PrimeFieldElem` wrapper gives operator syntax for interactive use.
* ``UnityRing`` -- ``F[x]/(x^d - 1)`` modulo the ideal killing every proper
  divisor order, i.e. a ring in which the image ``zeta`` of ``x`` has order
  exactly ``d`` in every component.  Raw elements are tuples of ``k`` base
  scalars (``k`` = degree of the modulus).  No division is provided.

On top of these, :class:`BiPoly` and :class:`BiRational` give sparse
polynomials and fractions in two formal variables ``X`` and ``Y``.

All rings share a small "raw" protocol (``zero``, ``one``, ``add``, ``sub``,
``mul``, ``neg``, ``is_zero``, ``coerce``) plus an array protocol (``k``,
``dtype``, ``to_vec``, ``lift``...) used by the linear algebra code.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import (
    FieldTooSmallError,
    InvalidInputError,
    UnsupportedCharacteristicError,
    UnsupportedOperationError,
)

# int64 is safe while p^2 * (longest dot product) stays below 2^63
_INT64_PRIME_LIMIT = 2**23


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 1_000_000:
        return all(p % q for q in range(2, math.isqrt(p) + 1))
    from sympy import isprime

    return bool(isprime(p))


def _parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, PrimeFieldElem):
        raise InvalidInputError("cannot coerce a prime field element into Q")
    return Fraction(value)


class PrimeFieldElem:
    """An element of F_p with operator syntax."""

    __slots__ = ("value", "field")

    def __init__(self, value, field: "PrimeField"):
        self.field = field
        self.value = field.coerce(value)

    def _other(self, other):
        if isinstance(other, PrimeFieldElem):
            if other.field.p != self.field.p:
                raise InvalidInputError("operands live in different prime fields")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return PrimeFieldElem(self.value + self._other(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return PrimeFieldElem(self.value - self._other(other), self.field)

    def __rsub__(self, other):
        return PrimeFieldElem(self._other(other) - self.value, self.field)

    def __mul__(self, other):
        return PrimeFieldElem(self.value * self._other(other), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return PrimeFieldElem(self.value * self.field.inv(self._other(other)), self.field)

    def __rtruediv__(self, other):
        return PrimeFieldElem(self._other(other) * self.field.inv(self.value), self.field)

    def __neg__(self):
        return PrimeFieldElem(-self.value, self.field)

    def __pow__(self, e: int):
        return PrimeFieldElem(self.field.pow(self.value, e), self.field)

    def __eq__(self, other):
        try:
            return self.value == self._other(other)
        except (InvalidInputError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


class _FieldBase:
    """Raw-level and array-level operations common to both fields."""

    k = 1

    @property
    def base(self):
        return self

    def zero_value(self):
        return self.zero

    def add(self, a, b):
        return self.coerce(a + b)

    def sub(self, a, b):
        return self.coerce(a - b)

    def mul(self, a, b):
        return self.coerce(a * b)

    def neg(self, a):
        return self.coerce(-a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def eq(self, a, b) -> bool:
        return self.coerce(a) == self.coerce(b)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = self.coerce(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, n: int):
        return self.coerce(n)

    # array protocol -------------------------------------------------------

    def zeros(self, shape):
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(self.zero)
            return out
        return np.zeros(shape, dtype=self.dtype)

    def identity(self, n: int):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def array(self, data):
        """Convert nested data (ints, strings, Fractions...) into a reduced array."""
        arr = np.array(data, dtype=object)
        flat = [self.coerce(v) for v in arr.reshape(-1)]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        out = out.reshape(arr.shape)
        if self.dtype is not object:
            out = out.astype(self.dtype)
        return out

    def to_vec(self, a):
        return np.array([self.coerce(a)], dtype=self.dtype)

    def from_vec(self, v):
        return self.coerce(v[0])

    def is_zero_array(self, arr) -> bool:
        return not np.any(arr != 0)

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class PrimeField(_FieldBase):
    """The prime field F_p.  Raw elements are Python ints in ``[0, p)``."""

    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p):
            raise InvalidInputError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1
        self.dtype = np.int64 if p < _INT64_PRIME_LIMIT else object
        self.name = f"Fp:{p}"

    def __call__(self, value) -> PrimeFieldElem:
        return PrimeFieldElem(value, self)

    def coerce(self, value) -> int:
        if isinstance(value, PrimeFieldElem):
            if value.field.p != self.p:
                raise InvalidInputError("element belongs to another prime field")
            return value.value
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        q = _parse_rational(value)
        if q.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator of {q} vanishes mod {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def inv(self, a) -> int:
        a = self.coerce(a)
        if a == 0:
            raise ZeroDivisionError("division by zero in " + self.name)
        return pow(a, -1, self.p)

    def elem(self, raw) -> PrimeFieldElem:
        return PrimeFieldElem(raw, self)

    def reduce(self, arr):
        return arr % self.p

    def to_str(self, a) -> str:
        return str(self.coerce(a))

    def random_array(self, rng: np.random.Generator, shape, low: int = 0):
        if self.dtype is object:
            flat = [int(v) for v in rng.integers(low, self.p, size=int(np.prod(shape)))]
            return self.array(np.array(flat, dtype=object).reshape(shape))
        return rng.integers(low, self.p, size=shape).astype(np.int64)


class RationalField(_FieldBase):
    """The rationals; raw elements are :class:`fractions.Fraction`."""

    characteristic = 0
    order = None
    dtype = object
    name = "Q"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, value) -> Fraction:
        return self.coerce(value)

    def coerce(self, value) -> Fraction:
        return _parse_rational(value)

    def inv(self, a) -> Fraction:
        a = self.coerce(a)
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def elem(self, raw) -> Fraction:
        return self.coerce(raw)

    def reduce(self, arr):
        return arr

    def to_str(self, a) -> str:
        return str(self.coerce(a))

    def random_array(self, rng: np.random.Generator, shape, low: int = -9, high: int = 10):
        vals = rng.integers(low, high, size=shape)
        return self.array(vals)


QQ = RationalField()


def make_field(descriptor) -> PrimeField | RationalField:
    """Parse a field descriptor: ``"Q"`` or ``"Fp:<prime>"``."""
    if isinstance(descriptor, (PrimeField, RationalField)):
        return descriptor
    text = str(descriptor).strip()
    if text in ("Q", "QQ"):
        return QQ
    if text.startswith("Fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise InvalidInputError(f"bad field descriptor {descriptor!r}") from None
        return PrimeField(p)
    raise InvalidInputError(f"unknown field descriptor {descriptor!r}")


def is_field(ring) -> bool:
    return isinstance(ring, (PrimeField, RationalField))


def sample_set(field, size: int, exclude_zero: bool = False, seed=None) -> list:
    """Return ``size`` distinct field elements.

    Deterministically these are the images of 0, 1, 2, ... (1, 2, ... when
    zero is excluded).  With a seed, distinct random elements are drawn.
    """
    field = make_field(field)
    if size < 0:
        raise InvalidInputError("sample size must be nonnegative")
    needed = size + (1 if exclude_zero else 0)
    if field.order is not None and needed > field.order:
        raise FieldTooSmallError(
            f"{field.name} has {field.order} elements, {needed} required", required=needed
        )
    if seed is None:
        start = 1 if exclude_zero else 0
        return [field.coerce(i) for i in range(start, start + size)]
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    low = 1 if exclude_zero else 0
    if field.order is not None:
        span = field.order - low
        if span < 2**62:
            picks = rng.choice(span, size=size, replace=False)
            return [field.coerce(int(v) + low) for v in picks]
        out: set[int] = set()
        while len(out) < size:
            v = int(rng.integers(0, 2**62))
            if v or not exclude_zero:
                out.add(v)
        return [field.coerce(v) for v in sorted(out)]
    bound = max(10 * size, 100)
    picks = rng.choice(bound, size=size, replace=False) + low
    return [field.coerce(int(v)) for v in picks]


# ---------------------------------------------------------------------------
# univariate polynomials over a field (lists, low degree first)


def _poly_trim(f, field):
    f = list(f)
    while f and field.is_zero(f[-1]):
        f.pop()
    return f


def _poly_divmod(f, g, field):
    f = _poly_trim(f, field)
    g = _poly_trim(g, field)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = field.inv(g[-1])
    q = [field.zero] * max(len(f) - len(g) + 1, 1)
    r = list(f)
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = field.mul(r[-1], inv_lead)
        q[shift] = c
        for i, gi in enumerate(g):
            r[i + shift] = field.sub(r[i + shift], field.mul(c, gi))
        r = _poly_trim(r, field)
    return _poly_trim(q, field), r


def _poly_gcd(f, g, field):
    f, g = _poly_trim(f, field), _poly_trim(g, field)
    while g:
        f, g = g, _poly_divmod(f, g, field)[1]
    if not f:
        return f
    inv_lead = field.inv(f[-1])
    return [field.mul(c, inv_lead) for c in f]


def _divisors(d: int):
    return [e for e in range(1, d + 1) if d % e == 0]


# ---------------------------------------------------------------------------


class UnityRingElem:
    """Element of a :class:`UnityRing`; supports + - * and ==, never /."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: "UnityRing", coeffs):
        self.ring = ring
        self.coeffs = ring.coerce(coeffs)

    def _other(self, other):
        if isinstance(other, UnityRingElem):
            if other.ring != self.ring:
                raise InvalidInputError("operands live in different unity rings")
            return other.coeffs
        return self.ring.coerce(other)

    def __add__(self, other):
        return UnityRingElem(self.ring, self.ring.add(self.coeffs, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return UnityRingElem(self.ring, self.ring.sub(self.coeffs, self._other(other)))

    def __rsub__(self, other):
        return UnityRingElem(self.ring, self.ring.sub(self._other(other), self.coeffs))

    def __mul__(self, other):
        return UnityRingElem(self.ring, self.ring.mul(self.coeffs, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return UnityRingElem(self.ring, self.ring.neg(self.coeffs))

    def __pow__(self, e: int):
        return UnityRingElem(self.ring, self.ring.pow(self.coeffs, e))

    def __truediv__(self, other):
        raise UnsupportedOperationError("division is not available in the unity ring")

    __rtruediv__ = __truediv__

    def __eq__(self, other):
        try:
            return self.coeffs == self._other(other)
        except (InvalidInputError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.ring.d, self.ring.base.name))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if self.ring.base.is_zero(c):
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            cs = self.ring.base.to_str(c)
            terms.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(terms) or "0"


class UnityRing:
    """The ring ``F[x]/(x^d-1)`` modulo the ideal ``J`` of lower-order parts.

    ``J`` is generated by ``(x^d-1)/(x^e-1)`` for the proper divisors ``e``
    of ``d``; since ``F[x]`` is a PID the quotient is ``F[x]/g`` where ``g`` is
    the gcd of ``x^d-1`` and those generators (the d-th cyclotomic
    polynomial).  ``modulus`` holds ``g`` (low degree first, monic).
    """

    def __init__(self, base, d: int):
        base = make_field(base)
        d = int(d)
        if d < 1:
            raise InvalidInputError("order d must be a positive integer")
        if base.characteristic and d % base.characteristic == 0:
            raise UnsupportedCharacteristicError(
                f"characteristic {base.characteristic} divides d={d}"
            )
        self.base = base
        self.d = d
        self.characteristic = base.characteristic
        xd1 = [base.neg(base.one)] + [base.zero] * (d - 1) + [base.one]
        g = xd1
        for e in _divisors(d)[:-1]:
            gen = [base.zero] * (d - e + 1)
            for t in range(d // e):
                gen[t * e] = base.one
            g = _poly_gcd(g, gen, base)
        self.modulus = tuple(g)
        self.k = len(g) - 1
        self.dtype = base.dtype
        k = self.k
        # x^e mod g for e < 2k-1 (rows), used to fold products
        red = []
        for e in range(max(2 * k - 1, 1)):
            mono = [base.zero] * e + [base.one]
            red.append(self._reduce_list(mono))
        self._red = base.array(red)
        r3 = base.zeros((k, k, k))
        for a in range(k):
            for b in range(k):
                r3[a, b] = self._red[a + b]
        self._r3 = r3
        self.zero = tuple([base.zero] * k)
        self.one = self._reduce_list([base.one])

    # raw protocol ---------------------------------------------------------

    def _reduce_list(self, coeffs) -> tuple:
        coeffs = [self.base.coerce(c) for c in coeffs]
        if len(coeffs) > self.k:
            coeffs = _poly_divmod(coeffs, list(self.modulus), self.base)[1]
        coeffs = list(coeffs) + [self.base.zero] * (self.k - len(coeffs))
        return tuple(coeffs)

    def coerce(self, value) -> tuple:
        if isinstance(value, UnityRingElem):
            if value.ring != self:
                raise InvalidInputError("element belongs to another unity ring")
            return value.coeffs
        if isinstance(value, (tuple, list, np.ndarray)):
            return self._reduce_list(list(value))
        return self._reduce_list([value])

    def __call__(self, coeffs) -> UnityRingElem:
        return UnityRingElem(self, coeffs)

    def elem(self, raw) -> UnityRingElem:
        return UnityRingElem(self, raw)

    @property
    def zeta(self) -> UnityRingElem:
        return UnityRingElem(self, [self.base.zero, self.base.one])

    @property
    def zeta_raw(self) -> tuple:
        return self._reduce_list([self.base.zero, self.base.one])

    def from_int(self, n):
        return self._reduce_list([n])

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = [self.base.zero] * (2 * self.k - 1)
        for i, x in enumerate(a):
            if self.base.is_zero(x):
                continue
            for j, y in enumerate(b):
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x, y))
        return self._reduce_list(prod)

    def pow(self, a, e: int):
        if e < 0:
            raise UnsupportedOperationError("negative powers need division")
        result, base = self.one, tuple(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def zeta_pow(self, e: int) -> tuple:
        """``zeta**e`` for any integer ``e`` (negative powers use zeta^d = 1)."""
        return self.pow(self.zeta_raw, e % self.d)

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b) -> bool:
        return self.coerce(a) == self.coerce(b)

    def div(self, a, b):
        """Division by scalars only (any element when the ring is a field, k = 1)."""
        a, b = self.coerce(a), self.coerce(b)
        if all(self.base.is_zero(c) for c in b[1:]) and not self.base.is_zero(b[0]):
            inv = self.base.inv(b[0])
            return tuple(self.base.mul(c, inv) for c in a)
        raise UnsupportedOperationError("division by a non-scalar is not available in the unity ring")

    def inv(self, a):
        return self.div(self.one, a)

    def to_str(self, a) -> str:
        return repr(UnityRingElem(self, a))

    # array protocol -------------------------------------------------------

    def to_vec(self, a):
        return self.base.array(list(self.coerce(a)))

    def from_vec(self, v):
        return tuple(self.base.coerce(x) for x in v)

    def zeros(self, shape):
        return self.base.zeros(tuple(shape) + (self.k,))

    def lift(self, arr):
        """Embed an array of base-field scalars as constants of R."""
        arr = np.asarray(arr)
        out = self.base.zeros(arr.shape + (self.k,))
        out[..., 0] = arr
        return out

    def array(self, data):
        """Nested lists whose leaves are ring elements, raw tuples or base scalars."""

        def conv(x):
            if isinstance(x, list) or (isinstance(x, np.ndarray) and x.dtype == object):
                return [conv(y) for y in x]
            return list(self.coerce(x))

        return self.base.array(conv(data))

    def reduce(self, arr):
        return self.base.reduce(arr)

    def mul_arrays(self, a, b):
        """Elementwise ring product of two arrays with trailing axis ``k``."""
        outer = self.reduce(a[..., :, None] * b[..., None, :])
        return self.reduce(np.einsum("...ab,abc->...c", outer, self._r3))

    def regular(self, A):
        """Regular representation: an (N,M,k) R-matrix as an (Nk, Mk) F-matrix."""
        N, M, k = A.shape
        L = np.einsum("ija,abc->icjb", A, self._r3)
        return self.reduce(L).reshape(N * k, M * k)

    def is_zero_array(self, arr) -> bool:
        return not np.any(arr != 0)

    def __eq__(self, other):
        return isinstance(other, UnityRing) and other.d == self.d and other.base == self.base

    def __hash__(self):
        return hash(("unity", self.d, self.base.name))

    def __repr__(self):
        return f"<UnityRing d={self.d} over {self.base.name}, k={self.k}>"


def make_unity_ring(base, d: int) -> UnityRing:
    return UnityRing(base, d)


def as_unity_ring(ring) -> UnityRing:
    """View a field as the trivial unity ring (d = 1, R = F)."""
    if isinstance(ring, UnityRing):
        return ring
    return UnityRing(ring, 1)


def base_field(ring):
    return ring.base


# ---------------------------------------------------------------------------
# bivariate polynomials and fractions


class BiPoly:
    """Sparse polynomial in X, Y with coefficients in ``ring`` (raw values)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise InvalidInputError("BiPoly exponents must be nonnegative")
            c = ring.coerce(c)
            if not ring.is_zero(c):
                clean[(int(a), int(b))] = c
        self.terms = clean

    @classmethod
    def const(cls, ring, c):
        return cls(ring, {(0, 0): c})

    @classmethod
    def monomial(cls, ring, a: int, b: int, c=None):
        return cls(ring, {(a, b): ring.one if c is None else c})

    @classmethod
    def X(cls, ring):
        return cls.monomial(ring, 1, 0)

    @classmethod
    def Y(cls, ring):
        return cls.monomial(ring, 0, 1)

    def _coerce(self, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            return other
        return BiPoly.const(self.ring, other)

    def __add__(self, other):
        if isinstance(other, BiRational):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = self.ring.add(out[mono], c) if mono in out else c
        return BiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.ring, {m: self.ring.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, BiRational):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, BiRational):
            return NotImplemented
        other = self._coerce(other)
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                mono = (a1 + a2, b1 + b2)
                prod = self.ring.mul(c1, c2)
                out[mono] = self.ring.add(out[mono], prod) if mono in out else prod
        return BiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = BiPoly.const(self.ring, self.ring.one)
        for _ in range(e):
            result = result * self
        return result

    def __truediv__(self, other):
        return BiRational(self, BiPoly.const(self.ring, self.ring.one)) / other

    def __eq__(self, other):
        if isinstance(other, BiRational):
            return other == self
        try:
            other = self._coerce(other)
        except (InvalidInputError, TypeError, ValueError):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((a + b for a, b in self.terms), default=-1)

    def degree_x(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def degree_y(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def coefficient(self, a: int, b: int):
        return self.terms.get((a, b), self.ring.coerce(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def map_coeffs(self, fn, ring=None) -> "BiPoly":
        return BiPoly(ring or self.ring, {m: fn(c) for m, c in self.terms.items()})

    def substitute_y_power(self, e: int) -> "BiPoly":
        return BiPoly(self.ring, {(a, b * e): c for (a, b), c in self.terms.items()})

    def eval(self, x0, y0):
        """Exact evaluation at ``X = x0``, ``Y = y0`` (values coerced into the ring)."""
        ring = self.ring
        x0, y0 = ring.coerce(x0), ring.coerce(y0)
        xp: dict[int, object] = {}
        yp: dict[int, object] = {}
        total = ring.coerce(0)
        for (a, b), c in self.terms.items():
            if a not in xp:
                xp[a] = ring.pow(x0, a)
            if b not in yp:
                yp[b] = ring.pow(y0, b)
            total = ring.add(total, ring.mul(c, ring.mul(xp[a], yp[b])))
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                s for s in (
                    "" if a == 0 else ("X" if a == 1 else f"X^{a}"),
                    "" if b == 0 else ("Y" if b == 1 else f"Y^{b}"),
                ) if s
            )
            cs = self.ring.to_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)


def bipoly_eval(p: BiPoly, x0, y0):
    return p.eval(x0, y0)


class BiRational:
    """A fraction ``num/den`` of BiPolys.  No gcd reduction is attempted."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, BiPoly):
            raise InvalidInputError("BiRational numerator must be a BiPoly")
        if den is None:
            den = BiPoly.const(num.ring, num.ring.one)
        if not isinstance(den, BiPoly):
            den = BiPoly.const(num.ring, den)
        if den.is_zero():
            raise ZeroDivisionError("BiRational with zero denominator")
        self.num, self.den = num, den

    @property
    def ring(self):
        return self.num.ring

    def _coerce(self, other) -> "BiRational":
        if isinstance(other, BiRational):
            return other
        if isinstance(other, BiPoly):
            return BiRational(other)
        return BiRational(BiPoly.const(self.ring, other))

    def __add__(self, other):
        o = self._coerce(other)
        if _same_poly(self.den, o.den):
            return BiRational(self.num + o.num, self.den)
        return BiRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return BiRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        return BiRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return BiRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (InvalidInputError, TypeError, ValueError):
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash("BiRational")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def normalized(self) -> "BiRational":
        """Content normalization: make the leading denominator coefficient 1 (fields only)."""
        ring = self.ring
        if not is_field(ring):
            return self
        lead = self.den.terms[max(self.den.terms)]
        inv = ring.inv(lead)
        return BiRational(
            self.num.map_coeffs(lambda c: ring.mul(c, inv)),
            self.den.map_coeffs(lambda c: ring.mul(c, inv)),
        )

    def eval(self, x0, y0):
        d = self.den.eval(x0, y0)
        ring = self.ring
        if ring.is_zero(d):
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return ring.div(self.num.eval(x0, y0), d)

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return f"({self.num}) / ({self.den})"


def _same_poly(p: BiPoly, q: BiPoly) -> bool:
    return p.terms == q.terms
