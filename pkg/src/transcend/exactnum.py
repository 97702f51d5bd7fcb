"""Exact arithmetic over Q and simple number fields Q[theta]/(m), plus certified
complex balls (backed by Arb through python-flint).

Rational field elements are plain :class:`fractions.Fraction` values; elements of
a field of degree >= 2 are :class:`FieldElement`. Every routine that accepts a
field element accepts either, so series and polynomial code is written once.
"""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache

from flint import acb, arb, ctx, fmpq, fmpq_poly

from .errors import PrecisionExhausted, UsageError

# precision cap for refinement loops, as a multiple of the requested precision
MAX_PRECISION_FACTOR = 16


def to_fraction(x) -> Fraction:
    """Parse an exact rational from int, Fraction or a string ``"p/q"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise UsageError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"not a rational: {x!r}") from exc
    raise UsageError(f"not an exact rational: {x!r}")


# -- dense polynomials over Q as ascending lists, used for the minimal polynomial

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        quo[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a.pop()
        a = _trim(a)
    return quo, a


def _qgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _qdivmod(a, b)[1]
    if not a:
        return a
    return [c / a[-1] for c in a]


def _qinverse_mod(a, m):
    """Return s with s*a = 1 mod m, by the extended Euclidean algorithm."""
    r0, r1 = _trim(m), _trim(a)
    s0, s1 = [], [Fraction(1)]
    while r1:
        quo, rem = _qdivmod(r0, r1)
        prod = [Fraction(0)] * (len(quo) + len(s1))
        for i, qi in enumerate(quo):
            for j, sj in enumerate(s1):
                prod[i + j] += qi * sj
        s_next = [Fraction(0)] * max(len(s0), len(prod))
        for i, c in enumerate(s0):
            s_next[i] += c
        for i, c in enumerate(prod):
            s_next[i] -= c
        r0, r1 = r1, rem
        s0, s1 = s1, _trim(s_next)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible (minpoly is reducible)")
    return [c / r0[0] for c in s0]


def _arb_exact_to_fraction(a: arb) -> Fraction:
    man, exp = a.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def _fmpq(x: Fraction) -> fmpq:
    return fmpq(x.numerator, x.denominator)


class NumberField:
    """K = Q[theta]/(minpoly) with minpoly monic and square-free.

    ``minpoly`` is given in ascending order of degree. The rational field is the
    degree-one field ``QQ`` (minpoly ``X``).
    """

    __slots__ = ("minpoly", "degree", "_key")

    def __init__(self, minpoly):
        coeffs = _trim(to_fraction(c) for c in minpoly)
        if len(coeffs) < 2:
            raise UsageError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise UsageError("minimal polynomial must be monic")
        deriv = [i * c for i, c in enumerate(coeffs)][1:]
        if len(_qgcd(coeffs, deriv)) != 1:
            raise UsageError("minimal polynomial is not square-free")
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self._key = self.minpoly

    @classmethod
    def from_leading_first(cls, coeffs):
        return cls(list(reversed(list(coeffs))))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.is_rational and self.minpoly == (0, 1):
            return "QQ"
        return f"NumberField({[str(c) for c in self.minpoly]})"

    @property
    def zero(self):
        return Fraction(0) if self.is_rational else FieldElement(self, (0,) * self.degree)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def gen(self):
        if self.is_rational:
            return -self.minpoly[0]
        return FieldElement(self, (0, 1) + (0,) * (self.degree - 2))

    def element(self, coords):
        coords = [to_fraction(c) for c in coords]
        if len(coords) > self.degree:
            raise UsageError(f"too many coordinates for a degree-{self.degree} field")
        coords += [Fraction(0)] * (self.degree - len(coords))
        if self.is_rational:
            return coords[0]
        return FieldElement(self, coords)

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field != self:
                raise UsageError("element belongs to a different field")
            return x
        x = to_fraction(x)
        return x if self.is_rational else FieldElement(self, (x,) + (0,) * (self.degree - 1))

    def roots(self, precision: int = 64):
        """The h complex roots of minpoly as acb balls: real roots ascending, then
        complex roots with positive imaginary part, each followed by its conjugate."""
        return _field_roots(self.minpoly, int(precision))

    def embedding_count(self):
        return self.degree


@lru_cache(maxsize=256)
def _field_roots(minpoly, precision):
    wp = precision + 16
    with ctx.workprec(wp):
        poly = fmpq_poly([_fmpq(c) for c in minpoly])
        roots = poly.complex_roots()
    if any(mult != 1 for _, mult in roots) or len(roots) != len(minpoly) - 1:
        raise PrecisionExhausted("embeddings could not be separated (defective minpoly)")
    return tuple(r for r, _ in roots)


QQ = NumberField([0, 1])


class FieldElement:
    """Element of a number field of degree >= 2 in the power basis of theta."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(c if isinstance(c, Fraction) else Fraction(c) for c in coords)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise UsageError("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, (other,) + (0,) * (self.field.degree - 1))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        h = self.field.degree
        prod = [Fraction(0)] * (2 * h - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        m = self.field.minpoly
        for k in range(2 * h - 2, h - 1, -1):
            c = prod[k]
            if c:
                for i in range(h):
                    prod[k - h + i] -= c * m[i]
        return FieldElement(self.field, prod[:h])

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        s = _qinverse_mod(list(self.coords), list(self.field.minpoly))
        return self.field.element(s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a / other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        if not any(self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    @property
    def is_rational(self):
        return not any(self.coords[1:])

    def denominator(self) -> int:
        den = 1
        for c in self.coords:
            den = den * c.denominator // _gcd(den, c.denominator)
        return den

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(str(c) if i == 0 else f"{c}*t^{i}" if i > 1 else f"{c}*t")
        return "(" + (" + ".join(terms) or "0") + ")"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def field_of(x):
    return x.field if isinstance(x, FieldElement) else QQ


def is_zero(x) -> bool:
    return not x


def coordinates(x, field: NumberField = QQ):
    if isinstance(x, FieldElement):
        return x.coords
    return (to_fraction(x),) + (Fraction(0),) * (field.degree - 1)


class ComplexBall:
    """A complex ball (midpoint, radius) with outward rounding, backed by acb."""

    __slots__ = ("acb", "precision")

    def __init__(self, value, precision: int = 64):
        self.precision = int(precision)
        if isinstance(value, acb):
            self.acb = value
        else:
            with ctx.workprec(self.precision):
                self.acb = _to_acb(value)

    @classmethod
    def exact(cls, x, precision: int = 64):
        return cls(x, precision)

    def _wrap(self, value, other=None):
        prec = self.precision if other is None else max(self.precision, other.precision)
        return ComplexBall(value, prec)

    def _other(self, other):
        if isinstance(other, ComplexBall):
            return other
        return ComplexBall(other, self.precision)

    def __add__(self, other):
        o = self._other(other)
        with ctx.workprec(max(self.precision, o.precision)):
            return self._wrap(self.acb + o.acb, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        with ctx.workprec(max(self.precision, o.precision)):
            return self._wrap(self.acb - o.acb, o)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return ComplexBall(-self.acb, self.precision)

    def __mul__(self, other):
        o = self._other(other)
        with ctx.workprec(max(self.precision, o.precision)):
            return self._wrap(self.acb * o.acb, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o.contains_zero():
            raise ZeroDivisionError("ball division by a ball containing zero")
        with ctx.workprec(max(self.precision, o.precision)):
            return self._wrap(self.acb / o.acb, o)

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, n: int):
        with ctx.workprec(self.precision):
            return ComplexBall(self.acb ** int(n), self.precision)

    def abs(self) -> arb:
        with ctx.workprec(self.precision):
            return abs(self.acb)

    def abs_upper(self) -> Fraction:
        with ctx.workprec(self.precision):
            return _arb_exact_to_fraction(self.acb.abs_upper())

    def abs_lower(self) -> Fraction:
        with ctx.workprec(self.precision):
            return _arb_exact_to_fraction(self.acb.abs_lower())

    def contains_zero(self) -> bool:
        return bool(self.acb.contains(0))

    def contains(self, x) -> bool:
        if isinstance(x, ComplexBall):
            return bool(self.acb.contains(x.acb))
        with ctx.workprec(self.precision + 64):
            return bool(self.acb.contains(_to_acb(x)))

    def overlaps(self, other) -> bool:
        return bool(self.acb.overlaps(self._other(other).acb))

    @property
    def radius(self) -> Fraction:
        """Upper bound on the distance from the midpoint to any point of the ball."""
        re = _arb_exact_to_fraction(self.acb.real.rad())
        im = _arb_exact_to_fraction(self.acb.imag.rad())
        return re + im

    @property
    def midpoint(self) -> complex:
        return complex(float(self.acb.real.mid()), float(self.acb.imag.mid()))

    def is_real(self) -> bool:
        return self.acb.imag.is_zero()

    def is_exact(self) -> bool:
        return self.acb.is_exact()

    def to_json(self, digits: int | None = None):
        digits = digits or max(int(self.precision * 0.30103) - 2, 5)
        re, im = self.acb.real, self.acb.imag
        return {
            "re": re.mid().str(digits, radius=False),
            "im": im.mid().str(digits, radius=False),
            "rad": f"{float(self.radius):.3e}",
            "precision": self.precision,
        }

    def __repr__(self):
        return f"ComplexBall({self.acb}, prec={self.precision})"


def _to_acb(x):
    if isinstance(x, acb):
        return x
    if isinstance(x, arb):
        return acb(x)
    if isinstance(x, complex):
        return acb(x.real, x.imag)
    if isinstance(x, float):
        return acb(x)
    if isinstance(x, FieldElement):
        raise UsageError("field elements need an embedding; use embed()")
    return acb(arb(_fmpq(to_fraction(x))))


def embed(x, field: NumberField = QQ, embedding_index: int = 0, precision: int = 64) -> ComplexBall:
    """Ball containing sigma_j(x) for the embedding with index ``embedding_index``."""
    if not 0 <= embedding_index < field.degree:
        raise UsageError(f"embedding index {embedding_index} out of range for degree {field.degree}")
    if not isinstance(x, FieldElement):
        return ComplexBall(to_fraction(x), precision)
    if x.is_rational:
        return ComplexBall(x.coords[0], precision)
    wp = precision + 8 + 2 * field.degree
    theta = field.roots(wp)[embedding_index]
    with ctx.workprec(wp):
        val = acb(0)
        for c in reversed(x.coords):
            val = val * theta + acb(arb(_fmpq(c)))
    return ComplexBall(val, precision)


def embed_all(x, field: NumberField = QQ, precision: int = 64):
    return [embed(x, field, j, precision) for j in range(field.degree)]


def house(x, field: NumberField | None = None, precision: int = 64) -> Fraction:
    """Certified rational upper bound r on max_sigma |sigma(x)| with
    max|sigma(x)| <= r <= max|sigma(x)| * (1 + 2^(1-precision))."""
    if field is None:
        field = field_of(x)
    if not isinstance(x, FieldElement):
        return abs(to_fraction(x))
    if x.is_rational:
        return abs(x.coords[0])
    wp = precision + 32
    while wp <= MAX_PRECISION_FACTOR * (precision + 32):
        balls = embed_all(x, field, wp)
        with ctx.workprec(wp):
            upper = max(_arb_exact_to_fraction(b.acb.abs_upper()) for b in balls)
            lower = max(_arb_exact_to_fraction(b.acb.abs_lower()) for b in balls)
        if upper <= lower * (1 + Fraction(1, 2 ** (precision - 1))):
            return upper
        wp *= 2
    raise PrecisionExhausted("house: embeddings cannot be refined to the requested precision")


def _flatten_coefficients(P):
    if hasattr(P, "coefficients"):
        items = P.coefficients()
    elif isinstance(P, Mapping):
        items = P.values()
    elif isinstance(P, (int, Fraction, FieldElement)):
        items = [P]
    else:
        items = P
    for c in items:
        if hasattr(c, "coefficients") or (isinstance(c, (list, tuple))):
            yield from _flatten_coefficients(c)
        else:
            yield c


def poly_height(P, field: NumberField | None = None, precision: int = 64) -> Fraction:
    """Max |coefficient| for rational coefficients, max house for field ones.

    Accepts anything exposing ``coefficients()``, a mapping, or an iterable of
    coefficients; polynomial-valued coefficients are flattened.
    """
    best = Fraction(0)
    for c in _flatten_coefficients(P):
        h = house(c, field if field is not None else field_of(c), precision)
        if h > best:
            best = h
    return best


def primitive_scale(coeffs) -> Fraction:
    """Positive rational s such that s*c has coprime integer coordinates for all c."""
    den = 1
    coords = []
    for c in coeffs:
        cs = c.coords if isinstance(c, FieldElement) else (to_fraction(c),)
        coords.extend(cs)
        for a in cs:
            den = den * a.denominator // _gcd(den, a.denominator)
    g = 0
    for a in coords:
        g = _gcd(g, int(a * den))
    if g == 0:
        return Fraction(1)
    return Fraction(den, g)
