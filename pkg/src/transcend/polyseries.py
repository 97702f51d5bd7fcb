"""Univariate polynomials and rational functions over K, truncated power series,
graded monomial bases (the map sending X^mu to Y_i) and sparse multivariate
polynomials.

Coefficients are Fractions or FieldElements; nothing here needs to know which.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DimensionMismatch, UsageError
from .exactnum import FieldElement, primitive_scale


def _is_scalar(x):
    return isinstance(x, (int, Fraction, FieldElement))


class Poly:
    """Dense univariate polynomial in z, coefficients ascending, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(Fraction(a) if isinstance(a, int) else a for a in c)

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, c, k: int):
        return cls([0] * k + [c])

    @classmethod
    def z(cls):
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def coefficients(self):
        return self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1]

    @property
    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if _is_scalar(other):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if _is_scalar(other):
            other = Poly([other])
        elif not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if _is_scalar(other):
            other = Poly([other])
        elif not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return Poly([c * other for c in self.coeffs]) if other else Poly()
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        result, base = Poly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        if _is_scalar(other):
            other = Poly([other])
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead
        db = other.degree
        while len(rem) - 1 >= db and rem:
            c = rem[-1] / lead
            shift = len(rem) - 1 - db
            quo[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other) -> bool:
        return not (other % self)

    def truediv_scalar(self, c):
        return Poly([a / c for a in self.coeffs])

    def monic(self):
        if not self:
            return self
        return self.truediv_scalar(self.lead)

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def lcm(self, other):
        if not self or not other:
            return Poly()
        return (self * other // self.gcd(other)).monic()

    def derivative(self):
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def compose_power(self, q: int):
        """p(z^q)."""
        if not self.coeffs:
            return self
        out = [Fraction(0)] * (q * self.degree + 1)
        for k, c in enumerate(self.coeffs):
            out[q * k] = c
        return Poly(out)

    def shift(self, k: int):
        return Poly([0] * k + list(self.coeffs)) if self else self

    def map(self, fn):
        return Poly([fn(c) for c in self.coeffs])

    def primitive(self):
        """(s, s*self) with s > 0 rational making coordinates coprime integers."""
        s = primitive_scale(self.coeffs)
        return s, self * s

    def normalized(self):
        """Primitive integral multiple with positive lowest-order coefficient."""
        if not self:
            return self
        _, p = self.primitive()
        low = p.coeffs[p.valuation]
        if _sign(low) < 0:
            p = -p
        return p

    def to_json(self):
        return [_coeff_json(c) for c in self.coeffs]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else "z" if k == 1 else f"z^{k}"
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _sign(c):
    if isinstance(c, FieldElement):
        for a in c.coords:
            if a:
                return 1 if a > 0 else -1
        return 0
    return (c > 0) - (c < 0)


def _coeff_json(c):
    if isinstance(c, FieldElement):
        return [str(a) for a in c.coords]
    return str(c)


class RatFunc:
    """num/den with gcd removed and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else den if isinstance(den, Poly) else Poly([den])
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly([1])
            return
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lead
        self.num, self.den = num.truediv_scalar(lead), den.truediv_scalar(lead)

    @classmethod
    def of(cls, x):
        return x if isinstance(x, RatFunc) else cls(x)

    def is_polynomial(self):
        return self.den.degree == 0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = RatFunc.of(other) if isinstance(other, (Poly, int, Fraction, FieldElement)) else other
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = RatFunc.of(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.of(other))

    def __rsub__(self, other):
        return RatFunc.of(other) - self

    def __mul__(self, other):
        o = RatFunc.of(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.of(other)
        if not o:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d

    def compose_power(self, q: int):
        return RatFunc(self.num.compose_power(q), self.den.compose_power(q))

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return f"({self.num})/({self.den})"


@dataclass(frozen=True)
class AtLeast:
    """Valuation sentinel: every stored coefficient vanishes."""

    order: int

    def __str__(self):
        return f">= {self.order}"


class TruncSeries:
    """sum c_k z^k known exactly for k < order."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs)
        if len(coeffs) < order:
            coeffs += [Fraction(0)] * (order - len(coeffs))
        self.coeffs = tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs[:order])
        self.order = order

    @classmethod
    def from_poly(cls, p: Poly, order: int):
        return cls(p.coeffs[:order], order)

    @classmethod
    def one(cls, order: int, one=Fraction(1)):
        return cls([one], order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order

    def _common(self, other):
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, Poly):
            return TruncSeries.from_poly(other, self.order)
        if _is_scalar(other):
            return TruncSeries([other], self.order)
        return None

    def __add__(self, other):
        o = self._common(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return TruncSeries([a + b for a, b in zip(self.coeffs[:n], o.coeffs[:n])], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        o = self._common(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return TruncSeries([c * other for c in self.coeffs], self.order)
        o = self._common(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        out = [Fraction(0)] * n
        b = o.coeffs
        for i in range(n):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] = out[i + j] + a * bj
        return TruncSeries(out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = TruncSeries([1], self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self):
        return TruncSeries([k * c for k, c in enumerate(self.coeffs)][1:], max(self.order - 1, 0))

    def compose_power(self, q: int):
        """f(z^q), valid for exponents < q*order."""
        out = [Fraction(0)] * (q * self.order)
        for k, c in enumerate(self.coeffs):
            out[q * k] = c
        return TruncSeries(out, q * self.order)

    def shift(self, k: int):
        return TruncSeries([0] * k + list(self.coeffs), self.order + k)

    def truncate(self, order: int):
        if order > self.order:
            raise UsageError(f"cannot extend truncation from {self.order} to {order}")
        return TruncSeries(self.coeffs[:order], order)

    def is_zero(self):
        return not any(self.coeffs)

    def valuation(self):
        return series_valuation(self)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.order > 8 else ""
        return f"TruncSeries([{shown}{more}], order={self.order})"


def series_valuation(s: TruncSeries):
    """Smallest exponent with a nonzero coefficient, or ``AtLeast(order)``."""
    for k, c in enumerate(s.coeffs):
        if c:
            return k
    return AtLeast(s.order)


def basis_size(m: int, D: int) -> int:
    if m < 1 or D < 0:
        raise UsageError("basis_size needs m >= 1 and D >= 0")
    return comb(D + m, m)


def _exponents_of_degree(m, k):
    if m == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _exponents_of_degree(m - 1, k - first):
            yield (first,) + rest


class MonomialBasis:
    """Bijection between exponent tuples mu with |mu| <= D and indices 0..p-1.

    Monomials are listed by total degree, and lexicographically (X1 > X2 > ...)
    from the largest within each degree, so each degree slice is contiguous.
    """

    __slots__ = ("m", "D", "exponents", "_index")

    def __init__(self, m: int, D: int):
        if m < 1 or D < 0:
            raise UsageError("MonomialBasis needs m >= 1 and D >= 0")
        self.m, self.D = m, D
        self.exponents = tuple(mu for k in range(D + 1) for mu in _exponents_of_degree(m, k))
        self._index = {mu: i for i, mu in enumerate(self.exponents)}

    @property
    def p(self) -> int:
        return len(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def index(self, mu) -> int:
        try:
            return self._index[tuple(mu)]
        except KeyError:
            raise UsageError(f"exponent {tuple(mu)} outside basis bound {self.D}") from None

    def monomial(self, i: int):
        return self.exponents[i]

    def degree_slice(self, k: int) -> range:
        return range(basis_size(self.m, k - 1) if k else 0, basis_size(self.m, k))

    def vector(self, P) -> list:
        """Coordinates of a MultiPoly in this basis (the map psi)."""
        out = [Fraction(0)] * self.p
        for mu, c in P.terms.items():
            out[self.index(mu)] = c
        return out

    def poly(self, vector, nvars=None):
        return MultiPoly({mu: c for mu, c in zip(self.exponents, vector) if c}, nvars or self.m)


def _check_common_order(f):
    orders = {s.order for s in f}
    if len(orders) > 1:
        raise DimensionMismatch(f"series have different truncation orders: {sorted(orders)}")
    return orders.pop() if orders else None


def monomial_eval(basis: MonomialBasis, f, mu) -> TruncSeries:
    """f^mu truncated to the common order of f."""
    mu = tuple(mu)
    basis.index(mu)
    if len(mu) != len(f):
        raise DimensionMismatch("exponent length differs from number of series")
    order = _check_common_order(f)
    out = TruncSeries([1], order)
    for fi, e in zip(f, mu):
        if e:
            out = out * fi ** e
    return out


def monomial_series(basis: MonomialBasis, f):
    """All g_i = f^mu_i in basis order, sharing work along the degree filtration."""
    order = _check_common_order(f)
    if len(f) != basis.m:
        raise DimensionMismatch("number of series differs from basis variables")
    out = []
    cache = {}
    for mu in basis.exponents:
        if not any(mu):
            g = TruncSeries([1], order)
        else:
            j = next(i for i, e in enumerate(mu) if e)
            prev = mu[:j] + (mu[j] - 1,) + mu[j + 1:]
            g = cache[prev] * f[j]
        cache[mu] = g
        out.append(g)
    return out


MONOMIAL_ORDERS = ("lex", "grlex", "grevlex")


def order_key(order: str):
    if order == "lex":
        return lambda mu: mu
    if order == "grlex":
        return lambda mu: (sum(mu), mu)
    if order == "grevlex":
        return lambda mu: (sum(mu), tuple(-e for e in reversed(mu)))
    raise UsageError(f"unknown monomial order {order!r}")


class MultiPoly:
    """Sparse polynomial in X1..Xn; coefficients are field elements or Polys in z."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms=None, nvars: int | None = None):
        terms = dict(terms or {})
        if nvars is None:
            if not terms:
                raise UsageError("nvars required for an empty MultiPoly")
            nvars = len(next(iter(terms)))
        self.nvars = nvars
        clean = {}
        for mu, c in terms.items():
            mu = tuple(mu)
            if len(mu) != nvars:
                raise DimensionMismatch(f"exponent {mu} has wrong length for {nvars} variables")
            if isinstance(c, int):
                c = Fraction(c)
            if c:
                clean[mu] = c
        self.terms = clean

    @classmethod
    def constant(cls, c, nvars: int):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int):
        mu = [0] * nvars
        mu[i] = 1
        return cls({tuple(mu): Fraction(1)}, nvars)

    def __bool__(self):
        return bool(self.terms)

    def coefficients(self):
        return list(self.terms.values())

    @property
    def total_degree(self) -> int:
        return max((sum(mu) for mu in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if _is_scalar(other):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DimensionMismatch("MultiPoly variable counts differ")
            return other
        return MultiPoly.constant(other, self.nvars)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for mu, c in o.terms.items():
            out[mu] = out[mu] + c if mu in out else c
        return MultiPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({mu: -c for mu, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if not other:
                return MultiPoly({}, self.nvars)
            return MultiPoly({mu: c * other for mu, c in self.terms.items()}, self.nvars)
        o = self._lift(other)
        out = {}
        for mu, a in self.terms.items():
            for nu, b in o.terms.items():
                k = tuple(x + y for x, y in zip(mu, nu))
                out[k] = out[k] + a * b if k in out else a * b
        return MultiPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MultiPoly.constant(1, self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def mul_monomial(self, nu, c=1):
        return MultiPoly({tuple(x + y for x, y in zip(mu, nu)): a * c
                          for mu, a in self.terms.items()}, self.nvars)

    def leading(self, order: str = "grlex"):
        key = order_key(order)
        mu = max(self.terms, key=key)
        return mu, self.terms[mu]

    def sorted_terms(self, order: str = "grlex"):
        key = order_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def map_coeffs(self, fn):
        return MultiPoly({mu: fn(c) for mu, c in self.terms.items()}, self.nvars)

    def evaluate(self, values, one=Fraction(1)):
        """Sum of c * prod values[i]**mu[i]; values may be field elements, series or balls."""
        acc = None
        powers = {}
        for mu, c in self.terms.items():
            term = None
            for i, e in enumerate(mu):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = values[i] ** e
                    term = powers[key] if term is None else term * powers[key]
            term = (one if term is None else term) * c
            acc = term if acc is None else acc + term
        return acc if acc is not None else one * 0

    def specialize_z(self, alpha):
        """Q(z, X) -> Q(alpha, X) for Poly-valued coefficients."""
        return MultiPoly({mu: (c(alpha) if isinstance(c, Poly) else c)
                          for mu, c in self.terms.items()}, self.nvars)

    def primitive(self):
        flat = []
        for c in self.terms.values():
            flat.extend(c.coeffs if isinstance(c, Poly) else [c])
        s = primitive_scale(flat)
        return s, self * s

    def normalized(self, order: str = "grlex"):
        """Primitive integral multiple whose leading coefficient is positive."""
        if not self:
            return self
        _, p = self.primitive()
        _, lc = p.leading(order)
        if isinstance(lc, Poly):
            lc = lc.lead
        if _sign(lc) < 0:
            p = -p
        return p

    def to_json(self):
        return [[list(mu), c.to_json() if isinstance(c, Poly) else _coeff_json(c)]
                for mu, c in self.sorted_terms("grlex")]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mu, c in self.sorted_terms("grlex"):
            mono = "*".join(f"X{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mu) if e)
            cs = f"({c})" if isinstance(c, (Poly, FieldElement)) else str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")
