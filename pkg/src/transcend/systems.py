"""Scalar differential and Mahler equations, first-order systems over K(z),
companion matrices, direct sums, series extension, regularity and Mahler
composition."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from flint import arb, ctx, fmpq_poly

from .errors import (CannotCertify, DimensionMismatch, InconsistentInitialData,
                     InsufficientInitialData, KindMismatch, PreconditionViolation,
                     UsageError)
from .exactnum import (MAX_PRECISION_FACTOR, QQ, FieldElement, NumberField, _fmpq,
                       embed, to_fraction)
from .linalg import poly_det
from .polyseries import Poly, RatFunc, TruncSeries

KINDS = ("differential", "mahler")

# relative margin on the minimum modulus of singular points
REGULARITY_MARGIN = Fraction(1, 2 ** 10)


def _check_kind(kind, q):
    if kind not in KINDS:
        raise UsageError(f"unknown equation kind {kind!r}")
    if kind == "mahler" and (q is None or q < 2):
        raise UsageError("mahler equations need an integer base q >= 2")


@dataclass(frozen=True)
class FunctionSpec:
    """a_0(z) f + a_1(z) (op f) + ... + a_m(z) (op^m f) = rhs(z).

    ``op`` is d/dz for differential equations and z -> z^q for Mahler ones.
    ``growth`` carries tail-bound data: ``{"C": c}`` for E-functions
    (|a_n| <= C^n with f = sum a_n z^n / n!), ``{"B": b, "g": g}`` for Mahler
    functions (|f_n| <= B g^n).
    """

    kind: str
    coeffs: tuple
    initial: tuple = ()
    q: int | None = None
    rhs: Poly = field(default_factory=Poly)
    field: NumberField = QQ
    name: str = ""
    growth: tuple = ()

    def __post_init__(self):
        _check_kind(self.kind, self.q)
        coeffs = tuple(c if isinstance(c, Poly) else Poly(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "initial", tuple(self.field.coerce(c) for c in self.initial))
        if not isinstance(self.rhs, Poly):
            object.__setattr__(self, "rhs", Poly(self.rhs))
        if isinstance(self.growth, dict):
            object.__setattr__(self, "growth", tuple(sorted(
                (k, to_fraction(v)) for k, v in self.growth.items())))
        if len(coeffs) < 2:
            raise UsageError("equation order must be at least 1")
        if not coeffs[-1]:
            raise UsageError("leading coefficient a_m must be nonzero")
        if self.kind == "mahler" and not coeffs[0]:
            raise UsageError("mahler equations need a_0 nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def homogeneous(self) -> bool:
        return not self.rhs

    def growth_bound(self, key):
        return dict(self.growth).get(key)


@dataclass(frozen=True)
class LinearSystemSpec:
    """Y' = A Y or Y(z^q) = A Y with A square over K(z)."""

    kind: str
    A: tuple
    q: int | None = None
    field: NumberField = QQ

    def __post_init__(self):
        _check_kind(self.kind, self.q)
        A = tuple(tuple(RatFunc.of(e) for e in row) for row in self.A)
        if not A or any(len(row) != len(A) for row in A):
            raise DimensionMismatch("system matrix must be square and nonempty")
        object.__setattr__(self, "A", A)
        if self.kind == "mahler" and not self.det():
            raise UsageError("mahler system matrix must be invertible over K(z)")

    @property
    def size(self) -> int:
        return len(self.A)

    @property
    def T(self) -> Poly:
        """Least common denominator of the entries: primitive, positive constant-side sign."""
        den = Poly([1])
        for row in self.A:
            for e in row:
                den = den.lcm(e.den)
        return den.normalized()

    def TA(self):
        """Polynomial matrix T*A."""
        T = self.T
        return [[(e.num * T).exact_div(e.den) for e in row] for row in self.A]

    def det(self) -> RatFunc:
        m = self.size
        T = self.T
        return RatFunc(poly_det(self.TA()), T ** m)

    def to_json(self):
        return {"kind": self.kind, "q": self.q,
                "A": [[e.to_json() for e in row] for row in self.A],
                "T": self.T.to_json()}


def companion(spec: FunctionSpec) -> LinearSystemSpec:
    """Companion system whose solution is (f, f', ...) or (f, f(z^q), ...).

    Inhomogeneous equations get a leading constant coordinate 1.
    """
    m = spec.order
    am = spec.coeffs[-1]
    last = [RatFunc(-a, am) for a in spec.coeffs[:-1]]
    zero, one = RatFunc(0), RatFunc(1)
    shift = 0 if spec.homogeneous else 1
    size = m + shift
    A = [[zero] * size for _ in range(size)]
    if shift:
        if spec.kind == "mahler":
            A[0][0] = one
        A[size - 1][0] = RatFunc(spec.rhs, am)
    for i in range(m - 1):
        A[shift + i][shift + i + 1] = one
    for j, e in enumerate(last):
        A[size - 1][shift + j] = e
    return LinearSystemSpec(spec.kind, A, spec.q, spec.field)


def direct_sum(systems) -> LinearSystemSpec:
    systems = list(systems)
    if not systems:
        raise UsageError("direct_sum needs at least one system")
    first = systems[0]
    for s in systems[1:]:
        if s.kind != first.kind or s.q != first.q:
            raise KindMismatch("direct_sum of systems with different kind or base")
        if s.field != first.field:
            raise KindMismatch("direct_sum of systems over different fields")
    if len(systems) == 1:
        return first
    n = sum(s.size for s in systems)
    A = [[RatFunc(0)] * n for _ in range(n)]
    off = 0
    for s in systems:
        for i, row in enumerate(s.A):
            for j, e in enumerate(row):
                A[off + i][off + j] = e
        off += s.size
    return LinearSystemSpec(first.kind, A, first.q, first.field)


def _equation_terms(spec: FunctionSpec, N: int):
    """Coefficient of z^N in the residual, as {index n: coefficient of f_n}."""
    terms = {}
    if spec.kind == "differential":
        for j, a in enumerate(spec.coeffs):
            for k, c in enumerate(a.coeffs):
                if not c:
                    continue
                n = N - k + j
                if n < j:
                    continue
                ff = 1
                for i in range(j):
                    ff *= n - i
                terms[n] = terms.get(n, 0) + c * ff
    else:
        for j, a in enumerate(spec.coeffs):
            step = spec.q ** j
            for k, c in enumerate(a.coeffs):
                if not c or N < k or (N - k) % step:
                    continue
                n = (N - k) // step
                terms[n] = terms.get(n, 0) + c
    return {n: c for n, c in terms.items() if c}


def extend_series(spec: FunctionSpec, order: int) -> TruncSeries:
    """Series of f to ``order``, using the coefficient equations of the residual.

    Each equation with a single unknown coefficient below ``order`` fixes it;
    equations with no unknowns are checked against the data.
    """
    if order < 0:
        raise UsageError("order must be nonnegative")
    K = spec.field
    known = dict(enumerate(spec.initial))
    maxdeg = max(max(a.degree for a in spec.coeffs), spec.rhs.degree, 0)
    bound = max(order, len(spec.initial)) + maxdeg + spec.order + 1
    for N in range(bound):
        terms = _equation_terms(spec, N)
        unknown = [n for n in terms if n not in known]
        if any(n >= order for n in unknown):
            continue
        residual = sum((c * known[n] for n, c in terms.items() if n in known), K.zero)
        residual = residual - spec.rhs[N]
        if not unknown:
            if residual:
                raise InconsistentInitialData(
                    f"coefficient equation {N} fails on the initial data", index=N)
        elif len(unknown) == 1:
            n = unknown[0]
            known[n] = -residual / terms[n]
    missing = [n for n in range(order) if n not in known]
    if missing:
        raise InsufficientInitialData(
            f"initial data does not determine coefficient {missing[0]}", index=missing[0])
    return TruncSeries([known[n] for n in range(order)], order)


def solution_vector(spec: FunctionSpec, order: int):
    """Series solving companion(spec), all truncated to ``order``."""
    m = spec.order
    if spec.kind == "differential":
        f = extend_series(spec, order + m - 1)
        vec = [f.truncate(order)]
        g = f
        for _ in range(m - 1):
            g = g.derivative()
            vec.append(g.truncate(order))
    else:
        f = extend_series(spec, order)
        vec = [f]
        for j in range(1, m):
            vec.append(f.compose_power(spec.q ** j).truncate(order))
    if not spec.homogeneous:
        vec.insert(0, TruncSeries([spec.field.one], order))
    return vec


def apply_matrix(M, Y):
    """M*Y for a matrix of Polys and a vector of TruncSeries."""
    out = []
    for row in M:
        acc = None
        for e, y in zip(row, Y):
            if e:
                term = y * e
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else Y[0] * 0)
    return out


def system_residual(system: LinearSystemSpec, Y):
    """T*(op Y) - (T*A)*Y on truncations; all zero iff Y solves the system."""
    if len(Y) != system.size:
        raise DimensionMismatch("solution vector length differs from system size")
    T = system.T
    TA = system.TA()
    if system.kind == "differential":
        lhs = [y.derivative() * T for y in Y]
    else:
        lhs = [y.compose_power(system.q) * T for y in Y]
    rhs = apply_matrix(TA, Y)
    return [a - b for a, b in zip(lhs, rhs)]


@dataclass(frozen=True)
class Regularity:
    regular: bool
    witness_n: int | None = None
    point: object = None
    cutoff: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.regular

    def to_json(self):
        out = {"regular": self.regular, "reason": self.reason}
        if self.witness_n is not None:
            out["witness_n"] = self.witness_n
            out["point"] = str(self.point)
        if self.cutoff is not None:
            out["cutoff"] = self.cutoff
        return out


def singular_polynomial(system: LinearSystemSpec) -> Poly:
    """T for differential systems, T * numerator(det A) for Mahler systems."""
    T = system.T
    if system.kind == "differential":
        return T
    return T * system.det().num


def norm_polynomial(S: Poly, K: NumberField) -> Poly:
    """Rational polynomial whose roots contain the roots of S under every embedding."""
    if K.is_rational:
        return S.map(lambda c: c.coords[0] if isinstance(c, FieldElement) else c)
    h = K.degree
    theta = K.gen
    cols = []
    for i in range(h):
        prod = [K.coerce(c) * theta ** i for c in S.coeffs]
        cols.append([Poly([p.coords[r] for p in prod]) for r in range(h)])
    M = [[cols[i][r] for i in range(h)] for r in range(h)]
    return poly_det(M)


def min_root_modulus(N: Poly, precision: int = 64):
    """Certified arb lower bound on the moduli of the nonzero roots of N, or None."""
    val = N.valuation or 0
    N = Poly(N.coeffs[val:])
    if N.degree < 1:
        return None
    with ctx.workprec(precision + 16):
        roots = fmpq_poly([_fmpq(Fraction(c)) for c in N.coeffs]).complex_roots()
        # abs_lower endpoints are exact, so comparisons between them are decided
        return min(r.abs_lower() for r, _ in roots)


def _abs_ball(alpha, K, embedding, precision):
    return embed(alpha, K, embedding, precision).abs()


def is_regular(system: LinearSystemSpec, alpha, embedding: int = 0,
               precision: int = 64) -> Regularity:
    K = system.field
    alpha = K.coerce(alpha)
    S = singular_polynomial(system)
    if system.kind == "differential":
        if S(alpha):
            return Regularity(True, reason="T(alpha) != 0")
        return Regularity(False, 0, alpha, reason="alpha is a pole of A")
    wp = precision
    while True:
        with ctx.workprec(wp):
            a = _abs_ball(alpha, K, embedding, wp)
            if not a < 1:
                if a >= 1:
                    raise PreconditionViolation("mahler regularity needs |alpha| < 1")
                wp *= 2
                if wp > MAX_PRECISION_FACTOR * precision:
                    raise CannotCertify("cannot certify |alpha| < 1")
                continue
        break
    if not alpha:
        if S(alpha):
            return Regularity(True, cutoff=0, reason="orbit is {0}")
        return Regularity(False, 0, alpha, reason="0 is a singular point")
    rho = min_root_modulus(norm_polynomial(S, K), wp)
    if rho is None:
        cutoff = 1
    else:
        cutoff = _orbit_cutoff(alpha, K, embedding, system.q, rho, wp, precision)
    point = alpha
    for n in range(cutoff):
        if not S(point):
            return Regularity(False, n, point, cutoff, reason=f"alpha^(q^{n}) is singular")
        point = point ** system.q
    return Regularity(True, cutoff=cutoff,
                      reason="orbit avoids singular points up to cutoff; beyond it lies inside min modulus")


def _orbit_cutoff(alpha, K, embedding, q, rho, wp, precision):
    """Smallest n >= 1 with |alpha|^(q^n) < rho*(1 - margin), certified."""
    n = 1
    while True:
        prec = wp
        while True:
            with ctx.workprec(prec):
                a = _abs_ball(alpha, K, embedding, prec)
                lhs = a ** (q ** n)
                rhs = rho * (1 - arb(REGULARITY_MARGIN.numerator) / REGULARITY_MARGIN.denominator)
                if lhs < rhs:
                    return n
                if lhs >= rhs:
                    break
            prec *= 2
            if prec > MAX_PRECISION_FACTOR * precision:
                raise CannotCertify("orbit modulus cannot be separated from the singular radius")
        n += 1


def mahler_compose(system: LinearSystemSpec, ell: int) -> LinearSystemSpec:
    """A_ell(z) = A(z^(q^(ell-1))) ... A(z), a system in base q^ell."""
    if system.kind != "mahler":
        raise KindMismatch("mahler_compose needs a mahler system")
    if ell < 1:
        raise UsageError("ell must be >= 1")
    q = system.q
    result = [list(row) for row in system.A]
    for i in range(1, ell):
        factor = [[e.compose_power(q ** i) for e in row] for row in system.A]
        result = _ratmul(factor, result)
    return LinearSystemSpec("mahler", result, q ** ell, system.field)


def _ratmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = RatFunc(0)
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def choose_ell(rho, alpha, q: int, field: NumberField = QQ, embedding: int = 0,
               precision: int = 64) -> int:
    """Least ell >= 1 with |alpha|^(q^ell) < rho."""
    rho = to_fraction(rho)
    if rho <= 0:
        raise UsageError("rho must be positive")
    alpha = field.coerce(alpha)
    if not isinstance(alpha, FieldElement) or alpha.is_rational:
        a = abs(alpha if not isinstance(alpha, FieldElement) else alpha.coords[0])
        if not 0 < a < 1:
            raise PreconditionViolation("choose_ell needs 0 < |alpha| < 1")
        ell = 1
        while True:
            v = a ** (q ** ell)
            if v < rho:
                return ell
            ell += 1
    ell = 1
    while True:
        prec = precision
        while True:
            with ctx.workprec(prec):
                a = _abs_ball(alpha, field, embedding, prec)
                if ell == 1 and not (a < 1 and a > 0):
                    raise PreconditionViolation("choose_ell needs 0 < |alpha| < 1")
                v = a ** (q ** ell)
                r = arb(_fmpq(rho))
                if v < r:
                    return ell
                if v >= r:
                    break
            prec *= 2
            if prec > MAX_PRECISION_FACTOR * precision:
                raise CannotCertify("|alpha|^(q^ell) cannot be separated from rho")
        ell += 1


def system_solution(system: LinearSystemSpec, functions, order: int):
    """Solution series for a system: the functions themselves for an explicit
    system of matching size, else the stacked companion solutions."""
    functions = list(functions)
    if len(functions) == system.size:
        return [extend_series(f, order) for f in functions]
    vec = []
    for f in functions:
        vec.extend(solution_vector(f, order))
    if len(vec) != system.size:
        raise DimensionMismatch("functions do not match the system size")
    return vec



def monomial_system(system: LinearSystemSpec, D: int) -> LinearSystemSpec:
    """System satisfied by all monomials Y^mu with |mu| <= D, in MonomialBasis order."""
    from .polyseries import MonomialBasis, MultiPoly
    n = system.size
    basis = MonomialBasis(n, D)
    Yvars = [MultiPoly.variable(i, n) for i in range(n)]
    AY = []
    for row in system.A:
        acc = MultiPoly({}, n)
        for e, y in zip(row, Yvars):
            if e:
                acc = acc + y * e
        AY.append(acc)
    rows = []
    for mu in basis.exponents:
        if system.kind == "differential":
            expr = MultiPoly({}, n)
            for i, e in enumerate(mu):
                if e:
                    lower = tuple(x - (j == i) for j, x in enumerate(mu))
                    expr = expr + MultiPoly({lower: RatFunc(e)}, n) * AY[i]
        else:
            expr = MultiPoly.constant(RatFunc(1), n)
            for i, e in enumerate(mu):
                for _ in range(e):
                    expr = expr * AY[i]
        row = [RatFunc(0)] * basis.p
        for nu, c in expr.terms.items():
            row[basis.index(nu)] = RatFunc.of(c)
        rows.append(row)
    return LinearSystemSpec(system.kind, rows, system.q, system.field)
