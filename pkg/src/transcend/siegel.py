"""Auxiliary linear forms: exact kernel construction, the differential Theta step,
the Mahler step, and empirical valuation checks for random polynomial
combinations."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .errors import (DimensionMismatch, KindMismatch, NoSolution,
                     PreconditionViolation, TruncationTooSmall, UsageError)
from .exactnum import QQ, FieldElement, poly_height, primitive_scale
from .linalg import nullspace
from .polyseries import (AtLeast, MonomialBasis, Poly, RatFunc, TruncSeries,
                         monomial_series, series_valuation)
from .systems import LinearSystemSpec, extend_series

DEFAULT_EPSILON = Fraction(1, 4)


def target_valuation(w: int, n: int, epsilon=DEFAULT_EPSILON) -> int:
    """v* = w(n+1) - ceil(epsilon*n) - 1."""
    return w * (n + 1) - ceil(Fraction(epsilon) * n) - 1


@dataclass(frozen=True)
class AuxiliaryForm:
    """R(z, Y) = P_1(z) Y_1 + ... + P_p(z) Y_p."""

    coeffs: tuple
    n: int
    generation: int = 0

    def __post_init__(self):
        coeffs = tuple(c if isinstance(c, Poly) else Poly(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not any(coeffs):
            raise UsageError("auxiliary form must have a nonzero coefficient")

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coeffs)

    def height(self, precision: int = 64) -> Fraction:
        return poly_height([c.coeffs for c in self.coeffs], precision=precision)

    def evaluate(self, g) -> TruncSeries:
        """R(z, g(z)) on the common truncation of g."""
        if len(g) != self.dimension:
            raise DimensionMismatch("series vector length differs from form dimension")
        acc = None
        for P, gi in zip(self.coeffs, g):
            if P:
                term = gi * P
                acc = term if acc is None else acc + term
        return acc

    def valuation(self, g):
        return series_valuation(self.evaluate(g))

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs], "n": self.n,
                "generation": self.generation}


def _candidates(kernel, limit=32):
    yield from kernel
    head = kernel[:limit]
    for i in range(len(head)):
        for j in range(i + 1, len(head)):
            yield [a + b for a, b in zip(head[i], head[j])]
            yield [a - b for a, b in zip(head[i], head[j])]


def _clear(vec):
    s = primitive_scale(vec)
    vec = [c * s for c in vec]
    lead = next(c for c in vec if c)
    first = lead.coords[0] if isinstance(lead, FieldElement) else lead
    if isinstance(lead, FieldElement) and not first:
        first = next(a for a in lead.coords if a)
    if first < 0:
        vec = [-c for c in vec]
    return vec


def build_auxiliary(g, n: int, vstar: int, precision: int = 64):
    """Nonzero form sum P_i g_i with deg P_i <= n and valuation >= vstar.

    Returns ``(form, height)``. Among the kernel basis vectors and their pairwise
    sums and differences, the one of least height is kept.
    """
    g = list(g)
    p = len(g)
    if p == 0 or n < 0 or vstar < 0:
        raise PreconditionViolation("need p >= 1, n >= 0 and v* >= 0")
    if p * (n + 1) <= vstar:
        raise PreconditionViolation(f"p(n+1) = {p * (n + 1)} must exceed v* = {vstar}")
    orders = {s.order for s in g}
    if len(orders) != 1:
        raise DimensionMismatch("series must share a truncation order")
    if orders.pop() < vstar + 1:
        raise PreconditionViolation("series truncation must be at least v* + 1")
    ncols = p * (n + 1)
    rows = []
    for N in range(vstar):
        row = []
        for gi in g:
            for k in range(n + 1):
                row.append(gi[N - k] if N >= k else Fraction(0))
        rows.append(row)
    kernel = nullspace(rows, ncols) if rows else _unit_vectors(ncols, g)
    if not kernel:
        raise NoSolution("empty kernel although p(n+1) > v*")
    best = None
    for vec in _candidates(kernel):
        if not any(vec):
            continue
        vec = _clear(vec)
        h = poly_height(vec, precision=precision)
        if best is None or h < best[0]:
            best = (h, vec)
    h, vec = best
    coeffs = [Poly(vec[i * (n + 1):(i + 1) * (n + 1)]) for i in range(p)]
    form = AuxiliaryForm(tuple(coeffs), n, 0)
    val = form.valuation(g)
    if not isinstance(val, AtLeast) and val < vstar:
        raise NoSolution(f"constructed form has valuation {val} < {vstar}")
    return form, h


def _unit_vectors(ncols, g):
    one = g[0][0] * 0 + 1
    zero = one * 0
    return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]


def theta_step(form: AuxiliaryForm, system: LinearSystemSpec) -> AuxiliaryForm:
    """B = T (dP + A^t P): the form representing T * d/dz of R along the system."""
    if system.kind != "differential":
        raise KindMismatch("theta_step needs a differential system")
    if form.dimension != system.size:
        raise DimensionMismatch("form dimension differs from system size")
    T = system.T
    TA = system.TA()
    P = form.coeffs
    out = []
    for j in range(system.size):
        acc = T * P[j].derivative()
        for i in range(system.size):
            if TA[i][j] and P[i]:
                acc = acc + TA[i][j] * P[i]
        out.append(acc)
    bound = form.n + max([T.degree] + [e.degree for row in TA for e in row])
    return AuxiliaryForm(tuple(out), bound, form.generation + 1)


def mahler_step(form: AuxiliaryForm, system: LinearSystemSpec):
    """T^d A^t(z) P(z^q) with d in {0, 1} minimal. Returns ``(form, d)``."""
    if system.kind != "mahler":
        raise KindMismatch("mahler_step needs a mahler system")
    if form.dimension != system.size:
        raise DimensionMismatch("form dimension differs from system size")
    q = system.q
    Pq = [c.compose_power(q) for c in form.coeffs]
    A = system.A
    acc = []
    for j in range(system.size):
        r = RatFunc(0)
        for i in range(system.size):
            if A[i][j] and Pq[i]:
                r = r + A[i][j] * Pq[i]
        acc.append(r)
    T = system.T
    d = 0 if all(r.is_polynomial() for r in acc) else 1
    out = [(r.num * T ** d).exact_div(r.den) for r in acc]
    bound = q * form.n + max(e.degree for row in system.TA() for e in row)
    return AuxiliaryForm(tuple(out), max(bound, 0), form.generation + 1), d


@dataclass
class MultiplicityReport:
    M: int
    N: int
    t: int
    trials: int
    seed: int
    order: int
    valuations: list
    max_ratio: Fraction
    histogram: dict

    def to_json(self):
        return {"M": self.M, "N": self.N, "t": self.t, "trials": self.trials,
                "seed": self.seed, "order": self.order, "valuations": self.valuations,
                "max_ratio": str(self.max_ratio),
                "histogram": {str(k): v for k, v in sorted(self.histogram.items())}}


def check_multiplicity(functions, t: int, trials: int, M: int, N: int, seed: int = 0,
                       order: int = 256, coeff_bound: int = 8, series=None):
    """Valuations of random nonzero R(z, f(z)) with deg_z R <= M, deg_X R <= N.

    ``series`` may hold precomputed truncations of the functions.
    """
    if M < 0 or N < 0 or trials < 1:
        raise UsageError("need M >= 0, N >= 0 and trials >= 1")
    if series is None:
        series = [extend_series(f, order) for f in functions]
    else:
        series = [s.truncate(order) for s in series]
    K = functions[0].field if functions else QQ
    basis = MonomialBasis(len(series), N)
    g = monomial_series(basis, series)
    vals = []
    for trial in range(trials):
        rng = random.Random(f"{seed}:{M}:{N}:{trial}")
        coeffs = _random_coeffs(rng, len(basis), M, coeff_bound, K)
        v = _first_nonzero(coeffs, g, order, M)
        if v is None:
            raise TruncationTooSmall(
                f"trial {trial}: R(z, f) vanishes to the truncation order {order}",
                trial=trial, order=order)
        vals.append(v)
    scale = M * N ** t if M * N ** t else 1
    ratio = max(Fraction(v, scale) for v in vals)
    return MultiplicityReport(M, N, t, trials, seed, order, vals, ratio, dict(Counter(vals)))


def _random_coeffs(rng, p, M, bound, K):
    while True:
        coeffs = []
        for _ in range(p):
            row = []
            for _ in range(M + 1):
                if K.is_rational:
                    row.append(Fraction(rng.randint(-bound, bound)))
                else:
                    row.append(K.element([rng.randint(-bound, bound) for _ in range(K.degree)]))
            coeffs.append(row)
        if any(c for row in coeffs for c in row):
            return coeffs


def _first_nonzero(coeffs, g, order, M):
    for e in range(order):
        acc = 0
        for row, gm in zip(coeffs, g):
            for k in range(min(M, e) + 1):
                c = row[k]
                if c:
                    x = gm[e - k]
                    if x:
                        acc = acc + c * x
        if acc:
            return e
    return None
