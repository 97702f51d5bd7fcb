"""Rigorous values f_i(alpha), polynomial values at the value vector, the
exhaustive/lattice scan with fitted constants C1, C2, and w_d estimates."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable

import numpy as np
from flint import acb, arb, ctx, fmpz_mat

from . import _kernels
from .errors import (PrecisionExhausted, PreconditionViolation, SingularPoint,
                     TailBoundUnavailable, UsageError)
from .exactnum import MAX_PRECISION_FACTOR, QQ, ComplexBall, _fmpq, embed
from .linalg import inverse, matmul
from .polyseries import MonomialBasis, MultiPoly
from .relations import reduce
from .systems import FunctionSpec, choose_ell, companion, extend_series

MODES = ("certified", "heuristic")
STRATEGIES = ("exhaustive", "lattice")
# exhaustive enumeration is refused above this many records
EXHAUSTIVE_LIMIT = 5 * 10 ** 8
HEURISTIC_SAFETY = 16


def _arb_of(x: Fraction) -> arb:
    return arb(_fmpq(x))


def _inflate(value: acb, rad: arb) -> acb:
    """Add an error disc of radius ``rad`` (only to the real part for real values)."""
    re = value.real + arb(0, rad)
    if value.imag.is_exact() and value.imag.is_zero():
        return acb(re, value.imag)
    return acb(re, value.imag + arb(0, rad))


def _series_ball(coeffs, K, embedding, x: acb, wp):
    acc = acb(0)
    for c in reversed(coeffs):
        acc = acc * x + embed(c, K, embedding, wp).acb
    return acc


def eval_at(f: FunctionSpec, alpha, precision: int = 128, mode: str = "certified",
            embedding: int = 0, pullback: bool = True) -> ComplexBall:
    """Ball containing f(alpha) at the chosen embedding."""
    if mode not in MODES:
        raise UsageError(f"unknown evaluation mode {mode!r}")
    K = f.field
    alpha = K.coerce(alpha)
    if not alpha:
        return embed(extend_series(f, 1)[0], K, embedding, precision)
    if mode == "heuristic":
        return _eval_heuristic(f, alpha, precision, embedding)
    if f.kind == "differential":
        return _eval_entire(f, alpha, precision, embedding)
    return _eval_mahler(f, alpha, precision, embedding, pullback)


def _eval_heuristic(f, alpha, precision, embedding):
    T = precision + 16
    s = extend_series(f, 2 * T)
    wp = precision + 32
    with ctx.workprec(wp):
        x = embed(alpha, f.field, embedding, wp).acb
        a = _series_ball(s.coeffs[:T], f.field, embedding, x, wp)
        b = _series_ball(s.coeffs, f.field, embedding, x, wp)
        d = abs(b - a).upper() * HEURISTIC_SAFETY
        return ComplexBall(_inflate(b, d), precision)


def _eval_entire(f, alpha, precision, embedding):
    C = f.growth_bound("C")
    if C is None:
        raise TailBoundUnavailable("certified E-function evaluation needs a growth bound C")
    K = f.field
    wp = precision + 32
    with ctx.workprec(wp):
        xb = embed(alpha, K, embedding, wp).acb
        r = abs(xb).upper() * _arb_of(C)
        target = arb(2) ** (-(precision + 8))
        T = 1
        term = r  # r^T / T!
        while True:
            if T + 1 > 2 * r:
                tail = term / (1 - r / (T + 1))
                if tail < target:
                    break
            T += 1
            term = term * r / T
        wp += T.bit_length()
    s = extend_series(f, T)
    with ctx.workprec(wp):
        xb = embed(alpha, K, embedding, wp).acb
        fact = arb(1)
        Cb = _arb_of(C)
        for n, c in enumerate(s.coeffs):
            if n:
                fact = fact * n
            if c:
                a = embed(c, K, embedding, wp).acb
                if abs(a).lower() * fact > Cb ** n:
                    raise TailBoundUnavailable(
                        f"coefficient {n} violates the declared growth bound C = {C}", index=n)
        val = _series_ball(s.coeffs, K, embedding, xb, wp)
        return ComplexBall(_inflate(val, tail.upper()), precision)


def _mahler_direct(f, point, precision, embedding):
    """f(point) when g |point| < 1, with the geometric tail B (g|x|)^T / (1 - g|x|)."""
    B, g = f.growth_bound("B"), f.growth_bound("g")
    K = f.field
    wp = precision + 32
    with ctx.workprec(wp):
        xb = embed(point, K, embedding, wp).acb
        r = abs(xb).upper() * _arb_of(g)
        if not r < 1:
            return None
        target = arb(2) ** (-(precision + 8))
        T = 1
        while _arb_of(B) * r ** T / (1 - r) >= target:
            T += 1
        tail = _arb_of(B) * r ** T / (1 - r)
    s = extend_series(f, T)
    with ctx.workprec(wp):
        xb = embed(point, K, embedding, wp).acb
        val = _series_ball(s.coeffs, K, embedding, xb, wp)
        return ComplexBall(_inflate(val, tail.upper()), precision)


def _eval_mahler(f, alpha, precision, embedding, pullback):
    B, g = f.growth_bound("B"), f.growth_bound("g")
    if B is None or g is None:
        raise TailBoundUnavailable("certified Mahler evaluation needs growth bounds B and g")
    direct = _mahler_direct(f, alpha, precision, embedding)
    if direct is not None:
        return direct
    if not pullback:
        raise PreconditionViolation("alpha lies outside the declared convergence disc")
    K = f.field
    q = f.q
    ell = choose_ell(1 / g, alpha, q, K, embedding, precision)
    system = companion(f)
    shift = 0 if f.homogeneous else 1
    # Y(alpha) = A(alpha)^-1 A(alpha^q)^-1 ... A(alpha^(q^(ell-1)))^-1 Y(alpha^(q^ell))
    point = alpha
    M = None
    for _ in range(ell):
        try:
            Ap = [[e(point) for e in row] for row in system.A]
            Ainv = inverse(Ap)
        except ZeroDivisionError as exc:
            raise SingularPoint(f"system is singular at {point}", point=str(point)) from exc
        M = Ainv if M is None else matmul(M, Ainv)
        point = point ** q
    Y = []
    if shift:
        Y.append(ComplexBall(1, precision))
    for j in range(f.order):
        v = _mahler_direct(f, point ** (q ** j), precision + 16, embedding)
        if v is None:
            raise PrecisionExhausted("pull-back point is not inside the convergence disc")
        Y.append(v)
    row = M[shift]
    acc = ComplexBall(0, precision + 16)
    for e, y in zip(row, Y):
        if e:
            acc = acc + embed(e, K, embedding, precision + 16) * y
    return ComplexBall(acc.acb, precision)


@dataclass(frozen=True)
class ValueVector:
    """Balls for (f_1(alpha), ..., f_m(alpha)); omega prepends the coordinate 1."""

    values: tuple
    precision: int
    alpha: object = None
    mode: str = "certified"
    exact: tuple | None = None
    refine: Callable | None = field(default=None, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.values)

    @property
    def omega(self):
        return (ComplexBall(1, self.precision),) + tuple(self.values)

    @classmethod
    def from_exact(cls, values, precision: int = 256, field=QQ, embedding: int = 0):
        values = tuple(field.coerce(v) for v in values)

        def refine(prec):
            return cls.from_exact(values, prec, field, embedding)

        balls = tuple(embed(v, field, embedding, precision) for v in values)
        return cls(balls, precision, None, "exact", values, refine)

    @classmethod
    def from_functions(cls, functions, alpha, precision: int = 256, mode: str = "certified",
                       embedding: int = 0):
        functions = tuple(functions)
        balls = tuple(eval_at(f, alpha, precision, mode, embedding) for f in functions)

        def refine(prec):
            return cls.from_functions(functions, alpha, prec, mode, embedding)

        return cls(balls, precision, alpha, mode, None, refine)

    def at_precision(self, precision: int):
        if self.refine is None:
            raise PrecisionExhausted("value vector cannot be refined")
        return self.refine(precision)

    def to_json(self):
        return {"values": [v.to_json() for v in self.values], "precision": self.precision,
                "alpha": None if self.alpha is None else str(self.alpha), "mode": self.mode}


def poly_value(P: MultiPoly, omega: ValueVector) -> ComplexBall:
    """Outward-rounded ball of P(f_1(alpha), ..., f_m(alpha))."""
    if P.nvars != omega.m:
        raise UsageError("polynomial variable count differs from the value vector")
    if not P:
        return ComplexBall(0, omega.precision)
    return P.evaluate(omega.values, ComplexBall(1, omega.precision))


NONZERO = "nonzero"
UNDETERMINED = "undetermined-zero"
CERTIFIED_ZERO = "certified-zero"


@dataclass(frozen=True)
class Record:
    coeffs: tuple
    degree: int
    height: int
    ball: ComplexBall
    status: str

    def log_abs(self, wp):
        """(lower, upper) arb bounds on log|P(omega)| as exact endpoints."""
        with ctx.workprec(wp):
            lo = self.ball.acb.abs_lower()
            hi = self.ball.acb.abs_upper()
            return lo.log(), hi.log()

    def exponent_bounds(self, t: int, wp: int):
        """Bounds on -log|P| / (d^t log H); None below height 2 or degree 1."""
        if self.height < 2 or self.degree < 1 or self.status != NONZERO:
            return None
        with ctx.workprec(wp):
            llo, lhi = self.log_abs(wp)
            den = arb(self.height).log() * self.degree ** t
            hi = (-llo / den).upper()
            lo = (-lhi / den).lower()
            return lo, hi


def _classify(P: MultiPoly, omega: ValueVector, G=None, max_precision=None):
    ball = poly_value(P, omega)
    if omega.exact is not None:
        if not P.evaluate(omega.exact, omega.exact[0] * 0 + 1):
            return ComplexBall(0, omega.precision), CERTIFIED_ZERO
    if G and not reduce(P, G):
        return ball, CERTIFIED_ZERO
    if not ball.contains_zero():
        return ball, NONZERO
    prec = omega.precision
    cap = max_precision or MAX_PRECISION_FACTOR * omega.precision
    while ball.contains_zero() and prec * 2 <= cap and omega.refine is not None:
        prec *= 2
        omega = omega.at_precision(prec)
        ball = poly_value(P, omega)
    if omega.exact is not None:
        return ball, NONZERO
    return ball, (UNDETERMINED if ball.contains_zero() else NONZERO)


def classify(P: MultiPoly, omega: ValueVector, relations=None, max_precision=None) -> Record:
    """Record with status nonzero, undetermined-zero or certified-zero."""
    from .relations import buchberger
    G = buchberger(relations) if relations else None
    ball, status = _classify(P, omega, G, max_precision)
    degree = max(P.total_degree, 0)
    coeffs = tuple(int(c) for c in MonomialBasis(omega.m, degree).vector(P))
    height = max((abs(c) for c in coeffs), default=0)
    return Record(coeffs, degree, height, ball, status)


def reference_c2(m: int, h: int, precision: int = 64):
    """sqrt(m) 4^m h^(m+1): exact when m is a square, else a ball."""
    if m < 1 or h < 1:
        raise UsageError("reference_c2 needs m >= 1 and h >= 1")
    r = isqrt(m)
    base = 4 ** m * h ** (m + 1)
    if r * r == m:
        return Fraction(r * base)
    with ctx.workprec(precision):
        return ComplexBall(acb(arb(m).sqrt() * base), precision)


@dataclass
class MeasureReport:
    strategy: str
    d: int
    t: int
    H_max: int
    m: int
    precision: int
    total_records: int
    exhaustive: bool
    records: list
    zero_records: list
    C1: object
    C2: object
    min_exponent: object
    reference_C2: object
    best_by_height: dict
    least_by_height: dict

    def to_json(self, digits: int = 20):
        def num(x):
            return None if x is None else x.str(digits, radius=False) if isinstance(x, arb) else str(x)
        ref = self.reference_C2
        return {
            "schema": 1, "strategy": self.strategy, "d": self.d, "t": self.t,
            "H_max": self.H_max, "m": self.m, "precision": self.precision,
            "total_records": self.total_records, "exhaustive": self.exhaustive,
            "C1": num(self.C1), "C2": num(self.C2), "min_exponent": num(self.min_exponent),
            "reference_C2": ref.to_json() if isinstance(ref, ComplexBall) else str(ref),
            "undetermined_zero": sum(r.status == UNDETERMINED for r in self.zero_records),
            "certified_zero": sum(r.status == CERTIFIED_ZERO for r in self.zero_records),
            "records": [_record_json(r, self.t, self.precision, digits) for r in self.records],
            "zero_records": [_record_json(r, self.t, self.precision, digits)
                             for r in self.zero_records],
        }

    def to_csv(self, digits: int = 17) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["coeffs", "degree", "height", "log_abs_upper", "exponent_upper", "status"])
        for r in self.records + self.zero_records:
            j = _record_json(r, self.t, self.precision, digits)
            w.writerow([" ".join(map(str, j["coeffs"])), r.degree, r.height,
                        j["log_abs_upper"], j["exponent_upper"], r.status])
        return buf.getvalue()


def _record_json(r: Record, t, wp, digits):
    out = {"coeffs": [int(c) for c in r.coeffs], "degree": r.degree, "height": r.height,
           "status": r.status, "log_abs_upper": None, "exponent_upper": None}
    if r.status == NONZERO:
        with ctx.workprec(wp):
            out["log_abs_upper"] = r.log_abs(wp)[1].upper().str(digits, radius=False)
        e = r.exponent_bounds(t, wp)
        if e is not None:
            out["exponent_upper"] = e[1].str(digits, radius=False)
    return out


def _monomial_balls(omega: ValueVector, basis: MonomialBasis):
    one = ComplexBall(1, omega.precision)
    return [MultiPoly({mu: 1}, omega.m).evaluate(omega.values, one) if any(mu) else one
            for mu in basis.exponents]


def _float_inputs(balls):
    re = np.empty(len(balls))
    im = np.empty(len(balls))
    eb = np.empty(len(balls))
    p = len(balls)
    u = 2.0 ** -53
    for i, b in enumerate(balls):
        mid = b.midpoint
        re[i], im[i] = mid.real, mid.imag
        # ball radius plus midpoint rounding, plus float summation error for p terms
        rad = float(b.radius) * (1 + 2 ** -20) + abs(mid) * u * 2
        eb[i] = rad + abs(mid) * (p + 3) * u
    return re, im, eb


def _exact_value(coeffs, basis, omega):
    P = MultiPoly({mu: c for mu, c in zip(basis.exponents, coeffs) if c}, omega.m)
    return P


def _lattice_candidates(balls, basis, H, precision):
    """Short integer relations among the monomial values, found by LLL."""
    p = len(balls)
    found = set()
    for k in range(8, max(precision - 8, 9), 8):
        scale = 2 ** k
        rows = []
        for i, b in enumerate(balls):
            mid = b.midpoint
            rows.append([1 if j == i else 0 for j in range(p)]
                        + [int(round(mid.real * scale)), int(round(mid.imag * scale))])
        red = fmpz_mat(rows).lll()
        for i in range(red.nrows()):
            c = [int(red[i, j]) for j in range(p)]
            if any(c) and max(abs(x) for x in c) <= H:
                first = next(x for x in c if x)
                found.add(tuple(c if first > 0 else [-x for x in c]))
    return sorted(found)


def liouville_scan(omega: ValueVector, d: int, H_max: int, strategy: str = "exhaustive",
                   t: int = 1, relations=None, max_precision: int | None = None) -> MeasureReport:
    """Scan integer polynomials of degree <= d and height <= H_max at omega."""
    if d < 1 or H_max < 1:
        raise UsageError("scan needs d >= 1 and H_max >= 1")
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}")
    basis = MonomialBasis(omega.m, d)
    p = basis.p
    total = ((2 * H_max + 1) ** p - 1) // 2
    balls = _monomial_balls(omega, basis)
    deg = np.array([sum(mu) for mu in basis.exponents], dtype=np.int64)
    exhaustive = total <= EXHAUSTIVE_LIMIT
    if strategy == "exhaustive" and not exhaustive:
        raise UsageError(f"exhaustive scan would visit {total} records; use the lattice strategy")
    cands = set()
    if exhaustive:
        re, im, eb = _float_inputs(balls)
        arr, _, _ = _kernels.screen(re, im, eb, deg, H_max)
        cands.update(map(tuple, arr.tolist()))
    if strategy == "lattice":
        cands.update(_lattice_candidates(balls, basis, H_max, omega.precision))
    from .relations import buchberger
    G = buchberger(relations) if relations else None
    records, zeros = [], []
    for c in sorted(cands, key=lambda c: (max(map(abs, c)), _degree(c, deg), c)):
        P = _exact_value(c, basis, omega)
        ball, status = _classify(P, omega, G, max_precision)
        rec = Record(tuple(c), _degree(c, deg), max(map(abs, c)), ball, status)
        (records if status == NONZERO else zeros).append(rec)
    C1, C2, emin = _fit(records, t, omega.precision)
    best, least = _per_height(records, omega.precision)
    return MeasureReport(strategy, d, t, H_max, omega.m, omega.precision, total, exhaustive,
                         records, zeros, C1, C2, emin, reference_c2(omega.m, 1), best, least)


def _degree(c, deg):
    return max((int(deg[i]) for i, x in enumerate(c) if x), default=0)


def _fit(records, t, wp):
    """C2 = largest exponent upper bound; C1 = least |P| H^(C2 d^t) lower bound."""
    C2 = None
    emin = None
    for r in records:
        e = r.exponent_bounds(t, wp)
        if e is None:
            continue
        if C2 is None or e[1] > C2:
            C2 = e[1]
        if emin is None or e[0] < emin:
            emin = e[0]
    if C2 is None:
        C2 = arb(0)
    C1 = None
    with ctx.workprec(wp):
        for r in records:
            lo = r.ball.acb.abs_lower()
            bound = (lo * (arb(r.height).log() * C2 * r.degree ** t).exp()).lower() \
                if r.height >= 2 and r.degree >= 1 else lo
            if C1 is None or bound < C1:
                C1 = bound
    return C1, C2, emin


def _per_height(records, wp):
    """Largest -log|P|/log H and least |P| upper bound, per height >= 2."""
    best, least = {}, {}
    with ctx.workprec(wp):
        for r in records:
            if r.height < 2 or r.degree < 1:
                continue
            llo, lhi = r.log_abs(wp)
            w = (-llo / arb(r.height).log()).upper()
            if r.height not in best or w > best[r.height]:
                best[r.height] = w
            hi = r.ball.acb.abs_upper()
            if r.height not in least or hi < least[r.height]:
                least[r.height] = hi
    return best, least


@dataclass
class WdEstimate:
    d: int
    schedule: list
    best: list
    normalized: list
    estimate: object
    zero_records: list

    def to_json(self, digits: int = 12):
        def s(x):
            return x.str(digits, radius=False) if isinstance(x, arb) else x
        return {"schema": 1, "d": self.d, "schedule": self.schedule,
                "best": [s(x) for x in self.best],
                "normalized": [s(x) for x in self.normalized],
                "estimate": s(self.estimate),
                "zero_records": [[int(c) for c in r.coeffs] for r in self.zero_records]}


def estimate_wd(omega: ValueVector, d: int, schedule, t: int = 1, relations=None,
                strategy: str = "exhaustive") -> WdEstimate:
    """Best approximation exponents along a height schedule.

    ``best[H]`` is the largest -log|P|/log H(P) over nonzero P with H(P) <= H,
    so it is nondecreasing in H. ``normalized[H]`` is -log(min |P|)/log H for the
    same P, which tends to 0 for rational numbers.
    """
    schedule = sorted(set(int(H) for H in schedule))
    if not schedule or schedule[0] < 2:
        raise UsageError("schedule heights must be >= 2")
    rep = liouville_scan(omega, d, schedule[-1], strategy, t, relations)
    wp = omega.precision
    best, normalized = [], []
    running = None
    least = None
    heights = sorted(rep.best_by_height)
    i = 0
    with ctx.workprec(wp):
        for H in schedule:
            while i < len(heights) and heights[i] <= H:
                h = heights[i]
                if running is None or rep.best_by_height[h] > running:
                    running = rep.best_by_height[h]
                if least is None or rep.least_by_height[h] < least:
                    least = rep.least_by_height[h]
                i += 1
            best.append(running)
            normalized.append(None if least is None else (-least.log() / arb(H).log()).upper())
    return WdEstimate(d, schedule, best, normalized, best[-1] if best else None, rep.zero_records)

