"""Truncated relation ideals, Buchberger's algorithm, specialization of
relations at a point, the monomial-map linear forms, and the dimension ledger
(p, q, r, s, u, v, w)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import PInIdeal, TruncationTooSmall, UsageError
from .linalg import nullspace, poly_rank, rank
from .polyseries import (MonomialBasis, MultiPoly, Poly, TruncSeries,
                         monomial_series, order_key)
from .systems import extend_series

DEFAULT_MARGIN = 4


@dataclass(frozen=True)
class RelationBasis:
    generators: tuple
    D: int
    M: int
    order: int
    certified: bool
    margin: int = DEFAULT_MARGIN

    def to_json(self):
        return {"generators": [g.to_json() for g in self.generators], "D": self.D,
                "M": self.M, "order": self.order, "certified": self.certified,
                "margin": self.margin}


def _as_series(f, order):
    if isinstance(f, TruncSeries):
        if f.order < order:
            raise TruncationTooSmall(f"series known to order {f.order} < {order}")
        return f.truncate(order)
    return extend_series(f, order)


def relation_kernel(f, D: int, M: int, order: int, margin: int = DEFAULT_MARGIN) -> RelationBasis:
    """Basis of {Q : deg_z Q <= M, deg_X Q <= D, Q(z, f(z)) = 0 mod z^order}.

    ``f`` holds FunctionSpecs or TruncSeries. Generators carry Poly coefficients.
    """
    f = list(f)
    m = len(f)
    basis = MonomialBasis(m, D)
    unknowns = basis.p * (M + 1)
    if order <= unknowns:
        raise TruncationTooSmall(
            f"truncation order {order} must exceed the {unknowns} unknown coefficients",
            order=order, unknowns=unknowns)
    series = [_as_series(fi, order) for fi in f]
    g = monomial_series(basis, series)
    rows = []
    for N in range(order):
        row = []
        for gm in g:
            for k in range(M + 1):
                row.append(gm[N - k] if N >= k else Fraction(0))
        rows.append(row)
    kernel = nullspace(rows, unknowns)
    gens = []
    for vec in kernel:
        terms = {}
        for i, mu in enumerate(basis.exponents):
            P = Poly(vec[i * (M + 1):(i + 1) * (M + 1)])
            if P:
                terms[mu] = P
        gens.append(MultiPoly(terms, m).normalized())
    gens.sort(key=lambda Q: _sort_key(Q))
    certified = order >= margin * max(M, 1) * D ** m
    return RelationBasis(tuple(gens), D, M, order, certified, margin)


def _sort_key(Q, order="grlex"):
    key = order_key(order)
    mu, _ = Q.leading(order)
    return key(mu)


def evaluate_relation(Q: MultiPoly, series):
    """Q(z, f(z)) as a truncated series."""
    order = series[0].order
    basis = MonomialBasis(Q.nvars, max(Q.total_degree, 0))
    g = monomial_series(basis, series)
    acc = TruncSeries([0], order)
    for mu, c in Q.terms.items():
        gm = g[basis.index(mu)]
        acc = acc + gm * (c if isinstance(c, Poly) else Poly([c]))
    return acc


def specialize(rel, alpha):
    """Q(z, X) -> Q(alpha, X), dropping identically zero results, denominators cleared."""
    gens = rel.generators if isinstance(rel, RelationBasis) else rel
    out = []
    for Q in gens:
        S = Q.specialize_z(alpha)
        if S:
            out.append(S.normalized())
    return out


# -- Buchberger

def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm_mono(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(P, order):
    _, lc = P.leading(order)
    return P * (1 / lc) if lc != 1 else P


def reduce(P: MultiPoly, G, order: str = "grlex") -> MultiPoly:
    """Full reduction of P modulo the list G (remainder only)."""
    leads = [(g.leading(order), g) for g in G]
    rem = {}
    P = MultiPoly(dict(P.terms), P.nvars)
    while P:
        mu, c = P.leading(order)
        for (lm, lc), g in leads:
            if _divides(lm, mu):
                shift = tuple(x - y for x, y in zip(mu, lm))
                P = P - g.mul_monomial(shift, c / lc)
                break
        else:
            rem[mu] = c
            del P.terms[mu]
    return MultiPoly(rem, P.nvars)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: str = "grlex") -> MultiPoly:
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    L = _lcm_mono(fm, gm)
    return (f.mul_monomial(tuple(x - y for x, y in zip(L, fm)), 1 / fc)
            - g.mul_monomial(tuple(x - y for x, y in zip(L, gm)), 1 / gc))


def buchberger(generators, order: str = "grlex"):
    """Reduced Groebner basis with monic leading coefficients.

    Pairs are processed by the normal strategy (least lcm of leading monomials
    first); pairs with coprime leading monomials are skipped.
    """
    key = order_key(order)
    G = [_monic(g, order) for g in generators if g]
    if not G:
        return []
    pairs = [(i, j) for i, j in combinations(range(len(G)), 2)]
    while pairs:
        pairs.sort(key=lambda ij: (key(_lcm_mono(G[ij[0]].leading(order)[0],
                                                 G[ij[1]].leading(order)[0])), ij))
        i, j = pairs.pop(0)
        a, b = G[i].leading(order)[0], G[j].leading(order)[0]
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        r = reduce(s_polynomial(G[i], G[j], order), G, order)
        if r:
            G.append(_monic(r, order))
            k = len(G) - 1
            pairs.extend((i, k) for i in range(k))
    return _interreduce(G, order)


def _interreduce(G, order):
    key = order_key(order)
    # drop elements whose leading monomial is divisible by another's
    G = sorted(G, key=lambda g: key(g.leading(order)[0]))
    minimal = []
    for g in G:
        lm = g.leading(order)[0]
        if not any(_divides(h.leading(order)[0], lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(_monic(reduce(g, others, order) if others else g, order))
    return sorted(out, key=lambda g: key(g.leading(order)[0]))


def is_groebner(G, order: str = "grlex") -> bool:
    return all(not reduce(s_polynomial(f, g, order), G, order) for f, g in combinations(G, 2))


# -- monomial map and ledger

def _multiples(Q: MultiPoly, bound: int):
    deg = Q.total_degree
    if deg > bound:
        return []
    return [Q.mul_monomial(nu) for nu in MonomialBasis(Q.nvars, bound - deg).exponents]


def linear_forms_from_relations(groebner, basis: MonomialBasis):
    """All psi(X^nu Q) with deg(X^nu Q) <= D, and the rank of their span."""
    groebner = list(groebner)
    if groebner and max(Q.total_degree for Q in groebner) > basis.D:
        raise UsageError("degree bound is smaller than a generator's total degree")
    forms = [basis.vector(R) for Q in groebner for R in _multiples(Q, basis.D)]
    return forms, (rank(forms, basis.p) if forms else 0)


@dataclass
class DimensionLedger:
    p: int
    q: int
    r: int
    s: int
    m: int
    t: int
    delta: int
    d: int
    h: int = 1
    u: int = field(init=False)
    v: int = field(init=False)
    w: int = field(init=False)

    def __post_init__(self):
        self.u = self.s - self.r
        self.v = self.p - self.s
        self.w = self.p - self.q
        self.check()

    def check(self):
        assert self.p == self.q + self.w and self.u == self.s - self.r and self.v == self.p - self.s
        assert min(self.p, self.q, self.r, self.s, self.u, self.v, self.w) >= 0

    @property
    def vh_below_w(self) -> bool:
        return self.v * self.h < self.w

    @property
    def u_ratio(self) -> Fraction:
        return Fraction(self.u, (self.delta * self.d) ** self.t) if self.t else Fraction(self.u)

    def to_json(self):
        return {k: getattr(self, k) for k in ("p", "q", "r", "s", "u", "v", "w", "m", "t",
                                             "delta", "d", "h")} | {
            "vh_below_w": self.vh_below_w, "u_ratio": str(self.u_ratio)}


def ledger(f, P: MultiPoly, delta: int, d: int, value_relations=None, h: int = 1,
           t: int = 1, M: int = 0, order: int | None = None, alpha=None,
           relation_order: str = "grlex") -> DimensionLedger:
    """Dimension ledger at degree bound delta*d.

    ``value_relations`` defaults to the functional relations found at this degree,
    specialized at ``alpha`` (only needed when they involve z).
    """
    f = list(f)
    m = len(f)
    D = delta * d
    basis = MonomialBasis(m, D)
    p = basis.p
    if order is None:
        order = max(4 * p * (M + 1), 32)
    rel = relation_kernel(f, D, M, order)
    q = _kz_rank(rel, basis)
    if value_relations is None:
        if any(isinstance(c, Poly) and c.degree > 0 for Q in rel.generators for c in Q.terms.values()):
            if alpha is None:
                raise UsageError("relations involve z; an evaluation point alpha is required")
        value_relations = specialize(rel, alpha if alpha is not None else 0)
    value_relations = [Q for Q in value_relations if Q]
    G = buchberger(value_relations, relation_order) if value_relations else []
    if not P:
        raise UsageError("P must be nonzero")
    if G and not reduce(P, G, relation_order):
        raise PInIdeal("P lies in the ideal of value relations")
    # with a degree-compatible order, generators above D contribute nothing at degree D
    rel_forms, r = linear_forms_from_relations([g for g in G if g.total_degree <= D], basis)
    p_forms = [basis.vector(R) for R in _multiples(P, D)]
    s = rank(rel_forms + p_forms, p) if rel_forms or p_forms else 0
    return DimensionLedger(p, q, r, s, m, t, delta, d, h)


def _kz_rank(rel: RelationBasis, basis: MonomialBasis) -> int:
    if not rel.generators:
        return 0
    rows = [[Q.terms.get(mu, Poly()) for mu in basis.exponents] for Q in rel.generators]
    return poly_rank(rows)


def hilbert_differences(values, k: int):
    """k-th forward differences of a sequence."""
    out = list(values)
    for _ in range(k):
        out = [b - a for a, b in zip(out, out[1:])]
    return out

