"""JSON instance files: field, functions, optional explicit system, evaluation
point and defaults. Every number is a string ("p/q"); field elements with
more than one coordinate are arrays of strings in the power basis."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import SpecParseError, TranscendError
from .exactnum import QQ, NumberField, to_fraction
from .polyseries import MultiPoly, Poly, RatFunc
from .systems import (FunctionSpec, LinearSystemSpec, companion, direct_sum,
                      system_solution)

DEFAULTS = {"precision": 256, "order": 32, "epsilon": "1/4", "margin": 4}


def _element(x, K: NumberField, where: str):
    try:
        if isinstance(x, list):
            return K.element(x)
        if isinstance(x, (str, int)) and not isinstance(x, bool):
            return K.coerce(to_fraction(x) if isinstance(x, str) else Fraction(x))
    except (TranscendError, ValueError) as exc:
        raise SpecParseError(f"{where}: {exc}") from exc
    raise SpecParseError(f"{where}: expected a rational string or coordinate array, got {x!r}")


def _poly(x, K, where):
    if not isinstance(x, list):
        raise SpecParseError(f"{where}: polynomial must be an array of coefficients")
    return Poly([_element(c, K, f"{where}[{i}]") for i, c in enumerate(x)])


def _ratfunc(x, K, where):
    if isinstance(x, dict):
        if set(x) - {"num", "den"} or "num" not in x:
            raise SpecParseError(f"{where}: rational function needs 'num' and optional 'den'")
        num = _poly(x["num"], K, where + ".num")
        den = _poly(x.get("den", ["1"]), K, where + ".den")
        if not den:
            raise SpecParseError(f"{where}: zero denominator")
        return RatFunc(num, den)
    return RatFunc(_poly(x, K, where))


def parse_multipoly(x, K, nvars, where):
    """[[exponents, coefficient], ...]; a coefficient array means a polynomial in z."""
    if not isinstance(x, list):
        raise SpecParseError(f"{where}: polynomial must be a list of [exponents, coefficient]")
    terms = {}
    for i, item in enumerate(x):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise SpecParseError(f"{where}[{i}]: expected [exponents, coefficient]")
        mu = tuple(int(e) for e in item[0])
        if len(mu) != nvars or min(mu, default=0) < 0:
            raise SpecParseError(f"{where}[{i}]: exponent tuple must have {nvars} entries >= 0")
        c = item[1]
        if isinstance(c, list) and K.is_rational:
            value = _poly(c, K, f"{where}[{i}]")
            value = value[0] if value.degree <= 0 else value
        else:
            value = _element(c, K, f"{where}[{i}]")
        terms[mu] = terms.get(mu, 0) + value
    return MultiPoly(terms, nvars)


@dataclass
class SpecFile:
    name: str
    field: NumberField
    kind: str
    q: int | None
    functions: tuple
    system: LinearSystemSpec | None = None
    alpha: object = None
    declared_t: int | None = None
    value_relations: list | None = None
    embedding: int = 0
    defaults: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.functions)

    def linear_system(self) -> LinearSystemSpec:
        if self.system is not None:
            return self.system
        return direct_sum([companion(f) for f in self.functions])

    def solution(self, order: int):
        return system_solution(self.linear_system(), self.functions, order)

    def default(self, key):
        return self.defaults.get(key, DEFAULTS.get(key))


def parse_spec(data: dict) -> SpecFile:
    if not isinstance(data, dict):
        raise SpecParseError("spec must be a JSON object")
    K = QQ
    if "field" in data:
        try:
            K = NumberField.from_leading_first([to_fraction(c) for c in data["field"]["minpoly"]])
        except (TranscendError, KeyError, TypeError) as exc:
            raise SpecParseError(f"field: {exc}") from exc
    kind = data.get("kind")
    q = data.get("q")
    if q is not None:
        try:
            q = int(q)
        except ValueError as exc:
            raise SpecParseError("q must be an integer") from exc
    raw = data.get("functions")
    if not isinstance(raw, list) or not raw:
        raise SpecParseError("functions must be a nonempty array")
    functions = []
    for i, f in enumerate(raw):
        where = f"functions[{i}]"
        fkind = f.get("kind", kind)
        fq = int(f["q"]) if "q" in f else q
        if kind is None:
            kind = fkind
        if fkind != kind or (kind == "mahler" and fq != q):
            raise SpecParseError(f"{where}: all functions must share kind and base q")
        try:
            functions.append(FunctionSpec(
                kind=fkind,
                coeffs=tuple(_poly(a, K, f"{where}.coeffs[{j}]") for j, a in enumerate(f["coeffs"])),
                initial=tuple(_element(c, K, f"{where}.initial") for c in f.get("initial", [])),
                q=fq if fkind == "mahler" else None,
                rhs=_poly(f.get("rhs", []), K, f"{where}.rhs"),
                field=K,
                name=f.get("name", f"f{i + 1}"),
                growth={k: to_fraction(v) for k, v in f.get("growth", {}).items()},
            ))
        except KeyError as exc:
            raise SpecParseError(f"{where}: missing key {exc}") from exc
        except TranscendError as exc:
            if isinstance(exc, SpecParseError):
                raise
            raise SpecParseError(f"{where}: {exc}") from exc
    system = None
    if "system" in data:
        A = data["system"].get("A") if isinstance(data["system"], dict) else None
        if not isinstance(A, list):
            raise SpecParseError("system.A must be a matrix")
        try:
            system = LinearSystemSpec(kind, [[_ratfunc(e, K, f"system.A[{i}][{j}]")
                                              for j, e in enumerate(row)] for i, row in enumerate(A)],
                                      q if kind == "mahler" else None, K)
        except TranscendError as exc:
            if isinstance(exc, SpecParseError):
                raise
            raise SpecParseError(f"system: {exc}") from exc
    alpha = _element(data["alpha"], K, "alpha") if "alpha" in data else None
    embedding = int(data.get("embedding", 0))
    if not 0 <= embedding < K.degree:
        raise SpecParseError(f"embedding index {embedding} out of range")
    t = data.get("declared_t")
    rels = data.get("value_relations")
    relations = None
    if rels is not None:
        relations = [parse_multipoly(r, K, len(functions), f"value_relations[{i}]")
                     for i, r in enumerate(rels)]
    return SpecFile(
        name=data.get("name", "instance"), field=K, kind=kind, q=q if kind == "mahler" else None,
        functions=tuple(functions), system=system, alpha=alpha,
        declared_t=None if t is None else int(t), value_relations=relations,
        embedding=embedding, defaults=dict(data.get("defaults", {})),
    )


def load_spec(path) -> SpecFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_spec(data)


def data_path(name: str) -> Path:
    """Path of a shipped instance file (exp, cossin, fredholm, thue_morse)."""
    p = Path(__file__).with_name("data") / f"{name}.json"
    if not p.exists():
        raise SpecParseError(f"no shipped instance named {name!r}")
    return p


SHIPPED = ("exp", "cossin", "fredholm", "thue_morse")
