"""Gluing, linear-case reduction and composition of morphisms.

Morphisms are finite linear combinations of reduced cobordisms (no floating
components, at most one dot per component). Hom spaces ``n -> m`` are
identified with n+m point diagrams by bending the source points around.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator

from .diagrams import (Cobordism, Component, Kind, NDiagram, canonical_encode,
                       enumerate_diagrams)
from .evaluation import ClosedDiagram, EvaluationSpec, LinearParams, as_spec, evaluate_closed
from .polyring import ModP, PolyZ4


def glue(x: Cobordism, y: Cobordism) -> Cobordism:
    """Stack ``x: n -> m`` and then ``y: m -> k`` into ``n -> k``, without reduction.

    Merged pieces keep the sum of their dots. Pieces that lose all their
    outer boundary become floating intervals (if they end at an interior
    point) or circles.
    """
    if x.m != y.n:
        raise ValueError(f"cannot glue {x.n}->{x.m} with {y.n}->{y.m}")
    n, m, k = x.n, x.m, y.m
    pieces = list(x.components) + list(y.components)
    offset = len(x.components)
    parent = list(range(len(pieces)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    x_at = {e: i for i, c in enumerate(x.components) for e in c.endpoints}
    y_at = {e: offset + i for i, c in enumerate(y.components) for e in c.endpoints}
    for t in range(1, m + 1):
        a, b = find(x_at[n + t]), find(y_at[t])
        if a != b:
            parent[a] = b

    # outer endpoints in the glued index space: x source stays, y target shifts to n+j
    groups: dict[int, dict] = {}
    for i, c in enumerate(pieces):
        g = groups.setdefault(find(i), {"ends": [], "dots": 0, "interval": False})
        g["dots"] += c.dots
        if c.kind is Kind.INTERVAL or c.kind is Kind.ARC1:
            g["interval"] = True
        for e in c.endpoints:
            if i < offset and e <= n:
                g["ends"].append(e)
            elif i >= offset and e > m:
                g["ends"].append(n + e - m)

    comps = []
    for g in groups.values():
        ends = g["ends"]
        if len(ends) == 2:
            kind = Kind.ARC2
        elif len(ends) == 1:
            kind = Kind.ARC1
        else:
            kind = Kind.INTERVAL if g["interval"] else Kind.CIRCLE
        comps.append(Component(kind, tuple(ends), g["dots"]))
    return Cobordism(n, k, tuple(comps))


class Morphism:
    """Linear combination of reduced cobordisms ``n -> m``.

    ``terms`` maps canonical reduced cobordisms to nonzero coefficients.
    """

    __slots__ = ("n", "m", "terms")

    def __init__(self, n: int, m: int, terms: dict[Cobordism, Any] | None = None):
        self.n = n
        self.m = m
        clean: dict[Cobordism, Any] = {}
        for x, c in (terms or {}).items():
            if (x.n, x.m) != (n, m):
                raise ValueError(f"term {x.n}->{x.m} in a {n}->{m} morphism")
            if not x.is_reduced():
                raise ValueError("morphism terms must be reduced cobordisms")
            if c:
                clean[x] = c
        self.terms = clean

    @classmethod
    def zero(cls, n: int, m: int) -> Morphism:
        return cls(n, m)

    @classmethod
    def basis(cls, x: Cobordism, coeff: Any = 1) -> Morphism:
        return cls(x.n, x.m, {x: coeff})

    @classmethod
    def identity(cls, n: int, one: Any = 1) -> Morphism:
        return cls.basis(Cobordism.identity(n), one)

    def is_zero(self) -> bool:
        return not self.terms

    def scalar(self) -> Any:
        """Coefficient of the empty diagram for a ``0 -> 0`` morphism."""
        if (self.n, self.m) != (0, 0):
            raise ValueError("only endomorphisms of 0 are scalars")
        return self.terms.get(Cobordism(0, 0, ()), 0)

    def __add__(self, other: Morphism) -> Morphism:
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("cannot add morphisms with different source/target")
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out[x] + c if x in out else c
        return Morphism(self.n, self.m, out)

    def __neg__(self) -> Morphism:
        return Morphism(self.n, self.m, {x: -c for x, c in self.terms.items()})

    def __sub__(self, other: Morphism) -> Morphism:
        return self + (-other)

    def scale(self, c: Any) -> Morphism:
        return Morphism(self.n, self.m, {x: c * v for x, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and self.terms == other.terms

    def __repr__(self) -> str:
        inner = ", ".join(f"{c}*{canonical_encode(x).decode()}" for x, c in self.sorted_terms())
        return f"Morphism({self.n}->{self.m}: {inner or '0'})"

    def sorted_terms(self) -> list[tuple[Cobordism, Any]]:
        return sorted(self.terms.items(), key=lambda t: canonical_encode(t[0]))

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m,
                "terms": [{"coeff": format_coeff(c), "diagram": x.to_dict()}
                          for x, c in self.sorted_terms()]}

    @classmethod
    def from_dict(cls, d: dict, parse: Callable[[str], Any] = None) -> Morphism:
        """Read the JSON form. A bare cobordism dict becomes a basis morphism."""
        parse = parse or parse_rational
        if "terms" not in d:
            x = Cobordism.from_dict(d)
            return cls.basis(x, parse("1"))
        n, m = int(d["n"]), int(d["m"])
        out = cls.zero(n, m)
        for t in d["terms"]:
            out = out + cls.basis(Cobordism.from_dict(t["diagram"]), parse(str(t["coeff"])))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def format_coeff(c: Any) -> str:
    return str(c)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def reduce(spec: EvaluationSpec | LinearParams, x: Cobordism) -> Morphism:
    """Evaluate floating components and kill strands with two or more dots."""
    spec = as_spec(spec)
    if not spec.is_linear():
        raise ValueError("reduction is only defined for linear evaluations")
    floating = x.floating()
    open_comps = tuple(c for c in x.components if not c.is_floating)
    if any(c.dots >= 2 for c in open_comps):
        return Morphism.zero(x.n, x.m)
    closed = ClosedDiagram(
        tuple(c.dots for c in floating if c.kind is Kind.INTERVAL),
        tuple(c.dots for c in floating if c.kind is Kind.CIRCLE))
    coeff = evaluate_closed(spec, closed)
    return Morphism(x.n, x.m, {Cobordism(x.n, x.m, open_comps): coeff})


def compose(spec: EvaluationSpec | LinearParams, f: Morphism, g: Morphism) -> Morphism:
    """``f: n -> m`` followed by ``g: m -> k``, extended bilinearly."""
    if f.m != g.n:
        raise ValueError(f"cannot compose {f.n}->{f.m} with {g.n}->{g.m}")
    spec = as_spec(spec)
    out: dict[Cobordism, Any] = {}
    for x, a in f.terms.items():
        for y, b in g.terms.items():
            r = reduce(spec, glue(x, y))
            for z, c in r.terms.items():
                v = a * b * c
                out[z] = out[z] + v if z in out else v
    return Morphism(f.n, g.m, out)


def bend(n: int, m: int, x: Cobordism) -> NDiagram:
    """Move the ``n`` source points of a reduced ``n -> m`` cobordism to the target.

    Source point ``i`` becomes point ``n + 1 - i``; target point ``n + j``
    keeps its index.
    """
    if (x.n, x.m) != (n, m):
        raise ValueError(f"expected a {n}->{m} cobordism, got {x.n}->{x.m}")
    if not x.is_reduced():
        raise ValueError("only reduced cobordisms can be bent")

    def move(e: int) -> int:
        return n + 1 - e if e <= n else e

    return NDiagram(n + m, tuple(
        Component(Kind.ARC1 if len(c.endpoints) == 1 else Kind.ARC2,
                  tuple(move(e) for e in c.endpoints), c.dots)
        for c in x.components))


def unbend(n: int, m: int, d: NDiagram) -> Cobordism:
    """Inverse of ``bend``."""
    if d.n != n + m:
        raise ValueError(f"expected an {n + m}-diagram, got {d.n}")

    def move(e: int) -> int:
        return n + 1 - e if e <= n else e

    return Cobordism(n, m, tuple(
        Component(c.kind, tuple(move(e) for e in c.endpoints), c.dots)
        for c in d.components))


@dataclass(frozen=True)
class HomBasis:
    n: int
    m: int
    diagrams: tuple[Cobordism, ...]

    def __len__(self) -> int:
        return len(self.diagrams)

    def __iter__(self) -> Iterator[Cobordism]:
        return iter(self.diagrams)

    def morphisms(self, one: Any = 1) -> Iterable[Morphism]:
        return (Morphism.basis(x, one) for x in self.diagrams)


def hom_basis(n: int, m: int, cap: int | None = None) -> HomBasis:
    """Reduced ``n -> m`` diagrams, in the order of their bent (n+m)-diagrams."""
    return HomBasis(n, m, tuple(unbend(n, m, d) for d in enumerate_diagrams(n + m, cap)))


def coefficient_parser(spec: EvaluationSpec) -> Callable[[str], Any]:
    """Parser for coefficient strings matching the scalar ring of ``spec``."""
    one = spec.one
    if isinstance(one, PolyZ4):
        return PolyZ4.parse
    if isinstance(one, ModP):
        return lambda s: one * Fraction(s.strip())
    return parse_rational
