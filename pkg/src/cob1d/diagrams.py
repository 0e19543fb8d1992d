"""Dotted 1-cobordisms, n-diagrams, their orbits and the ordering used for Gram matrices.

Boundary points of a cobordism ``n -> m`` live in one index space
``1..n+m``: ``1..n`` is the source, ``n+1..n+m`` the target. An n-diagram is
a cobordism ``0 -> n`` built from arcs (one boundary point) and cups (two
boundary points), each carrying at most one dot.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

from .errors import ResourceLimitError

DEFAULT_MAX_N = 10


class Kind(str, Enum):
    ARC2 = "arc2"
    ARC1 = "arc1"
    INTERVAL = "interval"
    CIRCLE = "circle"

    @property
    def rank(self) -> int:
        return _KIND_RANK[self]

    @property
    def arity(self) -> int:
        return _KIND_ARITY[self]


_KIND_RANK = {Kind.ARC2: 0, Kind.ARC1: 1, Kind.INTERVAL: 2, Kind.CIRCLE: 3}
_KIND_ARITY = {Kind.ARC2: 2, Kind.ARC1: 1, Kind.INTERVAL: 0, Kind.CIRCLE: 0}
_KIND_CODE = {Kind.ARC2: "A", Kind.ARC1: "a", Kind.INTERVAL: "i", Kind.CIRCLE: "c"}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}


@dataclass(frozen=True)
class Component:
    kind: Kind
    endpoints: tuple[int, ...] = ()
    dots: int = 0

    def __post_init__(self):
        kind = Kind(self.kind)
        endpoints = tuple(sorted(int(e) for e in self.endpoints))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "endpoints", endpoints)
        if len(endpoints) != kind.arity:
            raise ValueError(f"{kind.value} needs {kind.arity} endpoints, got {endpoints}")
        if len(set(endpoints)) != len(endpoints):
            raise ValueError(f"repeated endpoint in {endpoints}")
        if not isinstance(self.dots, int) or self.dots < 0:
            raise ValueError(f"dot count must be a nonnegative integer, got {self.dots!r}")

    @property
    def is_floating(self) -> bool:
        return self.kind in (Kind.INTERVAL, Kind.CIRCLE)

    def sort_key(self, sentinel: int) -> tuple[int, int, int]:
        first = self.endpoints[0] if self.endpoints else sentinel
        return (first, self.kind.rank, self.dots)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "endpoints": list(self.endpoints), "dots": self.dots}

    @classmethod
    def from_dict(cls, d: dict) -> Component:
        return cls(Kind(d["kind"]), tuple(d.get("endpoints", ())), int(d.get("dots", 0)))


@dataclass(frozen=True)
class Cobordism:
    """A dotted unoriented 1-cobordism from ``n`` to ``m`` points, in canonical form."""

    n: int
    m: int
    components: tuple[Component, ...]

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("boundary sizes must be nonnegative")
        comps = tuple(self.components)
        size = self.n + self.m
        seen: list[int] = []
        for c in comps:
            seen.extend(c.endpoints)
        if sorted(seen) != list(range(1, size + 1)):
            raise ValueError(
                f"endpoints {sorted(seen)} do not partition boundary points 1..{size}")
        comps = tuple(sorted(comps, key=lambda c: c.sort_key(size + 1)))
        object.__setattr__(self, "components", comps)

    @property
    def size(self) -> int:
        return self.n + self.m

    def floating(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.is_floating)

    def is_reduced(self) -> bool:
        return all(not c.is_floating and c.dots <= 1 for c in self.components)

    @classmethod
    def identity(cls, n: int) -> Cobordism:
        return cls(n, n, tuple(Component(Kind.ARC2, (i, n + i)) for i in range(1, n + 1)))

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "components": [c.to_dict() for c in self.components]}

    @classmethod
    def from_dict(cls, d: dict) -> Cobordism:
        return cls(int(d["n"]), int(d["m"]),
                   tuple(Component.from_dict(c) for c in d["components"]))


def canonical_encode(x: Cobordism | NDiagram) -> bytes:
    """Stable byte encoding of a cobordism; equal iff the diagrams are equal."""
    if isinstance(x, NDiagram):
        return x.encoding
    return _encode(x.n, x.m, x.components)


def _encode(n: int, m: int, components: Iterable[Component]) -> bytes:
    body = ";".join(
        f"{_KIND_CODE[c.kind]}{'.'.join(map(str, c.endpoints))}:{c.dots}" for c in components)
    return f"{n}>{m}|{body}".encode("ascii")


def canonical_decode(data: bytes) -> Cobordism:
    text = data.decode("ascii")
    head, _, body = text.partition("|")
    n, m = (int(v) for v in head.split(">"))
    comps = []
    for item in filter(None, body.split(";")):
        kind = _CODE_KIND[item[0]]
        ends, dots = item[1:].split(":")
        endpoints = tuple(int(e) for e in ends.split(".")) if ends else ()
        comps.append(Component(kind, endpoints, int(dots)))
    return Cobordism(n, m, tuple(comps))


def reflect(x: Cobordism) -> Cobordism:
    """Mirror ``x: n -> m`` into ``m -> n``; dots are preserved."""
    n, m = x.n, x.m

    def move(i: int) -> int:
        return m + i if i <= n else i - n

    return Cobordism(m, n, tuple(
        Component(c.kind, tuple(move(e) for e in c.endpoints), c.dots) for c in x.components))


@dataclass(frozen=True)
class OrbitSignature:
    """Counts ``(a, b, c, d)`` of dotless arcs, dotted arcs, dotless cups, dotted cups."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("signature entries must be nonnegative")

    @property
    def n(self) -> int:
        return self.a + self.b + 2 * self.c + 2 * self.d

    @property
    def defects(self) -> int:
        return self.b + self.d

    @property
    def comp(self) -> int:
        return self.a + self.b + self.c + self.d

    @property
    def arcs(self) -> int:
        return self.a + self.b

    @property
    def cups(self) -> int:
        return self.c + self.d

    def dual(self) -> OrbitSignature:
        return OrbitSignature(self.b, self.a, self.d, self.c)

    def order_key(self) -> tuple[int, int, int]:
        # more defects first, then fewer components, then more dotted cups
        return (-self.defects, self.comp, -self.d)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return f"O({self.a},{self.b},{self.c},{self.d})"


def orbit_cardinality(s: OrbitSignature) -> int:
    return factorial(s.n) // (factorial(s.a) * factorial(s.b) * factorial(s.c)
                              * factorial(s.d) * 2 ** (s.c + s.d))


@dataclass(frozen=True)
class NDiagram:
    """An n-diagram: arcs and cups on points ``1..n`` with at most one dot each.

    ``mate`` and ``point_dots`` are 0-based lookup tables used by the pairing
    kernel: ``mate[i]`` is the other end of the cup through point ``i+1``
    (``-1`` for an arc) and ``point_dots[i]`` the dots on that component.
    """

    n: int
    components: tuple[Component, ...]
    mate: tuple[int, ...] = field(init=False, repr=False, compare=False)
    point_dots: tuple[int, ...] = field(init=False, repr=False, compare=False)
    encoding: bytes = field(init=False, repr=False, compare=False)
    signature: OrbitSignature = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        if n < 0:
            raise ValueError("n must be nonnegative")
        comps = tuple(self.components)
        mate = [-2] * n
        pdots = [0] * n
        counts = [0, 0, 0, 0]
        for c in comps:
            if c.kind not in (Kind.ARC1, Kind.ARC2):
                raise ValueError(f"n-diagrams have no {c.kind.value} components")
            if c.dots > 1:
                raise ValueError("n-diagram components carry at most one dot")
            for e in c.endpoints:
                if not 1 <= e <= n or mate[e - 1] != -2:
                    raise ValueError(f"endpoint {e} out of range or reused")
            if c.kind is Kind.ARC1:
                (e,) = c.endpoints
                mate[e - 1] = -1
                pdots[e - 1] = c.dots
                counts[c.dots] += 1
            else:
                i, j = c.endpoints
                mate[i - 1], mate[j - 1] = j - 1, i - 1
                pdots[i - 1] = pdots[j - 1] = c.dots
                counts[2 + c.dots] += 1
        if -2 in mate:
            raise ValueError(f"point {mate.index(-2) + 1} is not covered")
        comps = tuple(sorted(comps, key=lambda c: c.sort_key(n + 1)))
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "mate", tuple(mate))
        object.__setattr__(self, "point_dots", tuple(pdots))
        object.__setattr__(self, "encoding", _encode(0, n, comps))
        object.__setattr__(self, "signature", OrbitSignature(*counts))

    @classmethod
    def of(cls, n: int, arcs: Iterable = (), cups: Iterable = ()) -> NDiagram:
        """Build from ``arcs = [(point, dots), ...]`` and ``cups = [(i, j, dots), ...]``."""
        comps = [Component(Kind.ARC1, (p,), dots) for p, dots in arcs]
        comps += [Component(Kind.ARC2, (i, j), dots) for i, j, dots in cups]
        return cls(n, tuple(comps))

    @classmethod
    def from_cobordism(cls, x: Cobordism) -> NDiagram:
        if x.n != 0:
            raise ValueError("an n-diagram is a cobordism from 0 points")
        return cls(x.m, x.components)

    def to_cobordism(self) -> Cobordism:
        return Cobordism(0, self.n, self.components)

    def sort_key(self) -> tuple:
        return (self.signature.order_key(), self.encoding)

    def __lt__(self, other: NDiagram) -> bool:
        if not isinstance(other, NDiagram):
            return NotImplemented
        return self.sort_key() < other.sort_key()


def signature(x: NDiagram) -> OrbitSignature:
    return x.signature


def dual_diagram(x: NDiagram) -> NDiagram:
    """Same arcs and cups with every dot count flipped 0 <-> 1."""
    return NDiagram(x.n, tuple(Component(c.kind, c.endpoints, 1 - c.dots) for c in x.components))


def diagram_order(x: NDiagram, y: NDiagram) -> int:
    """Three-way comparison: -1 if ``x < y``, 0 if equal, 1 if ``x > y``."""
    if x.n != y.n:
        raise ValueError(f"cannot compare a {x.n}-diagram with a {y.n}-diagram")
    kx, ky = x.sort_key(), y.sort_key()
    return (kx > ky) - (kx < ky)


def permute(x: NDiagram, sigma: Sequence[int]) -> NDiagram:
    """Relabel endpoint ``i`` as ``sigma[i-1]`` (``sigma`` a permutation of 1..n)."""
    return NDiagram(x.n, tuple(
        Component(c.kind, tuple(sigma[e - 1] for e in c.endpoints), c.dots)
        for c in x.components))


def max_n() -> int:
    raw = os.environ.get("COB1D_MAX_N")
    return int(raw) if raw else DEFAULT_MAX_N


def check_cap(n: int, cap: int | None = None) -> None:
    limit = max_n() if cap is None else cap
    if n > limit:
        raise ResourceLimitError(
            f"n={n} exceeds the enumeration cap {limit} (set COB1D_MAX_N or pass --force)")


def iter_diagrams(n: int) -> Iterator[NDiagram]:
    """Every n-diagram once, in generation (not sorted) order.

    The smallest unused point either becomes an arc or pairs with a larger
    unused point into a cup; each choice comes dotless and dotted.
    """
    used = [False] * (n + 2)
    stack: list[Component] = []

    def rec(start: int) -> Iterator[NDiagram]:
        i = start
        while i <= n and used[i]:
            i += 1
        if i > n:
            yield NDiagram(n, tuple(stack))
            return
        used[i] = True
        for dots in (0, 1):
            stack.append(Component(Kind.ARC1, (i,), dots))
            yield from rec(i + 1)
            stack.pop()
        for j in range(i + 1, n + 1):
            if used[j]:
                continue
            used[j] = True
            for dots in (0, 1):
                stack.append(Component(Kind.ARC2, (i, j), dots))
                yield from rec(i + 1)
                stack.pop()
            used[j] = False
        used[i] = False

    yield from rec(1)


@lru_cache(maxsize=16)
def _sorted_diagrams(n: int) -> tuple[NDiagram, ...]:
    return tuple(sorted(iter_diagrams(n), key=NDiagram.sort_key))


def enumerate_diagrams(n: int, cap: int | None = None) -> tuple[NDiagram, ...]:
    """All n-diagrams sorted by ``diagram_order``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    check_cap(n, cap)
    return _sorted_diagrams(n)


def enumerate_orbits(n: int) -> list[OrbitSignature]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    sigs = [OrbitSignature(n - b - 2 * (c + d), b, c, d)
            for c in range(n // 2 + 1)
            for d in range((n - 2 * c) // 2 + 1)
            for b in range(n - 2 * (c + d) + 1)]
    return sorted(sigs, key=OrbitSignature.order_key)
