"""Multiplicative evaluation of closed dotted 1-manifolds."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .diagrams import Cobordism, Kind
from .polyring import ModP, PolyZ4


@dataclass(frozen=True)
class ClosedDiagram:
    """Disjoint union of dotted intervals and circles, as two sorted dot-count multisets."""

    interval_dots: tuple[int, ...] = ()
    circle_dots: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "interval_dots", tuple(sorted(self.interval_dots)))
        object.__setattr__(self, "circle_dots", tuple(sorted(self.circle_dots)))
        if any(k < 0 for k in self.interval_dots + self.circle_dots):
            raise ValueError("dot counts must be nonnegative")

    def __add__(self, other: ClosedDiagram) -> ClosedDiagram:
        return ClosedDiagram(self.interval_dots + other.interval_dots,
                             self.circle_dots + other.circle_dots)

    @property
    def is_empty(self) -> bool:
        return not self.interval_dots and not self.circle_dots

    @classmethod
    def from_cobordism(cls, x: Cobordism) -> ClosedDiagram:
        if x.size:
            raise ValueError("not a closed cobordism")
        return cls(tuple(c.dots for c in x.components if c.kind is Kind.INTERVAL),
                   tuple(c.dots for c in x.components if c.kind is Kind.CIRCLE))


@dataclass(frozen=True)
class EvaluationSpec:
    """Values on closed components: ``beta[k]`` for an interval with k dots,
    ``gamma[k]`` for a circle with k dots. Missing entries are zero.

    ``one`` fixes the scalar ring (int, Fraction, ModP or PolyZ4).
    """

    beta: tuple = ()
    gamma: tuple = ()
    one: Any = 1

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(self.beta))
        object.__setattr__(self, "gamma", tuple(self.gamma))

    @property
    def zero(self) -> Any:
        return self.one * 0

    def beta_at(self, k: int) -> Any:
        return self.beta[k] if k < len(self.beta) else self.zero

    def gamma_at(self, k: int) -> Any:
        return self.gamma[k] if k < len(self.gamma) else self.zero

    def is_linear(self) -> bool:
        return not any(self.beta[2:]) and not any(self.gamma[2:])


@dataclass(frozen=True)
class LinearParams:
    beta0: Any
    beta1: Any
    gamma0: Any
    gamma1: Any
    one: Any = 1

    def to_spec(self) -> EvaluationSpec:
        return EvaluationSpec((self.beta0, self.beta1), (self.gamma0, self.gamma1), self.one)

    def as_tuple(self) -> tuple:
        return (self.beta0, self.beta1, self.gamma0, self.gamma1)

    @classmethod
    def parse(cls, text: str, modulus: int | None = None) -> LinearParams:
        """Parse ``"beta0=2,beta1=1,gamma0=-1,gamma1=3"``; values are rationals ``p/q``.

        Unlisted parameters default to 0. With ``modulus`` the values are
        reduced into the prime field.
        """
        values = {"beta0": Fraction(0), "beta1": Fraction(0),
                  "gamma0": Fraction(0), "gamma1": Fraction(0)}
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, sep, raw = item.partition("=")
            key = key.strip()
            if not sep or key not in values:
                raise ValueError(f"bad parameter assignment {item!r}")
            if not re.fullmatch(r"\s*-?\d+(/\d+)?\s*", raw):
                raise ValueError(f"bad rational {raw!r} for {key}")
            values[key] = Fraction(raw.strip())
        if modulus is None:
            return cls(**values, one=Fraction(1))
        return cls(**{k: ModP(1, modulus) * v for k, v in values.items()}, one=ModP(1, modulus))


def as_spec(spec: EvaluationSpec | LinearParams) -> EvaluationSpec:
    return spec.to_spec() if isinstance(spec, LinearParams) else spec


def evaluate_closed(spec: EvaluationSpec | LinearParams, z: ClosedDiagram) -> Any:
    spec = as_spec(spec)
    value = spec.one
    for k in z.interval_dots:
        value = value * spec.beta_at(k)
    for k in z.circle_dots:
        value = value * spec.gamma_at(k)
    return value


def symbolic_linear_spec() -> EvaluationSpec:
    """Linear spec whose four values are the indeterminates ``b0, b1, g0, g1``."""
    b0, b1, g0, g1 = PolyZ4.gens()
    return EvaluationSpec((b0, b1), (g0, g1), PolyZ4.const(1))


def symbolic_params() -> LinearParams:
    b0, b1, g0, g1 = PolyZ4.gens()
    return LinearParams(b0, b1, g0, g1, PolyZ4.const(1))


def point_spec(values: Sequence[Any], one: Any = 1) -> EvaluationSpec:
    """Linear spec at a concrete point ``(b0, b1, g0, g1)``."""
    b0, b1, g0, g1 = values
    return EvaluationSpec((one * b0, one * b1), (one * g0, one * g1), one)
