from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cob1d.diagrams import Cobordism, Component, Kind
from cob1d.evaluation import (ClosedDiagram, EvaluationSpec, LinearParams, evaluate_closed,
                              point_spec, symbolic_linear_spec)
from cob1d.polyring import ModP, PolyZ4

b0, b1, g0, g1 = PolyZ4.gens()
SYM = symbolic_linear_spec()

dots = st.lists(st.integers(0, 4), max_size=4)
closed = st.builds(ClosedDiagram, dots, dots)


def test_linear_examples():
    assert evaluate_closed(SYM, ClosedDiagram((1,), (1,))) == b1 * g1
    assert evaluate_closed(SYM, ClosedDiagram()) == 1
    assert evaluate_closed(SYM, ClosedDiagram((2,), ())) == 0
    assert evaluate_closed(SYM, ClosedDiagram((0,), ())) == b0
    assert evaluate_closed(SYM, ClosedDiagram((), (0, 0))) == g0 ** 2


def test_monomial_exponents():
    z = ClosedDiagram((0, 0, 1), (1, 0, 1, 1))
    assert evaluate_closed(SYM, z) == PolyZ4.monomial((2, 1, 1, 3))


def test_general_spec():
    spec = EvaluationSpec((1, 2, 3), (5, 7, 11, 13))
    assert not spec.is_linear()
    assert evaluate_closed(spec, ClosedDiagram((2, 1), (3, 0))) == 3 * 2 * 13 * 5
    assert evaluate_closed(spec, ClosedDiagram((3,), ())) == 0
    assert evaluate_closed(spec, ClosedDiagram()) == 1


@given(closed, closed)
def test_multiplicative(z1, z2):
    spec = EvaluationSpec((2, 3, 5), (7, 11, 13, 17))
    assert evaluate_closed(spec, z1 + z2) == evaluate_closed(spec, z1) * evaluate_closed(spec, z2)
    assert evaluate_closed(SYM, z1 + z2) == evaluate_closed(SYM, z1) * evaluate_closed(SYM, z2)


@given(closed)
def test_linear_vanishing(z):
    value = evaluate_closed(SYM, z)
    assert (not value) == any(k >= 2 for k in z.interval_dots + z.circle_dots)


def test_closed_diagram_is_a_multiset():
    assert ClosedDiagram((1, 0), (2, 0)) == ClosedDiagram((0, 1), (0, 2))
    assert ClosedDiagram((1,), ()) != ClosedDiagram((), (1,))
    with pytest.raises(ValueError):
        ClosedDiagram((-1,), ())


def test_from_cobordism():
    x = Cobordism(0, 0, (Component(Kind.CIRCLE, (), 1), Component(Kind.INTERVAL, (), 0),
                         Component(Kind.CIRCLE, (), 0)))
    assert ClosedDiagram.from_cobordism(x) == ClosedDiagram((0,), (0, 1))
    with pytest.raises(ValueError):
        ClosedDiagram.from_cobordism(Cobordism.identity(1))


def test_linear_params_parse():
    p = LinearParams.parse("beta0=2, beta1=1/3,gamma1=-4")
    assert p.as_tuple() == (2, Fraction(1, 3), 0, -4)
    spec = p.to_spec()
    assert spec.is_linear()
    assert evaluate_closed(spec, ClosedDiagram((1, 0), (1,))) == Fraction(-8, 3)


def test_linear_params_modular():
    p = LinearParams.parse("beta0=1/2,gamma0=3", modulus=7)
    assert p.beta0 == ModP(4, 7)
    assert p.gamma0 == ModP(3, 7)
    assert p.one == ModP(1, 7)


@pytest.mark.parametrize("text", ["beta2=1", "beta0", "beta0=x", "beta0=1.5", "gamma1=1/"])
def test_linear_params_rejects(text):
    with pytest.raises(ValueError):
        LinearParams.parse(text)


def test_point_spec_matches_symbolic_evaluation():
    z = ClosedDiagram((0, 1, 1), (0, 1))
    point = (3, -2, 5, 7)
    assert evaluate_closed(point_spec(point), z) == evaluate_closed(SYM, z).evaluate(point)
