from fractions import Fraction as F

import pytest

from equivapprox.geometry import (
    AffineFunctional,
    InfinitesimalScalar,
    InputError,
    LinearConstraint,
    Polynomial,
    barycentric_coordinates,
    centroid,
    linear_feasible,
    linear_feasible_point,
    rank,
    reflect_through,
    sign,
    sign_vector,
    to_fraction,
)


def test_rationals_parse_exactly() -> None:
    assert to_fraction("1/3") == F(1, 3)
    assert to_fraction("-7/2") == F(-7, 2)
    assert to_fraction(4) == 4


@pytest.mark.parametrize("bad", ["1/0", "abc", 0.5, None])
def test_rationals_reject_bad_input(bad: object) -> None:
    with pytest.raises(InputError):
        to_fraction(bad)


def test_polynomial_parse_and_evaluate() -> None:
    p = Polynomial.parse("1 - x - y", 2)
    assert p((F(1, 2), F(1, 4))) == F(1, 4)
    q = Polynomial.parse("x^2 + y^2 - 4", 2)
    assert q((F(2), F(0))) == 0


def test_reflection_swaps_coordinates() -> None:
    swap = AffineFunctional.linear(1, -1)
    assert reflect_through((F(1), F(0)), swap) == (F(0), F(1))
    assert reflect_through((F(3), F(3)), swap) == (F(3), F(3))


def test_centroid_and_barycentric() -> None:
    tri = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]
    assert centroid(tri) == (F(1, 3), F(1, 3))
    assert centroid([(F(0), F(1)), (F(1), F(0))]) == (F(1, 2), F(1, 2))
    assert barycentric_coordinates((F(1, 3), F(1, 3)), tri) == (F(1, 3),) * 3
    assert barycentric_coordinates((F(1), F(1)), tri) == (F(-1), F(1), F(1))
    edge = [(F(0), F(0)), (F(1), F(0))]
    assert barycentric_coordinates((F(1, 2), F(0)), edge) == (F(1, 2), F(1, 2))
    assert barycentric_coordinates((F(0), F(1)), edge) is None


def test_sign_vector() -> None:
    fs = [AffineFunctional.linear(0, 1), AffineFunctional.linear(1, -1)]
    assert sign_vector(fs, (F(1), F(0))) == (0, 1)
    assert sign_vector(fs, (F(0), F(1))) == (1, -1)


def test_rank_exact() -> None:
    assert rank([[F(1), F(2)], [F(2), F(4)]]) == 1
    assert rank([[F(1), F(0)], [F(0), F(1)]]) == 2


def test_linear_feasibility() -> None:
    x_pos = LinearConstraint((F(1),), F(0), ">")
    x_neg = LinearConstraint((F(-1),), F(0), ">")
    assert not linear_feasible([x_pos, x_neg], 1)
    x_le_one = LinearConstraint((F(-1),), F(1), ">=")
    point = linear_feasible_point([x_pos, x_le_one], 1)
    assert point is not None and 0 < point[0] <= 1
    assert not linear_feasible([LinearConstraint((F(1),), F(0), ">"), LinearConstraint((F(1),), F(0), "=")], 1)


def test_infinitesimal_sign() -> None:
    s0 = InfinitesimalScalar.symbol(0)
    s1 = InfinitesimalScalar.symbol(1)
    assert sign(s1 - s0) > 0
    assert sign(s0 - s1) < 0
    assert sign(InfinitesimalScalar.constant(F(1, 1000)) - s1) > 0


def test_affine_functional_needs_gradient() -> None:
    with pytest.raises(InputError):
        AffineFunctional(F(1), (F(0), F(0)))
