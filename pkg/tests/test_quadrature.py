import math

import pytest
import scipy.special as sp
from hypothesis import given, settings, strategies as st

from transmute.errors import UsageError
from transmute.expr import Num, parse
from transmute.kernels import get_case, list_cases
from transmute.quadrature import (
    apply_transmutation,
    identity_error,
    jacobi_rule,
    transform,
)


def _weighted_moment(alpha, beta):
    # integral of (1-s)^alpha (1+s)^beta over [-1, 1]
    return 2.0 ** (alpha + beta + 1.0) * (
        math.gamma(alpha + 1.0) * math.gamma(beta + 1.0)
        / math.gamma(alpha + beta + 2.0)
    )


def test_single_node_legendre():
    rule = jacobi_rule(1, 0.0, 0.0)
    assert rule.nodes == (0.0,)
    assert rule.weights[0] == pytest.approx(2.0, rel=1e-15)


def test_single_node_endpoint_weight():
    # (alpha, beta) = (-1/2, 0): node at 1/3, weight 2 sqrt 2
    rule = jacobi_rule(1, -0.5, 0.0)
    assert rule.nodes[0] == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert rule.weights[0] == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-14)


def test_plain_monomial_integration():
    rule = jacobi_rule(8, 0.0, 0.0)
    got = sum(w * s ** 6 for s, w in zip(rule.nodes, rule.weights))
    assert got == pytest.approx(2.0 / 7.0, rel=1e-14)


@pytest.mark.parametrize("n", [4, 16, 48])
@pytest.mark.parametrize("ab", [(-0.5, 0.0), (0.5, 0.5), (1.5, 0.0), (2.5, -0.3)])
def test_rule_matches_scipy(n, ab):
    alpha, beta = ab
    rule = jacobi_rule(n, alpha, beta)
    ref_x, ref_w = sp.roots_jacobi(n, alpha, beta)
    for got, want in zip(rule.nodes, ref_x):
        assert got == pytest.approx(want, abs=1e-13)
    for got, want in zip(rule.weights, ref_w):
        assert got == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("ab", [(-0.5, 0.0), (0.5, 0.5), (1.5, 0.0)])
def test_weight_sum_is_the_beta_moment(ab):
    alpha, beta = ab
    for n in (1, 5, 24):
        rule = jacobi_rule(n, alpha, beta)
        assert math.fsum(rule.weights) == pytest.approx(
            _weighted_moment(alpha, beta), rel=1e-12
        )


@pytest.mark.parametrize("n", [3, 10, 25])
def test_degree_exactness_via_orthogonality(n):
    # integrating P_m^{(a,b)} against the weight gives 0 for 1 <= m <= 2n-1
    # and the Beta moment for m = 0; by linearity that is exactness on all
    # polynomials of degree <= 2n-1
    alpha, beta = 0.7, -0.2
    rule = jacobi_rule(n, alpha, beta)
    scale = _weighted_moment(alpha, beta)
    for m in range(2 * n):
        got = math.fsum(
            w * sp.eval_jacobi(m, alpha, beta, s)
            for s, w in zip(rule.nodes, rule.weights)
        )
        want = scale if m == 0 else 0.0
        assert got == pytest.approx(want, abs=1e-12 * scale)


def test_rule_shape_invariants():
    rule = jacobi_rule(32, 1.5, 0.0)
    assert len(rule.nodes) == len(rule.weights) == 32
    assert all(w > 0.0 for w in rule.weights)
    assert all(-1.0 < s < 1.0 for s in rule.nodes)
    assert all(b > a for a, b in zip(rule.nodes, rule.nodes[1:]))


def test_rules_are_cached():
    assert jacobi_rule(16, -0.5, 0.0) is jacobi_rule(16, -0.5, 0.0)


@pytest.mark.parametrize(
    "args,needle",
    [
        ((0, 0.0, 0.0), "positive integer"),
        ((1.5, 0.0, 0.0), "positive integer"),
        ((4, -1.0, 0.0), "exceed -1"),
        ((4, 0.0, -2.0), "exceed -1"),
    ],
)
def test_rule_validation(args, needle):
    with pytest.raises(UsageError, match=needle):
        jacobi_rule(*args)


def test_weight_extraction_closed_form():
    # with f == 1 the poisson transform at nu = 1 is x^1.5 / 2 exactly
    case = get_case("poisson_bessel")
    for x in (0.7, 1.5):
        got = transform(case, Num(1.0), 0.0, x, 64)
        assert got == pytest.approx(0.5 * x ** 1.5, rel=1e-12)
    assert transform(case, Num(1.0), 0.0, 1.5, 64) == pytest.approx(
        0.91855865354369179, rel=1e-12
    )


def test_transform_is_linear():
    case = get_case("poisson_bessel")
    f = parse("cos(t)")
    g = parse("t^2/(1+t)")
    combo = parse("3*cos(t) - 2*t^2/(1+t)")
    x = 1.9
    lhs = transform(case, combo, 0.0, x, 48)
    rhs = 3.0 * transform(case, f, 0.0, x, 48) - 2.0 * transform(case, g, 0.0, x, 48)
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_transform_validation():
    case = get_case("poisson_bessel")
    with pytest.raises(UsageError, match="x > 0"):
        transform(case, Num(1.0), 0.0, 0.0)
    with pytest.raises(UsageError, match="at least 8"):
        apply_transmutation(case, 1.0, 4)


@pytest.mark.parametrize("name", list_cases())
def test_identity_reproduced_for_every_case(name):
    assert identity_error(get_case(name)) <= 1e-10


@pytest.mark.parametrize("name", ["sonin", "lowndes", "gegenbauer"])
def test_error_decreases_with_order_until_the_floor(name):
    case = get_case(name)
    prev = None
    for n in (16, 32, 64):
        err = identity_error(case, n=n)
        if prev is not None:
            assert err <= max(prev * 1.05, 1e-10)
        prev = err
    assert prev <= 1e-10


def test_apply_transmutation_values_match_f1():
    case = get_case("vekua_telegraph", {"omega": 0.0})
    got = apply_transmutation(case, 1.0)
    assert got == pytest.approx(math.sin(1.0), rel=1e-13)


@settings(max_examples=25)
@given(x=st.floats(0.3, 2.9))
def test_half_integer_poisson_reduces_to_sine(x):
    case = get_case("poisson_bessel", {"nu": 0.5})
    want = math.sqrt(2.0 / math.pi) * math.sin(x)
    assert apply_transmutation(case, x) == pytest.approx(want, rel=1e-12, abs=1e-13)
