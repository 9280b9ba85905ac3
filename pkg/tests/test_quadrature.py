"""Quadrature rule tests: closed-form Chebyshev values, Gauss-Laguerre
exactness, interlacing, determinism, and the audit CSV dump."""

import math

import numpy as np
import pytest

from starnoma.errors import NonConvergenceError
from starnoma.quadrature import (Family, QuadratureRule, _laguerre_compute,
                                 _tridiag_ql, chebyshev_rule, get_rule,
                                 laguerre_rule)


def test_chebyshev_order_one():
    rule = chebyshev_rule(1)
    assert rule.nodes[0] == pytest.approx(0.0, abs=1e-15)
    assert rule.weights[0] == pytest.approx(math.pi / 2, rel=1e-15)


def test_chebyshev_order_two():
    rule = chebyshev_rule(2)
    root_half = math.sqrt(2) / 2
    assert rule.nodes == pytest.approx([-root_half, root_half], rel=1e-15)
    assert rule.weights == pytest.approx(
        [math.pi / 4 * root_half] * 2, rel=1e-15)


def test_chebyshev_unit_integral():
    # the plain integral of 1 over [-1, 1] is 2; U = 50 lands within 1e-3
    rule = chebyshev_rule(50)
    approx = rule.integrate(lambda x: np.ones_like(x))
    assert approx == pytest.approx(2.0, abs=1e-3)


def test_chebyshev_nodes_inside_open_interval():
    rule = chebyshev_rule(64)
    assert rule.nodes[0] > -1.0 and rule.nodes[-1] < 1.0
    assert np.all(np.diff(rule.nodes) > 0)


def test_laguerre_order_one():
    rule = laguerre_rule(1)
    assert rule.nodes[0] == pytest.approx(1.0, rel=1e-14)
    assert rule.weights[0] == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("order", [1, 5, 50, 300])
def test_laguerre_weights_sum_to_one(order):
    rule = laguerre_rule(order)
    assert float(np.sum(rule.weights)) == pytest.approx(1.0, abs=1e-12)


def test_laguerre_fifth_moment_at_300():
    rule = laguerre_rule(300)
    m5 = float(np.sum(rule.weights * rule.nodes**5))
    assert m5 == pytest.approx(120.0, rel=1e-8)


def _weighted_moment(rule, k):
    # sum_p w_p x_p^k assembled in log space: the individual weighted terms
    # are representable (bounded by k! < 1.8e308 for k <= 170) even where
    # the bare power x_p^k overflows
    mask = rule.weights > 0.0
    logs = np.log(rule.weights[mask]) + k * np.log(rule.nodes[mask])
    return float(np.sum(np.exp(logs)))


@pytest.mark.parametrize("order", [5, 20, 300])
def test_laguerre_random_polynomial_exactness(order):
    # degree capped at 170 so the analytic moment sum stays inside double
    # range (k! overflows beyond 170!)
    rng = np.random.default_rng(order)
    degree = min(2 * order - 1, 170)
    coeffs = rng.uniform(-1.0, 1.0, degree + 1)
    exact = sum(c * math.factorial(k) for k, c in enumerate(coeffs))
    rule = laguerre_rule(order)
    approx = sum(c * _weighted_moment(rule, k) for k, c in enumerate(coeffs))
    assert approx == pytest.approx(exact, rel=1e-8)


def test_laguerre_node_interlacing_up_to_50():
    prev = laguerre_rule(1).nodes
    for order in range(2, 51):
        cur = laguerre_rule(order).nodes
        assert all(cur[i] < prev[i] < cur[i + 1] for i in range(order - 1))
        prev = cur


def test_laguerre_positive_weights_below_underflow_order():
    # weights decay like e^{-node}; below order ~150 all stay representable
    for order in (10, 80, 150):
        rule = laguerre_rule(order)
        assert np.all(rule.weights > 0.0)
        assert np.all(rule.nodes > 0.0)


def test_rule_generation_bit_identical():
    a = _laguerre_compute(120)
    b = _laguerre_compute(120)
    assert np.array_equal(a.nodes, b.nodes)
    assert np.array_equal(a.weights, b.weights)
    c1 = chebyshev_rule(50)
    c2 = chebyshev_rule(50)
    assert np.array_equal(c1.nodes, c2.nodes)
    assert np.array_equal(c1.weights, c2.weights)


def test_ql_convergence_failure_signaled():
    with pytest.raises(NonConvergenceError):
        _tridiag_ql([1.0, 2.0, 3.0, 4.0], [1.0, 1.0, 1.0], max_iter=0)


def test_rule_validation():
    with pytest.raises(ValueError):
        QuadratureRule(Family.LAGUERRE, 2, np.array([2.0, 1.0]),
                       np.array([0.5, 0.5]))  # nodes not increasing
    with pytest.raises(ValueError):
        laguerre_rule(0)
    with pytest.raises(ValueError):
        chebyshev_rule(0)


def test_rule_cache_returns_same_object():
    r1 = get_rule(Family.LAGUERRE, 37)
    r2 = get_rule(Family.LAGUERRE, 37)
    assert r1 is r2


def test_rule_arrays_immutable():
    rule = get_rule(Family.CHEBYSHEV_FIRST_KIND, 13)
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.0


def test_dump_csv_roundtrip(tmp_path):
    rule = laguerre_rule(7)
    path = tmp_path / "rule.csv"
    rule.dump_csv(path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "index,node,weight"
    assert len(rows) == 8
    nodes = [float(r.split(",")[1]) for r in rows[1:]]
    assert nodes == pytest.approx(list(rule.nodes), rel=0, abs=0)


def test_laguerre_integrates_exponential_tail_function():
    # int_0^inf e^-x cos(x) dx = 1/2
    rule = laguerre_rule(60)
    assert rule.integrate(np.cos) == pytest.approx(0.5, rel=1e-10)
