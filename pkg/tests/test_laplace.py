from fractions import Fraction

import numpy as np
import pytest

from conftest import balanced_integer_network, exact_pair_constant

from kinvar import (
    DetailedBalanceError,
    NoReversiblePathError,
    Polynomial,
    RationalFunction,
    all_transfer_functions_forest,
    build_rate_matrix,
    characteristic_polynomial,
    enumerate_forests,
    exact_balance,
    exact_cycle_violations,
    first_order_network,
    path_equilibrium_constant,
    prove_fixed_proportion,
    transfer_function_cofactor,
    transfer_function_forest,
)
from kinvar.laplace import exact_entries, poly_det, poly_from_roots, poly_gcd


def _p(*coeffs):
    return Polynomial([Fraction(c) for c in coeffs])


# ---------------------------------------------------------------------------
# polynomial layer

def test_polynomial_basics():
    p = _p(1, 2, 1)  # (s+1)^2
    assert p.degree == 2
    assert p(3) == 16
    assert str(_p(0, 1)) == "s"
    assert Polynomial([]).is_zero
    assert (_p(1, 1) * _p(-1, 1)) == _p(-1, 0, 1)
    assert _p(1, 2) - _p(1, 2) == Polynomial([])
    assert _p(1, 1) * Fraction(3) == _p(3, 3)


def test_poly_from_roots_and_gcd():
    p = poly_from_roots([1, 2])
    assert p == _p(2, -3, 1)
    q = poly_from_roots([2, 5])
    g = poly_gcd(p, q)
    assert g == poly_from_roots([2])  # monic common factor (s - 2)


def test_poly_det_matches_numpy():
    rng = np.random.default_rng(7)
    for _ in range(10):
        ints = rng.integers(-5, 6, size=(4, 4))
        rows = [[_p(int(v)) for v in row] for row in ints]
        det = poly_det(rows)
        assert det.degree <= 0
        expected = round(float(np.linalg.det(ints.astype(float))))
        assert det.coefficient(0) == expected


def test_poly_det_singular_is_zero():
    rows = [[_p(1), _p(2)], [_p(2), _p(4)]]
    assert poly_det(rows).is_zero


def test_characteristic_polynomial_two_species():
    net = first_order_network(["A", "B"], [("A", "B", 2.0, 1.0)])
    M = build_rate_matrix(net)
    assert characteristic_polynomial(M) == _p(0, 3, 1)  # s(s+3)


def test_rational_function_cancel():
    f = RationalFunction(_p(0, 1, 1), _p(0, 1))  # s(s+1)/s
    g = f.cancelled()
    assert g.numerator == _p(1, 1)
    assert g.denominator == _p(1)
    assert f(2) == g(2) == 3


# ---------------------------------------------------------------------------
# transfer functions

def test_cofactor_transfer_function_two_species():
    net = first_order_network(["A", "B"], [("A", "B", 2.0, 1.0)])
    M = build_rate_matrix(net)
    f = transfer_function_cofactor(M, 0, 1)
    assert f.numerator == _p(2)
    assert f.denominator == _p(0, 3, 1)


def test_forest_route_equals_cofactor_route(rng):
    for trial in range(15):
        n = int(rng.integers(2, 6))
        net, _ = balanced_integer_network(rng, n)
        M = build_rate_matrix(net)
        table = all_transfer_functions_forest(M)
        for src in range(n):
            for tgt in range(n):
                direct = transfer_function_cofactor(M, src, tgt)
                forest = table[(src, tgt)]
                assert direct.numerator == forest.numerator
                assert direct.denominator == forest.denominator


def test_forest_route_on_unbalanced_network():
    # the forest expansion is a determinant identity, not a balance property
    net = first_order_network(
        ["A", "B", "C"],
        [("A", "B", 1.0, 1.0), ("B", "C", 1.0, 1.0), ("C", "A", 2.0, 1.0)],
    )
    M = build_rate_matrix(net)
    for src, tgt in [(0, 0), (0, 2), (2, 1)]:
        direct = transfer_function_cofactor(M, src, tgt)
        forest = transfer_function_forest(M, src, tgt)
        assert direct.numerator == forest.numerator
        assert direct.denominator == forest.denominator


def test_enumerate_forests_counts_on_triangle():
    # complete reversible triangle with unit rates
    net = first_order_network(
        ["A", "B", "C"],
        [("A", "B", 1.0, 1.0), ("B", "C", 1.0, 1.0), ("C", "A", 1.0, 1.0)],
    )
    M = build_rate_matrix(net)
    assert len(enumerate_forests(M, [0, 1, 2])) == 1  # the empty forest
    trees = enumerate_forests(M, [0])
    assert len(trees) == 3  # in-trees rooted at A
    assert all(t.weight == 1 for t in trees)
    two_rooted = enumerate_forests(M, [0, 1])
    assert len(two_rooted) == 2  # C picks one of its two out-edges
    constrained = enumerate_forests(M, [0, 1], constrained=(2, 0))
    assert len(constrained) == 1
    assert (2, 0) in next(iter(constrained)).edges


def test_forest_sum_reproduces_char_poly_coefficients():
    net = first_order_network(
        ["A", "B", "C"],
        [("A", "B", 2.0, 3.0), ("B", "C", 5.0, 7.0)],
    )
    M = build_rate_matrix(net)
    delta = characteristic_polynomial(M)
    for r in range(1, 4):
        total = Fraction(0)
        for roots in [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]:
            if len(roots) == r:
                total += sum(
                    (f.weight for f in enumerate_forests(M, roots)), Fraction(0)
                )
        assert delta.coefficient(r) == total


# ---------------------------------------------------------------------------
# cycle conditions and proofs

def test_exact_cycle_violations_balanced_is_empty(rng):
    net, _ = balanced_integer_network(rng, 5)
    assert exact_cycle_violations(build_rate_matrix(net)) == []


def test_exact_cycle_violations_unbalanced_triangle():
    net = first_order_network(
        ["A", "B", "C"],
        [("A", "B", 1.0, 1.0), ("B", "C", 1.0, 1.0), ("C", "A", 1.0, 2.0)],
    )
    violations = exact_cycle_violations(build_rate_matrix(net))
    assert len(violations) == 1
    v = violations[0]
    assert {v.forward_product, v.backward_product} == {Fraction(1), Fraction(2)}
    assert v.mismatch == Fraction(2)


def test_prove_chain_with_irreversible_drain():
    # the B -> C drain does not disturb the A/B proportion
    net = first_order_network(
        ["A", "B", "C"], [("A", "B", 2.0, 1.0), ("B", "C", 3.0, 0.0)]
    )
    report = prove_fixed_proportion(build_rate_matrix(net), 0, 1)
    assert report.verified
    assert report.K == Fraction(2)
    assert report.failing_coefficient is None
    assert report.cycle_violations == ()


def test_prove_balanced_network_pairs(rng):
    net, h = balanced_integer_network(rng, 6)
    M = build_rate_matrix(net)
    for a, b in [(0, 1), (2, 5), (3, 4)]:
        report = prove_fixed_proportion(M, a, b)
        assert report.verified
        assert report.K == exact_pair_constant(h, a, b)


def test_prove_unbalanced_triangle_fails_with_diagnosis():
    net = first_order_network(
        ["A", "B", "C"],
        [("A", "B", 1.0, 1.0), ("B", "C", 1.0, 1.0), ("C", "A", 1.0, 2.0)],
    )
    report = prove_fixed_proportion(build_rate_matrix(net), 0, 1)
    assert not report.verified
    assert isinstance(report.failing_coefficient, int)
    assert len(report.cycle_violations) == 1
    payload = report.to_dict()
    assert set(payload) == {
        "pair", "K_num", "K_den", "verified", "failing_coefficient",
        "cycle_violations",
    }
    assert payload["verified"] is False


def test_prove_requires_reversible_path():
    net = first_order_network(["A", "B"], [("A", "B", 1.0, 0.0)])
    with pytest.raises(NoReversiblePathError):
        prove_fixed_proportion(build_rate_matrix(net), 0, 1)


def test_path_equilibrium_constant_chain():
    net = first_order_network(
        ["A", "B", "C"], [("A", "B", 2.0, 1.0), ("B", "C", 3.0, 2.0)]
    )
    assert path_equilibrium_constant(net, 0, 2) == Fraction(3)
    assert path_equilibrium_constant(net, 2, 0) == Fraction(1, 3)
    assert path_equilibrium_constant(net, 1, 1) == Fraction(1)


def test_path_equilibrium_constant_detects_inconsistency():
    net = first_order_network(
        ["A", "B", "C"],
        [("A", "B", 1.0, 1.0), ("B", "C", 1.0, 1.0), ("C", "A", 1.0, 2.0)],
    )
    with pytest.raises(DetailedBalanceError):
        path_equilibrium_constant(net, 0, 1)
    # the non-strict variant settles for the shortest reversible path
    assert path_equilibrium_constant(net, 0, 1, require_consistent=False) == 1


def test_exact_balance_restores_cycle_condition():
    net = first_order_network(
        ["A", "B", "C"],
        [("A", "B", 1.0, 1.0), ("B", "C", 1.0, 1.0), ("C", "A", 1.0, 2.0)],
    )
    balanced = exact_balance(build_rate_matrix(net))
    assert exact_cycle_violations(balanced) == []
    cols = range(len(balanced))
    for j in cols:
        assert sum(balanced[i][j] for i in cols) == 0
    report = prove_fixed_proportion(balanced, 0, 2)
    assert report.verified


def test_exact_entries_preserves_float_rates():
    net = first_order_network(["A", "B"], [("A", "B", 0.1, 1.0)])
    entries = exact_entries(build_rate_matrix(net))
    # 0.1 is kept as the exact binary fraction actually simulated
    assert entries[1][0] == Fraction(0.1)
    assert entries[1][0] != Fraction(1, 10)
