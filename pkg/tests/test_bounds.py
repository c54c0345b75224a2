import math

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from densitylab import bounds as B

mp.mp.dps = 50


def rel(a, b):
    return abs(a - float(b)) <= 1e-12 * max(1.0, abs(float(b)))


def test_alpha_examples():
    assert B.alpha(1 - 1 / math.e) == 1.0
    assert rel(B.alpha(0.5), 1 / mp.log(2))
    assert abs(B.alpha(0.5) - 1.442695) < 1e-6
    with pytest.raises(ValueError):
        B.alpha(1.0)
    with pytest.raises(ValueError):
        B.alpha(0.0)


@given(st.floats(1e-6, 1 - 1e-9))
def test_alpha_le_inverse_C_and_matches_mpmath(C):
    a = B.alpha(C)
    assert a <= 1 / C
    assert rel(a, 1 / mp.log(1 / (1 - mp.mpf(C))))


def test_min_K_min_A():
    assert B.min_K(1) == 3000 and B.min_A(1) == 3000
    assert B.min_K(0.5) == 96000
    assert B.min_A(0.5) == 48000


@pytest.mark.parametrize("C", [k / 20 for k in range(1, 21)])
def test_side_conditions_grid(C):
    sc = B.side_conditions(C)
    assert sc.holds
    if C < 1:
        A = mp.mpf(3000) / mp.mpf(C) ** 4
        term = (1 / mp.log(1 / (1 - mp.mpf(C)))) * mp.log(7 * A / (6 * mp.mpf(C)))
        assert 2 * term <= A / 8 and 4 * term <= mp.sqrt(A)


def test_geometric_deficit():
    exact = 1 / (1 - mp.sqrt(mp.mpf(6) / 7))
    assert abs(B.GEOMETRIC_DEFICIT - exact) < 1e-12
    assert abs(B.GEOMETRIC_DEFICIT - 13.4807) < 1e-4
    assert B.GEOMETRIC_DEFICIT < 14


@pytest.mark.parametrize("A", [10.0**k for k in range(1, 7)])
def test_bootstrap_indexings(A):
    beta = 0.7
    res = B.bootstrap_beta(beta, A)
    assert abs((beta - res.lemma_infimum) - res.lemma_limit_deficit) < 1e-9
    assert abs((beta - res.display_infimum) - res.display_limit_deficit) < 1e-9
    assert res.lemma_holds
    assert res.lemma_infimum >= beta - 14 / math.sqrt(A)
    # the display indexing overshoots 14/sqrt(A) slightly
    assert not res.display_holds
    # high-precision reference for the lemma-scale partial sum
    ref = beta - mp.nsum(lambda j: 1 / mp.sqrt(A * (mp.mpf(7) / 6) ** j), [0, 500])
    assert rel(res.lemma_infimum, ref)


def test_bootstrap_limit_and_assembly():
    small = B.bootstrap_beta(0.5, 1e12, 50)
    assert 0.5 - small.lemma_infimum < 1e-4
    C = 0.5
    assert rel(B.assembly_term(C), 14 / mp.sqrt(mp.mpf(3000) / mp.mpf(C) ** 4))
    res = B.bootstrap_beta(1 - 2 * 0.1 - 0.05 / 2, B.min_A(C))
    assert rel(res.beta - res.stated_floor, B.assembly_term(C))


def test_delta_bound():
    assert B.delta_bound(100, 0.25, 0) == 4800
    assert B.delta_bound(30, 0, 0) == 360
    with pytest.raises(ValueError):
        B.delta_bound(10, 0.5, 0)
    ds = [k / 100 for k in range(0, 47)]
    vals = [B.delta_bound(50, d, 0.05) for d in ds]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_greendlinger_thresholds():
    assert B.greendlinger_threshold(40, 0.2, 0) == 20
    assert B.greendlinger_threshold(100, 0.1, 0) == 75
    for ell in (10, 37, 100):
        for d in (0.0, 0.05, 0.13):
            assert rel(B.greendlinger_threshold(ell, d, 0), ell * (1 - 2.5 * d))
    assert rel(B.weak_greendlinger_threshold(100, 0.1, 0.01), 74)


def test_counterexample_margin():
    m = B.counterexample_margin(1000, 0.25, 0.001, 0.001)
    assert m.positive
    assert rel(m.lhs, 6 * 0.5 * 1000 + 8 - 2)
    assert rel(m.rhs, 7 * 0.499 * 1000)
    for d in (0.1, 0.3, 0.45):
        tiny = B.counterexample_margin(200, d, 0, 0)
        assert rel(tiny.gap, (1 - 2 * d) * 200 + 2)
    # the gap vanishes at eps_star and changes sign around it
    m = B.counterexample_margin(60, 0.25, 0.0, 0.01)
    at = B.counterexample_margin(60, 0.25, m.eps_star, 0.01)
    assert abs(at.gap) < 1e-9
    assert B.counterexample_margin(60, 0.25, m.eps_star - 0.01, 0.01).gap > 0
    assert B.counterexample_margin(60, 0.25, m.eps_star + 0.01, 0.01).gap < 0
    with pytest.raises(ValueError):
        B.counterexample_margin(60, 0, 0.1, 0.1)


def test_bounds_table_names():
    names = [n for n, _ in B.bounds_table(0.5, 0.1, 0.05, 100)]
    assert "alpha" in names and "delta_bound" in names and "counterexample_gap" in names
    assert dict(B.bounds_table(1.0, 0.1, 0.05, 100))["alpha"] == 0.0
