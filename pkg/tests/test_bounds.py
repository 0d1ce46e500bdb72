import random
from fractions import Fraction as F
from itertools import permutations
from math import floor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flow, flows
from cuspbound.bounds import (
    admissible_m,
    borel_bound,
    borel_functional,
    bound_report,
    c_coefficient,
    chebyshev_sum_check,
    check_c_properties,
    compute_m_k,
    delta_prop_inequalities,
    delta_weights,
    dominating_maximal_parabolic,
    eq_bound,
    maximal_parabolic_bound,
    maximal_parabolic_coefficient,
    phi_all,
    phi_all_coefficients,
    phi_all_restriction,
    positive_part_dominance_check,
    tangent_coset,
    v_sequence,
    v_sequence_sum,
    valid_m,
    whole_cusp_bound,
)
from cuspbound.flow import BlockComposition, LinearFunctional, penalized_entropy, total_entropy
from cuspbound.oracle import brute_max, point_cloud, random_flow
from cuspbound.weyl import apply_weyl


def test_borel_examples():
    assert borel_bound(flow(1, -1)) == 1
    assert borel_bound(flow(1, 0, -1)) == 2
    assert borel_bound(flow(0, 0, 0)) == 0
    assert borel_functional(4).coefficients == (F(3, 2), F(1, 2), F(-1, 2), F(-3, 2))


@settings(max_examples=30, deadline=None)
@given(flows(max_d=5))
def test_borel_identity_on_every_permutation(a):
    B = BlockComposition.borel(a.d)
    phi = borel_functional(a.d)
    half = total_entropy(a) / 2
    for p in permutations(a.entries):
        assert penalized_entropy(B, p, phi) == half


def test_compute_m_k_examples():
    assert compute_m_k(1, flow(1, 1, -2)) == 2
    assert compute_m_k(2, flow(3, 1, -1, -3)) == 1
    assert compute_m_k(1, flow(1, -1)) == 1
    assert compute_m_k(1, flow(0, 0, 0)) == 1


@given(flows())
def test_m_1_counts_positive_entries(a):
    if not a.is_zero:
        assert compute_m_k(1, a) == sum(1 for x in a.entries if x > 0)


def test_maximal_parabolic_bound_examples():
    assert maximal_parabolic_bound(1, flow(1, -1)) == 1
    assert maximal_parabolic_bound(1, flow(1, 0, -1)) == 3
    assert maximal_parabolic_bound(2, flow(1, 0, -1)) == 3
    a = flow(3, 1, -1, -3)
    assert maximal_parabolic_bound(2, a) == 14
    assert eq_bound(2, a, 1) == 20 - 2 * 3 - 1 * (1 + (-1))
    with pytest.raises(ValueError):
        maximal_parabolic_bound(4, a)


@settings(max_examples=40, deadline=None)
@given(flows(min_d=2, max_d=6))
def test_maximal_bound_is_exhaustive_max(a):
    d = a.d
    for k in range(1, d):
        C = maximal_parabolic_coefficient(k, a)
        phi = LinearFunctional.simple_root(k, d).scale(C)
        best, _ = brute_max(a, phi, [BlockComposition.maximal(k, d)])
        assert best == maximal_parabolic_bound(k, a)


@settings(max_examples=40, deadline=None)
@given(flows(min_d=3, max_d=6))
def test_every_admissible_m_gives_same_value(a):
    for k in range(1, a.d // 2 + 1):
        values = {eq_bound(k, a, m) for m in admissible_m(k, a)}
        assert values == {maximal_parabolic_bound(k, a)}
        pts = point_cloud(k, a)
        for m in admissible_m(k, a):
            c = maximal_parabolic_coefficient(k, a, m)
            assert max(y - c * x for x, y in pts) == maximal_parabolic_bound(k, a)


@given(flows(min_d=2, max_d=8))
def test_structural_properties(a):
    d = a.d
    b = [None] + [maximal_parabolic_bound(k, a) for k in range(1, d)]
    for k in range(1, d):
        assert b[k] == b[d - k]
    for k in range(1, d // 2):
        assert b[k] >= b[k + 1]
    if d >= 3:
        assert b[1] == whole_cusp_bound(a)
    else:
        assert b[1] == borel_bound(a) == total_entropy(a) / 2


def test_whole_cusp_examples():
    assert whole_cusp_bound(flow(1, 1, -2)) == 4
    assert whole_cusp_bound(flow(0, 0, 0)) == 0
    assert whole_cusp_bound(flow(1, 0, -1)) == 3


def test_phi_all_examples():
    assert phi_all_coefficients(4, 2) == (F(3, 2), F(-3, 2))
    assert phi_all_coefficients(3, 1) == (0, -2)
    assert phi_all_restriction(4, 1, 2) == F(3, 2)
    phi = phi_all(flow(3, 1, -1, -3), 2)
    assert phi.coefficients == (F(3, 2), 0, 0, F(-3, 2))
    with pytest.raises(ValueError):
        phi_all(flow(1, -1))
    with pytest.raises(ValueError):
        phi_all(flow(3, 1, -1, -3), 3)


@pytest.mark.parametrize("d", range(3, 10))
def test_phi_all_restriction_identity(d):
    # phi_all restricted to the (k, d-k) Levi centre equals the stated multiple of psi_k
    for m in range(1, d):
        z1, zd = phi_all_coefficients(d, m)
        for k in range(1, d):
            P = BlockComposition.maximal(k, d)
            beta = [F(d - k)] * k + [F(-k)] * (d - k)
            value = z1 * beta[0] + zd * beta[-1]
            psi = F(d - k) + k
            assert value == phi_all_restriction(d, k, m) * psi
            if 2 <= k <= d // 2:
                assert phi_all_restriction(d, k, m) == c_coefficient(d, k, m) * F(k * (d - k), d)


def test_c_coefficient_examples():
    assert c_coefficient(4, 2, 2) == F(3, 2)
    assert c_coefficient(6, 2, 3) == F(15, 8)
    assert c_coefficient(6, 3, 1) == F(5, 3)
    for args in [(4, 2, 2), (6, 2, 3), (6, 3, 1)]:
        assert check_c_properties(*args) == (True, True, True, True)


def test_c_properties_exhaustive():
    for d in range(4, 13):
        for k in range(2, d // 2 + 1):
            for m in range(1, d):
                assert all(check_c_properties(d, k, m)), (d, k, m)
                c = c_coefficient(d, k, m)
                assert 1 <= floor(c) <= d - k - 1


def _dominates(Q, a, phi):
    P = dominating_maximal_parabolic(Q, a, phi).parabolic
    for p in permutations(a.entries):
        k = P.blocks[0]
        q_val = penalized_entropy(Q, p, phi)
        p_beta = sorted(p[:k], reverse=True) + sorted(p[k:], reverse=True)
        if q_val > penalized_entropy(P, p_beta, phi):
            return False
    return True


@pytest.mark.parametrize("blocks,expected", [((1, 2, 1), (1, 3)), ((2, 1, 1), (3, 1)), ((1, 1, 1, 1), (1, 3))])
def test_domination_examples(blocks, expected):
    a = flow(3, 1, -1, -3)
    phi = phi_all(a, 2)
    dom = dominating_maximal_parabolic(BlockComposition(blocks), a, phi)
    assert dom.parabolic.blocks == expected
    assert dom.coefficient_ok
    assert _dominates(BlockComposition(blocks), a, phi)


def test_domination_rejects_whole_group():
    a = flow(3, 1, -1, -3)
    with pytest.raises(ValueError):
        dominating_maximal_parabolic(BlockComposition.whole(4), a, phi_all(a, 2))


def test_delta_examples():
    a = flow(3, 1, -1, -3)
    assert delta_prop_inequalities(2, a, 2) == 1
    assert delta_prop_inequalities(2, flow(0, 0, 0, 0), 1) == 0


def test_delta_random_triples():
    rng = random.Random(2024)
    done = 0
    while done < 200:
        d = rng.randint(4, 7)
        a = random_flow(d, rng.randrange(10**9))
        ms = [m for m in range(1, d) if valid_m(a, m)]
        k = rng.randint(2, d // 2)
        m = rng.choice(ms)
        delta = delta_prop_inequalities(k, a, m)
        best, _ = brute_max(a, phi_all(a, m), [BlockComposition.maximal(k, d)])
        assert delta >= 0
        assert delta == whole_cusp_bound(a) - best
        weights, _, _, _ = delta_weights(k, d, m)
        assert sum(w * a[i] for i, w in enumerate(weights, start=1)) - a.positive_sum() == delta
        t = tangent_coset(k, a, m)
        phi = phi_all(a, m)
        assert penalized_entropy(t.parabolic, apply_weyl(a, t.rep), phi) == best
        done += 1


def test_chebyshev_examples():
    assert chebyshev_sum_check([1, 0], [1, 0])
    assert chebyshev_sum_check([3, 1], [2, 0])
    assert chebyshev_sum_check([2, 2, 2], [5, 5, 5])
    with pytest.raises(ValueError):
        chebyshev_sum_check([0, 1], [1, 0])


def test_chebyshev_random_pairs():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randint(1, 8)
        x = sorted((F(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)), reverse=True)
        y = sorted((F(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)), reverse=True)
        assert chebyshev_sum_check(x, y)


def test_v_sequence_examples():
    assert v_sequence(1, 3, F(1, 2)) == ((2, F(3, 2), 1, F(1, 2)), 5)
    assert v_sequence(2, 2, 0) == ((1, 1, 1, 0), 3)
    for s in range(1, 10):
        assert v_sequence_sum(s, 2, 0) == 1 + s
    with pytest.raises(ValueError):
        v_sequence(0, 2, 0)


@pytest.mark.parametrize("kappa", [F(0), F(1, 3), F(1, 2), F(9, 10)])
def test_v_sequence_closed_form_grid(kappa):
    for s in range(1, 21):
        for t in range(2, 21):
            values, total = v_sequence(s, t, kappa)
            assert total == sum(values)
            assert values[-1] == kappa and values[-2] == 1


def test_positive_part_dominance_examples():
    assert positive_part_dominance_check([2, 1], 3, flow(1, 1, 1, -3))
    assert positive_part_dominance_check([2, 1], 2, flow(0, 0, 0))
    with pytest.raises(ValueError):
        positive_part_dominance_check([F(1, 2), F(1, 2)], 3, flow(1, 1, 1, -3))


@settings(max_examples=60, deadline=None)
@given(flows(min_d=3, max_d=7), st.data())
def test_positive_part_dominance_under_hypotheses(a, data):
    d = a.d
    m = data.draw(st.sampled_from([m for m in range(1, d) if valid_m(a, m)]))
    n = data.draw(st.integers(1, d))
    v = sorted(data.draw(st.lists(st.fractions(0, 6, max_denominator=3), min_size=n, max_size=n)), reverse=True)
    try:
        ok = positive_part_dominance_check(v, m, a)
    except ValueError:
        return
    assert ok


def test_bound_report_fixture():
    r = bound_report(flow(1, 0, -1))
    assert r.total == 4 and r.borel_bound == 2 and r.whole_cusp_bound == 3
    assert {k: b.bound for k, b in r.per_k.items()} == {1: 3, 2: 3}
    assert r.phi_all_m == 1 and not r.degenerate
    z = bound_report(flow(0, 0, 0))
    assert z.degenerate and z.whole_cusp_bound == 0
    two = bound_report(flow(1, -1))
    assert two.phi_all is None and two.whole_cusp_bound == two.borel_bound == 1
