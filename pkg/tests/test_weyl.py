from fractions import Fraction as F
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import flow, flows
from cuspbound.flow import BlockComposition
from cuspbound.oracle import _canonical, enumerate_parabolics, expected_coset_count, random_flow
from cuspbound.weyl import (
    EnumerationLimitError,
    WeylElement,
    apply_transposition,
    apply_weyl,
    canonical_rep,
    enumerate_cosets,
    transposition,
    transposition_delta,
)

W = WeylElement


def test_apply_weyl_examples():
    a = flow(1, -1)
    assert apply_weyl(a, W.identity(2)) == a.entries
    assert apply_weyl(a, W((2, 1))) == (-1, 1)
    assert apply_weyl(flow(3, 1, -1, -3), W((3, 4, 1, 2))) == (-1, -3, 3, 1)
    with pytest.raises(ValueError):
        apply_weyl(a, W.identity(3))


def test_weyl_element_algebra():
    u, w = W((2, 3, 1)), W((3, 1, 2))
    a = flow(5, 1, -6)
    # right action: alpha^(u w) = (alpha^u)^w
    assert apply_weyl(a, u * w) == apply_weyl(apply_weyl(a, u), w)
    assert u * u.inverse() == W.identity(3)
    assert str(W.parse("3,1,2")) == "3,1,2"
    with pytest.raises(ValueError):
        W((1, 1, 2))


def test_transposition_swaps_values():
    assert transposition(2, 4) == W((1, 3, 2, 4))
    assert transposition(1, 3) * W((1, 2, 3)) == W((2, 1, 3))
    with pytest.raises(ValueError):
        transposition(3, 3)


def test_canonical_rep_examples():
    P = BlockComposition((1, 2))
    assert canonical_rep(P, flow(1, 0, -1), W((2, 3, 1))).rep == W((2, 1, 3))
    whole = BlockComposition.whole(3)
    reps = {canonical_rep(whole, flow(1, 0, -1), W(p)).rep for p in permutations((1, 2, 3))}
    assert reps == {W.identity(3)}
    c = canonical_rep(BlockComposition((2, 2)), flow(1, 1, -1, -1), W((2, 1, 4, 3)))
    assert c.rep == W.identity(4)


def test_enumerate_cosets_counts():
    P = BlockComposition((2, 2))
    assert len(enumerate_cosets(P, flow(3, 1, -1, -3))) == 6
    assert len(enumerate_cosets(P, flow(1, 1, -1, -1))) == 3
    assert len(enumerate_cosets(BlockComposition.whole(4), flow(3, 1, -1, -3))) == 1


def test_enumerate_cosets_limit():
    a = random_flow(9, 0)
    with pytest.raises(EnumerationLimitError):
        enumerate_cosets(BlockComposition.maximal(1, 9), a)
    with pytest.raises(EnumerationLimitError):
        enumerate_cosets(BlockComposition.maximal(1, 4), flow(3, 1, -1, -3), limit=3)


@settings(max_examples=40, deadline=None)
@given(flows(max_d=6, max_num=2, max_den=1), st.data())
def test_coset_count_matches_multiset_formula(a, data):
    P = data.draw(st.sampled_from(enumerate_parabolics(a.d)))
    assert len(enumerate_cosets(P, a)) == expected_coset_count(a, P)


@settings(max_examples=40, deadline=None)
@given(flows(max_d=6, max_num=2, max_den=1), st.data())
def test_canonical_rep_invariant_under_stabiliser_and_blocks(a, data):
    d = a.d
    P = data.draw(st.sampled_from(enumerate_parabolics(d)))
    w = W(tuple(data.draw(st.permutations(range(1, d + 1)))))
    base = canonical_rep(P, a, w)
    # stabiliser of alpha: permute indices carrying equal values
    stab = list(range(1, d + 1))
    for value in set(a.entries):
        idx = [i for i in range(1, d + 1) if a[i] == value]
        shuffled = data.draw(st.permutations(idx))
        for i, j in zip(idx, shuffled):
            stab[i - 1] = j
    # block-preserving permutation of positions
    block = []
    for r in P.ranges():
        block.extend(data.draw(st.permutations([i + 1 for i in r])))
    moved = W(tuple(stab[w.images[b - 1] - 1] for b in block))
    assert canonical_rep(P, a, moved) == base
    assert base == _canonical(P, a, w)


def test_transposition_delta_examples():
    a = flow(1, 0, -1)
    sigma = canonical_rep(BlockComposition.maximal(1, 3), a, W.identity(3))
    assert transposition_delta(1, sigma, 1) == (1, F(3, 2))
    b = flow(3, 1, -1, -3)
    ident = canonical_rep(BlockComposition.maximal(2, 4), b, W.identity(4))
    assert transposition_delta(2, ident, 2) == (2, 2)
    flat = flow(1, 1, -2)
    assert transposition_delta(1, canonical_rep(BlockComposition.maximal(1, 3), flat, W.identity(3)), 1) == (0, 0)


def test_transposition_delta_rejects_unsplit_values():
    b = flow(3, 1, -1, -3)
    sigma = canonical_rep(BlockComposition.maximal(2, 4), b, W((1, 3, 2, 4)))
    with pytest.raises(ValueError, match="position"):
        transposition_delta(2, sigma, 2)


def plane(k, sigma):
    beta = apply_weyl(sigma.flow, sigma.rep)
    d = len(beta)
    h = sum((beta[i] - beta[j] for i in range(d) for j in range(d)
             if (i < k or j >= k) and beta[i] > beta[j]), F(0))
    return sum(beta[:k]) / k - sum(beta[k:]) / (d - k), h


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_transposition_delta_exhaustive(d):
    for seed in range(3):
        a = random_flow(d, seed)
        for k in range(1, d):
            for sigma in enumerate_cosets(BlockComposition.maximal(k, d), a):
                before = plane(k, sigma)
                for n in range(1, d):
                    try:
                        dh, dpsi = transposition_delta(k, sigma, n)
                    except ValueError:
                        continue
                    after = plane(k, apply_transposition(sigma, n))
                    assert (before[1] - after[1], before[0] - after[0]) == (dh, dpsi)
