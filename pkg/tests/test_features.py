import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_points, brute_force_select, random_sample
from sparsewalsh.core import ParityMask, SampleSet
from sparsewalsh.features import SelectionExhaustedError, rank_masks, select_features
from sparsewalsh.wht import parity_eval


def test_pure_parity_on_full_cube():
    pts = all_points(3)
    mask = ParityMask.from_indices([0, 1], 3)
    labels = [parity_eval(mask, x) for x in pts]
    sel = select_features(SampleSet(pts, labels), d=2, k=1)
    assert sel.masks == (mask,)
    assert sel.correlations.tolist() == [8]


def test_single_point_degeneracy():
    sample = SampleSet(np.array([[1, -1, 1]]), np.array([1]))
    sel = select_features(sample, d=1, k=1)
    # all four columns tie at |corr| = 1; enumeration order puts the empty mask first
    assert sel.masks == (ParityMask(0, 3),)
    with pytest.raises(SelectionExhaustedError):
        select_features(sample, d=1, k=2)


def test_matches_brute_force(rng):
    sample = random_sample(rng, 8, 60)
    got = select_features(sample, d=2, k=5).masks
    assert list(got) == brute_force_select(sample, 2, 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 30), st.integers(1, 6))
def test_matches_brute_force_small_samples(seed, ell, k):
    # small ell makes sign-duplicates common, exercising the dedup path
    rng = np.random.default_rng(seed)
    sample = random_sample(rng, 6, ell)
    try:
        expected = brute_force_select(sample, 2, k)
    except SelectionExhaustedError:
        with pytest.raises(SelectionExhaustedError):
            select_features(sample, 2, k)
        return
    assert list(select_features(sample, 2, k).masks) == expected


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_output_invariants(seed):
    rng = np.random.default_rng(seed)
    ell = int(rng.integers(5, 80))
    sample = random_sample(rng, 7, ell)
    d, k = 2, int(rng.integers(1, 8))
    try:
        sel = select_features(sample, d, k)
    except SelectionExhaustedError:
        return
    assert len(set(sel.masks)) == k
    assert all(m.weight <= d for m in sel.masks)
    A = sel.design_columns
    assert A.shape == (ell, k)
    for a in range(k):
        assert np.array_equal(A[:, a], [parity_eval(sel.masks[a], x) for x in sample.points])
        for b in range(a):
            assert not np.array_equal(A[:, a], A[:, b])
            assert not np.array_equal(A[:, a], -A[:, b])
    assert np.array_equal(sel.design_for(sample.points), A)


def test_admitted_dominate_later_rejections(rng):
    sample = random_sample(rng, 6, 4)
    sel = select_features(sample, d=3, k=6)
    ranked, corr = rank_masks(sample, 3)
    admitted = {m.bits for m in sel.masks}
    last = max(i for i, b in enumerate(ranked) if int(b) in admitted)
    rejected = [i for i in range(last + 1) if int(ranked[i]) not in admitted]
    assert rejected, "instance should contain sign-duplicates"
    for i in range(last + 1):
        if int(ranked[i]) in admitted:
            later = [j for j in rejected if j > i]
            assert all(abs(corr[i]) >= abs(corr[j]) for j in later)


def test_deterministic(rng):
    sample = random_sample(rng, 10, 200)
    a = select_features(sample, 3, 20).masks
    b = select_features(sample, 3, 20).masks
    assert a == b


def test_argument_checks(rng):
    sample = random_sample(rng, 4, 10)
    with pytest.raises(ValueError):
        select_features(sample, 2, 0)
    with pytest.raises(ValueError):
        select_features(sample, 5, 1)
