import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from conftest import dense_hadamard
from sparsewalsh.theory import (
    BoundParams,
    class_size_upper_bound,
    hadamard_matrix,
    sample_class_size,
    shattering_labelings,
    verify_shattering_construction,
    vc_bound_term,
)


def test_bound_hand_value():
    # sqrt((1 * (ln 4 + 1) - ln(1/4)) / 2)
    expected = math.sqrt((math.log(4) + 1 + math.log(4)) / 2)
    assert vc_bound_term(BoundParams(1, 2, 1.0)) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1.3734, abs=1e-4)


def test_bound_decreases_with_more_samples():
    h, eta = 10, 0.05
    for ell in (20, 100, 1000):
        assert vc_bound_term(BoundParams(h, 4 * ell, eta)) < vc_bound_term(BoundParams(h, ell, eta))


def test_bound_param_validation():
    with pytest.raises(ValueError):
        BoundParams(0, 10, 0.1)
    with pytest.raises(ValueError):
        BoundParams(1, 0, 0.1)
    with pytest.raises(ValueError):
        BoundParams(1, 10, 0.0)
    with pytest.warns(UserWarning):
        BoundParams(100, 10, 0.1)


def test_bound_nonpositive_radicand_reported():
    # h far above ell makes h (ln(2 ell / h) + 1) dominate negatively
    with pytest.warns(UserWarning), pytest.raises(ValueError, match="radicand"):
        vc_bound_term(BoundParams(1e6, 1, 1.0))


H_GRID = np.linspace(1, 200, 20)
ELL_GRID = np.linspace(200, 20000, 20).astype(int)


def test_bound_monotone_on_grid():
    vals = np.array([[vc_bound_term(BoundParams(h, int(ell), 0.05)) for ell in ELL_GRID]
                     for h in H_GRID])
    assert np.all(np.diff(vals, axis=1) <= 0)  # nonincreasing in ell
    assert np.all(np.diff(vals, axis=0) >= 0)  # nondecreasing in h


@given(st.floats(1, 500), st.integers(1, 10**6), st.floats(1e-6, 1.0))
def test_bound_monotone_in_ell(h, ell, eta):
    if ell < h:
        return
    a = vc_bound_term(BoundParams(h, ell, eta))
    b = vc_bound_term(BoundParams(h, ell + 1, eta))
    assert b <= a


def test_hadamard_matrix_matches_definition():
    for n in range(1, 5):
        assert np.array_equal(hadamard_matrix(n), dense_hadamard(n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_shattering_construction(n):
    assert verify_shattering_construction(n)
    assert shattering_labelings(n) == (1 << n, 1 << n)


def brute_force_shattering(n):
    """Enumerate parities on the points e_i directly, without any matrix."""
    points = [tuple(-1 if j == i else 1 for j in range(n)) for i in range(n)]
    seen = set()
    for u in range(1 << n):
        seen.add(tuple(math.prod(x[j] for j in range(n) if u >> j & 1) for x in points))
    return len(seen)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_shattering_matches_direct_enumeration(n):
    assert brute_force_shattering(n) == shattering_labelings(n)[0]


def exhaustive_class_size(n, k):
    """Count sign patterns strictly realizable by some z supported on k columns (LP per pattern)."""
    W = hadamard_matrix(n).astype(float)
    size = 1 << n
    hit = set()
    for support in itertools.combinations(range(size), k):
        WK = W[:, support]
        for s in itertools.product([1, -1], repeat=size):
            s = np.array(s)
            res = linprog(np.zeros(k), A_ub=-(s[:, None] * WK), b_ub=-np.ones(size),
                          bounds=(None, None), method="highs")
            if res.status == 0:
                hit.add(tuple(s))
    return len(hit)


@pytest.mark.parametrize("k, expected", [(1, 8), (2, 8), (3, 16), (4, 16)])
def test_class_size_matches_exhaustive_oracle_n2(k, expected):
    assert exhaustive_class_size(2, k) == expected
    assert sample_class_size(2, k, trials=3000, seed=1) == expected


def test_class_size_one_sparse_signed_columns():
    assert sample_class_size(2, 1, trials=500) == 8


@pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 3)])
def test_class_size_upper_bounds(n, k):
    count = sample_class_size(n, k, trials=2000, seed=3)
    assert count <= class_size_upper_bound(n, k)
    assert math.log2(count) <= 2 * n * k


def test_class_size_seeded():
    assert sample_class_size(3, 2, 500, seed=9) == sample_class_size(3, 2, 500, seed=9)
    with pytest.raises(ValueError):
        sample_class_size(2, 5, 10)
