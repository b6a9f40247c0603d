from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tenseig.oracle import naive_contract
from tenseig.tensor import (
    DenseSymmetricTensor,
    TensorFormatError,
    TensorSizeError,
    diagonal_tensor,
    identity_tensor,
    load_tensor,
    power_diff,
    qi_example,
    save_tensor,
    symmetrize,
    txr,
    txr1,
    txr2,
    txr_diff,
)

from conftest import random_tensor, random_unit, rel_err, seeds


def _perm_average(raw):
    # straight average over all r! index permutations, one tuple at a time
    r = raw.ndim
    out = np.zeros_like(raw)
    perms = list(permutations(range(r)))
    for idx in np.ndindex(*raw.shape):
        out[idx] = sum(raw[tuple(idx[p] for p in perm)] for perm in perms) / len(perms)
    return out


@given(seeds)
def test_symmetrize_matches_permutation_average(seed):
    raw = np.random.default_rng(seed).standard_normal((2, 2, 2, 2))
    np.testing.assert_allclose(symmetrize(raw).entries, _perm_average(raw), rtol=0, atol=1e-15)


@given(seeds)
def test_symmetrize_idempotent_and_preserves_txr(seed):
    t = random_tensor(seed, 3)
    again = symmetrize(t.entries)
    np.testing.assert_allclose(again.entries, t.entries, atol=1e-15)
    x = random_unit(seed + 1, 3)
    assert abs(txr(again, x) - txr(t, x)) <= 1e-12 * max(1.0, abs(txr(t, x)))


def test_txr_example1_unit_vector():
    assert txr(qi_example(0), np.array([1.0, 0.0])) == 3.0


def test_txr1_example1_eigenvector():
    x = np.array([0.5, np.sqrt(3) / 2])
    got = txr1(qi_example(0), x)
    np.testing.assert_allclose(got, [0.375, 3 * np.sqrt(3) / 8], rtol=1e-14)
    np.testing.assert_allclose(got, 0.75 * x, rtol=1e-14)


def test_txr2_example1_offdiagonal():
    m = txr2(qi_example(10), np.ones(2))
    assert m[0, 1] == pytest.approx(20.0, rel=1e-14)
    np.testing.assert_allclose(m, naive_contract(qi_example(10), np.ones(2), 2), rtol=1e-14)


@given(seeds, st.integers(min_value=1, max_value=4))
def test_contractions_match_full_summation(seed, n):
    t = random_tensor(seed, n)
    x = np.random.default_rng(seed + 7).standard_normal(n)
    assert rel_err(txr(t, x), naive_contract(t, x, 0)) <= 1e-12
    assert rel_err(txr1(t, x), naive_contract(t, x, 1)) <= 1e-12
    assert rel_err(txr2(t, x), naive_contract(t, x, 2)) <= 1e-12


@given(seeds, st.integers(min_value=1, max_value=5))
def test_contraction_chain(seed, n):
    t = random_tensor(seed, n)
    x = np.random.default_rng(seed + 1).standard_normal(n)
    a = txr(t, x)
    tol = 1e-12 * max(1.0, abs(a), float(np.abs(t.entries).sum()) * float(np.abs(x).max()) ** 4)
    assert abs(x @ txr1(t, x) - a) <= tol
    assert abs(x @ txr2(t, x) @ x - a) <= tol


@given(seeds, st.floats(min_value=-3, max_value=3, allow_nan=False))
def test_homogeneity(seed, c):
    t = random_tensor(seed, 3)
    x = random_unit(seed + 2, 3)
    assert txr(t, c * x) == pytest.approx(c**4 * txr(t, x), rel=1e-12, abs=1e-12)


@given(seeds)
def test_txr_diff_matches_difference(seed):
    t = random_tensor(seed, 3)
    x, y = random_unit(seed + 1, 3), random_unit(seed + 2, 3)
    assert txr_diff(t, x, y) == pytest.approx(txr(t, y) - txr(t, x), rel=1e-10, abs=1e-12)


def test_txr_diff_resolves_tiny_moves():
    t = random_tensor(3, 4)
    x = random_unit(4, 4)
    d = random_unit(5, 4)
    y = x + 1e-9 * d
    # first-order estimate is accurate to O(1e-18) here
    expected = 1e-9 * 4 * float(txr1(t, x) @ d)
    assert txr_diff(t, x, y) == pytest.approx(expected, rel=1e-6)


@given(seeds, st.sampled_from([2, 3, 4, 6]))
def test_power_diff(seed, k):
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal(5), rng.standard_normal(5)
    np.testing.assert_allclose(power_diff(x, y, k), y**k - x**k, rtol=1e-12, atol=1e-13)


def test_identity_and_diagonal():
    x = random_unit(0, 3)
    assert txr(identity_tensor(4, 3), x) == pytest.approx(float(np.sum(x**4)))
    d = diagonal_tensor(4, [3.0, 1.0])
    assert txr(d, np.array([1.0, 0.0])) == 3.0


def test_tensor_rejects_bad_input():
    with pytest.raises(ValueError):
        DenseSymmetricTensor(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        DenseSymmetricTensor(np.full((2, 2), np.nan))
    t = qi_example(0)
    with pytest.raises(ValueError):
        t.txr1(np.ones(3))
    with pytest.raises(ValueError):
        t.entries[0, 0, 0, 0] = 1.0


def test_roundtrip(tmp_path):
    t = random_tensor(11, 3)
    p = tmp_path / "t.tns"
    save_tensor(t, p)
    back = load_tensor(p)
    np.testing.assert_array_equal(back.entries, t.entries)


def test_load_symmetrizes_without_keyword(tmp_path):
    p = tmp_path / "t.tns"
    p.write_text("# comment\n4 2\n1 1 2 2 6.0\n")
    t = load_tensor(p)
    assert t.entries[1, 2 - 1, 0, 0] == pytest.approx(1.0)
    assert t.is_symmetric()


@pytest.mark.parametrize(
    "text, exc, match",
    [
        ("", TensorFormatError, "empty"),
        ("4\n", TensorFormatError, "header"),
        ("4 2 sym\n", TensorFormatError, "header"),
        ("4 2\n1 1 1 5.0\n", TensorFormatError, "expected 4 indices"),
        ("4 2\n1 1 1 3 5.0\n", TensorFormatError, "out of range"),
        ("4 2\n1 1 1 1 nan\n", TensorFormatError, "nonfinite"),
        ("4 2 symmetric\n1 1 2 2 5.0\n", TensorFormatError, "not symmetric"),
        ("4 100\n", TensorSizeError, "budget"),
    ],
)
def test_load_errors(tmp_path, text, exc, match):
    p = tmp_path / "bad.tns"
    p.write_text(text)
    with pytest.raises(exc, match=match):
        load_tensor(p)
