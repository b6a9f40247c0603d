import time

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from tenseig.hypergraph import (
    HypergraphFormatError,
    HypergraphTensor,
    Kind,
    UniformHypergraph,
    coo_entries,
    degrees,
    fcs_txr,
    fcs_txr1,
    fcs_txr2,
    fcs_txr_diff,
    generate_flower,
    generate_loose_cycle,
    load_hypergraph,
    materialize,
    naive_txr2,
    save_hypergraph,
)
from tenseig.oracle import naive_contract
from tenseig.tensor import txr, txr1, txr2

from conftest import rel_err, seeds

KINDS = list(Kind)

small_graphs = st.one_of(
    st.builds(generate_flower, st.integers(1, 3), st.just(4)),
    st.builds(generate_loose_cycle, st.just(4), st.integers(3, 4)),
    st.builds(generate_loose_cycle, st.just(2), st.integers(3, 8)),
)


def test_flower_degrees():
    g = generate_flower(4, 4)
    np.testing.assert_array_equal(g.edges[:2], [[1, 2, 3, 4], [1, 2, 5, 6]])
    np.testing.assert_array_equal(degrees(g), [4, 4] + [1] * 8)


@given(st.integers(1, 20))
def test_flower_hub_degree(p):
    g = generate_flower(p, 4)
    assert degrees(g)[0] == degrees(g)[1] == p


def test_loose_cycle_shape():
    g = generate_loose_cycle(4, 3)
    assert (g.n, g.m, g.r) == (9, 3, 4)
    d = degrees(g)
    counts = np.array([(g.edges == v).any(axis=1).sum() for v in range(1, 10)])
    np.testing.assert_array_equal(d, counts)
    assert sorted(d) == [1] * 6 + [2] * 3
    assert generate_loose_cycle(4, 6).n == 18


def test_single_edge_materialized():
    g = UniformHypergraph(4, np.array([[1, 2, 3, 4]]))
    a = materialize(HypergraphTensor(g)).entries
    nz = a[a != 0]
    assert nz.size == 24
    np.testing.assert_allclose(nz, 1 / 6)


def test_flower_all_ones():
    t = HypergraphTensor(generate_flower(4, 4))
    x = np.ones(t.dim)
    dense = materialize(t)
    assert naive_contract(dense, x, 0) == pytest.approx(16.0)
    assert fcs_txr(t, x) == pytest.approx(16.0)
    np.testing.assert_allclose(fcs_txr1(t, x), degrees(t.graph))
    m = fcs_txr2(t, x)
    assert m[2, 3] == pytest.approx(1 / 3, rel=1e-14)
    assert naive_contract(dense, x, 2)[2, 3] == pytest.approx(1 / 3, rel=1e-14)


@given(small_graphs, st.sampled_from(KINDS), seeds)
def test_fcs_matches_materialized(g, kind, seed):
    t = HypergraphTensor(g, kind)
    dense = materialize(t)
    for x in np.random.default_rng(seed).standard_normal((20, g.n)):
        assert rel_err(fcs_txr(t, x), txr(dense, x)) <= 1e-12
        assert rel_err(fcs_txr1(t, x), txr1(dense, x)) <= 1e-12
        assert rel_err(fcs_txr2(t, x), txr2(dense, x)) <= 1e-12


@given(small_graphs, st.sampled_from(KINDS), seeds)
def test_contraction_chain(g, kind, seed):
    t = HypergraphTensor(g, kind)
    x = np.random.default_rng(seed).standard_normal(g.n)
    a1 = fcs_txr1(t, x)
    np.testing.assert_allclose(fcs_txr2(t, x) @ x, a1, rtol=1e-12, atol=1e-12)
    assert x @ a1 == pytest.approx(fcs_txr(t, x), rel=1e-12, abs=1e-12)


@given(small_graphs, seeds)
def test_kind_linearity(g, seed):
    x = np.random.default_rng(seed).standard_normal(g.n)
    lap = fcs_txr(HypergraphTensor(g, Kind.LAPLACIAN), x)
    sig = fcs_txr(HypergraphTensor(g, Kind.SIGNLESS), x)
    deg = fcs_txr(HypergraphTensor(g, Kind.DEGREE), x)
    assert lap + sig == pytest.approx(2 * deg, rel=1e-12, abs=1e-12)


@given(small_graphs, st.sampled_from(KINDS), seeds)
def test_txr2_exactly_symmetric(g, kind, seed):
    x = np.random.default_rng(seed).standard_normal(g.n)
    m = fcs_txr2(HypergraphTensor(g, kind), x)
    assert np.array_equal(m, m.T)
    s = fcs_txr2(HypergraphTensor(g, kind), x, sparse=True)
    assert (s != s.T).nnz == 0


@given(small_graphs, st.sampled_from(KINDS), seeds)
def test_txr_diff(g, kind, seed):
    t = HypergraphTensor(g, kind)
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal(g.n), rng.standard_normal(g.n)
    assert fcs_txr_diff(t, x, y) == pytest.approx(fcs_txr(t, y) - fcs_txr(t, x), rel=1e-10, abs=1e-12)


def test_negation_and_scale():
    g = generate_loose_cycle(4, 3)
    t = HypergraphTensor(g, Kind.SIGNLESS)
    x = np.random.default_rng(0).standard_normal(g.n)
    assert (-t).txr(x) == -t.txr(x)
    np.testing.assert_array_equal((-t).txr2(x), -t.txr2(x))


def test_sparse_output_above_threshold():
    g = generate_flower(300, 4)
    assert g.n > 500
    m = fcs_txr2(HypergraphTensor(g, Kind.LAPLACIAN), np.ones(g.n))
    assert sp.issparse(m)


@given(st.sampled_from(KINDS))
def test_coo_entries_agree_with_materialize(kind):
    t = HypergraphTensor(generate_flower(2, 4), kind)
    idx, vals = coo_entries(t)
    a = np.zeros((t.dim,) * 4)
    np.add.at(a, tuple(idx.T), vals)
    np.testing.assert_allclose(a, materialize(t).entries, atol=1e-15)


@pytest.mark.parametrize("kind", KINDS)
def test_naive_txr2_streamed_path(kind):
    # n = 60 forces the slab-by-slab path (60^4 > budget)
    t = HypergraphTensor(generate_loose_cycle(4, 20), kind)
    x = np.random.default_rng(1).standard_normal(t.dim)
    assert rel_err(naive_txr2(t, x), fcs_txr2(t, x)) <= 1e-12
    small = HypergraphTensor(generate_flower(4, 4), kind)
    y = np.random.default_rng(2).standard_normal(small.dim)
    assert rel_err(naive_txr2(small, y), fcs_txr2(small, y)) <= 1e-12


def test_fcs_time_grows_with_edges():
    # soft check: ten times the edges should not be cheaper
    x_small, x_big = np.ones(2002), np.ones(20002)
    t_small = HypergraphTensor(generate_flower(1000, 4))
    t_big = HypergraphTensor(generate_flower(10000, 4))

    def best(t, x):
        out = []
        for _ in range(3):
            t0 = time.perf_counter()
            fcs_txr2(t, x)
            out.append(time.perf_counter() - t0)
        return min(out)

    assert best(t_big, x_big) >= 0.5 * best(t_small, x_small)


def test_roundtrip(tmp_path):
    g = generate_loose_cycle(4, 5)
    p = tmp_path / "g.hg"
    save_hypergraph(g, p)
    back = load_hypergraph(p)
    assert back.n == g.n
    np.testing.assert_array_equal(back.edges, g.edges)


@pytest.mark.parametrize(
    "text, match",
    [
        ("", "empty"),
        ("6 4\n", "header"),
        ("6 4 2\n1 2 3 4\n", "announces 2 edges"),
        ("6 4 1\n1 2 3\n", "expected 4"),
        ("6 4 1\n1 2 3 x\n", "edge line"),
        ("6 4 1\n1 2 3 9\n", "1..6"),
        ("6 4 1\n1 2 3 3\n", "repeats"),
        ("6 4 2\n1 2 3 4\n4 3 2 1\n", "duplicate"),
    ],
)
def test_load_errors(tmp_path, text, match):
    p = tmp_path / "bad.hg"
    p.write_text(text)
    with pytest.raises(HypergraphFormatError, match=match):
        load_hypergraph(p)


def test_generator_arguments():
    with pytest.raises(ValueError):
        generate_loose_cycle(4, 2)
    with pytest.raises(ValueError):
        generate_flower(0, 4)
