import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpcfabric.topology import (
    NodeGrid,
    NodeId,
    all_to_all_links,
    length_histogram,
    manhattan_length,
    perfect_shuffle,
)

from .oracles import brute_force_histogram

# frozen from the brute-force oracle
SIX_BY_SIX = {10: 120, 20: 196, 30: 232, 40: 232, 50: 200, 60: 140, 70: 80, 80: 40, 90: 16, 100: 4}


def test_six_by_six_histogram():
    h = length_histogram(NodeGrid(6, 6, 10.0))
    assert h.total == 1260
    assert h.bins == SIX_BY_SIX
    assert h.max_length_cm == 100
    assert h.count_at_least(100) == 4


def test_small_grids():
    assert length_histogram(NodeGrid(2, 2, 10.0)).bins == {10: 8, 20: 4}
    assert length_histogram(NodeGrid(3, 1, 5.0)).bins == {5: 4, 10: 2}


def test_single_node_has_no_links():
    h = length_histogram(NodeGrid(1, 1))
    assert h.total == 0 and h.bins == {}
    assert h.max_length_cm == 0.0


def test_grid_properties():
    g = NodeGrid(6, 6, 10.0)
    assert g.node_count == 36
    assert g.link_count == 1260
    assert g.diameter_cm == 100
    assert g.contains(NodeId(5, 5)) and not g.contains(NodeId(6, 0))
    assert manhattan_length(NodeId(0, 0), NodeId(5, 5), 10.0) == 100


@pytest.mark.parametrize("rows, cols, pitch", [(0, 3, 1.0), (3, -1, 1.0), (2, 2, 0.0)])
def test_grid_rejects_bad_dimensions(rows, cols, pitch):
    with pytest.raises(ValueError):
        NodeGrid(rows, cols, pitch)


def test_links_are_ordered_pairs():
    links = all_to_all_links(NodeGrid(3, 2, 10.0))
    assert len(links) == 30
    pairs = {(l.src, l.dst) for l in links}
    assert len(pairs) == 30
    assert all((l.dst, l.src) in pairs for l in links)


@given(st.integers(1, 7), st.integers(1, 7), st.sampled_from([1.0, 2.5, 10.0]))
def test_histogram_matches_oracle(rows, cols, pitch):
    h = length_histogram(NodeGrid(rows, cols, pitch))
    assert h.bins == brute_force_histogram(rows, cols, pitch)
    n = rows * cols
    assert h.total == n * (n - 1) == sum(h.bins.values())


def test_perfect_shuffle_routes_transpose():
    s = perfect_shuffle(4)
    assert s.lanes == 4
    assert len(set(s.mapping.values())) == 16
    assert s.route(1, 2) == (2, 1)
    for (i, k), (j, m) in s.mapping.items():
        assert (j, m) == (k, i)
    with pytest.raises(IndexError):
        s.route(4, 0)
