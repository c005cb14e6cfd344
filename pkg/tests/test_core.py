"""Template construction laws, shifts, and loose-sequence recognition."""

import itertools

import pytest

from ramsey_lab.core import (
    CYCLE,
    PATH,
    LooseTemplate,
    as_edge,
    cycle_template,
    endpoints,
    is_loose_sequence,
    path_template,
    shift,
)

import oracles as O


@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("n", range(1, 9))
def test_path_template_laws(k, n):
    t = path_template(k, n)
    assert t.kind == PATH and t.k == k and t.n == n
    assert t.n_vertices == n * (k - 1) + 1
    edges = t.edges
    assert len(edges) == n
    assert all(len(e) == k for e in edges)
    for i, j in itertools.combinations(range(n), 2):
        shared = set(edges[i]) & set(edges[j])
        assert len(shared) == (1 if j == i + 1 else 0)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("n", range(3, 9))
def test_cycle_template_laws(k, n):
    t = cycle_template(k, n)
    assert t.kind == CYCLE and t.n_vertices == n * (k - 1)
    edges = t.edges
    assert len(edges) == n
    for i, j in itertools.combinations(range(n), 2):
        shared = set(edges[i]) & set(edges[j])
        adjacent = (j == i + 1) or (i == 0 and j == n - 1)
        assert len(shared) == (1 if adjacent else 0)


@pytest.mark.parametrize("k,n", [(3, 2), (3, 5), (4, 3), (5, 4), (6, 3)])
def test_templates_match_oracle_layout(k, n):
    assert [tuple(e) for e in path_template(k, n).edges] == O.oracle_path_edges(k, n)
    if n >= 3:
        got = [tuple(sorted(e)) for e in cycle_template(k, n).edges]
        want = [tuple(sorted(e)) for e in O.oracle_cycle_edges(k, n)]
        assert got == want


def test_cycle_needs_three_edges():
    with pytest.raises(ValueError):
        cycle_template(3, 2)


def test_as_edge_validates():
    assert as_edge([3, 1, 2], k=3, n_vertices=5) == (1, 2, 3)
    with pytest.raises(ValueError):
        as_edge([1, 1, 2], k=3, n_vertices=5)
    with pytest.raises(ValueError):
        as_edge([1, 2, 9], k=3, n_vertices=5)
    with pytest.raises(ValueError):
        as_edge([1, 2], k=3, n_vertices=5)


def test_shift_wraps_one_based():
    assert shift([1], 1, 5) == (2,)
    assert shift([5], 1, 5) == (1,)
    assert shift([3], 10, 5) == (3,)
    assert shift([1], -1, 5) == (5,)
    assert shift([1, 2, 3], 2, 6) == (3, 4, 5)


def test_endpoints_path():
    t = path_template(3, 3)
    assert endpoints(t, 1).first == 1
    e3 = endpoints(t, 3)
    assert (e3.first, e3.last) == (5, 7)
    c = cycle_template(3, 3)
    e3 = endpoints(c, 3)
    assert (e3.first, e3.last) == (5, 1)


def test_is_loose_sequence_accepts_template():
    t = path_template(4, 3)
    assert is_loose_sequence([tuple(e) for e in t.edges], kind=PATH)
    c = cycle_template(4, 4)
    assert is_loose_sequence([tuple(e) for e in c.edges], kind=CYCLE)


def test_is_loose_sequence_rejects_bad_overlap():
    assert not is_loose_sequence([(1, 2, 3), (2, 3, 4)], kind=PATH)
    assert not is_loose_sequence([(1, 2, 3), (4, 5, 6)], kind=PATH)


def test_template_equality_and_hash():
    assert path_template(3, 4) == path_template(3, 4)
    assert path_template(3, 4) != cycle_template(3, 4)
    assert len({path_template(3, 4), path_template(3, 4)}) == 1
