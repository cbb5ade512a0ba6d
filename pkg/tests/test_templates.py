import itertools
import json
from collections import Counter

import pytest

from hyperquasi import (
    are_isomorphic,
    build_cycle,
    build_cycle4_direct,
    build_partial_step,
    build_path,
    build_step,
    complete_hypergraph,
    gen_random,
    is_pi_linear,
    new_hypergraph,
    proper_partitions,
    single_edge,
)
from hyperquasi.partitions import as_partition, is_refinement
from hyperquasi.templates import CapExceeded, check_linearity_witness, export_template

from conftest import cycle_graph


@pytest.mark.parametrize("pi,nv,ne", [((1, 1), 3, 2), ((1, 1, 1), 8, 4), ((3, 2), 8, 2)])
def test_step_sizes(pi, nv, ne):
    s = build_step(pi)
    assert (s.num_vertices, len(s.edges)) == (nv, ne)


def test_step_32_blocks():
    s = build_step((3, 2))
    assert len(s.block("A")) == 6 and len(s.block("B2")) == 2


@pytest.mark.parametrize("pi", [(1, 1), (1, 2), (2, 1), (1, 1, 1), (2, 1, 1), (1, 1, 1, 1), (3, 2)])
def test_step_structure(pi):
    s = build_step(pi)
    pi = as_partition(pi)
    for e in s.edges:
        parts = Counter(s.labels[v].part for v in e)
        assert parts["A"] == pi[0]
        for j in range(2, pi.t + 1):
            assert parts[f"B{j}"] == pi[j - 1]
    a0, a1 = s.attach
    assert len(a0) == len(a1) == pi[0] * 2 ** (pi.t - 2)
    assert all(s.labels[v].code.endswith("0") for v in a0)
    assert all(s.labels[v].code.endswith("1") for v in a1)
    assert [s.labels[v][1:3] for v in a0] == sorted(s.labels[v][1:3] for v in a0)


def test_paths():
    p = build_path((1, 1), 2)
    assert (p.num_vertices, len(p.edges)) == (5, 4)
    assert are_isomorphic(p.hypergraph, new_hypergraph(2, 5, [(0, 1), (1, 2), (2, 3), (3, 4)]))[0]
    p3 = build_path((1, 1, 1), 2)
    assert (p3.num_vertices, len(p3.edges)) == (14, 8)
    one = build_path((1, 1), 1)
    assert one.edges == build_step((1, 1)).edges


@pytest.mark.parametrize("pi", [(1, 1), (1, 2), (1, 1, 1), (2, 2), (1, 1, 2)])
@pytest.mark.parametrize("ell", [1, 2, 3])
def test_path_edge_count(pi, ell):
    p = build_path(pi, ell)
    assert len(p.edges) == ell * 2 ** (len(pi) - 1)
    step = build_step(pi)
    overlap = len(step.attach[0])
    assert p.num_vertices == ell * step.num_vertices - (ell - 1) * overlap


def test_cycles():
    c = build_cycle("1+1", 2)
    assert are_isomorphic(c.hypergraph, cycle_graph(4))[0]
    c3 = build_cycle("1+1+1", 2)
    assert (c3.num_vertices, len(c3.edges)) == (12, 8)
    c12 = build_cycle("1+2", 2)
    assert (c12.num_vertices, len(c12.edges)) == (6, 4)
    with pytest.raises(ValueError):
        build_cycle("1+1", 1)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_cycles_two_regular(k):
    for pi in proper_partitions(k):
        for ell in (2, 3):
            c = build_cycle(pi, ell)
            deg = Counter(v for e in c.edges for v in e)
            assert set(deg.values()) == {2}
            assert c.num_vertices == len(c.edges) * k // 2


def test_direct_cycle():
    assert are_isomorphic(build_cycle4_direct((1, 1)).hypergraph, cycle_graph(4))[0]
    assert are_isomorphic(build_cycle4_direct((1, 1, 1)), build_cycle("1+1+1", 2))[0]
    assert are_isomorphic(build_cycle4_direct((2, 1)), build_cycle("1+2", 2))[0]


def test_partial_steps():
    e = build_partial_step((1, 1, 1), 0)
    assert (e.num_vertices, len(e.edges)) == (3, 1)
    d = build_partial_step((1, 1, 1), 2)
    s = build_step((1, 1, 1))
    assert d.edges == s.edges
    assert [lab._replace(part=lab.part.rstrip("1") if lab.part == "A1" else lab.part) for lab in d.labels] == list(
        s.labels
    )
    assert d.attach == s.attach
    d12 = build_partial_step((1, 2), 1)
    assert len(d12.edges) == 2
    assert len(d12.block("A1")) == 2 and len(d12.block("B2")) == 2
    with pytest.raises(ValueError):
        build_partial_step((1, 2), 2)


@pytest.mark.parametrize("pi", [(1, 2), (2, 1, 1), (3, 1), (2, 2, 1)])
def test_partial_top_equals_step(pi):
    d = build_partial_step(pi, len(pi) - 1)
    assert d.edges == build_step(pi).edges


def test_isomorphism_examples(k3):
    assert are_isomorphic(build_cycle("1+2", 2, ordered=True), build_cycle("2+1", 2, ordered=True))[0]
    assert not are_isomorphic(k3, new_hypergraph(2, 3, [(0, 1), (1, 2)]))[0]
    h = gen_random(3, 7, 0.4, 5)
    perm = [3, 6, 0, 2, 5, 1, 4]
    g = new_hypergraph(3, 7, [[perm[v] for v in e] for e in h.edges])
    ok, mapping = are_isomorphic(h, g)
    assert ok
    assert {tuple(sorted(mapping[v] for v in e)) for e in h.edges} == set(g.edges)


def test_isomorphism_rejects_same_degrees():
    # two triangles vs a hexagon: both 2-regular on 6 vertices
    tri = new_hypergraph(2, 6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not are_isomorphic(tri, cycle_graph(6))[0]


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_cycle_ordering_invariance(k):
    for pi in proper_partitions(k):
        ref = build_cycle(pi, 2)
        if ref.num_vertices > 16:
            continue
        for order in pi.orderings():
            assert are_isomorphic(ref, build_cycle(order, 2, ordered=True))[0]


def test_isomorphism_cap():
    big = complete_hypergraph(2, 17)
    with pytest.raises(CapExceeded):
        are_isomorphic(big, big)


def test_linearity_examples(k3):
    for pi in ["1+2", "1+1+1", "2+1"]:
        w = is_pi_linear(single_edge(pi).hypergraph, pi)
        assert w is not None
    w = is_pi_linear(k3, "1+1")
    assert w is not None and check_linearity_witness(k3, "1+1", w)
    for pi in ["1+1", "1+2", "1+1+1", "2+2", "1+3", "1+1+2"]:
        c = build_cycle(pi, 2)
        if len(c.edges) <= 12:
            w = is_pi_linear(c.hypergraph, pi)
            assert w is not None and check_linearity_witness(c.hypergraph, pi, w)


def test_not_linear():
    # two 3-edges sharing two vertices: a (1,1,1)-split separates them
    f = new_hypergraph(3, 4, [(0, 1, 2), (0, 1, 3)])
    assert is_pi_linear(f, "1+1+1") is None
    assert is_pi_linear(f, "1+2") is not None


def _linear_exhaustive(f, pi):
    """Definition-level oracle: try every edge order and every split."""
    pi = as_partition(pi)
    for order in itertools.permutations(f.edges):
        ok = True
        for i, e in enumerate(order):
            found = False
            for perm in itertools.permutations(e):
                blocks, pos = [], 0
                for size in pi:
                    blocks.append(set(perm[pos:pos + size]))
                    pos += size
                if all(any((set(p) & set(e)) <= b for b in blocks) for p in order[:i]):
                    found = True
                    break
            if not found:
                ok = False
                break
        if ok:
            return True
    return False


@pytest.mark.parametrize("seed", range(12))
def test_linearity_matches_exhaustive(seed):
    h = gen_random(3, 5, 0.4, seed)
    if h.num_edges > 5:
        h = type(h)(3, 5, h.edges[:5], False)
    for pi in ["1+2", "1+1+1"]:
        assert (is_pi_linear(h, pi) is not None) == _linear_exhaustive(h, pi)


def test_graphs_are_11_linear():
    for seed in range(5):
        g = gen_random(2, 6, 0.5, seed)
        if g.num_edges <= 12:
            assert is_pi_linear(g, "1+1") is not None


def _template_corpus():
    corpus = [build_cycle(pi, 2) for k in (3, 4) for pi in proper_partitions(k)]
    corpus += [single_edge(pi) for pi in proper_partitions(4)]
    corpus += [gen_random(3, 5, 0.3, s) for s in range(6)]
    return [t for t in corpus if len(t.edges) <= 12]


def test_refinement_monotone_on_corpus():
    # a finer split is a stronger requirement: pi'-linear implies pi-linear
    # whenever pi' refines pi, so the pi'-linear patterns form a subfamily
    checked = 0
    for tpl in _template_corpus():
        for finer in proper_partitions(tpl.k):
            if is_pi_linear(tpl, finer) is None:
                continue
            for coarser in proper_partitions(tpl.k):
                if is_refinement(finer, coarser):
                    assert is_pi_linear(tpl, coarser) is not None
                    checked += 1
    assert checked > 10


def test_refinement_converse_fails():
    c = build_cycle("1+2", 2)
    assert is_pi_linear(c, "1+2") is not None
    assert is_pi_linear(c, "1+1+1") is None


def test_export(tmp_path):
    c = build_cycle("1+2", 2)
    txt, js = export_template(c, tmp_path / "c12")
    from hyperquasi import read_hypergraph

    assert read_hypergraph(txt) == c.hypergraph
    data = json.load(open(js))
    assert data["name"] == c.name and len(data["labels"]) == 6
