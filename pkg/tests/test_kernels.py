import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affineflag import kernels

from oracles import to_networkx


@st.composite
def graphs(draw, max_n=14):
    n = draw(st.integers(1, max_n))
    possible = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(possible), unique=True) if possible else st.just([]))
    rows = [[] for _ in range(n)]
    for i, j in chosen:
        rows[i].append(j)
        rows[j].append(i)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=indptr[1:])
    indices = np.array([x for r in rows for x in sorted(r)], dtype=np.int64)
    return indptr, indices


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_graph_kernels_match_networkx(graph):
    indptr, indices = graph
    g = to_networkx(indptr, indices)
    comps = sorted((sorted(c) for c in nx.connected_components(g)), key=min)
    for name in kernels.available_backends():
        mod = kernels.load_backend(name)
        ecc, labels = mod.bfs_eccentricity(indptr, indices)
        assert [sorted(np.flatnonzero(labels == k).tolist()) for k in range(len(comps))] == comps
        for comp in comps:
            sub = g.subgraph(comp)
            expected = nx.eccentricity(sub)
            assert all(ecc[v] == expected[v] for v in comp)
        girth = nx.girth(g)
        assert mod.girth(indptr, indices) == (0 if girth == float("inf") else girth)
        tri = nx.triangles(g)
        assert mod.triangle_counts(indptr, indices).tolist() == [tri[v] for v in range(len(indptr) - 1)]


@st.composite
def permutation_sets(draw):
    F = draw(st.integers(2, 7))
    k = draw(st.integers(1, 3))
    perms = np.array([draw(st.permutations(range(F))) for _ in range(k)], dtype=np.int64)
    return perms


def _brute_pair_orbits(perms):
    F = perms.shape[1]
    label = {}
    for start in range(F * F):
        if start in label:
            continue
        orbit, frontier = {start}, [start]
        while frontier:
            nxt = []
            for code in frontier:
                a, b = divmod(code, F)
                for p in perms:
                    img = int(p[a]) * F + int(p[b])
                    if img not in orbit:
                        orbit.add(img)
                        nxt.append(img)
            frontier = nxt
        for c in orbit:
            label[c] = min(orbit)
    return label


@given(permutation_sets(), st.data())
@settings(max_examples=100, deadline=None)
def test_pair_orbits_match_brute_force(perms, data):
    F = perms.shape[1]
    brute = _brute_pair_orbits(perms)
    mask = np.array(data.draw(st.lists(st.booleans(), min_size=F * F, max_size=F * F)), dtype=np.uint8)
    seed = data.draw(st.integers(0, F * F - 1))
    results = []
    for name in kernels.available_backends():
        mod = kernels.load_backend(name)
        visited = np.zeros(F * F, dtype=np.uint8)
        closure = mod.pair_orbit_closure(perms, seed, visited)
        expected = sorted(c for c in range(F * F) if brute[c] == brute[seed])
        assert closure.tolist() == expected
        assert np.flatnonzero(visited).tolist() == expected
        assert mod.pair_orbit_closure(perms, seed, visited).size == 0
        labels = mod.pair_orbit_labels(perms, np.ones(F * F, dtype=np.uint8))
        # labels are consecutive in order of least member
        firsts = [int(np.flatnonzero(labels == k)[0]) for k in range(labels.max() + 1)]
        assert firsts == sorted(firsts)
        assert all((labels[c] == labels[d]) == (brute[c] == brute[d])
                   for c in range(F * F) for d in range(F * F))
        masked = mod.pair_orbit_labels(perms, mask)
        assert (masked[mask == 0] == -1).all()
        on = np.flatnonzero(mask)
        assert all((masked[c] == masked[d]) == (brute[c] == brute[d]) for c in on for d in on)
        results.append((closure.tolist(), labels.tolist(), masked.tolist()))
    assert all(r == results[0] for r in results)


def test_backends_agree_on_flag_pairs():
    from affineflag import named_group
    G = named_group("ASL", n=2, q=3)
    perms = np.ascontiguousarray(G.flag_perms)
    mask = np.ones(perms.shape[1] ** 2, dtype=np.uint8)
    out = [kernels.load_backend(b).pair_orbit_labels(perms, mask) for b in kernels.available_backends()]
    for other in out[1:]:
        assert np.array_equal(out[0], other)


def test_backend_switch(monkeypatch):
    import importlib
    monkeypatch.setenv("AFFINEFLAG_PURE_PYTHON", "1")
    forced = importlib.reload(kernels)
    assert forced.BACKEND == "python"
    monkeypatch.delenv("AFFINEFLAG_PURE_PYTHON")
    restored = importlib.reload(kernels)
    assert restored.BACKEND == restored.available_backends()[0]


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")
