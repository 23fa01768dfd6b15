import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affineflag import (
    SemiAffineMap,
    StandardParameters,
    affine_space,
    apply,
    field_of_order,
    is_transitive,
    membership_SL_H,
    named_group,
    orbit,
    stabilizer,
    standard_form,
)
from affineflag.errors import DimensionMismatch, InvalidParameters, NotASubgroup
from affineflag.group import (
    GroupSpec,
    det,
    gl1_closure,
    map_from_point_perm,
    orbit_indices,
    regenerate,
    sl2_semidirect_h,
)

import oracles


def random_map(data, f, n):
    elt = st.integers(0, f.q - 1)
    A = data.draw(
        st.lists(st.lists(elt, min_size=n, max_size=n), min_size=n, max_size=n)
        .filter(lambda rows: det(f, rows) != 0)
    )
    v = data.draw(st.lists(elt, min_size=n, max_size=n))
    return SemiAffineMap(f, A, v, data.draw(st.integers(0, f.ell - 1)))


@given(st.sampled_from([4, 8, 9]), st.data())
@settings(max_examples=60, deadline=None)
def test_action_matches_oracle(q, data):
    f = field_of_order(q)
    ref = oracles.oracle_field(q)
    g = random_map(data, f, 2)
    for u in itertools.product(range(q), repeat=2):
        assert g(u) == oracles.apply_map(ref, g.A, g.v, g.k, u)


@given(st.sampled_from([3, 4, 9]), st.data())
@settings(max_examples=60, deadline=None)
def test_compose_and_inverse(q, data):
    f = field_of_order(q)
    g, h = random_map(data, f, 2), random_map(data, f, 2)
    pts = list(itertools.product(range(q), repeat=2))
    assert all((g * h)(u) == g(h(u)) for u in pts)
    assert (g * g.inverse()).is_identity()
    assert (g.inverse() * g).is_identity()
    sp = affine_space(2, f)
    assert map_from_point_perm(sp, g.point_perm(sp)) == g


def test_apply_to_lines_and_flags():
    f = field_of_order(4)
    sp = affine_space(2, f)
    g = SemiAffineMap(f, [[1, 2], [0, 3]], [1, 1], 1)
    for fl in [sp.flag(i) for i in range(0, sp.num_flags, 7)]:
        image = apply(g, fl)
        assert image.point == g(fl.point)
        assert set(sp.line_points_of(image.line)) == {g(u) for u in sp.line_points_of(fl.line)}


def _brute_order(G):
    ref = oracles.oracle_field(G.field.q)
    pts = list(itertools.product(range(G.field.q), repeat=G.n))
    index = {u: i for i, u in enumerate(pts)}
    gens = [tuple(index[oracles.apply_map(ref, g.A, g.v, g.k, u)] for u in pts) for g in G.generators]
    return len(oracles.closure_of_functions(gens))


@pytest.mark.parametrize("kind, params, order", [
    ("Translations", {"n": 2, "q": 3}, 9),
    ("Translations", {"n": 2, "q": 4}, 16),
    ("ASL", {"n": 2, "q": 3}, 216),
    ("AGL", {"n": 2, "q": 3}, 432),
    ("AGammaL", {"n": 2, "q": 4}, 5760),
    ("ASL", {"n": 3, "q": 2}, 1344),
    ("AGL1", {"q": 2, "d": 2}, 12),
    ("AGammaL1", {"q": 2, "d": 2}, 24),
    ("AGammaL1", {"q": 4, "d": 2}, 960),
    ("SL2p_C", {"p": 5, "l": 2}, 12000),
    ("SL2_semidirect_H", {"q": 4, "t": 3, "e": 0, "s": 1}, 16 * 60 * 2),
])
def test_catalogue_orders(kind, params, order):
    G = named_group(kind, **params)
    assert G.order() == order
    assert _brute_order(G) == order


@pytest.mark.parametrize("kind, params", [
    ("ASL", {"n": 2, "q": 3}), ("AGammaL", {"n": 2, "q": 4}), ("AGammaL1", {"q": 4, "d": 2}),
    ("SL2_semidirect_H", {"q": 5, "t": 2, "e": 0, "s": 1}),
])
def test_orbit_stabilizer(kind, params):
    G = named_group(kind, **params)
    sp = G.space
    order = G.order()
    for obj in [sp.point(0), sp.point(5), sp.line(3), sp.flag(0), sp.flag(11),
                (sp.point(0), sp.point(1))]:
        orb = orbit(G, obj)
        S = stabilizer(G, obj)
        assert len(orb) * S.order() == order
        for g in S.generators:
            assert _image(g, obj) == obj


def _image(g, obj):
    if isinstance(obj, tuple) and isinstance(obj[0], tuple):
        return tuple(apply(g, x) for x in obj)
    return apply(g, obj)


def test_pair_orbit_matches_all_elements():
    G = named_group("ASL", n=2, q=3)
    sp = G.space
    F = sp.num_flags
    every = GroupSpec.from_perms(sp, G.elements()).flag_perms
    a, b = sp.flag(0), sp.flag(17)
    brute = sorted(set((every[:, 0] * F + every[:, 17]).tolist()))
    ours = [sp.flag_index(x) * F + sp.flag_index(y) for x, y in orbit(G, (a, b))]
    assert ours == brute
    assert orbit_indices(G, 17, "flag_pair").tolist() == brute


def test_transitivity():
    sp = affine_space(2, field_of_order(3))
    T = named_group("Translations", n=2, q=3)
    A = named_group("ASL", n=2, q=3)
    flags = [sp.flag(i) for i in range(sp.num_flags)]
    assert is_transitive(T, [sp.point(i) for i in range(9)])
    assert not is_transitive(T, flags)
    assert is_transitive(A, flags)
    assert is_transitive(A, range(sp.num_lines), "line")


def test_singleton_group():
    sp = affine_space(2, field_of_order(3))
    G = GroupSpec(sp, [])
    assert orbit(G, sp.flag(4)) == [sp.flag(4)]
    assert G.order() == 1


def test_generator_dimension_checked():
    f = field_of_order(3)
    with pytest.raises(DimensionMismatch):
        GroupSpec(affine_space(3, f), [SemiAffineMap.identity(f, 2)])
    with pytest.raises(InvalidParameters):
        SemiAffineMap(f, [[1, 1], [1, 1]], [0, 0])


# -- GammaL(1, q) --------------------------------------------------------------------------

def _oracle_closure(q, gens):
    ref = oracles.oracle_field(q)
    tables = [oracles.gl1_table(ref, a, k) for a, k in gens]
    return oracles.closure_of_functions(tables), ref


@pytest.mark.parametrize("q", [4, 8, 9, 16])
def test_gl1_closure_matches_function_tables(q):
    f = field_of_order(q)
    rng = np.random.default_rng(q)
    for _ in range(20):
        gens = [(int(rng.integers(1, q)), int(rng.integers(0, f.ell))) for _ in range(2)]
        ours = gl1_closure(f, gens)
        brute, ref = _oracle_closure(q, gens)
        assert {oracles.gl1_table(ref, a, k) for a, k in ours} == brute


def test_standard_form_examples():
    f4, f9 = field_of_order(4), field_of_order(9)
    assert standard_form(f4, gl1_closure(f4, [(1, 1)])).as_tuple() == (3, 0, 1)
    assert standard_form(f9, gl1_closure(f9, [(f9.omega, 0), (1, 1)])).as_tuple() == (1, 0, 1)
    assert standard_form(f9, gl1_closure(f9, [(f9.omega_pow(2), 0)])).as_tuple() == (2, 0, 2)


def test_standard_form_rejects_non_subgroups():
    f = field_of_order(9)
    with pytest.raises(NotASubgroup):
        standard_form(f, {(1, 0), (f.omega, 0)})


@pytest.mark.parametrize("q", [9, 16])
def test_standard_form_is_an_invariant(q):
    """Different generating sets of one subgroup give the same parameters."""
    f = field_of_order(q)
    seen = {}
    for a, k in itertools.product(range(1, q), range(f.ell)):
        M = gl1_closure(f, [(a, k)])
        params = standard_form(f, M)
        assert seen.setdefault(M, params) == params
        assert regenerate(f, params) == M


def test_invalid_standard_parameters():
    f = field_of_order(9)
    for bad in [(3, 0, 1), (1, 0, 3), (2, 1, 2), (0, 0, 1)]:
        with pytest.raises(InvalidParameters):
            StandardParameters(*bad).validate(f)


@pytest.mark.parametrize("q, params", [(4, (3, 0, 1)), (4, (1, 0, 1)), (5, (2, 0, 1)), (9, (2, 1, 1))])
def test_membership_matches_materialized_stabilizer(q, params):
    f = field_of_order(q)
    P = StandardParameters(*params)
    G = sl2_semidirect_h(f, P)
    G0 = stabilizer(G, (0, 0))
    sp = G.space
    members = {e.tobytes() for e in G0.elements()}
    for entries in itertools.product(range(q), repeat=4):
        A = (entries[:2], entries[2:])
        for k in range(f.ell):
            try:
                g = SemiAffineMap.linear(f, A, k)
            except InvalidParameters:
                continue
            assert membership_SL_H(g, P) == (g.point_perm(sp).tobytes() in members)
