import itertools

import numpy as np
import pytest

from affineflag import Flag, Line, LineRelation, affine_space, all_flags, all_lines, classify, field_of_order
from affineflag.errors import CoincidentPoints, DimensionMismatch, InvalidParameters
from affineflag.geometry import flag_label, is_compatible, line_through, parse_flag

import oracles

SPACES = [(2, 2), (2, 3), (2, 4), (3, 2), (2, 5), (3, 3)]


@pytest.mark.parametrize("n, q", SPACES)
def test_lines_match_point_sets(n, q):
    f = field_of_order(q)
    sp = affine_space(n, f)
    ours = sorted((frozenset(sp.line_points_of(L)) for L in all_lines(n, f)), key=sorted)
    assert ours == oracles.lines(oracles.oracle_field(q), n)
    assert sp.num_lines == q ** (n - 1) * (q**n - 1) // (q - 1)


@pytest.mark.parametrize("n, q, lines, flags", [
    (2, 2, 6, 12), (2, 3, 12, 36), (3, 2, 28, 56), (2, 4, 20, 80), (3, 4, 336, 1344), (2, 9, 90, 810),
])
def test_counts(n, q, lines, flags):
    f = field_of_order(q)
    assert len(all_lines(n, f)) == lines
    assert len(all_flags(n, f)) == flags


@pytest.mark.parametrize("n, q", SPACES)
def test_flag_order_is_sorted_and_indices_round_trip(n, q):
    sp = affine_space(n, field_of_order(q))
    fl = all_flags(n, field_of_order(q))
    assert [sp.flag_index(x) for x in fl] == list(range(len(fl)))
    assert [x.point for x in fl] == sorted(x.point for x in fl)
    for x in fl[:50]:
        assert parse_flag(flag_label(x)) == x


@pytest.mark.parametrize("n, q", [(2, 3), (3, 2), (2, 4), (3, 3)])
def test_classify_matches_coplanarity_oracle(n, q):
    f = field_of_order(q)
    ref = oracles.oracle_field(q)
    sp = affine_space(n, f)
    ls = all_lines(n, f)
    rng = np.random.default_rng(7)
    pairs = list(itertools.product(range(len(ls)), repeat=2))
    if len(pairs) > 3000:
        pairs = [pairs[i] for i in rng.choice(len(pairs), 3000, replace=False)]
    for i, j in pairs:
        L, N = ls[i], ls[j]
        expected = oracles.relation(ref, frozenset(sp.line_points_of(L)), frozenset(sp.line_points_of(N)))
        assert classify(f, L, N).value == expected


def test_classify_examples():
    f2 = field_of_order(2)
    e1 = line_through(f2, (0, 0, 0), (1, 0, 0))
    shifted = line_through(f2, (0, 0, 1), (0, 1, 1))
    assert classify(f2, e1, shifted) is LineRelation.SKEW
    f3 = field_of_order(3)
    a = line_through(f3, (0, 0), (1, 0))
    b = line_through(f3, (0, 1), (1, 1))
    assert classify(f3, a, b) is LineRelation.PARALLEL
    assert classify(f3, a, a) is LineRelation.EQUAL


def test_line_through_errors():
    f = field_of_order(3)
    with pytest.raises(CoincidentPoints):
        line_through(f, (1, 1), (1, 1))
    with pytest.raises(DimensionMismatch):
        line_through(f, (1, 1), (1, 1, 0))
    with pytest.raises(InvalidParameters):
        line_through(f, (1, 3), (0, 0))


def test_line_is_canonical():
    f = field_of_order(5)
    L1 = line_through(f, (1, 2), (3, 3))
    L2 = line_through(f, (3, 3), (0, 4))
    assert L1 == L2
    assert L1.direction[0] == 1
    assert L1.base == min(affine_space(2, f).line_points_of(L1))


@pytest.mark.parametrize("n, q", [(2, 3), (3, 2), (2, 4)])
def test_compatibility_both_forms(n, q):
    f = field_of_order(q)
    sp = affine_space(n, f)
    fl = all_flags(n, f)
    comp = sp.compatible_matrix()
    for i, a in enumerate(fl):
        for j, b in enumerate(fl):
            direct = a.point not in sp.line_points_of(b.line) and b.point not in sp.line_points_of(a.line)
            if a.point == b.point:
                alt = False
            else:
                joining = sp.line_through(a.point, b.point)
                alt = a.line != joining and b.line != joining
            assert direct == alt == bool(comp[i, j]) == is_compatible(f, a, b)


def test_compatibility_examples():
    f = field_of_order(3)
    sp = affine_space(2, f)
    e1 = sp.line_through((0, 0), (1, 0))
    e2 = sp.line_through((0, 0), (0, 1))
    for c in (1, 2):
        assert is_compatible(f, Flag((1, 0), e1), Flag((0, c), e2))
    assert not is_compatible(f, Flag((0, 0), e1), Flag((0, 0), e2))
    other = sp.line_through((1, 0), (1, 1))
    assert not is_compatible(f, Flag((0, 0), e1), Flag((1, 0), other))


def test_non_incident_flag_is_rejected():
    sp = affine_space(2, field_of_order(3))
    with pytest.raises(InvalidParameters):
        sp.make_flag((2, 2), sp.line_through((0, 0), (1, 0)))
