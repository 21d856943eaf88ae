import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxoutpoly.polytope import (
    DimensionMismatch,
    EmptyGeneratorSet,
    NegativeScaleOnPolytope,
    Polytope,
    canonical_form,
    convex_union,
    edges,
    in_hull,
    minkowski_sum,
    point,
    poly_dim,
    scale,
    support_value,
)
from maxoutpoly.rational import Q, unit
import oracles
from strategies import point_sets, vectors


def seg(n, *pts):
    return canonical_form([tuple(p) for p in pts])


def E(n, i):
    return unit(n, i)


def O(n):
    return (Q(0),) * n


def as_fractions(P):
    return {oracles.fvec(p) for p in P.points}


def test_canonical_examples():
    assert canonical_form([(0,), (1,), (Q(1) / 2,)]).points == ((0,), (1,))
    sq = canonical_form([(0, 0), (1, 0), (0, 1), (1, 1), (Q(1) / 2, Q(1) / 2)])
    assert sq.points == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_canonical_errors():
    with pytest.raises(EmptyGeneratorSet):
        canonical_form([])
    with pytest.raises(DimensionMismatch):
        canonical_form([(1, 2), (1,)])


def test_random_points_match_hull_oracle():
    rng = random.Random(11)
    for _ in range(20):
        pts = [tuple(rng.randint(-5, 5) for _ in range(3)) for _ in range(10)]
        assert as_fractions(canonical_form(pts)) == oracles.extreme_points(pts)


def test_minkowski_examples():
    sq = minkowski_sum(seg(2, O(2), E(2, 0)), seg(2, O(2), E(2, 1)))
    assert len(sq) == 4
    cube = minkowski_sum(minkowski_sum(seg(3, O(3), E(3, 0)), seg(3, O(3), E(3, 1))), seg(3, O(3), E(3, 2)))
    assert len(cube) == 8
    P = canonical_form([(0, 0), (2, 1), (1, 3)])
    t = point((Q(1) / 2, -1))
    moved = minkowski_sum(P, t)
    assert len(moved) == len(P) and moved.points[0] == (Q(1) / 2, -1)


def test_convex_union_examples():
    assert convex_union(point(E(2, 0)), point(E(2, 1))) == seg(2, E(2, 0), E(2, 1))
    P = canonical_form([(0, 0), (4, 0), (0, 4)])
    inner = canonical_form([(1, 1), (2, 1)])
    assert convex_union(P, inner) == P
    n = 4
    square = canonical_form([(a, b, 0, 0) for a in (0, 1) for b in (0, 1)])
    U = convex_union(convex_union(square, point(E(n, 2))), point(E(n, 3)))
    assert len(U) == 6


def test_scale_examples():
    P = seg(1, (0,), (1,))
    assert scale(P, 0) == point((0,))
    assert scale(P, 1) is P
    assert scale(P, Q(3) / 2).points == ((0,), (Q(3) / 2,))
    with pytest.raises(NegativeScaleOnPolytope):
        scale(P, -1)


def test_dim_and_support_examples():
    assert poly_dim(point((1, 2))) == 0
    tri = canonical_form([O(3), E(3, 0), E(3, 1)])
    assert poly_dim(tri) == 2
    assert support_value(tri, (2, 3, 0)) == 3
    assert support_value(point((1, 2)), (3, 4)) == 11
    with pytest.raises(DimensionMismatch):
        support_value(tri, (1, 2))


def test_independent_segments_dim():
    rng = random.Random(5)
    for k in range(1, 5):
        acc = point(O(4))
        for i in range(k):
            d = tuple(Q(rng.randint(1, 3)) if c == i else Q(rng.randint(-2, 2)) * (c < i) for c in range(4))
            acc = minkowski_sum(acc, canonical_form([O(4), d]))
        assert poly_dim(acc) == k


def test_edges_examples():
    sq = canonical_form([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(edges(sq)) == 4
    assert len(edges(canonical_form([E(3, 0), E(3, 1), E(3, 2)]))) == 3
    cross = canonical_form([tuple(s * x for x in E(3, i)) for i in range(3) for s in (1, -1)])
    assert len(edges(cross)) == 12


small_sets = st.integers(1, 4).flatmap(lambda n: point_sets(n, 1, 12, st.integers(-3, 3)))


@given(small_sets)
def test_canonical_matches_oracle_and_is_idempotent(pts):
    P = canonical_form(pts)
    assert as_fractions(P) == oracles.extreme_points(pts)
    assert canonical_form(P.points) == P
    assert canonical_form(list(reversed(pts)) + pts[:2]) == P


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(point_sets(n, 1, 5, st.integers(-3, 3)), point_sets(n, 1, 5, st.integers(-3, 3)))))
def test_minkowski_sum_matches_oracle(pair):
    A, B = pair
    S = minkowski_sum(canonical_form(A), canonical_form(B))
    assert as_fractions(S) == oracles.extreme_points(oracles.mink(A, B))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(point_sets(n, 1, 6, st.integers(-3, 3)), point_sets(n, 1, 6, st.integers(-3, 3)))))
def test_convex_union_matches_oracle(pair):
    A, B = pair
    U = convex_union(canonical_form(A), canonical_form(B))
    assert as_fractions(U) == oracles.extreme_points(A + B)


@given(small_sets)
def test_edges_match_oracle(pts):
    P = canonical_form(pts)
    got = {(oracles.fvec(P.points[i]), oracles.fvec(P.points[j])) for i, j in edges(P)}
    assert got == oracles.edge_pairs(P.points)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(point_sets(n, 1, 6), point_sets(n, 1, 6), st.lists(vectors(n), min_size=1, max_size=8))))
def test_support_laws(data):
    A, B, dirs = data
    P, R = canonical_form(A), canonical_form(B)
    S, U = minkowski_sum(P, R), convex_union(P, R)
    for x in dirs:
        assert support_value(S, x) == support_value(P, x) + support_value(R, x)
        assert support_value(U, x) == max(support_value(P, x), support_value(R, x))
        assert oracles.support(A, x) == support_value(P, x)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(point_sets(n, 1, 6), point_sets(n, 1, 6))))
def test_dim_subadditive(pair):
    P, R = canonical_form(pair[0]), canonical_form(pair[1])
    assert poly_dim(minkowski_sum(P, R)) <= poly_dim(P) + poly_dim(R)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(vectors(n), point_sets(n, 1, 14, st.integers(-3, 3)))))
def test_in_hull_matches_caratheodory(data):
    p, others = data
    assert in_hull(p, others) == oracles.in_hull(p, others)


def test_column_generation_path_in_hull():
    # More than 3n candidates switches to column generation.
    rng = random.Random(3)
    pts = [tuple(Q(rng.randint(-9, 9)) for _ in range(2)) for _ in range(40)]
    for _ in range(30):
        p = (Q(rng.randint(-12, 12)) / 2, Q(rng.randint(-12, 12)) / 2)
        assert in_hull(p, pts) == oracles.in_hull(p, pts)


def test_json_round_trip_canonicalizes():
    P = canonical_form([(0, 0), (2, 0), (0, 2), (1, 1)])
    data = {"n": 2, "points": [["1", "1"], ["0", "0"], ["2", "0"], ["0", "2"], ["1/2", "1/2"]]}
    assert Polytope.from_json(data) == P
    assert Polytope.from_json(P.to_json()) == P
