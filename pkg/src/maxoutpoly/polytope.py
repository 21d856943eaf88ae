"""V-polytopes in canonical extreme-point form.

A :class:`Polytope` stores exactly its extreme points, sorted
lexicographically, so two polytopes are equal iff their point tuples are.
Nothing here ever computes facets; every predicate reduces to a small LP on
generators (see :mod:`maxoutpoly.lp`).

Extremeness is certified in one of three ways, cheapest first:

1. affinely independent generator sets are vertex sets of a simplex;
2. a direction maximized uniquely at a point proves it extreme;
3. otherwise an LP decides membership in the hull of the other points.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .lp import INFEASIBLE, _simplex_standard, cone_certificate, cone_certificate_lazy
from .rational import ONE, ZERO, Q, RatVector, dot, fmt_vec, parse_vec, rank, sub, vec

DIRECTION_SAMPLES = 64


class PolytopeError(ValueError):
    pass


class EmptyGeneratorSet(PolytopeError):
    pass


class DimensionMismatch(PolytopeError):
    pass


class NegativeScaleOnPolytope(PolytopeError):
    pass


class Polytope:
    """Convex hull of finitely many rational points, by extreme points.

    Build instances with :func:`canonical_form`; the constructor trusts its
    input and only exists for routines that already know the extreme points.
    """

    __slots__ = ("n", "points", "_hash")

    def __init__(self, n: int, points: Iterable[Sequence]):
        self.n = n
        self.points = tuple(sorted(tuple(p) for p in points))
        self._hash = None

    def __eq__(self, other) -> bool:
        return isinstance(other, Polytope) and self.n == other.n and self.points == other.points

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.points))
        return self._hash

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        pts = ", ".join("(" + ", ".join(fmt_vec(p)) + ")" for p in self.points[:6])
        more = ", ..." if len(self.points) > 6 else ""
        return f"Polytope(n={self.n}, [{pts}{more}])"

    @property
    def is_singleton(self) -> bool:
        return len(self.points) == 1

    def to_json(self) -> dict:
        return {"n": self.n, "points": [fmt_vec(p) for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "Polytope":
        try:
            n = int(data["n"])
            pts = [parse_vec(p) for p in data["points"]]
        except (KeyError, TypeError) as exc:
            raise PolytopeError(f"malformed polytope JSON: {exc}") from None
        if any(len(p) != n for p in pts):
            raise DimensionMismatch("point length differs from n")
        return canonical_form(pts, n=n)


def point(p: Sequence) -> Polytope:
    p = vec(p)
    return Polytope(len(p), [p])


def origin(n: int) -> Polytope:
    return Polytope(n, [(ZERO,) * n])


@lru_cache(maxsize=None)
def _directions(n: int, count: int) -> tuple:
    rng = random.Random(0x5EED + n)
    dirs = []
    for i in range(n):
        dirs.append(tuple(ONE if k == i else ZERO for k in range(n)))
        dirs.append(tuple(-ONE if k == i else ZERO for k in range(n)))
    while len(dirs) < count:
        dirs.append(tuple(Q(rng.randint(-997, 997)) for _ in range(n)))
    return tuple(dirs)


def _unique_argmax(points: Sequence[Sequence], x: Sequence) -> Optional[int]:
    best = None
    best_i = None
    tie = False
    for i, p in enumerate(points):
        v = dot(p, x)
        if best is None or v > best:
            best, best_i, tie = v, i, False
        elif v == best:
            tie = True
    return None if tie else best_i


def affine_rank(points: Sequence[Sequence]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]])


def _hull_lp(p: Sequence, others: Sequence[Sequence]):
    n = len(p)
    rows = [[o[c] for o in others] for c in range(n)]
    rows.append([ONE] * len(others))
    return _simplex_standard(rows, list(p) + [ONE], [ZERO] * len(others))


def in_hull(p: Sequence, others: Sequence[Sequence], seed: Sequence[int] = ()) -> bool:
    """Exact test of ``p`` in ``conv(others)``.

    Column generation: start from the points indexed by ``seed`` (or a few
    nearby ones); an infeasible restricted program yields a direction
    ``x`` with ``x.p > x.s`` on the subset, and any remaining point with
    ``x.s >= x.p`` joins the subset. When none is left, ``x`` separates
    ``p`` from all of ``others``.
    """
    if not others:
        return False
    n = len(p)
    if len(others) <= 3 * n:
        return _hull_lp(p, others).status != INFEASIBLE
    active = set(seed)
    if len(active) < n + 1:
        near = sorted(range(len(others)), key=lambda k: (sum(((a - b) ** 2 for a, b in zip(others[k], p)), ZERO), k))
        active.update(near[: 2 * n])
    while True:
        idx = sorted(active)
        res = _hull_lp(p, [others[k] for k in idx])
        if res.status != INFEASIBLE:
            return True
        x, t = res.farkas[:n], res.farkas[n]
        level = dot(x, p)
        # y A <= 0 on the subset means x.s + t <= 0 < x.p + t there.
        bad = sorted((-(dot(x, s) - level), k) for k, s in enumerate(others) if k not in active and dot(x, s) >= level)
        if not bad:
            return False
        active.update(k for _, k in bad[: n + 1])


def canonical_form(points: Iterable[Sequence], n: Optional[int] = None) -> Polytope:
    """Extreme points of ``conv(points)``, deduplicated and sorted."""
    pts = sorted({vec(p) for p in points})
    if not pts:
        raise EmptyGeneratorSet("a polytope needs at least one generator")
    dims = {len(p) for p in pts}
    if len(dims) != 1 or (n is not None and dims != {n}):
        raise DimensionMismatch(f"generators have dimensions {sorted(dims)}")
    n = dims.pop()
    if n == 0:
        raise DimensionMismatch("ambient dimension must be positive")
    if len(pts) <= 2 or affine_rank(pts) == len(pts) - 1:
        return Polytope(n, pts)
    certified = set()
    for x in _directions(n, max(DIRECTION_SAMPLES, 2 * n)):
        i = _unique_argmax(pts, x)
        if i is not None:
            certified.add(i)
    alive = list(range(len(pts)))
    for i in range(len(pts)):
        if i in certified:
            continue
        keep = [k for k in alive if k != i]
        seed = [pos for pos, k in enumerate(keep) if k in certified]
        if in_hull(pts[i], [pts[k] for k in keep], seed):
            alive.remove(i)
    return Polytope(n, [pts[k] for k in alive])


def _check_dims(P: Polytope, Q_: Polytope) -> None:
    if P.n != Q_.n:
        raise DimensionMismatch(f"ambient dimensions differ: {P.n} vs {Q_.n}")


def directions_of(P: Polytope) -> list:
    p0 = P.points[0]
    return [sub(p, p0) for p in P.points[1:]]


def translate(P: Polytope, t: Sequence) -> Polytope:
    return Polytope(P.n, [tuple(a + b for a, b in zip(p, t)) for p in P.points])


def normal_cone_rows(P: Polytope, i: int) -> list:
    """Rows ``a_i - a_k`` whose nonnegativity says ``a_i`` maximizes ``x``."""
    a = P.points[i]
    return [sub(a, b) for k, b in enumerate(P.points) if k != i]


@lru_cache(maxsize=4096)
def refinement_cells(P: Polytope, Q_: Polytope) -> tuple:
    """Full-dimensional cells of the common refinement of two normal fans.

    Returns ``(i, j, witness)`` triples: ``witness`` lies strictly inside
    the normal cone of ``P.points[i]`` and of ``Q_.points[j]``. These pairs
    are exactly the vertex decompositions of ``P + Q_``.
    """
    _check_dims(P, Q_)
    n = P.n
    found: dict = {}
    for x in _directions(n, max(DIRECTION_SAMPLES, 4 * n)):
        i = _unique_argmax(P.points, x)
        if i is None:
            continue
        j = _unique_argmax(Q_.points, x)
        if j is not None and (i, j) not in found:
            found[(i, j)] = x
    rowsP = [normal_cone_rows(P, i) for i in range(len(P))]
    rowsQ = [normal_cone_rows(Q_, j) for j in range(len(Q_))]
    for i in range(len(P)):
        for j in range(len(Q_)):
            if (i, j) in found:
                continue
            cert = cone_certificate_lazy(rowsP[i] + rowsQ[j], n)
            if cert.feasible:
                found[(i, j)] = cert.witness
    return tuple((i, j, x) for (i, j), x in sorted(found.items()))


def minkowski_sum(P: Polytope, Q_: Polytope) -> Polytope:
    _check_dims(P, Q_)
    if Q_.is_singleton:
        return translate(P, Q_.points[0])
    if P.is_singleton:
        return translate(Q_, P.points[0])
    dP, dQ = directions_of(P), directions_of(Q_)
    if rank(dP) + rank(dQ) == rank(dP + dQ):
        # Direct sum of affine hulls: P + Q is affinely a product.
        return Polytope(P.n, [tuple(a + b for a, b in zip(p, q)) for p in P.points for q in Q_.points])
    cells = refinement_cells(P, Q_)
    return Polytope(
        P.n, [tuple(a + b for a, b in zip(P.points[i], Q_.points[j])) for i, j, _ in cells]
    )


def convex_union(P: Polytope, Q_: Polytope) -> Polytope:
    _check_dims(P, Q_)
    if P == Q_:
        return P
    dP, dQ = directions_of(P), directions_of(Q_)
    shift = sub(Q_.points[0], P.points[0])
    if rank(dP + dQ + [shift]) > rank(dP + dQ):
        # Some functional is constant on each part with different values, so
        # both parts are faces of the union and keep all their extreme points.
        return Polytope(P.n, P.points + Q_.points)
    return canonical_form(P.points + Q_.points)


def scale(P: Polytope, lam) -> Polytope:
    lam = Q(lam)
    if lam < 0:
        raise NegativeScaleOnPolytope("polytopes only scale by nonnegative factors")
    if lam == 0:
        return origin(P.n)
    if lam == 1:
        return P
    return Polytope(P.n, [tuple(lam * x for x in p) for p in P.points])


def poly_dim(P: Polytope) -> int:
    return affine_rank(P.points)


def support_value(P: Polytope, x: Sequence) -> object:
    x = vec(x)
    if len(x) != P.n:
        raise DimensionMismatch(f"direction has length {len(x)}, polytope lives in R^{P.n}")
    return max(dot(p, x) for p in P.points)


def edge_certificate(P: Polytope, i: int, j: int):
    """Decide whether ``conv{P[i], P[j]}`` is an edge of ``P``."""
    a = P.points[i]
    strict = [sub(a, b) for k, b in enumerate(P.points) if k not in (i, j)]
    return cone_certificate(strict, P.n, [sub(a, P.points[j])])


def edges(P: Polytope) -> list:
    """All index pairs ``(i, j)``, ``i < j``, spanning 1-faces of ``P``."""
    k = len(P)
    if k < 2:
        return []
    if affine_rank(P.points) == k - 1:
        return [(i, j) for i in range(k) for j in range(i + 1, k)]
    return [(i, j) for i in range(k) for j in range(i + 1, k) if edge_certificate(P, i, j).feasible]
