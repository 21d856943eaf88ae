"""Formal differences of polytopes and what their support functions see.

``VirtualPolytope(P, Q)`` stands for the class of the pair ``(P, Q)`` in the
group completion of polytopes under Minkowski addition. Its support function
is ``f_P - f_Q``; every operation here is checked against that function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .polytope import (
    DimensionMismatch,
    Polytope,
    canonical_form,
    convex_union,
    directions_of,
    minkowski_sum,
    origin,
    poly_dim,
    refinement_cells,
    scale,
    support_value,
)
from .rational import Q, RatVector, fmt_vec, nullspace, rank, sub, vec


class VirtualPolytope:
    __slots__ = ("positive", "negative")

    def __init__(self, positive: Polytope, negative: Polytope | None = None):
        if negative is None:
            negative = origin(positive.n)
        if positive.n != negative.n:
            raise DimensionMismatch(f"parts live in R^{positive.n} and R^{negative.n}")
        self.positive = positive
        self.negative = negative

    @property
    def n(self) -> int:
        return self.positive.n

    @property
    def is_convex(self) -> bool:
        """True when the negative part is a single point."""
        return self.negative.is_singleton

    def __repr__(self) -> str:
        return f"VirtualPolytope({self.positive!r} - {self.negative!r})"

    def __eq__(self, other) -> bool:
        # Representation equality; use v_equals for the group relation.
        return (
            isinstance(other, VirtualPolytope)
            and self.positive == other.positive
            and self.negative == other.negative
        )

    def __hash__(self) -> int:
        return hash((self.positive, self.negative))

    def to_json(self) -> dict:
        return {"positive": self.positive.to_json(), "negative": self.negative.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "VirtualPolytope":
        try:
            return cls(Polytope.from_json(data["positive"]), Polytope.from_json(data["negative"]))
        except KeyError as exc:
            raise DimensionMismatch(f"malformed virtual polytope JSON: missing {exc}") from None


def from_polytope(P: Polytope) -> VirtualPolytope:
    return VirtualPolytope(P, origin(P.n))


def singleton(v: Sequence) -> VirtualPolytope:
    v = vec(v)
    return VirtualPolytope(Polytope(len(v), [v]), origin(len(v)))


def zero(n: int) -> VirtualPolytope:
    return VirtualPolytope(origin(n), origin(n))


def _same_n(V1: VirtualPolytope, V2: VirtualPolytope) -> None:
    if V1.n != V2.n:
        raise DimensionMismatch(f"ambient dimensions differ: {V1.n} vs {V2.n}")


def v_equals(V1: VirtualPolytope, V2: VirtualPolytope) -> bool:
    _same_n(V1, V2)
    return minkowski_sum(V1.positive, V2.negative) == minkowski_sum(V2.positive, V1.negative)


def v_add(V1: VirtualPolytope, V2: VirtualPolytope) -> VirtualPolytope:
    _same_n(V1, V2)
    return VirtualPolytope(
        minkowski_sum(V1.positive, V2.positive), minkowski_sum(V1.negative, V2.negative)
    )


def v_scale(V: VirtualPolytope, lam) -> VirtualPolytope:
    """``lam * V`` with ``f_{lam V} = lam f_V`` for every sign of ``lam``.

    Negative factors swap the parts (the group inverse) instead of
    reflecting them: a reflected polytope does not have the negated
    support function.
    """
    lam = Q(lam)
    if lam >= 0:
        return VirtualPolytope(scale(V.positive, lam), scale(V.negative, lam))
    return VirtualPolytope(scale(V.negative, -lam), scale(V.positive, -lam))


def v_conv(V1: VirtualPolytope, V2: VirtualPolytope) -> VirtualPolytope:
    """The virtual polytope whose support function is ``max(f_V1, f_V2)``."""
    _same_n(V1, V2)
    lifted = convex_union(
        minkowski_sum(V1.positive, V2.negative), minkowski_sum(V2.positive, V1.negative)
    )
    return VirtualPolytope(lifted, minkowski_sum(V1.negative, V2.negative))


def v_support(V: VirtualPolytope, x: Sequence):
    return support_value(V.positive, x) - support_value(V.negative, x)


def signed_combination(coeffs: Sequence, objects: Sequence[VirtualPolytope], n: int) -> VirtualPolytope:
    acc = zero(n)
    for c, V in zip(coeffs, objects):
        c = Q(c)
        if c:
            acc = v_add(acc, v_scale(V, c))
    return acc


@dataclass(frozen=True)
class GradientCellSet:
    """Distinct gradients of ``f_V`` on full-dimensional cells.

    ``witnesses[k]`` is a direction strictly inside a cell on which
    ``f_V`` is the linear function ``gradients[k] . x``.
    """

    gradients: tuple
    witnesses: tuple

    def __len__(self) -> int:
        return len(self.gradients)

    def to_json(self) -> dict:
        return {
            "cells": [
                {"gradient": fmt_vec(g), "witness": fmt_vec(w)} for g, w in zip(self.gradients, self.witnesses)
            ]
        }


def cell_gradients(V: VirtualPolytope) -> GradientCellSet:
    P, Qn = V.positive, V.negative
    seen: dict = {}
    for i, j, x in refinement_cells(P, Qn):
        g = sub(P.points[i], Qn.points[j])
        if g not in seen:
            seen[g] = x
    grads = sorted(seen)
    return GradientCellSet(tuple(grads), tuple(seen[g] for g in grads))


def _gradient_differences(V: VirtualPolytope) -> list:
    grads = cell_gradients(V).gradients
    g0 = grads[0]
    return [sub(g, g0) for g in grads[1:]]


def v_dim(V: VirtualPolytope) -> int:
    """Codimension of the lineality space of ``f_V``.

    For a convex ``V`` this is just the dimension of the positive part.
    """
    if V.negative.is_singleton:
        return poly_dim(V.positive)
    if V.positive.is_singleton:
        return poly_dim(V.negative)
    return rank(_gradient_differences(V))


def representative_dim(V: VirtualPolytope) -> int:
    """``dim(P + Q)`` of the stored pair, an upper bound for :func:`v_dim`."""
    return rank(directions_of(V.positive) + directions_of(V.negative))


def lineality_basis(V: VirtualPolytope) -> list:
    """Basis of the directions along which ``f_V`` is linear."""
    return nullspace(_gradient_differences(V), V.n)


def from_points(pos: Sequence[Sequence], neg: Sequence[Sequence] | None = None) -> VirtualPolytope:
    P = canonical_form(pos)
    Qn = canonical_form(neg) if neg else origin(P.n)
    return VirtualPolytope(P, Qn)


__all__ = [
    "GradientCellSet",
    "VirtualPolytope",
    "cell_gradients",
    "from_points",
    "from_polytope",
    "lineality_basis",
    "representative_dim",
    "signed_combination",
    "singleton",
    "v_add",
    "v_conv",
    "v_dim",
    "v_equals",
    "v_scale",
    "v_support",
    "zero",
]
