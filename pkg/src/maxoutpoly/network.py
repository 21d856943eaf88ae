"""Sparse maxout networks, MAX expressions and their Newton virtual polytopes.

A network with ``depth`` hidden layers computes
``x -> output . (f_depth o ... o f_1)(x)`` where layer ``i`` is a rank-``r_i``
maxout layer whose neurons read at most ``d_i`` outputs of the previous
layer. There are no biases, so every network computes a positively
homogeneous piecewise linear function. The first layer is always fully
connected (``d_1 = n``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod
from typing import Optional, Sequence

from .polytope import (
    DimensionMismatch,
    Polytope,
    canonical_form,
    convex_union,
    minkowski_sum,
    origin,
    poly_dim,
    scale,
)
from .rational import ONE, ZERO, Q, RatVector, dot, fmt, fmt_vec, parse_vec, rank, sub, support, unit, vec, zeros
from .virtual import VirtualPolytope, signed_combination, singleton, v_conv, v_equals, zero


class NetworkError(ValueError):
    pass


class StructuralError(NetworkError):
    """Widths do not chain: a weight vector has the wrong length."""


class InvalidNetwork(NetworkError):
    pass


class InsufficientDepth(NetworkError):
    pass


class HypothesisError(NetworkError):
    """Inputs violate the hypotheses a construction or certificate needs."""


@dataclass(frozen=True)
class ArchitectureSpec:
    n: int
    depth: int
    d: tuple
    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if self.n < 1:
            raise NetworkError("input dimension must be positive")
        if self.depth < 0:
            raise NetworkError("depth must be nonnegative")
        if len(self.d) != self.depth or len(self.r) != self.depth:
            raise NetworkError(f"need {self.depth} indegrees and ranks, got {len(self.d)} and {len(self.r)}")
        if any(x < 1 for x in self.d + self.r):
            raise NetworkError("indegrees and ranks must be positive")
        if self.depth and self.d[0] != self.n:
            raise NetworkError(f"the first layer is fully connected: d_1 must equal n = {self.n}")

    @classmethod
    def uniform(cls, n: int, depth: int, d: int, r: int) -> "ArchitectureSpec":
        """Constant indegree ``d`` after the first layer and constant rank ``r``."""
        return cls(n, depth, (n,) + (d,) * (depth - 1) if depth else (), (r,) * depth)

    @classmethod
    def from_vectors(cls, n: int, depth: int, d: Sequence[int], r: Sequence[int]) -> "ArchitectureSpec":
        """Expand one-element indegree/rank lists to constant vectors.

        A single indegree ``k`` means ``(n, k, ..., k)``; full-length
        vectors are taken as given.
        """
        d = list(d)
        r = list(r)
        if len(d) == 1 and depth != 1:
            d = [n] + d * (depth - 1)
        elif len(d) == 1:
            d = [n]
        if len(r) == 1:
            r = r * depth
        return cls(n, depth, tuple(d[:depth] if depth else ()), tuple(r[:depth] if depth else ()))

    def prefix(self, depth: int) -> "ArchitectureSpec":
        return ArchitectureSpec(self.n, depth, self.d[:depth], self.r[:depth])

    def to_json(self) -> dict:
        return {"n": self.n, "depth": self.depth, "d": list(self.d), "r": list(self.r)}


@dataclass(frozen=True)
class MaxoutNeuron:
    """``max_j args[j] . y`` over the previous layer's outputs ``y``."""

    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(vec(a) for a in self.args))
        if not self.args:
            raise StructuralError("a neuron needs at least one argument")

    @property
    def reads(self) -> frozenset:
        out = frozenset()
        for a in self.args:
            out |= support(a)
        return out


@dataclass(frozen=True)
class SparseMaxoutNetwork:
    spec: ArchitectureSpec
    layers: tuple
    output: RatVector

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))
        object.__setattr__(self, "output", vec(self.output))
        if len(self.layers) != self.spec.depth:
            raise StructuralError(f"spec says {self.spec.depth} hidden layers, got {len(self.layers)}")
        width = self.spec.n
        for k, layer in enumerate(self.layers):
            if not layer:
                raise StructuralError(f"hidden layer {k + 1} is empty")
            for i, neuron in enumerate(layer):
                for a in neuron.args:
                    if len(a) != width:
                        raise StructuralError(
                            f"layer {k + 1} neuron {i}: weight length {len(a)}, previous width {width}"
                        )
            width = len(layer)
        if len(self.output) != width:
            raise StructuralError(f"output functional has length {len(self.output)}, last width {width}")

    @property
    def widths(self) -> list:
        return [self.spec.n] + [len(layer) for layer in self.layers]

    def to_json(self) -> dict:
        return {
            "n": self.spec.n,
            "layers": [
                {
                    "d": self.spec.d[k],
                    "r": self.spec.r[k],
                    "neurons": [{"args": [fmt_vec(a) for a in nr.args]} for nr in layer],
                }
                for k, layer in enumerate(self.layers)
            ],
            "output": fmt_vec(self.output),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SparseMaxoutNetwork":
        try:
            n = int(data["n"])
            layers_d = data["layers"]
            d = [int(L["d"]) for L in layers_d]
            r = [int(L["r"]) for L in layers_d]
            layers = [[MaxoutNeuron(tuple(parse_vec(a) for a in nr["args"])) for nr in L["neurons"]] for L in layers_d]
            output = parse_vec(data["output"])
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed network JSON: {exc!r}") from None
        return cls(ArchitectureSpec(n, len(layers), tuple(d), tuple(r)), tuple(layers), output)


@dataclass(frozen=True)
class Violation:
    layer: int
    neuron: int
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"layer {self.layer} neuron {self.neuron}: {self.kind} ({self.detail})"


def validate(net: SparseMaxoutNetwork) -> list:
    """Every indegree or rank violation; an empty list means valid.

    Layer numbers are 1-based. The first hidden layer never reports an
    indegree violation since it is fully connected by definition.
    """
    out = []
    for k, layer in enumerate(net.layers):
        d, r = net.spec.d[k], net.spec.r[k]
        for i, neuron in enumerate(layer):
            if len(neuron.args) > r:
                out.append(Violation(k + 1, i, "rank", f"{len(neuron.args)} arguments > r = {r}"))
            if k > 0 and len(neuron.reads) > d:
                out.append(Violation(k + 1, i, "indegree", f"reads {len(neuron.reads)} inputs > d = {d}"))
    return out


def layer_outputs(net: SparseMaxoutNetwork, x: Sequence) -> list:
    x = vec(x)
    if len(x) != net.spec.n:
        raise DimensionMismatch(f"input has length {len(x)}, network expects {net.spec.n}")
    values = [x]
    for layer in net.layers:
        y = values[-1]
        values.append(tuple(max(dot(a, y) for a in nr.args) for nr in layer))
    return values


def net_eval(net: SparseMaxoutNetwork, x: Sequence):
    return dot(net.output, layer_outputs(net, x)[-1])


@dataclass
class NeuronTrace:
    layer: int
    index: int
    reads: tuple
    coefficients: tuple
    result: VirtualPolytope


@dataclass
class ConstructionWitness:
    """Per-neuron virtual polytopes of a network, level by level.

    ``levels[0]`` holds the singletons ``{e_i}`` of the inputs and
    ``levels[k]`` the objects of hidden layer ``k``; ``root`` is the
    output combination.
    """

    spec: ArchitectureSpec
    levels: list
    traces: list
    output: RatVector
    root: VirtualPolytope

    def verify(self) -> bool:
        """Recompute every neuron from the previous level and compare."""
        n = self.spec.n
        if len(self.levels) != self.spec.depth + 1:
            return False
        if len(self.levels[0]) != n or any(
            not v_equals(V, singleton(unit(n, i))) for i, V in enumerate(self.levels[0])
        ):
            return False
        for k, tr_layer in enumerate(self.traces, start=1):
            prev = self.levels[k - 1]
            if len(tr_layer) != len(self.levels[k]):
                return False
            r = self.spec.r[k - 1]
            d = self.spec.d[k - 1]
            for tr, V in zip(tr_layer, self.levels[k]):
                if len(tr.coefficients) > r or (k > 1 and len(tr.reads) > d):
                    return False
                args = [signed_combination(row, [prev[j] for j in tr.reads], n) for row in tr.coefficients]
                acc = args[0]
                for a in args[1:]:
                    acc = v_conv(acc, a)
                if not v_equals(acc, V) or not v_equals(V, tr.result):
                    return False
        top = self.levels[-1]
        return v_equals(signed_combination(self.output, top, n), self.root)

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "levels": [[V.to_json() for V in level] for level in self.levels],
            "traces": [
                [
                    {
                        "layer": t.layer,
                        "neuron": t.index,
                        "reads": list(t.reads),
                        "coefficients": [fmt_vec(row) for row in t.coefficients],
                    }
                    for t in layer
                ]
                for layer in self.traces
            ],
            "output": fmt_vec(self.output),
            "root": self.root.to_json(),
        }


def newton_extract(net: SparseMaxoutNetwork) -> tuple:
    """The virtual polytope ``V`` with ``f_V = net_eval(net, .)``.

    Level-0 objects are the singletons ``{e_i}``; a neuron with arguments
    ``a_1..a_r`` becomes the virtual convex hull of the signed combinations
    ``sum_j a_ij V_j`` of the objects it reads.
    """
    violations = validate(net)
    if violations:
        raise InvalidNetwork("; ".join(map(str, violations)))
    n = net.spec.n
    levels = [[singleton(unit(n, i)) for i in range(n)]]
    traces = []
    for k, layer in enumerate(net.layers, start=1):
        prev = levels[-1]
        cur, tr_layer = [], []
        for i, neuron in enumerate(layer):
            reads = tuple(sorted(neuron.reads))
            rows = tuple(tuple(a[j] for j in reads) for a in neuron.args)
            args = [signed_combination(row, [prev[j] for j in reads], n) for row in rows]
            V = args[0]
            for a in args[1:]:
                V = v_conv(V, a)
            cur.append(V)
            tr_layer.append(NeuronTrace(k, i, reads, rows, V))
        levels.append(cur)
        traces.append(tr_layer)
    root = signed_combination(net.output, levels[-1], n)
    return root, ConstructionWitness(net.spec, levels, traces, net.output, root)


@dataclass(frozen=True)
class MaxExpression:
    """``sum_i beta_i * max_j args_i[j] . x``."""

    n: int
    terms: tuple

    def __post_init__(self):
        terms = []
        for beta, args in self.terms:
            args = tuple(vec(a) for a in args)
            if not args:
                raise NetworkError("every term needs at least one argument")
            if any(len(a) != self.n for a in args):
                raise DimensionMismatch(f"argument vectors must have length {self.n}")
            terms.append((Q(beta), args))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def max_rank(self) -> int:
        return max((len(args) for _, args in self.terms), default=1)

    def __call__(self, x: Sequence):
        x = vec(x)
        if len(x) != self.n:
            raise DimensionMismatch(f"input has length {len(x)}, expected {self.n}")
        return sum((beta * max(dot(a, x) for a in args) for beta, args in self.terms), ZERO)

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [{"beta": fmt(b), "args": [fmt_vec(a) for a in args]} for b, args in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> "MaxExpression":
        try:
            return cls(int(data["n"]), tuple((t["beta"], tuple(parse_vec(a) for a in t["args"])) for t in data["terms"]))
        except (KeyError, TypeError) as exc:
            raise NetworkError(f"malformed expression JSON: {exc!r}") from None


def expr_to_virtual(e: MaxExpression) -> VirtualPolytope:
    """``sum_i beta_i (conv{a_ij} - {0})`` in the virtual algebra."""
    parts = [VirtualPolytope(canonical_form(args), origin(e.n)) for _, args in e.terms]
    return signed_combination([b for b, _ in e.terms], parts, e.n) if parts else zero(e.n)


def capacity(spec: ArchitectureSpec) -> int:
    """How many linear forms one term's maximum can compare.

    Later layers merge at most ``min(d_i, r_i)`` partial maxima per neuron.
    The first layer reads the inputs without an indegree limit, so it
    compares up to ``r_1`` forms even when ``n < r_1``.
    """
    if not spec.depth:
        return 1
    return spec.r[0] * prod(min(d, r) for d, r in zip(spec.d[1:], spec.r[1:]))


def expr_to_network(e: MaxExpression, spec: ArchitectureSpec) -> SparseMaxoutNetwork:
    """Realize ``e`` with the given architecture.

    Layer 1 reads the inputs directly and maximizes groups of up to ``r_1``
    of each term's forms; every later layer merges groups of at most
    ``min(d_i, r_i)`` partial maxima with unit weights, and the output
    functional applies the ``beta_i``.
    """
    if spec.n != e.n:
        raise DimensionMismatch(f"expression lives in R^{e.n}, spec in R^{spec.n}")
    cap = capacity(spec)
    if e.max_rank > cap:
        raise InsufficientDepth(f"a term compares {e.max_rank} forms but depth {spec.depth} allows {cap}")
    if spec.depth == 0:
        out = [ZERO] * e.n
        for beta, (a,) in e.terms:
            out = [o + beta * x for o, x in zip(out, a)]
        return SparseMaxoutNetwork(spec, (), tuple(out))
    groups = [list(args) for _, args in e.terms]
    width = e.n
    layers = []
    # groups[t] lists the items (weight vectors over the previous layer)
    # still to be maximized for term t.
    for k in range(spec.depth):
        c = spec.r[k] if k == 0 else min(spec.d[k], spec.r[k])
        layer = []
        new_groups = []
        for items in groups:
            outs = []
            for s in range(0, len(items), c):
                layer.append(MaxoutNeuron(tuple(items[s : s + c])))
                outs.append(len(layer) - 1)
            new_groups.append(outs)
        width = len(layer)
        groups = [[unit(width, idx) for idx in outs] for outs in new_groups]
        layers.append(tuple(layer))
    out = [ZERO] * width
    for (beta, _), items in zip(e.terms, groups):
        (u,) = items
        idx = next(i for i, x in enumerate(u) if x)
        out[idx] += beta
    return SparseMaxoutNetwork(spec, tuple(layers), tuple(out))


def counterexample_function(x: Sequence):
    """``max(sum_{j<n-1} max(0, x_j), x_{n-1}, x_n)``, evaluated directly."""
    x = vec(x)
    s = sum((max(ZERO, t) for t in x[:-2]), ZERO)
    return max(s, x[-2], x[-1])


def counterexample_network(n: int) -> SparseMaxoutNetwork:
    """Two fully connected rank-2 hidden layers computing
    :func:`counterexample_function` on ``R^n``."""
    if n < 3:
        raise HypothesisError("the counterexample needs n >= 3")
    z = zeros(n)
    layer1 = [MaxoutNeuron((z, unit(n, j))) for j in range(n - 2)]
    layer1.append(MaxoutNeuron((unit(n, n - 2), unit(n, n - 1))))
    w = n - 1
    s_arg = tuple(ONE if j < n - 2 else ZERO for j in range(w))
    layer2 = [MaxoutNeuron((s_arg, unit(w, w - 1)))]
    spec = ArchitectureSpec(n, 2, (n, w), (2, 2))
    return SparseMaxoutNetwork(spec, (tuple(layer1), tuple(layer2)), (ONE,))


def embed_counterexample(n: int, r: Sequence[int]) -> SparseMaxoutNetwork:
    """The counterexample as a fully connected network with rank vector ``r``.

    Needs two layers of rank at least 2; they carry the two rank-2 layers of
    :func:`counterexample_network` and every other layer passes its input
    through unchanged.
    """
    r = tuple(r)
    big = [k for k, rk in enumerate(r) if rk >= 2]
    if len(big) < 2:
        raise HypothesisError("embedding the counterexample needs two layers of rank >= 2")
    base = counterexample_network(n)
    first, second = big[0], big[1]
    layers = []
    width = n
    for k in range(len(r)):
        if k == first:
            layer = list(base.layers[0])
        elif k == second:
            layer = list(base.layers[1])
        else:
            layer = [MaxoutNeuron((unit(width, i),)) for i in range(width)]
        layers.append(tuple(layer))
        width = len(layer)
    widths = [n] + [len(L) for L in layers]
    spec = ArchitectureSpec(n, len(r), tuple(widths[:-1]), r)
    return SparseMaxoutNetwork(spec, tuple(layers), (ONE,))


def dim_bound_vectors(d: Sequence[int], r: Sequence[int]) -> int:
    """``sum_k (r_k - 1) prod_{i > k} d_i``."""
    total = 0
    for k in range(len(r)):
        total += (r[k] - 1) * prod(d[k + 1 :])
    return total


@dataclass
class AttainmentNode:
    """One object of the recursive polytope class with its derivation.

    Level 0 nodes are singletons; a level ``k`` node is the convex hull of
    ``sum_j coefficients[i][j] * children[j]`` over its argument rows.
    """

    level: int
    polytope: Polytope
    children: list = field(default_factory=list)
    coefficients: tuple = ()
    anchor: Optional[RatVector] = None
    index_set: tuple = ()

    def to_json(self) -> dict:
        out = {
            "level": self.level,
            "polytope": self.polytope.to_json(),
            "anchor": fmt_vec(self.anchor) if self.anchor is not None else None,
            "index_set": list(self.index_set),
        }
        if self.level:
            out["coefficients"] = [fmt_vec(row) for row in self.coefficients]
            out["children"] = [c.to_json() for c in self.children]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AttainmentNode":
        node = cls(
            int(data["level"]),
            Polytope.from_json(data["polytope"]),
            anchor=parse_vec(data["anchor"]) if data.get("anchor") is not None else None,
            index_set=tuple(int(i) for i in data.get("index_set", ())),
        )
        if node.level:
            node.coefficients = tuple(parse_vec(row) for row in data["coefficients"])
            node.children = [cls.from_json(c) for c in data["children"]]
        return node


def _combine(coeffs: Sequence, children: Sequence[Polytope], n: int) -> Polytope:
    acc = origin(n)
    for c, P in zip(coeffs, children):
        if not c:
            continue
        if c < 0:
            if not P.is_singleton:
                raise HypothesisError("negative coefficient on a non-singleton polytope")
            term = Polytope(n, [tuple(c * x for x in P.points[0])])
        else:
            term = scale(P, c)
        acc = minkowski_sum(acc, term)
    return acc


def _hull_of_arguments(rows: Sequence, children: Sequence[Polytope], n: int) -> Polytope:
    args = [_combine(row, children, n) for row in rows]
    acc = args[0]
    for a in args[1:]:
        acc = convex_union(acc, a)
    return acc


def check_attainment_witness(node: AttainmentNode, spec: ArchitectureSpec) -> bool:
    """Level-by-level membership check of a derivation tree.

    Each level ``k`` node may use at most ``r_k`` argument rows over at most
    ``d_k`` children of level ``k - 1``, and its stored polytope must equal
    the hull recomputed from those children.
    """
    n = spec.n
    if node.polytope.n != n:
        return False
    if node.level == 0:
        return node.polytope.is_singleton and not node.children
    k = node.level
    if k > spec.depth:
        return False
    if len(node.children) > spec.d[k - 1] or not 1 <= len(node.coefficients) <= spec.r[k - 1]:
        return False
    if any(len(row) != len(node.children) for row in node.coefficients):
        return False
    if any(c.level != k - 1 or not check_attainment_witness(c, spec) for c in node.children):
        return False
    return _hull_of_arguments(node.coefficients, [c.polytope for c in node.children], n) == node.polytope


def attainment_construct(spec: ArchitectureSpec, v: Sequence, I: Sequence[int]) -> tuple:
    """A polytope of the depth-``spec.depth`` class with affine hull
    ``v + span{e_i : i in I}``, and its derivation tree.

    ``I`` uses 0-based coordinates. Index sets are split in ascending order:
    the first ``m_{l-1}`` indices go to child 1, the next to child 2, and the
    last ``r_l - 1`` form the set of offset directions.
    """
    v = vec(v)
    n = spec.n
    I = tuple(sorted(int(i) for i in I))
    m = dim_bound_vectors(spec.d, spec.r)
    if len(v) != n:
        raise HypothesisError(f"anchor has length {len(v)}, expected {n}")
    if n < m:
        raise HypothesisError(f"n = {n} is smaller than the bound m = {m}")
    if len(I) != m or len(set(I)) != m or any(not 0 <= i < n for i in I):
        raise HypothesisError(f"I must be {m} distinct coordinates in [0, {n})")
    for k in range(1, spec.depth):
        if spec.r[k] > spec.d[k]:
            raise HypothesisError(f"layer {k + 1} has r = {spec.r[k]} > d = {spec.d[k]}")
    node = _attain(spec, spec.depth, v, I)
    return node.polytope, node


def _attain(spec: ArchitectureSpec, level: int, v: RatVector, I: tuple) -> AttainmentNode:
    n = spec.n
    if level == 0:
        return AttainmentNode(0, Polytope(n, [v]), anchor=v, index_set=())
    d, r = spec.d[level - 1], spec.r[level - 1]
    m_prev = dim_bound_vectors(spec.d[: level - 1], spec.r[: level - 1])
    blocks = [I[k * m_prev : (k + 1) * m_prev] for k in range(d)]
    J = I[d * m_prev :]
    t_last = tuple(x / r for x in sub(v, [sum(1 for j in J if j == c) for c in range(n)]))
    if level == 1 and r > d:
        # A fully connected first layer may place its r points anywhere;
        # read them off the input singletons {e_1}, ..., {e_n}.
        targets = [tuple(x + (1 if c == j else 0) for c, x in enumerate(v)) for j in J] + [v]
        children = [AttainmentNode(0, Polytope(n, [unit(n, c)]), anchor=unit(n, c)) for c in range(n)]
        coeffs = tuple(tuple(Q(x) for x in t) for t in targets)
    else:
        anchors = [tuple(t_last[c] + (1 if c == J[i] else 0) for c in range(n)) for i in range(r - 1)]
        anchors.append(t_last)
        anchors += [zeros(n)] * (d - r)
        children = [_attain(spec, level - 1, anchors[k], blocks[k]) for k in range(d)]
        rows = []
        for i in range(r - 1):
            row = [ONE] * d
            row[r - 1] = ZERO
            row[i] += 1
            rows.append(tuple(row))
        rows.append((ONE,) * d)
        coeffs = tuple(rows)
    P = _hull_of_arguments(coeffs, [c.polytope for c in children], n)
    return AttainmentNode(level, P, children, coeffs, anchor=v, index_set=I)


def affine_hull_is(P: Polytope, v: Sequence, I: Sequence[int]) -> bool:
    """``aff(P) = v + span{e_i : i in I}``, decided by rank checks."""
    v = vec(v)
    idx = set(I)
    diffs = [sub(p, v) for p in P.points]
    if any(x for d_ in diffs for c, x in enumerate(d_) if c not in idx):
        return False
    return rank(diffs) == len(idx) and poly_dim(P) == len(idx)


def random_network(
    rng: random.Random,
    n: int,
    depth: int,
    d: Sequence[int],
    r: Sequence[int],
    width: tuple = (1, 3),
) -> SparseMaxoutNetwork:
    """A seeded random valid network.

    Weights are drawn from ``{-2, ..., 2}`` divided by 1 or 2; each neuron
    after the first layer reads a uniformly chosen ``d``-subset of the
    previous outputs (all of them when fewer exist).
    """
    spec = ArchitectureSpec(n, depth, tuple(d), tuple(r))
    layers = []
    prev = n
    for k in range(depth):
        w = rng.randint(*width)
        layer = []
        for _ in range(w):
            if k == 0:
                reads = list(range(prev))
            else:
                reads = sorted(rng.sample(range(prev), min(spec.d[k], prev)))
            nargs = rng.randint(1, spec.r[k])
            args = []
            for _ in range(nargs):
                a = [ZERO] * prev
                for j in reads:
                    a[j] = Q(rng.randint(-2, 2)) / rng.randint(1, 2)
                args.append(tuple(a))
            layer.append(MaxoutNeuron(tuple(args)))
        layers.append(tuple(layer))
        prev = w
    out = tuple(Q(rng.randint(-2, 2)) / rng.randint(1, 2) for _ in range(prev))
    return SparseMaxoutNetwork(spec, tuple(layers), out)


def random_spec(rng: random.Random, n_range=(1, 6), depth_range=(0, 3), d_range=(1, 3), r_range=(1, 3)) -> ArchitectureSpec:
    n = rng.randint(*n_range)
    depth = rng.randint(*depth_range)
    d = tuple([n] + [rng.randint(*d_range) for _ in range(depth - 1)]) if depth else ()
    r = tuple(rng.randint(*r_range) for _ in range(depth))
    return ArchitectureSpec(n, depth, d, r)


def random_max_expression(rng: random.Random, n: int, terms: int, max_rank: int, exact_rank: bool = True) -> MaxExpression:
    """Random ``MAX_n`` expression; with ``exact_rank`` its first term has
    exactly ``max_rank`` arguments."""
    out = []
    for t in range(terms):
        k = max_rank if (exact_rank and t == 0) else rng.randint(1, max_rank)
        args = tuple(tuple(Q(rng.randint(-3, 3)) / rng.randint(1, 2) for _ in range(n)) for _ in range(k))
        out.append((Q(rng.randint(-3, 3)) / rng.randint(1, 3), args))
    return MaxExpression(n, tuple(out))


def random_point(rng: random.Random, n: int, scale_: int = 20) -> RatVector:
    return tuple(Q(rng.randint(-scale_, scale_)) / rng.randint(1, 7) for _ in range(n))
