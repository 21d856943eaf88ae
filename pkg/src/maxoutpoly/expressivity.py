"""Expressivity checks: dimension bounds, a non-membership test for
``MAX_n(n)`` and hierarchy reports, each emitted as a replayable certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .lp import ConeCertificate, TrivialConeCertificate, cone_is_trivial
from .network import (
    ArchitectureSpec,
    HypothesisError,
    InvalidNetwork,
    SparseMaxoutNetwork,
    affine_hull_is,
    attainment_construct,
    check_attainment_witness,
    counterexample_network,
    dim_bound_vectors,
    embed_counterexample,
    newton_extract,
    validate,
)
from .polytope import Polytope, edge_certificate, poly_dim, translate
from .rational import ZERO, RatVector, fmt_vec, mat, neg, parse_vec, rank, sub, unit, vec
from .virtual import VirtualPolytope, v_dim, v_equals

NOT_IN_MAX = "NotInMaxN"
INCONCLUSIVE = "Inconclusive"


class NotConvex(ValueError):
    pass


def dim_bound(spec: ArchitectureSpec) -> int:
    return dim_bound_vectors(spec.d, spec.r)


def max_rank_upper(net: SparseMaxoutNetwork) -> int:
    """Every network of this architecture lies in ``MAX_n(m + 1)``."""
    return dim_bound(net.spec) + 1


@dataclass
class DimBoundReport:
    """Dimension of every neuron's virtual polytope against its level's bound.

    The bound governs single neurons. The network output is a linear
    combination of last-layer neurons, so ``output_dim`` is only checked
    against ``|supp(output)|`` times the bound (dimension is subadditive).
    """

    spec: ArchitectureSpec
    v_dim: int
    bound: int
    holds: bool
    neuron_dims: list = field(default_factory=list)
    level_bounds: list = field(default_factory=list)
    output_dim: int = 0
    output_bound: int = 0

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "v_dim": self.v_dim,
            "bound": self.bound,
            "holds": self.holds,
            "neuron_dims": self.neuron_dims,
            "level_bounds": self.level_bounds,
            "output_dim": self.output_dim,
            "output_bound": self.output_bound,
        }


class BoundViolation(AssertionError):
    """A valid network beat the dimension bound: a soundness bug."""


def check_dim_bound(net: SparseMaxoutNetwork, strict: bool = True) -> DimBoundReport:
    if validate(net):
        raise InvalidNetwork("; ".join(map(str, validate(net))))
    root, witness = newton_extract(net)
    spec = net.spec
    level_bounds = [dim_bound_vectors(spec.d[:k], spec.r[:k]) for k in range(spec.depth + 1)]
    neuron_dims = [[v_dim(V) for V in level] for level in witness.levels[1:]]
    top = neuron_dims[-1] if neuron_dims else [0]
    out_dim = v_dim(root)
    out_bound = sum(1 for c in net.output if c) * level_bounds[-1]
    holds = all(dim <= level_bounds[k + 1] for k, dims in enumerate(neuron_dims) for dim in dims)
    holds = holds and out_dim <= out_bound
    report = DimBoundReport(spec, max(top), level_bounds[-1], holds, neuron_dims, level_bounds, out_dim, out_bound)
    if strict and not holds:
        raise BoundViolation(f"dimension bound violated: {report.to_json()}")
    return report


def _parallel(u: Sequence, c: Sequence) -> bool:
    return any(u) and rank([u, c]) == 1


def _parallel_pairs(P: Polytope, c: Sequence) -> list:
    pts = P.points
    return [(i, j) for i in range(len(pts)) for j in range(i + 1, len(pts)) if _parallel(sub(pts[i], pts[j]), c)]


def _edge_cone(P: Polytope, i: int, j: int) -> tuple:
    """``(G, E)`` with the normal cone of edge ``(i, j)`` being ``{G x >= 0, E x = 0}``."""
    a = P.points[i]
    G = tuple(sub(a, b) for k, b in enumerate(P.points) if k not in (i, j))
    return G, (sub(a, P.points[j]),)


@dataclass
class HyperplaneCertificate:
    """Evidence for or against ``T``: nonempty and line-free inside ``c.x = 0``.

    ``contributing`` lists edges parallel to ``c`` whose normal cone is
    ``(n-1)``-dimensional, ``excluded`` the parallel pairs that are not such
    edges, and ``pairs`` one line-freeness check per ordered pair of
    contributing cones.
    """

    polytope: Polytope
    normal: RatVector
    contributing: list
    excluded: list
    pairs: list
    verdict: str
    reason: str = ""

    @property
    def cones(self) -> list:
        return [_edge_cone(self.polytope, i, j) for i, j, _ in self.contributing]

    def verify(self) -> bool:
        """Replay every transcript against systems rebuilt from the polytope.

        No LP is solved: witnesses and multipliers are checked directly.
        """
        P, c = self.polytope, self.normal
        if not any(c) or len(c) != P.n:
            return False
        listed = sorted([(i, j) for i, j, _ in self.contributing] + [(i, j) for i, j, _ in self.excluded])
        if listed != _parallel_pairs(P, c):
            return False
        for i, j, cert in self.contributing:
            G, E = _edge_cone(P, i, j)
            if not cert.feasible or cert.A != G or cert.E != E or not cert.verify():
                return False
        for i, j, cert in self.excluded:
            G, E = _edge_cone(P, i, j)
            if cert.feasible or cert.A != G or cert.E != E or not cert.verify():
                return False
        cones = self.cones
        k = len(cones)
        if sorted((s, t) for s, t, _ in self.pairs) != [(s, t) for s in range(k) for t in range(k)] and self.verdict == NOT_IN_MAX:
            return False
        for s, t, cert in self.pairs:
            M, E = _pair_system(cones[s], cones[t])
            if cert.M != M or cert.E != E or not cert.verify():
                return False
        all_trivial = all(cert.trivial for _, _, cert in self.pairs)
        expected = NOT_IN_MAX if (k > 0 and all_trivial and len(self.pairs) == k * k) else INCONCLUSIVE
        return self.verdict == expected

    def to_json(self) -> dict:
        return {
            "polytope": self.polytope.to_json(),
            "normal": fmt_vec(self.normal),
            "verdict": self.verdict,
            "reason": self.reason,
            "contributing": [{"edge": [i, j], "cell": cert.to_json()} for i, j, cert in self.contributing],
            "excluded": [{"pair": [i, j], "cell": cert.to_json()} for i, j, cert in self.excluded],
            "line_checks": [{"cones": [s, t], "check": cert.to_json()} for s, t, cert in self.pairs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HyperplaneCertificate":
        return cls(
            Polytope.from_json(data["polytope"]),
            parse_vec(data["normal"]),
            [(e["edge"][0], e["edge"][1], ConeCertificate.from_json(e["cell"])) for e in data["contributing"]],
            [(e["pair"][0], e["pair"][1], ConeCertificate.from_json(e["cell"])) for e in data["excluded"]],
            [(p["cones"][0], p["cones"][1], TrivialConeCertificate.from_json(p["check"])) for p in data["line_checks"]],
            data["verdict"],
            data.get("reason", ""),
        )


def _pair_system(cone_s: tuple, cone_t: tuple) -> tuple:
    # v in F_s and -v in F_t.
    Gs, Es = cone_s
    Gt, Et = cone_t
    return mat(list(Gs) + [neg(g) for g in Gt]), mat(list(Es) + list(Et))


def hyperplane_test(P: Union[Polytope, VirtualPolytope], c: Sequence) -> HyperplaneCertificate:
    """Test the union ``T`` of ``(n-1)``-cells of ``f_P`` inside ``{c.x = 0}``.

    ``NotInMaxN`` means ``T`` is nonempty and contains no line, which rules
    out ``f_P`` in ``MAX_n(n)``. A union of closed cones contains a line iff
    it contains one through the origin, so line-freeness reduces to
    checking that no ``v != 0`` has ``v`` in one cone and ``-v`` in another
    (or the same) cone.
    """
    if isinstance(P, VirtualPolytope):
        if not P.negative.is_singleton:
            raise NotConvex("hyperplane test needs a convex function (singleton negative part)")
        P = translate(P.positive, neg(P.negative.points[0]))
    c = vec(c)
    if len(c) != P.n:
        raise ValueError(f"normal has length {len(c)}, polytope lives in R^{P.n}")
    if not any(c):
        raise ValueError("the hyperplane normal must be nonzero")
    contributing, excluded = [], []
    for i, j in _parallel_pairs(P, c):
        cert = edge_certificate(P, i, j)
        (contributing if cert.feasible else excluded).append((i, j, cert))
    cert = HyperplaneCertificate(P, c, contributing, excluded, [], INCONCLUSIVE)
    if not contributing:
        cert.reason = "no (n-1)-cell lies in the hyperplane"
        return cert
    cones = cert.cones
    for s in range(len(cones)):
        for t in range(len(cones)):
            M, E = _pair_system(cones[s], cones[t])
            check = cone_is_trivial(M, P.n, E)
            cert.pairs.append((s, t, check))
            if not check.trivial:
                cert.reason = f"cones {s} and {t} contain opposite rays {fmt_vec(check.point)}"
                return cert
    cert.verdict = NOT_IN_MAX
    cert.reason = f"{len(cones)} cell(s) in the hyperplane, union is line-free"
    return cert


@dataclass
class WidthCertificate:
    """A two-layer rank-2 function outside the sparse class of ``spec``.

    The chain: ``f`` is computed by a fully connected two-layer rank-2
    network, also by a fully connected network with ranks ``spec.r``
    (``embedded``); the hyperplane test puts ``f`` outside ``MAX_n(n)``,
    which contains ``MAX_n(m + 1)``, which contains every network of
    ``spec``.
    """

    n: int
    spec: ArchitectureSpec
    bound: int
    network: SparseMaxoutNetwork
    embedded: SparseMaxoutNetwork
    newton: VirtualPolytope
    hyperplane: HyperplaneCertificate

    @property
    def issued(self) -> bool:
        return self.hyperplane.verdict == NOT_IN_MAX

    def verify(self) -> bool:
        n = self.n
        if self.n < self.bound + 1 or self.bound != dim_bound(self.spec) or self.spec.depth < 2:
            return False
        if validate(self.network) or validate(self.embedded):
            return False
        if self.network.spec != ArchitectureSpec(n, 2, (n, n - 1), (2, 2)):
            return False
        if self.embedded.spec.r != self.spec.r or self.embedded.spec.d != tuple(self.embedded.widths[:-1]):
            return False
        V, w = newton_extract(self.network)
        if not w.verify() or not v_equals(V, self.newton) or not v_equals(newton_extract(self.embedded)[0], V):
            return False
        if not self.newton.is_convex:
            return False
        q = self.newton.negative.points[0]
        if translate(self.newton.positive, neg(q)) != self.hyperplane.polytope:
            return False
        if self.hyperplane.normal != sub(unit(n, n - 2), unit(n, n - 1)):
            return False
        return self.hyperplane.verify() and self.issued

    def to_json(self) -> dict:
        return {
            "claim": "f is computable with two fully connected rank-2 layers and with ranks r, but not by any network of spec",
            "n": self.n,
            "spec": self.spec.to_json(),
            "bound": self.bound,
            "max_rank_upper": self.bound + 1,
            "inclusions": [f"N(spec) in MAX_{self.n}({self.bound + 1})", f"MAX_{self.n}({self.bound + 1}) in MAX_{self.n}({self.n})"],
            "network": self.network.to_json(),
            "embedded": self.embedded.to_json(),
            "newton": self.newton.to_json(),
            "hyperplane": self.hyperplane.to_json(),
            "verdict": self.hyperplane.verdict,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WidthCertificate":
        s = data["spec"]
        return cls(
            int(data["n"]),
            ArchitectureSpec(int(s["n"]), int(s["depth"]), tuple(s["d"]), tuple(s["r"])),
            int(data["bound"]),
            SparseMaxoutNetwork.from_json(data["network"]),
            SparseMaxoutNetwork.from_json(data["embedded"]),
            VirtualPolytope.from_json(data["newton"]),
            HyperplaneCertificate.from_json(data["hyperplane"]),
        )


def certify_width_cannot_compensate(n: int, spec: ArchitectureSpec) -> WidthCertificate:
    if spec.n != n:
        raise HypothesisError(f"spec input dimension {spec.n} differs from n = {n}")
    if spec.depth < 2:
        raise HypothesisError("needs depth >= 2")
    if any(d < 2 for d in spec.d):
        raise HypothesisError("needs every indegree >= 2")
    m = dim_bound(spec)
    if n < m + 1:
        raise HypothesisError(f"needs n >= m + 1 = {m + 1}, got n = {n}")
    net = counterexample_network(n)
    embedded = embed_counterexample(n, spec.r)
    V, _ = newton_extract(net)
    cert = hyperplane_test(V, sub(unit(n, n - 2), unit(n, n - 1)))
    return WidthCertificate(n, spec, m, net, embedded, V, cert)


@dataclass
class HierarchyLevel:
    level: int
    spec: ArchitectureSpec
    bound: int
    attained: int
    hull_ok: bool
    witness_ok: bool
    strict: Optional[bool]
    polytope: Polytope

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "d": list(self.spec.d),
            "r": list(self.spec.r),
            "bound": self.bound,
            "attained": self.attained,
            "affine_hull_ok": self.hull_ok,
            "witness_ok": self.witness_ok,
            "strict": self.strict,
        }


@dataclass
class HierarchyReport:
    n: int
    levels: list

    @property
    def terminal(self) -> int:
        return self.levels[-1].level

    @property
    def all_strict(self) -> bool:
        return all(lv.strict for lv in self.levels[1:]) and all(lv.hull_ok and lv.witness_ok for lv in self.levels)

    def table(self) -> str:
        lines = ["level  bound  attained  strict"]
        for lv in self.levels:
            s = "-" if lv.strict is None else ("yes" if lv.strict else "no")
            lines.append(f"{lv.level:>5}  {lv.bound:>5}  {lv.attained:>8}  {s:>6}")
        lines.append(f"terminal level: {self.terminal}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"n": self.n, "terminal": self.terminal, "levels": [lv.to_json() for lv in self.levels]}


def _expand(x: Union[int, Sequence[int]], depth: int) -> list:
    return [x] * depth if isinstance(x, int) else list(x[:depth])


def hierarchy_report(n: int, d: Union[int, Sequence[int]], r: Union[int, Sequence[int]]) -> HierarchyReport:
    """Levels ``0, 1, ...`` while the bound fits in ``n``.

    Integer ``d`` and ``r`` stand for constant vectors (with ``d_1 = n``)
    and extend as far as the bound allows; sequences cap the depth at their
    length. Level ``k`` is strictly larger than level ``k - 1`` when the
    attainment polytope reaches ``m_k > m_{k-1}``, since nothing at the
    lower level exceeds ``m_{k-1}``.
    """
    if isinstance(r, int) and isinstance(d, int) and r < 2:
        raise HypothesisError("with constant rank 1 the bound never grows, so the hierarchy has no end")
    cap = None
    if not isinstance(d, int) or not isinstance(r, int):
        cap = min(len(x) for x in (d, r) if not isinstance(x, int))
    levels = []
    depth = 0
    while cap is None or depth <= cap:
        dv = _expand(d, depth)
        if dv:
            dv[0] = n
        spec = ArchitectureSpec(n, depth, tuple(dv), tuple(_expand(r, depth)))
        for k in range(1, depth):
            if spec.r[k] > spec.d[k]:
                raise HypothesisError(f"layer {k + 1} has r = {spec.r[k]} > d = {spec.d[k]}")
        m = dim_bound(spec)
        if m > n:
            break
        I = tuple(range(m))
        v = (ZERO,) * n
        P, node = attainment_construct(spec, v, I)
        attained = poly_dim(P)
        strict = None
        if levels:
            prev = levels[-1].bound
            strict = attained == m and m > prev
        levels.append(
            HierarchyLevel(depth, spec, m, attained, affine_hull_is(P, v, I), check_attainment_witness(node, spec), strict, P)
        )
        depth += 1
    return HierarchyReport(n, levels)


__all__ = [
    "BoundViolation",
    "DimBoundReport",
    "HierarchyLevel",
    "HierarchyReport",
    "HyperplaneCertificate",
    "INCONCLUSIVE",
    "NOT_IN_MAX",
    "NotConvex",
    "WidthCertificate",
    "certify_width_cannot_compensate",
    "check_dim_bound",
    "dim_bound",
    "hierarchy_report",
    "hyperplane_test",
    "max_rank_upper",
]
