"""End-to-end acceptance runs, one test per criterion.

Every run is exact and seeded. Each test prints one ``PASS`` or ``FAIL``
line to the terminal, whether or not output capture is on.
"""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from maxoutpoly.experiments import ExperimentConfig, make_instance
from maxoutpoly.expressivity import (
    NOT_IN_MAX,
    certify_width_cannot_compensate,
    check_dim_bound,
    hierarchy_report,
    hyperplane_test,
)
from maxoutpoly.lp import EQ, GE, LE, OPTIMAL, LinearProgram, lp_optimize, satisfies
from maxoutpoly.network import (
    ArchitectureSpec,
    attainment_construct,
    check_attainment_witness,
    counterexample_network,
    dim_bound_vectors,
    expr_to_network,
    net_eval,
    newton_extract,
    random_max_expression,
    random_point,
    validate,
)
from maxoutpoly.polytope import canonical_form, convex_union, edges, minkowski_sum, poly_dim
from maxoutpoly.rational import Q, sub, unit
from maxoutpoly.virtual import VirtualPolytope, from_points, v_add, v_conv, v_dim, v_scale, v_support
import oracles


@pytest.fixture
def verdict(capsys):
    @contextmanager
    def run(label):
        notes = []
        start = time.perf_counter()
        try:
            yield notes
        except BaseException:
            with capsys.disabled():
                print(f"\n[acceptance] {label}: FAIL {' '.join(notes)}")
            raise
        with capsys.disabled():
            print(f"\n[acceptance] {label}: PASS {' '.join(notes)} ({time.perf_counter() - start:.1f}s)")

    return run


@pytest.fixture(scope="module")
def sweep():
    cfg = ExperimentConfig(seed=0, networks=200, points=50)
    return [make_instance(cfg, i) for i in range(cfg.networks)]


def test_criterion_1_duality(verdict, sweep):
    with verdict("1 duality") as notes:
        checks = agree = 0
        for net, pts in sweep:
            assert validate(net) == []
            s = net.spec
            assert s.n <= 6 and s.depth <= 3 and all(x <= 3 for x in s.d[1:]) and all(x <= 3 for x in s.r)
            V, _ = newton_extract(net)
            for x in pts:
                checks += 1
                agree += v_support(V, x) == net_eval(net, x)
        notes.append(f"{agree}/{checks} checks agree")
        assert checks == 10_000 and agree == checks


def test_criterion_2_dimension_bound(verdict, sweep):
    # The bound is a statement about single neurons: every neuron of layer k
    # has v_dim <= m_k. The network output is a linear combination of
    # last-layer neurons and is checked against |supp(output)| * m_l.
    with verdict("2 dimension bound") as notes:
        neurons = held = root_over = 0
        for net, _ in sweep:
            rep = check_dim_bound(net, strict=False)
            held += rep.holds
            neurons += sum(len(level) for level in rep.neuron_dims)
            assert rep.v_dim <= rep.bound
            root_over += rep.output_dim > rep.bound
        notes.append(f"{held}/{len(sweep)} networks, {neurons} neurons within bound;")
        notes.append(f"{root_over} outputs combine neurons past m_l")
        assert held == len(sweep)


def attainment_specs():
    """Every spec with depth <= 3, 2 <= r_i <= d_i <= 3 beyond layer 1, and
    n = d_1 = m_l <= 13."""
    out = []
    for depth in range(1, 4):
        for r in itertools.product((2, 3), repeat=depth):
            for tail in itertools.product((2, 3), repeat=depth - 1):
                if any(ri > di for ri, di in zip(r[1:], tail)):
                    continue
                m = dim_bound_vectors((1,) + tail, r)
                if 1 <= m <= 13:
                    out.append(ArchitectureSpec(m, depth, (m,) + tail, r))
    return out


def test_criterion_3_attainment(verdict):
    with verdict("3 attainment") as notes:
        rng = random.Random(3)
        specs = attainment_specs()
        for spec in specs:
            m = dim_bound_vectors(spec.d, spec.r)
            assert m == spec.n
            v = random_point(rng, spec.n, 5)
            I = tuple(range(m))
            P, node = attainment_construct(spec, v, I)
            assert poly_dim(P) == m
            diffs = [oracles.fvec(sub(p, v)) for p in P.points]
            assert oracles.frank(diffs) == m
            assert all(x == 0 for d_ in diffs for c, x in enumerate(d_) if c not in I)
            assert check_attainment_witness(node, spec)
        notes.append(f"{len(specs)} specs")
        assert len(specs) > 0


def test_criterion_4_width_cannot_compensate(verdict):
    with verdict("4 width cannot compensate") as notes:
        for n in range(4, 9):
            net = counterexample_network(n)
            assert validate(net) == [] and net.spec.depth == 2 and net.spec.r == (2, 2)
            V, _ = newton_extract(net)
            start = time.perf_counter()
            cert = hyperplane_test(V, sub(unit(n, n - 2), unit(n, n - 1)))
            elapsed = time.perf_counter() - start
            assert cert.verdict == NOT_IN_MAX and len(cert.contributing) > 0 and cert.verify()
            if n == 8:
                assert len(V.positive) == 66
                assert elapsed <= 120
                notes.append(f"n=8: {len(V.positive)} vertices, {elapsed:.2f}s;")
        wide = certify_width_cannot_compensate(8, ArchitectureSpec.uniform(8, 3, 2, 2))
        assert wide.issued and wide.verify()
        notes.append("n=4..8 NotInMaxN")


def test_criterion_5_max_expressions(verdict):
    with verdict("5 MAX_n(2^l) to network") as notes:
        rng = random.Random(5)
        evals = 0
        for i in range(50):
            depth = i % 4
            n = rng.randint(1, 4)
            e = random_max_expression(rng, n, rng.randint(1, 4), 2**depth)
            assert e.max_rank == 2**depth
            net = expr_to_network(e, ArchitectureSpec.uniform(n, depth, 2, 2))
            assert validate(net) == []
            for _ in range(50):
                x = random_point(rng, n)
                assert net_eval(net, x) == e(x)
                evals += 1
        notes.append(f"50 expressions, {evals} evaluations")


def test_criterion_6_hierarchy(verdict):
    with verdict("6 hierarchy") as notes:
        rep = hierarchy_report(7, 2, 2)
        dims = [lv.attained for lv in rep.levels]
        notes.append(f"dims {dims}, terminal {rep.terminal}")
        assert [lv.level for lv in rep.levels] == [0, 1, 2, 3]
        assert all(lv.hull_ok and lv.witness_ok for lv in rep.levels)
        assert dims == [0, 1, 3, 7]
        assert all(lv.strict for lv in rep.levels[1:])
        assert rep.all_strict and rep.terminal == 3


def _rand_points(rng, n, k):
    return [tuple(Q(rng.randint(-4, 4)) / rng.randint(1, 2) for _ in range(n)) for _ in range(k)]


def test_criterion_7_algebra_laws(verdict):
    with verdict("7 algebra laws") as notes:
        rng = random.Random(7)
        checks = 0
        for _ in range(100):
            n = rng.randint(1, 4)
            A, B, C, D = (_rand_points(rng, n, rng.randint(1, 5)) for _ in range(4))
            V1, V2 = from_points(A, B), from_points(C, D)
            lam = Q(rng.randint(-5, 5)) / rng.randint(1, 3)
            S, L, M = v_add(V1, V2), v_scale(V1, lam), v_conv(V1, V2)
            for _ in range(50):
                x = random_point(rng, n)
                f1 = oracles.support(A, x) - oracles.support(B, x)
                f2 = oracles.support(C, x) - oracles.support(D, x)
                assert Fraction(str(v_support(V1, x))) == f1
                assert Fraction(str(v_support(S, x))) == f1 + f2
                assert Fraction(str(v_support(L, x))) == Fraction(str(lam)) * f1
                assert Fraction(str(v_support(M, x))) == max(f1, f2)
                checks += 4
        shifts = 0
        for _ in range(100):
            n = rng.randint(1, 4)
            V = from_points(_rand_points(rng, n, rng.randint(1, 5)), _rand_points(rng, n, rng.randint(1, 5)))
            R = canonical_form(_rand_points(rng, n, rng.randint(1, 5)))
            W = VirtualPolytope(minkowski_sum(V.positive, R), minkowski_sum(V.negative, R))
            assert v_dim(V) == v_dim(W)
            for _ in range(10):
                x = random_point(rng, n)
                assert v_support(V, x) == v_support(W, x)
            shifts += 1
        notes.append(f"{checks} law checks, {shifts} shifted representations")


def _kernel_instances(rng):
    for n in range(1, 5):
        for k in range(1, 13):
            for _ in range(3):
                yield [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(k)]
    # Degenerate and symmetric shapes
    yield [(0, 0, 0, 0)] * 12
    yield [(i, 2 * i, 0, -i) for i in range(12)]
    yield [tuple((b >> c) & 1 for c in range(3)) for b in range(8)]
    yield [tuple(s * x for x in unit(4, i)) for i in range(4) for s in (1, -1)]
    yield [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0), (0, 1), (2, 1), (1, 2)]


def _hand_solved_lps():
    # (program, value, point), each solved by hand.
    yield LinearProgram([3, 2], [[1, 1], [1, 3], [1, 0]], [4, 6, 3], [LE, LE, LE], bounds=[(0, None)] * 2), 11, (3, 1)
    yield LinearProgram([1, 1], [[1, 2], [1, -1]], [4, -2], [EQ, GE], bounds=[(0, None)] * 2, sense="min"), 2, (0, 2)
    yield LinearProgram([1, 1], [[3, 1], [1, 2]], [3, 3], [LE, LE]), Q(9) / 5, (Q(3) / 5, Q(6) / 5)
    beale = [[Q(1) / 4, -8, -1, 9], [Q(1) / 2, -12, Q(-1) / 2, 3], [0, 0, 1, 0]]
    yield LinearProgram([Q(3) / 4, -20, Q(1) / 2, -6], beale, [0, 0, 1], [LE] * 3, bounds=[(0, None)] * 4), Q(5) / 4, (1, 0, 1, 0)


def test_criterion_8_kernel_conformance(verdict):
    with verdict("8 kernel conformance") as notes:
        rng = random.Random(8)
        count = 0
        for pts in _kernel_instances(rng):
            P = canonical_form(pts)
            assert {oracles.fvec(p) for p in P.points} == oracles.extreme_points(pts)
            got = {(oracles.fvec(P.points[i]), oracles.fvec(P.points[j])) for i, j in edges(P)}
            assert got == oracles.edge_pairs(P.points)
            split = rng.randint(1, len(pts)) if len(pts) > 1 else 1
            A, B = pts[:split], pts[split:] or pts[:1]
            S = minkowski_sum(canonical_form(A), canonical_form(B))
            # Vertices of A + B are sums of vertices, so reduce the summands first.
            summed = oracles.mink(sorted(oracles.extreme_points(A)), sorted(oracles.extreme_points(B)))
            assert {oracles.fvec(p) for p in S.points} == oracles.extreme_points(summed)
            U = convex_union(canonical_form(A), canonical_form(B))
            assert {oracles.fvec(p) for p in U.points} == oracles.extreme_points(A + B)
            count += 1
        lps = 0
        for lp, value, pt in _hand_solved_lps():
            res = lp_optimize(lp)
            assert res.status == OPTIMAL and res.value == value and res.point == tuple(Q(x) for x in pt)
            assert satisfies(lp, res.point)
            lps += 1
        notes.append(f"{count} geometric instances, {lps} hand-solved LPs")
