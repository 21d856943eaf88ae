import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxoutpoly.expressivity import (
    INCONCLUSIVE,
    NOT_IN_MAX,
    HyperplaneCertificate,
    NotConvex,
    WidthCertificate,
    certify_width_cannot_compensate,
    check_dim_bound,
    dim_bound,
    hierarchy_report,
    hyperplane_test,
    max_rank_upper,
)
from maxoutpoly.network import (
    ArchitectureSpec,
    HypothesisError,
    MaxoutNeuron,
    SparseMaxoutNetwork,
    counterexample_network,
    expr_to_network,
    newton_extract,
    random_max_expression,
    random_network,
    random_spec,
)
from maxoutpoly.polytope import canonical_form, minkowski_sum, point
from maxoutpoly.rational import Q, sub, unit
from maxoutpoly.virtual import VirtualPolytope, from_points, v_dim


def uniform(n, depth, d=2, r=2):
    return ArchitectureSpec.uniform(n, depth, d, r)


def test_dim_bound_examples():
    for depth in range(5):
        assert dim_bound(uniform(20, depth)) == 2**depth - 1
    assert dim_bound(ArchitectureSpec(4, 0, (), ())) == 0
    assert dim_bound(ArchitectureSpec(5, 3, (5, 3, 3), (2, 2, 2))) == 13


@given(st.integers(1, 6), st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), max_size=4), st.integers(1, 4), st.integers(1, 4))
def test_dim_bound_monotone(n, layers, d_new, r_new):
    d = [n] + [x for x, _ in layers[1:]] if layers else []
    r = [y for _, y in layers]
    base = ArchitectureSpec(n, len(r), tuple(d), tuple(r))
    grown = ArchitectureSpec(n, len(r) + 1, tuple(d + [d_new]) if d else (n,), tuple(r + [r_new]))
    d_eff = grown.d[-1]
    if r_new == 1:
        assert dim_bound(grown) == d_eff * dim_bound(base)
    else:
        assert dim_bound(grown) > dim_bound(base)
        assert dim_bound(grown) == d_eff * dim_bound(base) + r_new - 1


def test_max_rank_upper_examples():
    net3 = random_network(random.Random(0), 4, 3, (4, 2, 2), (2, 2, 2))
    assert max_rank_upper(net3) == 8
    lin = SparseMaxoutNetwork(ArchitectureSpec(2, 0, (), ()), (), (1, 2))
    assert max_rank_upper(lin) == 1
    deep = random_network(random.Random(0), 3, 3, (3, 3, 3), (2, 2, 2))
    assert max_rank_upper(deep) == 14


def test_check_dim_bound_examples():
    lin = SparseMaxoutNetwork(ArchitectureSpec(2, 0, (), ()), (), (1, 2))
    rep = check_dim_bound(lin)
    assert (rep.v_dim, rep.bound, rep.holds) == (0, 0, True)
    tree = SparseMaxoutNetwork(
        uniform(4, 2),
        (
            (MaxoutNeuron((unit(4, 0), unit(4, 1))), MaxoutNeuron((unit(4, 2), unit(4, 3)))),
            (MaxoutNeuron((unit(2, 0), unit(2, 1))),),
        ),
        (1,),
    )
    rep = check_dim_bound(tree)
    assert (rep.v_dim, rep.bound, rep.holds) == (3, 3, True)


def test_output_combination_may_exceed_single_neuron_bound():
    # Two rank-2 neurons summed: each is a segment (dim 1 = bound), the sum is 2-dimensional.
    spec = ArchitectureSpec(2, 1, (2,), (2,))
    net = SparseMaxoutNetwork(spec, ((MaxoutNeuron(((0, 0), (1, 0))), MaxoutNeuron(((0, 0), (0, 1)))),), (1, 1))
    rep = check_dim_bound(net)
    assert rep.neuron_dims == [[1, 1]] and rep.v_dim == 1 == rep.bound
    assert rep.output_dim == 2 == rep.output_bound and rep.holds


def test_check_dim_bound_random_sweep():
    rng = random.Random(31)
    for _ in range(40):
        spec = random_spec(rng)
        rep = check_dim_bound(random_network(rng, spec.n, spec.depth, spec.d, spec.r))
        assert rep.holds and rep.v_dim <= rep.bound


def test_hyperplane_examples():
    for n in range(3, 9):
        V, _ = newton_extract(counterexample_network(n))
        c = sub(unit(n, n - 2), unit(n, n - 1))
        cert = hyperplane_test(V, c)
        assert cert.verdict == NOT_IN_MAX and cert.verify()
        assert len(cert.contributing) == 1
        # The unique cell is {x_{n-1} = x_n >= S(x)}; its witness sits inside it.
        _, _, cell = cert.contributing[0]
        x = [Fraction(str(t)) for t in cell.witness]
        assert x[-2] == x[-1] > sum(max(Fraction(0), t) for t in x[:-2])
        assert v_dim(V) == n
    seg = canonical_form([unit(2, 0), unit(2, 1)])
    assert hyperplane_test(seg, (1, -1)).verdict == INCONCLUSIVE
    lin = hyperplane_test(point((1, 2, 3)), (0, 1, 0))
    assert lin.verdict == INCONCLUSIVE and lin.contributing == [] and lin.verify()


def test_hyperplane_errors():
    with pytest.raises(ValueError):
        hyperplane_test(point((1, 2)), (0, 0))
    with pytest.raises(NotConvex):
        hyperplane_test(from_points([(0, 0), (1, 0)], [(0, 0), (0, 1)]), (1, 0))


def test_hyperplane_convex_virtual_input_is_translated():
    V, _ = newton_extract(counterexample_network(4))
    t = point((1, 2, 3, 4))
    shifted = VirtualPolytope(minkowski_sum(V.positive, t), t)
    assert hyperplane_test(shifted, (0, 0, 1, -1)).polytope == V.positive


def test_hyperplane_certificate_replay_and_tamper():
    V, _ = newton_extract(counterexample_network(5))
    cert = hyperplane_test(V, (0, 0, 0, 1, -1))
    data = json.loads(json.dumps(cert.to_json()))
    assert HyperplaneCertificate.from_json(data).verify()
    forged = json.loads(json.dumps(data))
    forged["contributing"] = []
    assert not HyperplaneCertificate.from_json(forged).verify()
    forged = json.loads(json.dumps(data))
    forged["verdict"] = INCONCLUSIVE
    assert not HyperplaneCertificate.from_json(forged).verify()
    forged = json.loads(json.dumps(data))
    forged["line_checks"] = []
    assert not HyperplaneCertificate.from_json(forged).verify()


@given(st.integers(2, 4), st.integers(0, 2**32))
def test_hyperplane_never_rejects_members_of_max_n(n, seed):
    # A convex function with at most n affine pieces lies in MAX_n(n).
    rng = random.Random(seed)
    pts = [tuple(Q(rng.randint(-3, 3)) for _ in range(n)) for _ in range(rng.randint(2, n))]
    P = canonical_form(pts)
    if len(P) < 2:
        return
    i, j = sorted(rng.sample(range(len(P)), 2))
    cert = hyperplane_test(P, sub(P.points[i], P.points[j]))
    assert cert.verdict == INCONCLUSIVE and cert.verify()


def test_certify_width_examples():
    cert = certify_width_cannot_compensate(4, uniform(4, 2))
    assert cert.issued and cert.verify() and cert.bound == 3
    cert8 = certify_width_cannot_compensate(8, uniform(8, 3))
    assert cert8.issued and cert8.verify() and cert8.bound == 7
    again = WidthCertificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert again.verify()
    with pytest.raises(HypothesisError):
        certify_width_cannot_compensate(3, uniform(3, 2))
    with pytest.raises(HypothesisError):
        certify_width_cannot_compensate(5, uniform(5, 1))
    with pytest.raises(HypothesisError):
        certify_width_cannot_compensate(6, ArchitectureSpec(6, 2, (6, 2), (2, 1)))


def test_hierarchy_examples():
    rep = hierarchy_report(7, 2, 2)
    assert [lv.attained for lv in rep.levels] == [0, 1, 3, 7]
    assert rep.all_strict and rep.terminal == 3
    one = hierarchy_report(1, 2, 2)
    assert [lv.attained for lv in one.levels] == [0, 1] and one.terminal == 1
    stop = hierarchy_report(4, [4, 2], [3, 2])
    assert [lv.bound for lv in stop.levels] == [0, 2] and stop.terminal == 1
    assert "terminal level: 3" in rep.table()
    with pytest.raises(HypothesisError):
        hierarchy_report(5, 2, 1)


def test_hierarchy_terminal_is_log2():
    # Largest depth with 2^depth - 1 <= n.
    for n in range(1, 20):
        assert hierarchy_report(n, 2, 2).terminal == (n + 1).bit_length() - 1


def test_max_rank_consistency_for_binary_networks():
    rng = random.Random(17)
    for depth in range(4):
        for _ in range(5):
            n = rng.randint(1, 4)
            e = random_max_expression(rng, n, rng.randint(1, 3), 2**depth)
            net = expr_to_network(e, uniform(n, depth))
            assert max_rank_upper(net) == 2**depth
