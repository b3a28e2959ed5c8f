"""Coset-state sampling: distributions, moment identities, distances."""
import itertools

import numpy as np
import pytest

from hspsim.groups import (
    make_group,
    make_psl2,
    make_sl2,
    order_two_subgroup,
    sl2_to_psl2_map,
    wreath_embedding,
)
from hspsim.irreps import irreps_generic, irreps_symmetric, irreps_wreath
from hspsim.simulate import (
    RegisterSpace,
    avg_tv_over_conjugates,
    conditional_distribution,
    coset_distribution,
    coset_state,
    fourier_blocks,
    fourier_roundtrip_error,
    l1_distance,
    lemma_suite,
    mixed_conjugate_trace_distance,
    q_subset_values,
    q_total_values,
    reference_distribution,
    register_budget,
    second_moment_check,
    second_moment_terms,
    distribution_rows,
    total_variation,
    transfer_quotient_report,
    transfer_subgroup_report,
    x_function,
)


def wreath3():
    G = make_group("wreath:3")
    return G, irreps_wreath(3), G.swap_element()


def test_coset_state_shape_and_spectrum():
    G = make_group("s3")
    h = G.involutions()[0]
    sigma = coset_state(G, order_two_subgroup(G, h))
    assert abs(np.trace(sigma) - 1) < 1e-12
    # sigma * (|G|/|H|) is a rank-[G:H] projector
    P = sigma * 3
    assert np.max(np.abs(P @ P - P)) < 1e-12
    ev = np.sort(np.linalg.eigvalsh(sigma))
    want = np.sort([0] * 3 + [1 / 3] * 3)
    assert np.max(np.abs(ev - want)) < 1e-12


def test_coset_state_order_cap():
    G = make_group("cyclic:5000")
    with pytest.raises(ValueError, match="resource cap"):
        coset_state(G, order_two_subgroup(G, 2500))


def test_fourier_blocks_trace_is_tuple_probability():
    G, irr, h = wreath3()
    H = order_two_subgroup(G, h)
    blocks = fourier_blocks(G, H, irr)
    sp = RegisterSpace(G, irr, 1, seed=0)
    ranks = sp.tuple_ranks(H)
    total = 0.0
    for ti, entry in enumerate(blocks):
        tr = float(np.trace(entry["block"]).real)
        assert abs(tr - sp.subgroup_prob(ti, ranks)) < 1e-12
        total += tr
    assert abs(total - 1) < 1e-12


@pytest.mark.parametrize("spec", ["s3", "dihedral:4", "wreath:2", "wreath:3"])
def test_fourier_roundtrip(spec):
    G = make_group(spec)
    if spec == "s3":
        irr = irreps_symmetric(3)
    elif spec.startswith("wreath"):
        irr = irreps_wreath(int(spec.split(":")[1]))
    else:
        irr = irreps_generic(G, seed=0)
    h = G.involutions()[0]
    assert fourier_roundtrip_error(G, order_two_subgroup(G, h), irr) < 1e-9


def test_roundtrip_order_cap():
    G = make_group("cyclic:128")
    with pytest.raises(ValueError, match="resource cap"):
        fourier_roundtrip_error(G, order_two_subgroup(G, 64), [])


def test_register_budget_cap():
    G = make_group("psl2:13")
    irr_fake = irreps_generic  # not needed; budget uses degrees only
    from hspsim.chartable import character_table_numeric
    # budget is (sum d^2)^k = |G|^k; 1092^3 > 1e8 must be rejected
    class Stub:
        def __init__(self, d, label):
            self.degree, self.label = d, label
    degs = [1, 7, 7, 12, 12, 12, 13, 14, 14]
    stubs = [Stub(d, f"rho{i}") for i, d in enumerate(degs)]
    assert register_budget(G, stubs, 2) == pytest.approx(1092.0 ** 2)
    with pytest.raises(ValueError, match="resource cap"):
        register_budget(G, stubs, 3)


def test_wreath3_tuple_probabilities_frozen():
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, 1, seed=7)
    ranks = sp.tuple_ranks(order_two_subgroup(G, h))
    got = sorted(sp.subgroup_prob(ti, ranks) for ti in range(9))
    want = sorted([1 / 36, 1 / 36, 0, 0, 1 / 18, 1 / 3, 1 / 9, 2 / 9, 2 / 9])
    assert np.max(np.abs(np.array(got) - np.array(want))) < 1e-12


@pytest.mark.parametrize("k,kind", [(1, "basis"), (2, "basis"), (1, "fused")])
def test_distributions_normalized(k, kind):
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, k, seed=5, kind=kind)
    ref = reference_distribution(sp)
    assert abs(sum(float(v.sum()) for v in ref) - 1) < 1e-10
    H = order_two_subgroup(G, h)
    ranks = sp.tuple_ranks(H)
    dist = coset_distribution(sp, h, ranks)
    assert abs(sum(float(v.sum()) for v in dist) - 1) < 1e-10
    assert all(float(v.min()) >= -1e-12 for v in dist)
    for ti in range(len(sp.tuples)):
        cond = conditional_distribution(sp, ti, h, ranks)
        if ranks[ti] > 0:
            assert abs(float(cond.sum()) - 1) < 1e-10
        else:
            assert float(np.abs(cond).sum()) == 0.0


def test_distribution_rows_structure():
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, 1, seed=0)
    rows = distribution_rows(sp, reference_distribution(sp))
    assert len(rows) == sum(f.size for f in sp.frames)
    labels = {r[0] for r in rows}
    assert len(labels) == 9
    assert abs(sum(r[2] for r in rows) - 1) < 1e-10


def test_x_function_matches_forms():
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, 2, seed=3)
    ti = 40
    vals = sp.projected_forms(ti, h)
    f = sp.frames[ti]
    for bi in (0, 3):
        x = x_function(irr, sp.tuples[ti], f.vectors[:, bi], h)
        assert abs(x - (vals[bi] - 0.25)) < 1e-12


def test_q_decomposition():
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, 2, seed=1)
    ti = 40
    b = sp.frames[ti].vectors[:, 2]
    Q = q_total_values(irr, sp.tuples[ti], b)
    S = sum(q_subset_values(irr, sp.tuples[ti], b, s)
            for r in (1, 2) for s in itertools.combinations(range(2), r))
    assert np.max(np.abs(Q - S)) < 1e-12
    # X at a class element equals Q(c)/2^k
    x = x_function(irr, sp.tuples[ti], b, h)
    assert abs(x - Q[h].real / 4) < 1e-12


def test_second_moment_identity_s3_all_tuples():
    G = make_group("s3")
    irr = irreps_symmetric(3)
    h = G.involutions()[0]
    rng = np.random.default_rng(2)
    for ti in range(3):
        d = irr[ti].degree
        for _ in range(5):
            b = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            b /= np.linalg.norm(b)
            lhs, rhs = second_moment_check(G, irr, (ti,), b, h)
            assert abs(lhs - rhs) < 1e-10


def test_second_moment_terms_consistent():
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, 2, seed=4)
    ti = 31
    b = sp.frames[ti].vectors[:, 1]
    lhs, rhs = second_moment_check(G, irr, sp.tuples[ti], b, h)
    assert abs(lhs - rhs) < 1e-10
    terms = second_moment_terms(G, irr, sp.tuples[ti], b, h)
    assert len(terms) == 9
    worst = max(abs(l - r) for l, r in terms.values())
    assert worst < 1e-10
    total = sum(l for l, _ in terms.values()) / 16
    assert abs(total - lhs) < 1e-10


def test_avg_tv_deterministic_across_threads():
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, 1, seed=11)
    a = avg_tv_over_conjugates(sp, h, threads=1)
    b = avg_tv_over_conjugates(sp, h, threads=4)
    assert a["avg_tv"] == b["avg_tv"]
    assert [e["tv"] for e in a["per_conjugate"]] == \
        [e["tv"] for e in b["per_conjugate"]]
    assert len(a["per_conjugate"]) == 6
    assert 0 < a["avg_tv"] <= 1


def test_tv_is_half_l1():
    G, irr, h = wreath3()
    sp = RegisterSpace(G, irr, 1, seed=2)
    ref = reference_distribution(sp)
    dist = coset_distribution(sp, h)
    assert total_variation(dist, ref) == 0.5 * l1_distance(dist, ref)
    assert total_variation(ref, ref) == 0.0


@pytest.mark.parametrize("k", [1, 2])
def test_lemma_suite_wreath3(k):
    G, irr, h = wreath3()
    out = lemma_suite(G, irr, h, k=k, eps=0.2, seed=3)
    assert [e["check"] for e in out] == [
        "second-moment identity",
        "isotypic projection bound",
        "diagonal overlap bound",
        "x second moment below delta1",
        "distance against x first moment",
    ]
    for e in out:
        assert e["pass"] is True, e
    d1 = [e for e in out if e["check"] == "x second moment below delta1"][0]
    assert abs(d1["rhs"] - 6.311111111111111) < 1e-12


def test_lemma_suite_hypothesis_not_met():
    G = make_group("s3")
    irr = irreps_symmetric(3)
    h = G.involutions()[0]
    out = lemma_suite(G, irr, h, k=2, eps=0.3, seed=0)  # 2*2*0.3 >= 1
    tail = out[-1]
    assert tail["check"] == "distance against x first moment"
    assert tail["pass"] is None
    assert "hypothesis" in tail["detail"]
    for e in out[:-1]:
        assert e["pass"] is True


def _dense_mixture_distance(G, h, t):
    N = G.order
    cls = list(G.class_of(h))
    acc = np.zeros((N ** t, N ** t))
    for c in cls:
        sigma = coset_state(G, order_two_subgroup(G, c))
        M = sigma
        for _ in range(t - 1):
            M = np.kron(M, sigma)
        acc += M
    acc /= len(cls)
    acc -= np.eye(N ** t) / N ** t
    return float(np.sum(np.abs(np.linalg.eigvalsh(acc))))


@pytest.mark.parametrize("spec,t", [("s3", 1), ("s3", 2), ("dihedral:4", 1),
                                    ("dihedral:4", 2), ("dihedral:4", 3)])
def test_mixed_distance_matches_dense(spec, t):
    G = make_group(spec)
    irr = irreps_symmetric(3) if spec == "s3" else irreps_generic(G, seed=0)
    h = G.involutions()[0]
    block = mixed_conjugate_trace_distance(G, irr, h, t)
    dense = _dense_mixture_distance(G, h, t)
    assert abs(block - dense) < 1e-9


def test_mixed_distance_caps():
    G, irr, h = wreath3()
    with pytest.raises(ValueError, match="resource cap"):
        mixed_conjugate_trace_distance(G, irr, h, 4)
    Gbig = make_group("psl2:13")
    with pytest.raises(ValueError, match="resource cap"):
        mixed_conjugate_trace_distance(Gbig, irr, h, 2)


def test_transfer_subgroup_wreath_into_s6():
    W, S6, emb = wreath_embedding(3)
    rep = transfer_subgroup_report(S6, emb, W, W.swap_element())
    assert rep["pass"] is True
    assert rep["index"] == 10
    assert rep["max_spectral_diff"] < 1e-9


def test_transfer_quotient_sl2_to_psl2():
    sl, psl = make_sl2(5), make_psl2(5)
    proj = sl2_to_psl2_map(sl, psl)
    h = psl.involutions()[0]
    rep = transfer_quotient_report(sl, proj, psl, h)
    assert rep["pass"] is True
    assert rep["preimage_order"] == 4
    assert rep["nonzero_count"] == 30
    assert rep["max_spectral_diff"] < 1e-9
