import numpy as np
import pytest

from hspsim.groups import (
    make_cyclic, make_dihedral, make_psl2, make_symmetric, make_wreath_s2,
)
from hspsim.irreps import (
    Irrep, canonical_sort, conjugate_irrep, hook_length_degree, irreps_cyclic,
    irreps_generic, irreps_symmetric, irreps_wreath, partition_label,
    partitions, schur_orthogonality_error, standard_tableaux,
    hom_unitarity_error,
)

# degrees frozen from the hook length formula, computed independently
SYM_DEGREES = {3: [1, 2, 1], 4: [1, 3, 2, 3, 1], 5: [1, 4, 5, 6, 5, 4, 1]}


def test_partitions_descending_lex():
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert partition_label((2, 1)) == "[2,1]"
    assert len(partitions(5)) == 7


def test_hook_degrees_and_tableaux():
    for n, degs in SYM_DEGREES.items():
        assert [hook_length_degree(lam) for lam in partitions(n)] == degs
        for lam, d in zip(partitions(n), degs):
            assert len(standard_tableaux(lam)) == d


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_symmetric_irreps_sound(n):
    G = make_symmetric(n)
    reps = irreps_symmetric(n)
    assert [r.label for r in reps] == [partition_label(p) for p in partitions(n)]
    assert sum(r.degree ** 2 for r in reps) == G.order
    for r in reps:
        assert hom_unitarity_error(r) < 1e-9
        # YOR matrices are real orthogonal
        assert np.abs(r.mats.imag).max() < 1e-12


def test_symmetric_characters_are_class_functions():
    G = make_symmetric(4)
    for r in irreps_symmetric(4):
        chi = r.character()
        for cls in G.conjugacy_classes():
            assert np.abs(chi[list(cls)] - chi[cls[0]]).max() < 1e-9


def test_wreath_irreps():
    W = make_wreath_s2(3)
    reps = irreps_wreath(3)
    # count 2 p(n) + C(p(n), 2) with p(3) = 3
    assert len(reps) == 9
    assert sum(r.degree ** 2 for r in reps) == W.order
    t = W.swap_element()
    for r in reps:
        assert hom_unitarity_error(r) < 1e-9
        chi_t = r.character()[t]
        if r.label.startswith("theta'"):
            assert abs(chi_t + np.sqrt(r.degree)) < 1e-9
        elif r.label.startswith("theta"):
            assert abs(chi_t - np.sqrt(r.degree)) < 1e-9
        else:
            assert abs(chi_t) < 1e-9


def test_wreath_irrep_count_n4():
    reps = irreps_wreath(4)
    # p(4) = 5 partitions: 2*5 + C(5,2) = 20
    assert len(reps) == 20
    assert sum(r.degree ** 2 for r in reps) == make_wreath_s2(4).order


def test_wreath_kappa_restriction():
    # restricted to b=0 elements, kappa splits as the two conjugate
    # tensor-product characters: chi(p,s,0) = xi(p)xj(s) + xi(s)xj(p)
    W = make_wreath_s2(3)
    base = irreps_symmetric(3)
    reps = irreps_wreath(3)
    kap = next(r for r in reps if r.label == "kappa[3]x[2,1]")
    xi, xj = base[0], base[1]
    for x in range(W.order):
        p, s, b = W.unpack(x)
        if b:
            continue
        want = (xi.character()[p] * xj.character()[s]
                + xi.character()[s] * xj.character()[p])
        assert abs(kap.character()[x] - want) < 1e-9


def test_cyclic_irreps():
    reps = irreps_cyclic(6)
    assert [r.degree for r in reps] == [1] * 6
    for r in reps:
        assert hom_unitarity_error(r) < 1e-9


@pytest.mark.parametrize("make,arg,degrees", [
    (make_cyclic, 4, [1, 1, 1, 1]),
    (make_symmetric, 3, [1, 1, 2]),
    (make_dihedral, 4, [1, 1, 1, 1, 2]),
    (make_psl2, 5, [1, 3, 3, 4, 5]),
])
def test_generic_decomposition(make, arg, degrees):
    G = make(arg)
    reps = irreps_generic(G)
    assert sorted(r.degree for r in reps) == degrees
    assert sum(r.degree ** 2 for r in reps) == G.order
    for r in reps:
        assert hom_unitarity_error(r) < 1e-9
    # labels follow the canonical order
    assert [r.label for r in reps] == [f"rho{i}" for i in range(len(reps))]


def test_generic_deterministic():
    a = irreps_generic(make_dihedral(4), seed=0)
    b = irreps_generic(make_dihedral(4), seed=0)
    for r1, r2 in zip(a, b):
        assert np.array_equal(r1.mats, r2.mats)


def test_schur_orthogonality():
    assert schur_orthogonality_error(make_symmetric(3), irreps_symmetric(3)) < 1e-8
    assert schur_orthogonality_error(make_wreath_s2(3), irreps_wreath(3)) < 1e-8


def test_canonical_sort_trivial_first():
    G = make_symmetric(3)
    reps = canonical_sort(G, irreps_symmetric(3))
    assert reps[0].degree == 1
    assert np.abs(reps[0].character() - 1).max() < 1e-12
    # degree ascending
    assert [r.degree for r in reps] == sorted(r.degree for r in reps)


def test_conjugate_irrep():
    reps = irreps_cyclic(4)
    c = conjugate_irrep(reps[1])
    assert np.abs(c.mats - reps[1].mats.conj()).max() == 0
    assert c.label.endswith("*")
    assert conjugate_irrep(c).label == reps[1].label
    assert hom_unitarity_error(c) < 1e-12


def test_irrep_shape_validation():
    G = make_cyclic(2)
    with pytest.raises(ValueError):
        Irrep(G, "bad", np.zeros((3, 1, 1)))
