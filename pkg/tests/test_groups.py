import math
import random

import pytest

from hspsim.groups import (
    CyclicGroup, Subgroup, check_associativity, conjugate_subgroup,
    cycle_notation, make_cyclic, make_dihedral, make_direct_power, make_psl2,
    make_sl2, make_symmetric, make_wreath_s2, order_two_subgroup, parse_cycles,
    perm_compose, perm_inverse, perm_rank, perm_unrank, sl2_to_psl2_map,
    wreath_embedding,
)

# frozen, derived independently: (constructor args -> expected order)
PSL_ORDERS = {4: 60, 5: 60, 7: 168, 8: 504, 9: 360, 11: 660, 13: 1092}


def test_perm_rank_roundtrip():
    for n in (1, 2, 3, 4, 5):
        for r in range(math.factorial(n)):
            assert perm_rank(perm_unrank(n, r)) == r
    assert perm_unrank(4, 0) == (0, 1, 2, 3)


def test_perm_compose_left_to_right():
    # apply (0 1) then (1 2): 0 -> 1 -> 2
    a = (1, 0, 2)
    b = (0, 2, 1)
    assert perm_compose(a, b) == (2, 0, 1)
    assert perm_compose(a, perm_inverse(a)) == (0, 1, 2)


def test_cycle_notation_parse_roundtrip():
    rnd = random.Random(3)
    for _ in range(50):
        p = list(range(6))
        rnd.shuffle(p)
        p = tuple(p)
        assert parse_cycles(cycle_notation(p), 6) == p
    assert cycle_notation((0, 1, 2)) == "e"
    with pytest.raises(ValueError):
        parse_cycles("(1 9)", 4)
    with pytest.raises(ValueError):
        parse_cycles("(1 1)", 4)


@pytest.mark.parametrize("make,arg,order", [
    (make_symmetric, 3, 6),
    (make_symmetric, 4, 24),
    (make_symmetric, 6, 720),
    (make_cyclic, 6, 6),
    (make_dihedral, 4, 8),
    (make_wreath_s2, 2, 8),
    (make_wreath_s2, 3, 72),
    (make_psl2, 5, 60),
    (make_sl2, 5, 120),
])
def test_orders_identity_inverses(make, arg, order):
    G = make(arg)
    assert G.order == order
    e = G.identity
    for x in range(G.order):
        assert G.compose(e, x) == x
        assert G.compose(x, e) == x
        assert G.compose(x, G.inverse(x)) == e
        assert G.compose(G.inverse(x), x) == e


@pytest.mark.parametrize("make,arg", [
    (make_symmetric, 4),          # 24 <= 200: exhaustive
    (make_dihedral, 4),
    (make_cyclic, 12),
    (make_wreath_s2, 2),
    (make_psl2, 5),               # 60 <= 200: exhaustive
    (make_psl2, 13),              # sampled
    (make_wreath_s2, 4),          # sampled
    (make_sl2, 9),                # sampled
])
def test_associativity(make, arg):
    assert check_associativity(make(arg))


def test_psl_orders():
    for q, order in PSL_ORDERS.items():
        assert make_psl2(q).order == order


@pytest.mark.parametrize("make,arg", [
    (make_symmetric, 4), (make_dihedral, 4), (make_wreath_s2, 3),
    (make_psl2, 5), (make_psl2, 7),
])
def test_class_size_times_centralizer(make, arg):
    G = make(arg)
    for cls in G.conjugacy_classes():
        cent = G.centralizer(cls[0]).order
        assert len(cls) * cent == G.order
    assert sum(len(c) for c in G.conjugacy_classes()) == G.order


def test_involution_counts():
    # counts enumerated independently (S3: 3, S4: 9, D4: 5, PSL(2,5): 15)
    assert len(make_symmetric(3).involutions()) == 3
    assert len(make_symmetric(4).involutions()) == 9
    assert len(make_dihedral(4).involutions()) == 5
    P = make_psl2(5)
    inv = P.involutions()
    assert len(inv) == 15
    assert len(P.class_of(inv[0])) == 15  # a single class


def test_psl2_13_involution_class():
    P = make_psl2(13)
    h = P.involutions()[0]
    assert len(P.class_of(h)) == 91
    assert P.centralizer(h).order == 12


def test_psl2_pretty_is_matrix():
    P = make_psl2(5)
    assert P.pretty(P.identity) == "[[1,0],[0,1]]"
    for x in range(P.order):
        a, b, c, d = P.matrix(x)
        assert (a * d - b * c) % 5 == 1
        assert P.from_matrix((a, b, c, d)) == x


def test_wreath_multiplication_rule():
    W = make_wreath_s2(3)
    S = W.base
    pi1 = S.from_perm((1, 0, 2))
    s1 = S.from_perm((0, 2, 1))
    pi2 = S.from_perm((2, 0, 1))
    s2 = S.from_perm((1, 2, 0))
    # (p1,s1,0)(p2,s2,b) = (p1p2, s1s2, b)
    z = W.compose(W.pack(pi1, s1, 0), W.pack(pi2, s2, 1))
    assert W.unpack(z) == (S.compose(pi1, pi2), S.compose(s1, s2), 1)
    # (p1,s1,1)(p2,s2,b) = (p1s2, s1p2, 1+b)
    z = W.compose(W.pack(pi1, s1, 1), W.pack(pi2, s2, 1))
    assert W.unpack(z) == (S.compose(pi1, s2), S.compose(s1, pi2), 0)
    t = W.swap_element()
    assert W.compose(t, t) == W.identity
    assert W.pretty(t) == "(e|e|1)"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_wreath_swap_class_shape(n):
    W = make_wreath_s2(n)
    cls = W.class_of(W.swap_element())
    assert len(cls) == math.factorial(n)
    for x in cls:
        p, s, b = W.unpack(x)
        assert b == 1
        assert W.base.compose(p, s) == W.base.identity  # s = p^{-1}


def test_wreath_embedding_homomorphism():
    W, S, emb = wreath_embedding(3)
    assert len(set(int(v) for v in emb)) == W.order  # injective
    rnd = random.Random(11)
    for _ in range(300):
        x, y = rnd.randrange(W.order), rnd.randrange(W.order)
        assert int(emb[W.compose(x, y)]) == S.compose(int(emb[x]), int(emb[y]))
    assert S.pretty(int(emb[W.swap_element()])) == "(1 4)(2 5)(3 6)"


def test_sl2_to_psl2_quotient_map():
    SL, P = make_sl2(5), make_psl2(5)
    mp = sl2_to_psl2_map(SL, P)
    assert SL.center().order == 2
    rnd = random.Random(5)
    for _ in range(300):
        x, y = rnd.randrange(SL.order), rnd.randrange(SL.order)
        assert int(mp[SL.compose(x, y)]) == P.compose(int(mp[x]), int(mp[y]))
    # two-to-one and onto
    assert len(set(int(v) for v in mp)) == P.order


def test_subgroup_validation():
    S4 = make_symmetric(4)
    h = S4.from_perm(parse_cycles("(1 2)", 4))
    H = order_two_subgroup(S4, h)
    assert H.order == 2
    with pytest.raises(ValueError):
        Subgroup(S4, [S4.identity, h, S4.from_perm(parse_cycles("(1 3)", 4))])
    with pytest.raises(ValueError):
        order_two_subgroup(S4, S4.from_perm(parse_cycles("(1 2 3)", 4)))
    g = S4.from_perm(parse_cycles("(2 3)", 4))
    Hg = conjugate_subgroup(S4, H, g)
    assert S4.from_perm(parse_cycles("(1 3)", 4)) in Hg.elements


def test_subgroup_generated():
    D4 = make_dihedral(4)
    rot = Subgroup.generated(D4, [1])  # r
    assert rot.order == 4
    assert Subgroup.generated(D4, [1, D4.n]).order == 8


def test_direct_power():
    S3 = make_symmetric(3)
    P = make_direct_power(S3, 2)
    assert P.order == 36
    assert check_associativity(P, samples=300)
    x = P.pack((1, 4))
    y = P.pack((3, 2))
    assert P.unpack(P.compose(x, y)) == (S3.compose(1, 3), S3.compose(4, 2))
    d = P.diagonal(S3.from_perm((1, 0, 2)))
    assert P.compose(d, d) == P.identity
    # power of 1 behaves like the base group
    P1 = make_direct_power(S3, 1)
    for a in range(6):
        for b in range(6):
            assert P1.compose(a, b) == S3.compose(a, b)
    with pytest.raises(ValueError):
        make_direct_power(make_cyclic(101), 3)  # exceeds order cap


def test_cyclic_large_table_free():
    G = make_cyclic(1_000_000)
    assert G.compose(999_999, 2) == 1
    assert G.inverse(123) == 1_000_000 - 123
    with pytest.raises(ValueError):
        G.table()


def test_dihedral_relations():
    D = make_dihedral(5)
    r, s = 1, D.n
    assert D.element_order(r) == 5
    assert D.element_order(s) == 2
    # s r s = r^{-1}
    srs = D.compose(D.compose(s, r), s)
    assert srs == D.inverse(r)


def test_center():
    assert make_symmetric(4).center().order == 1
    assert make_dihedral(4).center().order == 2
    assert make_sl2(5).center().order == 2
