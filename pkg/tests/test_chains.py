import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kitaevlab.chains import (
    Chain,
    Cochain,
    boundary,
    class_of,
    count_boundaries,
    count_cycles,
    covertex_coboundary,
    cowalk_cochain,
    cowalk_through,
    expected_pairing,
    face_boundary,
    homology,
    intersection,
    is_boundary,
    is_cocycle,
    is_cycle,
    pairing_matrix,
    walk_chain,
    walk_through,
)
from kitaevlab.complex import build_genus2, build_sphere_cube, build_torus, load_complex, save_complex


def test_chain_arithmetic_mod_d():
    a = Chain({0: 2, 3: 1}, d=3)
    b = Chain({0: 1, 1: 2}, d=3)
    assert (a + b).coeffs == {1: 2, 3: 1}
    assert (a - a) == Chain({}, d=3)
    assert (2 * a).coeffs == {0: 1, 3: 2}
    assert not Chain({0: 3}, d=3)


def test_chain_type_and_modulus_errors():
    with pytest.raises(ValueError):
        Chain({0: 1}, d=2) + Chain({0: 1}, d=3)
    with pytest.raises(TypeError):
        Chain({0: 1}, d=2) + Cochain({0: 1}, d=2)
    with pytest.raises(TypeError):
        intersection(Cochain({0: 1}), Cochain({0: 1}))


def test_text_roundtrip():
    c = Chain({4: 2, 1: 1}, d=5)
    assert str(c) == "chain d=5: 1^1 4^2"
    assert Chain.parse(str(c)) == c
    co = Cochain({0: 3}, d=4)
    assert Cochain.parse(str(co)) == co
    with pytest.raises(ValueError):
        Chain.parse("cochain d=2: 0^1")


@pytest.mark.parametrize("builder", [lambda d: build_torus(3, d), build_sphere_cube, build_genus2])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_boundary_of_boundary(builder, d):
    cx = builder(d)
    for f in range(cx.n_faces):
        assert not boundary(cx, face_boundary(cx, f))
    for v in cx.vertices:
        assert is_cocycle(cx, covertex_coboundary(cx, v))


@pytest.mark.parametrize(
    "builder, betti",
    [(lambda d: build_torus(2, d), 2), (lambda d: build_torus(3, d), 2), (build_sphere_cube, 0), (build_genus2, 4)],
    ids=["torus2", "torus3", "cube", "genus2"],
)
@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_betti(builder, betti, d):
    cx = builder(d)
    hom = homology(cx)
    assert hom.betti == betti
    assert hom.torsion == []
    assert pairing_matrix(hom) == expected_pairing(hom.genus)
    assert count_cycles(cx) // count_boundaries(cx) == d**betti
    assert count_cycles(cx, dual=True) // count_boundaries(cx, dual=True) == d**betti


@pytest.mark.parametrize("builder", [lambda d: build_torus(3, d), build_genus2])
def test_smith_generators_for_loaded_complex(builder):
    cx = load_complex(save_complex(builder(3)))
    hom = homology(cx)
    assert hom.source == "smith"
    assert pairing_matrix(hom) == expected_pairing(hom.genus)
    assert all(is_cycle(cx, c) for c in hom.chain_generators)
    assert all(is_cocycle(cx, c) for c in hom.cochain_generators)


def test_is_boundary_witness():
    cx = build_torus(3, 3)
    ok, w = is_boundary(cx, face_boundary(cx, 2))
    assert ok and w.coeffs == {2: 1}
    ok, w = is_boundary(cx, homology(cx).lambdas[0])
    assert not ok and w is None
    two = face_boundary(cx, 0) + face_boundary(cx, 1)
    ok, w = is_boundary(cx, two)
    assert ok and boundary(cx, w) == two


def test_coboundary_check_for_cochains():
    cx = build_torus(3, 2)
    ok, _ = is_boundary(cx, covertex_coboundary(cx, 0))
    assert ok
    ok, _ = is_boundary(cx, homology(cx).x_alpha[0])
    assert not ok


def test_classes_are_additive_and_boundary_blind():
    cx = build_torus(3, 3)
    hom = homology(cx)
    for alpha, beta in hom.classes():
        c = hom.cycle(alpha, beta)
        assert class_of(cx, c) == (alpha, beta)
        assert class_of(cx, c + face_boundary(cx, 4)) == (alpha, beta)
        co = hom.cocycle(alpha, beta)
        assert hom.coclass_of(co + covertex_coboundary(cx, 2), cx) == (alpha, beta)


def test_class_of_rejects_non_cycles():
    cx = build_torus(2)
    with pytest.raises(ValueError):
        class_of(cx, Chain({0: 1}, d=2))


def test_walks():
    cx = build_torus(3, 3)
    walk = walk_through(cx, [0, 1, 2, 0])
    chain = walk_chain(cx, walk)
    assert is_cycle(cx, chain)
    assert class_of(cx, chain) in {((1,), (0,)), ((2,), (0,))}
    open_walk = walk_chain(cx, walk_through(cx, [0, 1]))
    assert boundary(cx, open_walk).coeffs == {0: 2, 1: 1}
    with pytest.raises(ValueError):
        walk_chain(cx, [0, 5, 1])


def test_cowalk_orientation():
    cx = build_torus(3, 2)
    e = 0
    left, right = cx.edge_faces[e]
    assert cowalk_cochain(cx, [right, e, left]).coeffs == {e: 1}
    assert cowalk_cochain(cx, [left, e, right]) == -cowalk_cochain(cx, [right, e, left])
    cw = cowalk_through(cx, [0, 1, 2, 0])
    assert is_cocycle(cx, cowalk_cochain(cx, cw))


chains_t2 = st.lists(st.integers(0, 1), min_size=8, max_size=8)


@settings(max_examples=80, deadline=None)
@given(chains_t2, chains_t2)
def test_intersection_bilinear(a, b):
    cx = build_torus(2)
    hom = homology(cx)
    ca, cb = Chain.from_dense(a, 2), Chain.from_dense(b, 2)
    for co in hom.cochain_generators:
        assert intersection(ca + cb, co) == (intersection(ca, co) + intersection(cb, co)) % 2


def test_exhaustive_cocycle_counts():
    cx = build_torus(2, 2)
    cochains = [Cochain.from_dense(v, 2) for v in itertools.product(range(2), repeat=cx.n_edges)]
    cocycles = [c for c in cochains if is_cocycle(cx, c)]
    assert len(cocycles) == count_cycles(cx, dual=True)
