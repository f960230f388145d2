import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adtheory.chain_algebra import cellular_chains, smith_homology
from adtheory.complex_core import (
    BallComplex,
    ComplexError,
    NonOrientable,
    barycentric_subdivision,
    boundary_simplex,
    coherent_orientation,
    disjoint_union,
    from_facets,
    fundamental_chain,
    horn,
    interval,
    make_refinement,
    model_M,
    model_M_prime,
    point,
    product,
    refinement_M,
    simplex,
    split_product_cell,
    square_maps,
    star_link_dual,
)
from adtheory.corpus import NAMED, named

from _oracles import canon, sympy_homology

# frozen homology of the named corpus, as {degree: (betti, prime powers)}
EXPECTED_HOMOLOGY = {
    "point": {0: (1, ())},
    "circle": {0: (1, ()), 1: (1, ())},
    "boundary-delta2": {0: (1, ()), 1: (1, ())},
    "boundary-delta3": {0: (1, ()), 1: (0, ()), 2: (1, ())},
    "sphere2": {0: (1, ()), 1: (0, ()), 2: (1, ())},
    "sphere4": {0: (1, ()), 1: (0, ()), 2: (0, ()), 3: (0, ()), 4: (1, ())},
    "torus": {0: (1, ()), 1: (2, ()), 2: (1, ())},
    "rp2": {0: (1, ()), 1: (0, (2,)), 2: (0, ())},
    "cp2": {0: (1, ()), 1: (0, ()), 2: (1, ()), 3: (0, ()), 4: (1, ())},
    "wedge": {0: (1, ()), 1: (2, ())},
    "two-points": {0: (2, ())},
    "delta1": {0: (1, ()), 1: (0, ())},
    "delta2": {0: (1, ()), 1: (0, ()), 2: (0, ())},
    "delta3": {0: (1, ()), 1: (0, ()), 2: (0, ()), 3: (0, ())},
}

F_VECTORS = {"torus": (7, 21, 14), "rp2": (6, 15, 10), "cp2": (9, 36, 84, 90, 36)}


@pytest.mark.parametrize("name", sorted(NAMED))
def test_corpus_homology(name):
    K = named(name)
    assert K.check_dd()
    H = {n: canon(g) for n, g in smith_homology(cellular_chains(K)).items()}
    assert H == EXPECTED_HOMOLOGY[name]
    assert sympy_homology(cellular_chains(K)) == EXPECTED_HOMOLOGY[name]


@pytest.mark.parametrize("name", sorted(F_VECTORS))
def test_f_vectors(name):
    assert named(name).f_vector() == F_VECTORS[name]


@pytest.mark.parametrize("name", ["torus", "rp2", "delta3", "boundary-delta3", "wedge"])
def test_corpus_is_valid_ball_complex(name):
    named(name).validate()


def test_simplex_faces_and_horn():
    K = simplex(2)
    assert K.cells == ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))
    assert K.boundary((0, 1, 2)) == {(1, 2): 1, (0, 2): -1, (0, 1): 1}
    assert horn(2, 1).cells == frozenset({(0,), (1,), (2,), (0, 1), (1, 2)})
    assert boundary_simplex(2).cells == tuple(c for c in K.cells if len(c) < 3)


def test_product_flattens_and_drops_points():
    assert product(simplex(1), point()) == simplex(1)
    P = product(interval(), simplex(1))
    assert P.f_vector() == (4, 4, 1)
    assert P.check_dd()
    P3 = product(product(interval(), interval()), interval())
    assert P3 == product(interval(), product(interval(), interval()))
    assert P3.f_vector() == (8, 12, 6, 1)
    c = next(c for c in P.cells if P.dims[c] == 2)
    assert split_product_cell(c, (interval(), simplex(1))) == ("I", (0, 1))


def test_disjoint_union():
    U = disjoint_union(named("circle"), named("circle"))
    H = smith_homology(cellular_chains(U))
    assert (H[0].betti, H[1].betti) == (2, 2)


def test_invalid_complexes_rejected():
    with pytest.raises(ComplexError):
        BallComplex({"a": 0, "e": 1}, {"e": {"b": 1}})
    with pytest.raises(ComplexError):
        BallComplex({"a": 0, "e": 1}, {"e": {"a": 1, "e": 1}})
    # edge with a single endpoint: boundary is not S^0
    bad = BallComplex({"a": 0, "b": 0, "e": 1}, {"e": {"a": 1}})
    assert not bad.is_valid()
    # d^2 != 0
    dd = BallComplex({"a": 0, "b": 0, "e": 1, "f": 1, "D": 2},
                     {"e": {"a": 1, "b": -1}, "f": {"a": 1, "b": -1}, "D": {"e": 1, "f": 1}})
    assert not dd.check_dd()
    with pytest.raises(ComplexError):
        BallComplex.from_json({"format": 1, "cells": [], "extra": 1})
    with pytest.raises(ComplexError):
        BallComplex.from_json({"format": 7, "facets": [[0, 1]]})


def test_json_roundtrip():
    for name in ("torus", "wedge", "delta2"):
        K = named(name)
        assert BallComplex.from_json(json.loads(K.dumps())) == K
    assert BallComplex.from_json({"format": 1, "facets": [[0, 1], [1, 2]]}).f_vector() == (3, 2)
    M = model_M()
    assert BallComplex.from_json(json.loads(M.dumps())) == M


def test_barycentric_subdivision():
    for n in range(4):
        R = barycentric_subdivision(simplex(n))
        R.check()
        fine = R.fine
        assert fine.check_dd()
        assert len(fine.cells_of_dim(n)) == [1, 2, 6, 24][n]
        assert sympy_homology(cellular_chains(fine))[0] == (1, ())
    R = barycentric_subdivision(simplex(2))
    # each coarse cell is tiled by its pieces
    assert len(R.pieces((0, 1, 2))) == 6
    assert len(R.pieces((0, 1))) == 2
    assert len(R.pieces((0,))) == 1


def test_star_link_dual():
    K = simplex(2)
    v = star_link_dual(K, (0,))
    assert v.link.complex().f_vector() == (3, 2)
    assert v.dual.complex().f_vector() == (4, 5, 2)
    top = star_link_dual(K, (0, 1, 2))
    assert top.dual.complex().f_vector() == (1,)
    e = star_link_dual(K, (0, 1))
    assert e.dual.complex().f_vector() == (2, 1)
    assert e.dual_boundary.complex().f_vector() == (1,)
    with pytest.raises(ComplexError):
        star_link_dual(K, (5,))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fundamental_chain_of_simplex(n):
    K = simplex(n)
    fc = fundamental_chain(K)
    assert fc.coherent
    top = tuple(range(n + 1))
    e = fc.chain[top]
    # the boundary is the alternating sum of the codimension-one faces
    expected = {top[:i] + top[i + 1:]: e * (-1) ** i for i in range(n + 1)}
    assert fc.boundary == expected


@pytest.mark.parametrize("name", ["boundary-delta3", "torus", "sphere4", "cp2"])
def test_closed_manifolds_have_cycles(name):
    fc = fundamental_chain(named(name))
    assert fc.coherent and fc.boundary == {}


def test_nonorientable():
    with pytest.raises(NonOrientable):
        coherent_orientation(named("rp2"))
    K = named("torus")
    o = coherent_orientation(K)
    o[next(iter(o))] *= -1
    assert fundamental_chain(K, o).boundary


def test_model_M():
    M, Mp = model_M(), model_M_prime()
    assert M.check_dd() and Mp.check_dd()
    M.validate()
    R = refinement_M()
    R.check()
    gamma, delta = square_maps()
    sq = product(interval(), interval())
    assert set(gamma) == set(sq.cells) == set(delta)
    assert set(gamma.values()) | set(delta.values()) == set(Mp.cells)


def test_refinement_rejects_bad_carrier():
    fine = barycentric_subdivision(simplex(1)).fine
    carrier = {c: (0, 1) for c in fine.cells}
    with pytest.raises(ComplexError):
        make_refinement(fine, simplex(1), carrier).check()


# ---------------------------------------------------------------- properties

facets = st.lists(
    st.lists(st.integers(0, 5), min_size=1, max_size=4, unique=True),
    min_size=1, max_size=6,
)


@settings(max_examples=40, deadline=None)
@given(facets)
def test_random_simplicial_complex_euler_characteristic(fs):
    K = from_facets(fs)
    assert K.check_dd()
    H = smith_homology(cellular_chains(K))
    chi = sum((-1) ** n * x for n, x in enumerate(K.f_vector()))
    assert chi == sum((-1) ** n * g.betti for n, g in H.items())
    assert {n: canon(g) for n, g in H.items()} == sympy_homology(cellular_chains(K))


@settings(max_examples=25, deadline=None)
@given(facets)
def test_random_complex_closure_and_json(fs):
    K = from_facets(fs)
    assert BallComplex.from_json(json.loads(K.dumps())) == K
    for c in K.cells:
        cl = K.cell_closure(c)
        assert K.is_subcomplex(cl)
        assert all(K.is_face(f, c) for f in cl)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_product_homology_kunneth(a, b):
    # products of simplices and simplex boundaries
    A = simplex(a) if a < 2 else boundary_simplex(a)
    B = simplex(b) if b < 2 else boundary_simplex(b)
    P = product(A, B)
    assert P.check_dd()
    HA, HB = smith_homology(cellular_chains(A)), smith_homology(cellular_chains(B))
    HP = smith_homology(cellular_chains(P))
    for n in HP:
        expect = sum(HA[i].betti * HB[n - i].betti for i in HA if n - i in HB)
        assert HP[n].betti == expect


def test_all_cells_have_sphere_boundaries_in_products():
    for A, B in itertools.product([simplex(1), interval(), simplex(2)], repeat=2):
        product(A, B).validate()
