import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adtheory import _zlinalg as zl
from adtheory.ad_framework import AdCTheory, AdError, adC_theory, integer_ring_theory
from adtheory.cell_cat import perm_compose, suspension_pair
from adtheory.chain_algebra import cellular_chains, unit_complex
from adtheory.complex_core import boundary_simplex, point, simplex
from adtheory.corpus import named
from adtheory.quinn_spectra import (
    BASE,
    QuinnSpaceP,
    RSimplex,
    SemisimplicialError,
    TruncatedSemisimplicialSet,
    adjunction_check,
    all_permutations,
    block_permutation,
    box_product,
    cup_oracle_agrees,
    from_ordered_complex,
    homotopy_group,
    kan_suspension,
    lemma_unit_left,
    lemma_unit_right,
    loops,
    point_set,
    sample_R,
    sample_simplices,
    semisimplicial_maps,
    sigma_action,
    sphere_set,
    staircase_product,
    suspend_R,
    unit_ad,
)
from adtheory.symmetric_ads import SymmetricTheory

from _oracles import canon, sympy_homology


# ---------------------------------------------------------------- semisimplicial sets

def test_point_and_spheres():
    P = point_set(3)
    assert P.size() == 4 and not P.identity_defects()
    S = sphere_set(2, 3)
    assert S.simplices[2] == (BASE, "s")
    assert not S.identity_defects()
    assert sphere_set(5, 3).same(point_set(3))


def test_suspension_of_point_is_point():
    assert kan_suspension(point_set(2)).same(point_set(3))
    assert loops(point_set(3)).same(point_set(2))


@pytest.mark.parametrize("n", range(5))
def test_suspension_of_spheres(n):
    assert kan_suspension(sphere_set(n, n + 2)).same(sphere_set(n + 1, n + 3))


def test_loops_of_circle():
    O = loops(sphere_set(1, 3))
    assert O.simplices[0] == (BASE, "s")
    assert not O.identity_defects()


def test_ordered_complex_identities():
    for name in ("delta2", "torus", "boundary-delta3"):
        A = from_ordered_complex(named(name), 3)
        assert not A.identity_defects()
        assert not kan_suspension(A.truncate(2)).identity_defects()


def test_invalid_sets_rejected():
    with pytest.raises(SemisimplicialError):
        TruncatedSemisimplicialSet(1, {0: ("a",), 1: ("e",)}, {1: {"e": ("a",)}})
    with pytest.raises(SemisimplicialError):
        TruncatedSemisimplicialSet(1, {0: ("a",), 1: ("e",)}, {1: {"e": ("a", "b")}})
    with pytest.raises(SemisimplicialError):
        kan_suspension(from_ordered_complex(simplex(1), 1, basepoint=False))


def test_map_enumeration_counts():
    # based maps S^1 -> S^1 (truncated at 1): s goes to * or s
    assert len(semisimplicial_maps(sphere_set(1, 1), sphere_set(1, 1))) == 2
    # unbased maps Delta^1 -> Delta^1 as strict sets: the identity and two constants fail faces
    D = from_ordered_complex(simplex(1), 1, basepoint=False)
    maps = semisimplicial_maps(D, D, based=False)
    assert len(maps) == 1


@pytest.mark.parametrize("B,A", [
    (sphere_set(0, 2), sphere_set(1, 3)),
    (sphere_set(1, 2), sphere_set(2, 3)),
    (from_ordered_complex(simplex(1), 2), sphere_set(1, 3)),
])
def test_adjunction(B, A):
    ok, count = adjunction_check(B, A)
    assert ok and count >= 1


# ---------------------------------------------------------------- P_k

@pytest.fixture(scope="module")
def adS2():
    return adC_theory(cellular_chains(boundary_simplex(3)), "S2")


def test_P_faces_satisfy_identities(adS2):
    rng = random.Random(0)
    P = QuinnSpaceP(adS2, 1)
    for n in (2, 3):
        for F in sample_simplices(adS2, 1, n, rng, 3):
            assert P.contains(F, n)
            assert not P.identity_defects(F)
            for i in range(n + 1):
                assert P.contains(P.face(i, F), n - 1)
    with pytest.raises(SemisimplicialError):
        P.face(3, P.basepoint(2))


def test_suspend_desuspend(adS2):
    rng = random.Random(1)
    P, P1 = QuinnSpaceP(adS2, 0), QuinnSpaceP(adS2, 1)
    for n in range(3):
        for F in sample_simplices(adS2, 0, n, rng, 2):
            G = P.suspend(F)
            assert P1.contains(G, n + 1) and P1.in_loops(G)
            assert P.desuspend(G).equals(F)
    # a simplex that is not a loop cannot be desuspended
    src = suspension_pair(1)
    for G in adS2.sample_ads(src.K, (), 1, rng, 4):
        if not P1.in_loops(G):
            with pytest.raises(SemisimplicialError):
                P.desuspend(G)


@pytest.mark.parametrize("n,i", [(1, 0), (1, 1), (2, 0), (2, 2), (3, 1), (3, 2)])
def test_kan_fill_adC(adS2, n, i):
    rng = random.Random(n * 10 + i)
    P = QuinnSpaceP(adS2, 1)
    for F in sample_simplices(adS2, 1, n, rng, 2):
        faces = {j: P.face(j, F) for j in range(n + 1) if j != i}
        G = P.kan_fill(n, i, faces)
        assert P.contains(G, n)


def test_kan_fill_rejects_inconsistent_horn(adS2):
    # faces 0 and 1 of a 2-horn share vertex 2; give them different values there
    P = QuinnSpaceP(adS2, 0)
    rng = random.Random(2)
    G = [x for x in sample_simplices(adS2, 0, 1, rng, 6) if any(x.value((1,)))][0]
    with pytest.raises(SemisimplicialError):
        P.horn_ad(2, 2, {0: G, 1: P.basepoint(1)})
    with pytest.raises(SemisimplicialError):
        P.kan_fill(2, 2, {0: G, 1: P.basepoint(1)})


def test_homotopy_groups_small():
    T = adC_theory(unit_complex(0))
    assert canon(homotopy_group(T, 0, 0)) == (1, ())
    assert canon(homotopy_group(T, 0, 1)) == (0, ())
    assert canon(homotopy_group(T, 1, 1)) == (1, ())
    S2 = adC_theory(cellular_chains(boundary_simplex(3)))
    assert canon(homotopy_group(S2, 0, 2)) == (1, ())
    with pytest.raises(AdError):
        homotopy_group(SymmetricTheory(), 0, 0)


def test_homotopy_groups_rp2():
    T = adC_theory(cellular_chains(named("rp2")))
    H = sympy_homology(T.C)
    for n in range(3):
        assert canon(homotopy_group(T, 0, n)) == H[n]


# ---------------------------------------------------------------- R_k and the ring structure

@pytest.fixture(scope="module")
def shifted():
    return adC_theory(cellular_chains(boundary_simplex(3)).shift(-2), "S2[-2]")


def test_sigma_action_group_law(shifted):
    rng = random.Random(2)
    samples = sample_R(shifted, (1, 0, 1), rng, 2)
    assert any(any(any(v) for v in a.ad.values.values()) for a in samples)
    S3 = all_permutations(3)
    for a in samples:
        assert sigma_action((0, 1, 2), a).equals(a)
        for p in S3:
            for q in S3:
                assert sigma_action(p, sigma_action(q, a)).equals(sigma_action(perm_compose(p, q), a))


def test_sigma_action_arity(shifted):
    a = sample_R(shifted, (1, 1), random.Random(0), 1)[0]
    with pytest.raises(SemisimplicialError):
        sigma_action((0, 1, 2), a)


def test_suspension_equivariance(shifted):
    rng = random.Random(3)
    for a in sample_R(shifted, (1, 1), rng, 2):
        s2 = suspend_R(suspend_R(a))
        for zeta in all_permutations(2):
            assert sigma_action(block_permutation(zeta, (0, 1)), s2).equals(s2)
        for eta in all_permutations(2):
            lhs = sigma_action(block_permutation((0, 1), eta), s2)
            assert lhs.equals(suspend_R(suspend_R(sigma_action(eta, a))))


def test_block_permutation():
    assert block_permutation((1, 0), (0, 2, 1)) == (1, 0, 2, 4, 3)


def test_rsimplex_shape_check(shifted):
    with pytest.raises(SemisimplicialError):
        RSimplex((1,), shifted.trivial(simplex(2), (), 1))


@pytest.mark.parametrize("make", [integer_ring_theory, SymmetricTheory], ids=["adZ", "sym"])
def test_lemma_unit_identities(make):
    T = make()
    rng = random.Random(4)
    for ns in [(1,), (1, 1), (2,)]:
        for a in sample_R(T, ns, rng, 2):
            for m in range(3):
                assert lemma_unit_left(a.ad, m)
                assert lemma_unit_right(a.ad, ns, m)


def test_box_product_unit_and_associativity():
    T = integer_ring_theory()
    rng = random.Random(5)
    U = unit_ad(T)
    Fs = T.sample_ads(simplex(1), frozenset(), 0, rng, 2)[1:]
    Gs = T.sample_ads(boundary_simplex(2), frozenset(), 1, rng, 2)[1:]
    Hs = T.sample_ads(simplex(1), frozenset({(0,), (1,)}), 1, rng, 2)[1:]
    for F in Fs + Gs:
        assert box_product(U, F).equals(F)
        assert box_product(F, U).equals(F)
    for F, G, H in zip(Fs, Gs, Hs):
        A, B = box_product(box_product(F, G), H), box_product(F, box_product(G, H))
        assert A.K == B.K and A.L == B.L and A.equals(B)
        assert A.is_ad()


def test_box_product_needs_ring():
    T = adC_theory(unit_complex(0))
    F = T.trivial(point())
    with pytest.raises(AdError):
        box_product(F, F)


def test_staircase_triangulation():
    P, pr = staircase_product(boundary_simplex(3), 1)
    assert P.check_dd()
    # |K x Delta^1| has the homology of K
    H = sympy_homology(cellular_chains(P))
    assert H[2] == (1, ()) and H[0] == (1, ())


def test_cup_oracle():
    T = integer_ring_theory()
    rng = random.Random(6)
    K, D = boundary_simplex(3), simplex(1)
    hits = 0
    for k in (0, 2):
        for F in T.sample_ads(K, frozenset(), k, rng, 2):
            for L, l in ((frozenset(), 0), (frozenset({(0,), (1,)}), 1)):
                for G in T.sample_ads(D, L, l, rng, 2):
                    assert cup_oracle_agrees(F, G)
                    hits += 1
    assert hits >= 12


def test_cup_oracle_negative_control():
    """A product that doubles everything disagrees with the cup product."""
    bad = AdCTheory(unit_complex(0), "bad", mult=lambda p, u, q, v: [2 * u[0] * v[0]], unit=[1])
    K, D = boundary_simplex(3), simplex(1)
    F = bad.hom_data(K, frozenset(), 2).to_ad(_generator(bad, K, 2))
    G = bad.hom_data(D, frozenset(), 0).to_ad(_generator(bad, D, 0))
    assert not cup_oracle_agrees(F, G)
    good = integer_ring_theory()
    F2 = good.hom_data(K, frozenset(), 2).to_ad(_generator(good, K, 2))
    G2 = good.hom_data(D, frozenset(), 0).to_ad(_generator(good, D, 0))
    assert cup_oracle_agrees(F2, G2)


def _generator(T, K, k):
    """A cycle not in the span of the boundaries."""
    H = T.hom_data(K, frozenset(), k)
    for z in H.cycles:
        if not zl.in_span(H.boundaries, list(z), H.dim):
            return z
    raise AssertionError("no nonzero class")


# ---------------------------------------------------------------- properties

@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(1, 3))
def test_sphere_suspension_property(n, extra):
    N = n + extra
    S = sphere_set(n, N)
    assert kan_suspension(S).same(sphere_set(n + 1, N + 1))
    assert loops(kan_suspension(S)).same(S)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**16), st.integers(0, 2), st.integers(0, 2))
def test_suspension_commutes_with_faces(seed, k, n):
    T = adC_theory(cellular_chains(boundary_simplex(3)))
    rng = random.Random(seed)
    P, P1 = QuinnSpaceP(T, k), QuinnSpaceP(T, k + 1)
    for F in sample_simplices(T, k, n, rng, 1):
        G = P.suspend(F)
        for i in range(n + 1):
            if n:
                assert P1.face(i, G).equals(P.suspend(P.face(i, F)))
        assert P1.is_base(P1.face(n + 1, G))
