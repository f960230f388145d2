import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adtheory.cell_cat import (
    CellCatError,
    CellIso,
    GradedCategoryView,
    check_incidence_compatible,
    eta_sharp,
    identity_iso,
    kappa,
    lambda_,
    mu,
    mu_clauses,
    multi_simplex,
    perm_compose,
    perm_inverse,
    perm_parity,
    permuted_index,
    suspension_pair,
    theta_suspension,
    violated_pair,
)
from adtheory.complex_core import OrientedCell, boundary_simplex, interval, point, simplex
from adtheory.corpus import named


def test_view_rejects_non_subcomplex():
    with pytest.raises(CellCatError):
        GradedCategoryView(simplex(1), frozenset({(0, 1)}))


def test_objects_and_incidence():
    V = GradedCategoryView(simplex(1), frozenset({(0,)}))
    assert V.objects == ((1,), (0, 1))
    e = OrientedCell((0, 1), 1)
    assert V.incidence(e, OrientedCell((1,), 1)) == 1
    assert V.incidence(-e, OrientedCell((1,), 1)) == -1
    assert V.incidence(e, OrientedCell((0,), 1)) == 0


@pytest.mark.parametrize("name", ["point", "delta2", "torus", "wedge"])
def test_identity_compatible(name):
    K = named(name)
    assert identity_iso(K).incidence_compatible


@pytest.mark.parametrize("K", [point(), simplex(1), simplex(2), boundary_simplex(3)], ids=str)
def test_kappa_lambda_compatible(K):
    for iso in (kappa(K), lambda_(K)):
        assert iso.k == 1
        assert check_incidence_compatible(iso)
        inv = iso.inverse()
        assert check_incidence_compatible(inv)
        assert all(inv(iso(c)) == OrientedCell(c, 1) for c in iso.source.objects)


@pytest.mark.parametrize("n", range(5))
def test_theta_suspension(n):
    th = theta_suspension(n)
    assert th.k == 1 and th.incidence_compatible
    src = suspension_pair(n)
    # every object of the pair contains the cone vertex n+1
    assert all(n + 1 in c for c in src.objects)
    assert len(src.objects) == len(simplex(n).cells)
    top = tuple(range(n + 2))
    assert th.obj[top] == (tuple(range(n + 1)), -1 if n % 2 else 1)


@pytest.mark.parametrize("n", range(4))
def test_mu(n):
    M = mu(n)
    assert M.incidence_compatible
    cl = mu_clauses(n)
    assert cl["a_cell"] and cl["b"] and cl["c"]
    assert cl["a_sign"] in (1, -1)
    if n:
        assert cl["d"] in ("mu_{n-1}", "i.mu_{n-1}")


def test_flipped_sign_detected():
    th = theta_suspension(2)
    bad = th.with_sign_flipped((0, 3))
    assert not check_incidence_compatible(bad)
    assert violated_pair(bad) is not None
    assert violated_pair(th) is None


def test_non_bijection_rejected():
    V = GradedCategoryView(simplex(1))
    obj = {c: ((0,), 1) if len(c) == 1 else ((0, 1), 1) for c in V.objects}
    assert not check_incidence_compatible(CellIso(V, V, 0, obj))


def test_compose():
    K = simplex(1)
    a = lambda_(K)
    b = identity_iso(K)
    c = b.compose(a)
    assert c.k == 1 and c.incidence_compatible
    with pytest.raises(CellCatError):
        a.compose(a)


# ---------------------------------------------------------------- permutations

perms3 = list(itertools.permutations(range(3)))


def test_perm_conventions():
    assert perm_compose((1, 2, 0), (1, 0, 2)) == (2, 1, 0)
    assert perm_parity((1, 0, 2)) == 1
    assert perm_parity((1, 2, 0)) == 0
    assert permuted_index((1, 0), (2, 3)) == (3, 2)


@pytest.mark.parametrize("p", perms3)
def test_perm_group_laws(p):
    e = (0, 1, 2)
    assert perm_compose(p, e) == p == perm_compose(e, p)
    assert perm_compose(p, perm_inverse(p)) == e
    for q in perms3:
        assert perm_parity(perm_compose(p, q)) == (perm_parity(p) + perm_parity(q)) % 2
        for r in perms3:
            assert perm_compose(perm_compose(p, q), r) == perm_compose(p, perm_compose(q, r))


@pytest.mark.parametrize("ns", [(1, 0, 1), (1, 1), (2, 1), (1, 1, 1)])
def test_eta_sharp_compatible_and_functorial(ns):
    k = len(ns)
    for p in itertools.permutations(range(k)):
        E = eta_sharp(p, ns)
        assert E.incidence_compatible
        assert E.target.K == multi_simplex(ns)
        assert E.source.K == multi_simplex(permuted_index(p, ns))
    for p, q in itertools.product(itertools.permutations(range(k)), repeat=2):
        # eta_#(p) o eta_#(q) on the matching indices is eta_#(q p) up to composition order
        A = eta_sharp(p, ns)
        B = eta_sharp(q, permuted_index(p, ns))
        C = A.compose(B)
        D = eta_sharp(perm_compose(q, p), ns)
        assert C.obj == D.obj


def test_eta_sharp_rejects_mismatch():
    with pytest.raises(CellCatError):
        eta_sharp((0, 1), (1, 2, 3))


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(4)))
def test_parity_homomorphism(p, q):
    p, q = tuple(p), tuple(q)
    assert perm_parity(perm_compose(p, q)) == (perm_parity(p) + perm_parity(q)) % 2
    assert perm_compose(perm_inverse(p), p) == tuple(range(4))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3), st.data())
def test_eta_sharp_random(ns, data):
    p = tuple(data.draw(st.permutations(range(len(ns)))))
    E = eta_sharp(p, tuple(ns))
    assert E.incidence_compatible
    assert E.inverse().incidence_compatible


def test_lambda_and_kappa_on_point():
    assert lambda_(point()).obj == {(0, 1): ((), 1)}
    assert kappa(point()).obj == {"I": ((), 1)}
    assert kappa(interval()).incidence_compatible
