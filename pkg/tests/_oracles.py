"""Independent oracles for the test suite.

Nothing here calls the package's own linear algebra: homology is computed
with sympy's Smith normal form, and random chain complexes are built from
elementary pieces whose homology is known by construction.
"""

from __future__ import annotations

import random
from math import gcd

from sympy import Matrix, ZZ, factorint
from sympy.matrices.normalforms import invariant_factors

from adtheory.chain_algebra import IntegerChainComplex, cellular_chains, hom_dual


def canon(betti, torsion=()) -> tuple:
    """(betti, sorted prime powers): a normal form for f.g. abelian groups."""
    if hasattr(betti, "betti"):
        betti, torsion = betti.betti, betti.torsion
    pp = []
    for t in torsion:
        for p, e in factorint(int(t)).items():
            pp.append(p ** e)
    return betti, tuple(sorted(pp))


def _divisors(M) -> list[int]:
    if not M or not M[0]:
        return []
    return [int(x) for x in invariant_factors(Matrix(M), domain=ZZ) if x]


def sympy_homology(C: IntegerChainComplex) -> dict[int, tuple]:
    out = {}
    for n in C.degrees:
        out_n = _divisors(C.d.get(n, []))
        in_n = _divisors(C.d.get(n + 1, []))
        betti = C.rank(n) - len(out_n) - len(in_n)
        out[n] = canon(betti, [x for x in in_n if x > 1])
    return out


# ------------------------------------------------------------------ random complexes

def _unimodular(n: int, rng: random.Random, steps: int = 6):
    """A random unimodular matrix and its inverse, as lists of rows."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    Ai = [row[:] for row in A]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        # A <- E A with E = I + c e_ij ; A^-1 <- A^-1 E^-1
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        for row in Ai:
            row[j] -= c * row[i]
    if n and rng.random() < 0.5:
        A[0] = [-x for x in A[0]]
        for row in Ai:
            row[0] = -row[0]
    return A, Ai


def _mul(A, B):
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def random_chain_complex(rng: random.Random, top: int = 4, max_rank: int = 6):
    """A random free complex in degrees 0..top with ranks <= max_rank, and
    its homology (normal form) known by construction.

    It is a sum of copies of Z[n] and of Z[n+1] --m--> Z[n], conjugated
    degreewise by random unimodular matrices."""
    ranks = [0] * (top + 1)
    pieces = []  # (kind, degree, m)
    for _ in range(rng.randint(1, 7)):
        n = rng.randint(0, top)
        if rng.random() < 0.5 and n < top and ranks[n] < max_rank and ranks[n + 1] < max_rank:
            m = rng.choice((1, 2, 3, 4, 6))
            pieces.append(("arrow", n, m, ranks[n], ranks[n + 1]))
            ranks[n] += 1
            ranks[n + 1] += 1
        elif ranks[n] < max_rank:
            pieces.append(("free", n, 0, ranks[n], None))
            ranks[n] += 1
    d = {n: [[0] * ranks[n] for _ in range(ranks[n - 1])] for n in range(1, top + 1)}
    expected = {n: [0, []] for n in range(top + 1)}
    for kind, n, m, i, j in pieces:
        if kind == "free":
            expected[n][0] += 1
        else:
            d[n + 1][i][j] = m
            if m > 1:
                expected[n][1].append(m)
    U = {n: _unimodular(ranks[n], rng) for n in range(top + 1)}
    dd = {}
    for n in range(1, top + 1):
        if ranks[n] and ranks[n - 1]:
            dd[n] = _mul(_mul(U[n - 1][0], d[n]), U[n][1])
    C = IntegerChainComplex({n: r for n, r in enumerate(ranks)}, dd)
    exp = {n: canon(b, t) for n, (b, t) in expected.items() if ranks[n]}
    return C, exp


# ------------------------------------------------------------------ cohomology

def _tensor_groups(a: tuple, b: tuple) -> tuple:
    """A (x) B and Tor(A, B) for groups in normal form."""
    ba, ta = a
    bb, tb = b
    tens = [x for x in ta for _ in range(bb)] + [y for y in tb for _ in range(ba)]
    tor = []
    for x in ta:
        for y in tb:
            g = gcd(x, y)
            if g > 1:
                tor.append(g)
                tens.append(g)
    return (ba * bb, tens), tor


def cohomology_oracle(K, L, C: IntegerChainComplex, k: int) -> tuple:
    """H^k(K, L; C) by the Kunneth formula from sympy homology of the
    cellular cochains of (K, L) and of C."""
    D = sympy_homology(hom_dual(cellular_chains(K, L)))
    HC = sympy_homology(C)
    n = -k
    betti, tors = 0, []
    for i, gi in D.items():
        gj = HC.get(n - i)
        if gj is not None:
            (b, t), _ = _tensor_groups(gi, gj)
            betti += b
            tors += t
        gj = HC.get(n - 1 - i)
        if gj is not None:
            _, tor = _tensor_groups(gi, gj)
            tors += tor
    return canon(betti, tors)


def same_group(G, expected: tuple) -> bool:
    return canon(G) == expected
