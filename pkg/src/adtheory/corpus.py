"""Named triangulations used by the tests, the acceptance suite and the CLI."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .complex_core import BallComplex, boundary_simplex, from_facets, simplex

RP2_FACETS = ((1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
              (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4))

# Output of cp2_search() (first hit); vertices 3a + b for (a, b) in F_3^2.
CP2_FACETS = (
    (0, 1, 2, 3, 4), (0, 1, 2, 3, 5), (0, 1, 2, 4, 5), (0, 1, 3, 4, 6), (0, 1, 3, 5, 7),
    (0, 1, 3, 6, 7), (0, 1, 4, 5, 6), (0, 1, 5, 6, 8), (0, 1, 5, 7, 8), (0, 1, 6, 7, 8),
    (0, 2, 3, 4, 8), (0, 2, 3, 5, 8), (0, 2, 4, 5, 6), (0, 2, 4, 6, 7), (0, 2, 4, 7, 8),
    (0, 2, 5, 6, 8), (0, 2, 6, 7, 8), (0, 3, 4, 6, 7), (0, 3, 4, 7, 8), (0, 3, 5, 7, 8),
    (1, 2, 3, 4, 8), (1, 2, 3, 5, 7), (1, 2, 3, 6, 7), (1, 2, 3, 6, 8), (1, 2, 4, 5, 7),
    (1, 2, 4, 7, 8), (1, 2, 6, 7, 8), (1, 3, 4, 6, 8), (1, 4, 5, 6, 8), (1, 4, 5, 7, 8),
    (2, 3, 5, 6, 7), (2, 3, 5, 6, 8), (2, 4, 5, 6, 7), (3, 4, 5, 6, 7), (3, 4, 5, 6, 8),
    (3, 4, 5, 7, 8),
)


def torus_facets() -> list:
    """Moebius' 7-vertex torus."""
    out = []
    for i in range(7):
        out.append((i, (i + 1) % 7, (i + 3) % 7))
        out.append((i, (i + 2) % 7, (i + 3) % 7))
    return out


@lru_cache(maxsize=None)
def torus() -> BallComplex:
    return from_facets(torus_facets())


@lru_cache(maxsize=None)
def rp2() -> BallComplex:
    return from_facets(RP2_FACETS)


@lru_cache(maxsize=None)
def cp2() -> BallComplex:
    return from_facets(CP2_FACETS)


@lru_cache(maxsize=None)
def circle() -> BallComplex:
    return boundary_simplex(2)


@lru_cache(maxsize=None)
def sphere(n: int) -> BallComplex:
    return boundary_simplex(n + 1)


@lru_cache(maxsize=None)
def wedge_of_circles() -> BallComplex:
    """Two triangles sharing the vertex 0."""
    return from_facets([(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])


@lru_cache(maxsize=None)
def two_points() -> BallComplex:
    return from_facets([(0,), (1,)])


def cp2_search(limit: int | None = None) -> list[tuple]:
    """Translation-invariant 9-vertex 4-pseudomanifolds on F_3^2 that are
    3-neighborly; each hit is a sorted facet tuple."""
    pts = [(a, b) for a in range(3) for b in range(3)]

    def shift(S, v):
        return frozenset(((x + v[0]) % 3, (y + v[1]) % 3) for x, y in S)

    orbits, seen = [], set()
    for S in itertools.combinations(pts, 5):
        S = frozenset(S)
        if S in seen:
            continue
        orb = {shift(S, v) for v in pts}
        seen |= orb
        orbits.append(sorted(orb, key=sorted))
    hits = []
    for combo in itertools.combinations(range(len(orbits)), 4):
        facets = [f for o in combo for f in orbits[o]]
        count: dict = {}
        for f in facets:
            for t in itertools.combinations(sorted(f), 4):
                count[t] = count.get(t, 0) + 1
        if any(c != 2 for c in count.values()):
            continue
        tri = {t for f in facets for t in itertools.combinations(sorted(f), 3)}
        if len(tri) != 84:
            continue
        hits.append(tuple(sorted(tuple(sorted(3 * a + b for a, b in f)) for f in facets)))
        if limit and len(hits) >= limit:
            break
    return hits


NAMED = {
    "point": lambda: simplex(0),
    "circle": circle,
    "boundary-delta2": lambda: boundary_simplex(2),
    "boundary-delta3": lambda: boundary_simplex(3),
    "sphere2": lambda: sphere(2),
    "sphere4": lambda: sphere(4),
    "torus": torus,
    "rp2": rp2,
    "cp2": cp2,
    "wedge": wedge_of_circles,
    "two-points": two_points,
    "delta1": lambda: simplex(1),
    "delta2": lambda: simplex(2),
    "delta3": lambda: simplex(3),
}


def named(name: str) -> BallComplex:
    if name not in NAMED:
        raise KeyError(f"unknown complex {name!r}; known: {sorted(NAMED)}")
    return NAMED[name]()
