"""Ad theories: pre-ads, the axiom harness, the chain-complex theory ad_C,
bordism groups and the cohomology theory T^k(K, L).

A pre-ad stores one value per reference-oriented cell of K not in L.  The
value on the opposite orientation is the involute, and cells of L carry the
empty object of the right dimension.  A theory decides ad-hood locally, one
closed cell at a time, so locality holds by construction and the harness
checks that it does.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import _zlinalg as zl
from .cell_cat import CellIso, identity_iso, kappa, lambda_, reindex
from .chain_algebra import (
    HomologyGroup,
    IntegerChainComplex,
    cellular_chains,
    hom_complex,
    hom_dual,
    smith_homology,
    unit_complex,
)
from .complex_core import (
    BallComplex,
    ComplexError,
    OrientedCell,
    Refinement,
    barycentric_subdivision,
    encode_id,
    interval,
    make_refinement,
    model_M,
    model_M_prime,
    point,
    product,
    product_cell,
    refinement_M,
    simplex,
    split_product_cell,
    square_maps,
    trivial_refinement,
)


class AdError(ValueError):
    pass


# ------------------------------------------------------------------ pre-ads

@dataclass(frozen=True, eq=False)
class PreAd:
    """A degree-k pre (K, L)-ad of ``theory``."""

    theory: "AdTheory"
    K: BallComplex
    L: frozenset
    degree: int
    values: Mapping[Hashable, object]

    def __post_init__(self):
        object.__setattr__(self, "L", frozenset(self.L))
        missing = [c for c in self.K.cells if c not in self.L and c not in self.values]
        if missing:
            raise AdError(f"pre-ad has no value on {missing[0]!r}")

    def value(self, c):
        """Value on the reference orientation of c (or on an OrientedCell)."""
        if isinstance(c, OrientedCell):
            v = self.value(c.cell)
            return v if c.sign > 0 else self.theory.involute_value(v)
        if c in self.L:
            return self.theory.empty_value(self.K.dims[c] - self.degree)
        return self.values[c]

    def rebuild(self, K, L, degree, values) -> "PreAd":
        return PreAd(self.theory, K, frozenset(L), degree, values)

    def restrict(self, cells: Iterable) -> "PreAd":
        s = frozenset(cells)
        sub = self.K.restrict(s)
        L = self.L & s
        return PreAd(self.theory, sub, L, self.degree, {c: self.values[c] for c in s if c not in L})

    def pull(self, K2: BallComplex, L2: Iterable, cellmap: Mapping) -> "PreAd":
        """The pre-ad c -> F(cellmap[c]) on (K2, L2); cellmap sends each cell
        of K2 outside L2 to (cell of K, sign), dimension preserving."""
        L2 = frozenset(L2)
        vals = {c: self.value(OrientedCell(*cellmap[c])) for c in K2.cells if c not in L2}
        return PreAd(self.theory, K2, L2, self.degree, vals)

    def relax(self) -> "PreAd":
        """The same values viewed as an absolute K pre-ad."""
        vals = {c: self.value(c) for c in self.K.cells}
        return PreAd(self.theory, self.K, frozenset(), self.degree, vals)

    def is_ad(self) -> bool:
        return self.theory.is_ad(self)

    def defects(self) -> list[str]:
        return self.theory.defects(self)

    def equals(self, other: "PreAd") -> bool:
        if self.K != other.K or self.degree != other.degree:
            return False
        eq = self.theory.values_equal
        return all(eq(self.value(c), other.value(c)) for c in self.K.cells)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "theory": self.theory.name,
            "degree": self.degree,
            "pair": [self.K.to_json(), sorted((json.loads(_jid(c)) for c in self.L), key=str)],
            "values": {encode_id(c): self.theory.value_to_json(v)
                       for c, v in sorted(self.values.items(), key=lambda kv: encode_id(kv[0]))},
        }


def _jid(c) -> str:
    return json.dumps(_to_jsonable(c), separators=(",", ":"))


def _to_jsonable(c):
    return [_to_jsonable(x) for x in c] if isinstance(c, tuple) else c


def _from_jsonable(x):
    return tuple(_from_jsonable(y) for y in x) if isinstance(x, list) else x


def load_ad(theory: "AdTheory", obj: dict, K: BallComplex | None = None) -> PreAd:
    """Strict inverse of :meth:`PreAd.to_json`.  ``K`` overrides the
    complex given in the file (which may then be a name)."""
    allowed = {"format", "theory", "degree", "pair", "values"}
    if not isinstance(obj, dict) or set(obj) - allowed or not {"degree", "pair", "values"} <= set(obj):
        raise AdError("malformed ad file")
    if obj.get("format", 1) != 1:
        raise AdError("unsupported ad format")
    pair = obj["pair"]
    if not isinstance(pair, list) or len(pair) != 2:
        raise AdError("pair must be [complex, subcomplex]")
    if K is None:
        K = BallComplex.from_json(pair[0])
    L = frozenset(_from_jsonable(x) for x in pair[1])
    if not K.is_subcomplex(L):
        raise AdError("L is not a subcomplex")
    byid = {encode_id(c): c for c in K.cells}
    vals = {}
    for key, v in obj["values"].items():
        if key not in byid:
            raise AdError(f"unknown cell {key!r}")
        c = byid[key]
        vals[c] = theory.value_from_json(v, K.dims[c] - int(obj["degree"]))
    return PreAd(theory, K, L, int(obj["degree"]), vals)


# ------------------------------------------------------------------ theories

class AdTheory:
    """Interface of an ad theory.  Subclasses supply the target category
    (values, empties, involution), the local ad condition and the gluing
    and cylinder constructions."""

    name = "abstract"

    # -- target category
    def involute_value(self, v):
        raise NotImplementedError

    def empty_value(self, dim: int):
        raise NotImplementedError

    def is_empty(self, v) -> bool:
        raise NotImplementedError

    def values_equal(self, a, b) -> bool:
        return a == b

    def value_to_json(self, v):
        raise NotImplementedError

    def value_from_json(self, x, dim: int):
        raise NotImplementedError

    # -- ads
    def cell_defects(self, F: PreAd, c) -> list[str]:
        """Failures of the ad condition on the closed cell c."""
        raise NotImplementedError

    def defects(self, F: PreAd) -> list[str]:
        out = []
        for c in F.K.cells:
            if c not in F.L:
                out.extend(self.cell_defects(F, c))
        return out

    def is_ad(self, F: PreAd) -> bool:
        return not self.defects(F)

    def preadd(self, K: BallComplex, L: Iterable, k: int, values: Mapping) -> PreAd:
        return PreAd(self, K, frozenset(L), k, dict(values))

    def trivial(self, K: BallComplex, L: Iterable = (), k: int = 0) -> PreAd:
        L = frozenset(L)
        return PreAd(self, K, L, k, {c: self.empty_value(K.dims[c] - k) for c in K.cells if c not in L})

    def involute(self, F: PreAd) -> PreAd:
        return F.rebuild(F.K, F.L, F.degree, {c: self.involute_value(v) for c, v in F.values.items()})

    def glue(self, R: Refinement, F: PreAd, L: Iterable = ()) -> PreAd:
        raise NotImplementedError

    def cylinder(self, F: PreAd) -> PreAd:
        raise NotImplementedError

    # -- harness hooks
    def sample_ads(self, K: BallComplex, L: Iterable, k: int, rng: random.Random, count: int) -> list[PreAd]:
        return [self.trivial(K, L, k)]

    def isomorphic_copy(self, F: PreAd, rng: random.Random) -> PreAd:
        return F

    def perturb(self, F: PreAd, rng: random.Random) -> PreAd | None:
        return None


def cylinder_complex(K: BallComplex, L: Iterable = ()) -> tuple[BallComplex, frozenset]:
    """(K x I, L x I)."""
    I = interval()
    P = product(K, I)
    LI = frozenset(product_cell((c, K), (x, I)) for c in L for x in I.cells)
    return P, LI


def end_map(K: BallComplex, end: str) -> dict:
    """Cell map K -> K x {end}."""
    I = interval()
    return {c: (product_cell((c, K), (end, I)), 1) for c in K.cells}


def cylinder_end(J: PreAd, K: BallComplex, L: Iterable, end: str) -> PreAd:
    return J.pull(K, L, end_map(K, end))


def inverse_reindex(theta: CellIso, G: PreAd) -> PreAd:
    """The unique F on theta's target with theta^* F = G."""
    if G.K != theta.source.K or G.L != theta.source.L:
        raise AdError("pre-ad is not defined on the source of the isomorphism")
    k = theta.k
    l = G.degree - k
    vals = {}
    for c, (t, s) in theta.obj.items():
        v = G.value(c)
        if (k * l + (s < 0)) % 2:
            v = G.theory.involute_value(v)
        vals[t] = v
    return G.rebuild(theta.target.K, theta.target.L, l, vals)


# ------------------------------------------------------------------ ad_C

def _vec_add(a, b, s=1):
    return tuple(x + s * y for x, y in zip(a, b))


class AdCTheory(AdTheory):
    """ad_C: a K-ad of degree k is a chain map cl(K) -> C lowering degree by
    k (with the Koszul sign), i.e. a cycle of Hom(cl(K), C) in degree -k.
    ``mult`` (p, u, q, v) -> C_{p+q} makes C a differential graded ring with
    unit ``unit`` in C_0."""

    def __init__(self, C: IntegerChainComplex, name: str = "adC",
                 mult: Callable | None = None, unit: Sequence[int] | None = None):
        C.check()
        self.C = C
        self.name = name
        self.mult = mult
        self.unit = tuple(unit) if unit is not None else None
        self._hom_cache: dict = {}

    def __repr__(self):
        return f"AdCTheory({self.name})"

    # -- target category
    def involute_value(self, v):
        return tuple(-x for x in v)

    def empty_value(self, dim: int):
        return (0,) * self.C.rank(dim)

    def is_empty(self, v) -> bool:
        return not any(v)

    def value_to_json(self, v):
        return list(v)

    def value_from_json(self, x, dim: int):
        if not isinstance(x, list) or not all(isinstance(t, int) and not isinstance(t, bool) for t in x):
            raise AdError("ad_C values are integer lists")
        if len(x) != self.C.rank(dim):
            raise AdError(f"value of dimension {dim} must have length {self.C.rank(dim)}")
        return tuple(x)

    # -- ads
    def cell_defects(self, F: PreAd, c) -> list[str]:
        K, k = F.K, F.degree
        n = K.dims[c]
        v = F.value(c)
        if len(v) != self.C.rank(n - k):
            return [f"{c!r}: value has wrong length"]
        lhs = tuple(self.C.boundary_of(n - k, list(v))) if n - k - 1 in self.C.ranks and v else ()
        rhs = [0] * self.C.rank(n - k - 1)
        e = -1 if k % 2 else 1
        for f, x in K.bd.get(c, {}).items():
            w = F.value(f)
            for i, y in enumerate(w):
                rhs[i] += e * x * y
        lhs = lhs or (0,) * len(rhs)
        if tuple(lhs) != tuple(rhs):
            return [f"{c!r}: d F != (-1)^k F d"]
        return []

    def glue(self, R: Refinement, F: PreAd, L: Iterable = ()) -> PreAd:
        """Gluing is addition over the pieces of each coarse cell."""
        L = frozenset(L)
        if F.K != R.fine:
            raise AdError("pre-ad is not defined on the fine complex")
        k = F.degree
        vals = {}
        for s in R.coarse.cells:
            if s in L:
                continue
            acc = self.empty_value(R.coarse.dims[s] - k)
            for c, e in R.pieces(s):
                acc = _vec_add(acc, F.value(c), e)
            vals[s] = acc
        return PreAd(self, R.coarse, L, k, vals)

    def cylinder(self, F: PreAd) -> PreAd:
        """Equal to F on both ends, zero on the cells sigma x I."""
        P, LI = cylinder_complex(F.K, F.L)
        I = interval()
        vals = {}
        for c in P.cells:
            if c in LI:
                continue
            s, x = split_product_cell(c, (F.K, I))
            vals[c] = F.value(s) if x != "I" else self.empty_value(P.dims[c] - F.degree)
        return PreAd(self, P, LI, F.degree, vals)

    # -- linear structure
    def hom_data(self, K: BallComplex, L: Iterable, k: int) -> "HomData":
        key = (K, frozenset(L), k)
        if key not in self._hom_cache:
            self._hom_cache[key] = HomData(self, K, frozenset(L), k)
        return self._hom_cache[key]

    def add(self, F: PreAd, G: PreAd, s: int = 1) -> PreAd:
        return F.rebuild(F.K, F.L, F.degree, {c: _vec_add(F.values[c], G.value(c), s) for c in F.values})

    def scale(self, F: PreAd, m: int) -> PreAd:
        return F.rebuild(F.K, F.L, F.degree, {c: tuple(m * x for x in v) for c, v in F.values.items()})

    def sample_ads(self, K, L, k, rng, count):
        H = self.hom_data(K, L, k)
        out = [self.trivial(K, L, k)]
        for _ in range(count):
            coeffs = [rng.randint(-2, 2) for _ in H.cycles]
            out.append(H.to_ad(H.combine(coeffs)))
        return out

    def perturb(self, F, rng):
        cells = [c for c in F.K.cells if c not in F.L and self.C.rank(F.K.dims[c] - F.degree)]
        rng.shuffle(cells)
        for c in cells:
            r = self.C.rank(F.K.dims[c] - F.degree)
            for _ in range(4):
                delta = tuple(rng.randint(-2, 2) for _ in range(r))
                if not any(delta):
                    continue
                vals = dict(F.values)
                vals[c] = _vec_add(vals[c], delta)
                G = F.rebuild(F.K, F.L, F.degree, vals)
                if not G.is_ad():
                    return G
        return None

    # -- multiplicative structure
    def box_values(self, u, p: int, v, q: int):
        if self.mult is None:
            raise AdError("theory is not multiplicative")
        return tuple(self.mult(p, list(u), q, list(v)))

    def unit_ad(self) -> PreAd:
        """The unit point-ad of degree 0."""
        if self.unit is None:
            raise AdError("theory has no unit")
        return PreAd(self, point(), frozenset(), 0, {(): self.unit})


def adC_theory(C: IntegerChainComplex, name: str = "adC") -> AdCTheory:
    return AdCTheory(C, name)


def integer_ring_theory() -> AdCTheory:
    """ad_C for C = Z in degree 0 with its ring structure."""
    return AdCTheory(unit_complex(0), "adZ", mult=lambda p, u, q, v: [u[0] * v[0]], unit=[1])


def dual_numbers_theory(m: int = 2) -> AdCTheory:
    """ad_C for C = Z[x]/(x^2), |x| = m, d = 0."""
    C = IntegerChainComplex({0: 1, m: 1})

    def mult(p, u, q, v):
        if p + q in (0, m) and (p == 0 or q == 0):
            return [u[0] * v[0]]
        return [0] * C.rank(p + q)

    return AdCTheory(C, f"adZ[x{m}]", mult=mult, unit=[1])


class HomData:
    """Hom(cl(K, L), C) around degree -k with conversions to pre-ads."""

    def __init__(self, T: AdCTheory, K: BallComplex, L: frozenset, k: int):
        self.T, self.K, self.L, self.k = T, K, L, k
        self.cl = cellular_chains(K, L)
        self.hom, self.idx = hom_complex(self.cl, T.C)
        self.deg = -k
        self.basis = self.idx.get(self.deg, [])
        self.dim = len(self.basis)
        self.pos = {b: i for i, b in enumerate(self.basis)}

    def matrix(self, n: int):
        return self.hom.d.get(n)

    @property
    def cycles(self) -> list[list[int]]:
        if not hasattr(self, "_cycles"):
            M = self.hom.d.get(self.deg)
            if M is None or not self.dim:
                self._cycles = [[int(i == j) for i in range(self.dim)] for j in range(self.dim)]
            else:
                self._cycles = zl.kernel(M, self.dim)
        return self._cycles

    @property
    def boundaries(self) -> list[list[int]]:
        if not hasattr(self, "_bounds"):
            M = self.hom.d.get(self.deg + 1)
            self._bounds = [] if M is None else [c for c in zl.columns(M) if any(c)]
        return self._bounds

    def combine(self, coeffs: Sequence[int]) -> list[int]:
        v = [0] * self.dim
        for a, z in zip(coeffs, self.cycles):
            if a:
                for i, x in enumerate(z):
                    v[i] += a * x
        return v

    def to_ad(self, vec: Sequence[int]) -> PreAd:
        C, K = self.T.C, self.K
        vals = {c: [0] * C.rank(K.dims[c] - self.k) for c in K.cells if c not in self.L}
        bases = self.cl.basis or {}
        for (q, i, j), x in zip(self.basis, vec):
            if x:
                vals[bases[q][i]][j] += x
        return PreAd(self.T, K, self.L, self.k, {c: tuple(v) for c, v in vals.items()})

    def to_vec(self, F: PreAd) -> list[int]:
        if F.K != self.K or F.degree != self.k:
            raise AdError("pre-ad does not live on this Hom complex")
        bases = self.cl.basis or {}
        return [F.value(bases[q][i])[j] for (q, i, j) in self.basis]

    def group(self) -> HomologyGroup:
        return smith_homology(self.hom, [self.deg])[self.deg]


# ------------------------------------------------------------------ axiom harness

@dataclass
class AxiomResult:
    passed: bool = True
    checks: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, what: str):
        self.checks += 1
        if not ok:
            self.passed = False
            if len(self.failures) < 20:
                self.failures.append(what)


AXIOMS = "abcdefgh"


@dataclass
class AxiomReport:
    theory: str
    results: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def lines(self) -> list[str]:
        out = []
        for a in AXIOMS:
            r = self.results[a]
            out.append(f"({a}) {'PASS' if r.passed else 'FAIL'} [{r.checks} checks]"
                       + ("" if r.passed else " " + "; ".join(map(str, r.failures[:3]))))
        return out


def default_suite() -> list[tuple[str, BallComplex, frozenset]]:
    I = interval()
    D1 = simplex(1)
    sd2 = barycentric_subdivision(simplex(2)).fine
    return [
        ("point", point(), frozenset()),
        ("delta1", D1, frozenset()),
        ("delta1-rel", D1, frozenset({(0,), (1,)})),
        ("delta2", simplex(2), frozenset()),
        ("delta3", simplex(3), frozenset()),
        ("I", I, frozenset()),
        ("IxDelta1", product(I, D1), frozenset()),
        ("M", model_M(), frozenset()),
        ("M'", model_M_prime(), frozenset()),
        ("sd-delta2", sd2, frozenset()),
    ]


def default_refinements() -> list[tuple[str, Refinement]]:
    return [
        ("trivial-delta2", trivial_refinement(simplex(2))),
        ("sd-delta1", barycentric_subdivision(simplex(1))),
        ("sd-delta2", barycentric_subdivision(simplex(2))),
        ("M'->M", refinement_M()),
    ]


def residual_cells(R: Refinement) -> dict:
    """Coarse cells that are not subdivided, with all their faces: sigma ->
    (its single piece, sign)."""
    single = {}
    for s in R.coarse.cells:
        ps = R.pieces(s)
        inside = [c for c in R.fine.cells if R.carrier[c] == s]
        if len(ps) == 1 and len(inside) == 1:
            single[s] = ps[0]
    out = {}
    for s in R.coarse.cells:
        if all(f in single for f in R.coarse.cell_closure(s)):
            out[s] = single[s]
    return out


def _random_subcomplex(K: BallComplex, rng: random.Random) -> frozenset:
    cells = list(K.cells)
    picks = rng.sample(cells, max(1, len(cells) // 3))
    return K.closure(picks)


def check_axioms(T: AdTheory, suite=None, refinements=None, rng: random.Random | None = None,
                 samples: int = 3, degrees: Sequence[int] = (0, 1)) -> AxiomReport:
    """Run the finite harness for each axiom (a)-(h) over the suite."""
    rng = rng or random.Random(0)
    suite = default_suite() if suite is None else suite
    refinements = default_refinements() if refinements is None else refinements
    res = {a: AxiomResult() for a in AXIOMS}
    for name, K, L in suite:
        for k in degrees:
            ads = T.sample_ads(K, L, k, rng, samples)
            # (b)
            triv = T.trivial(K, L, k)
            res["b"].record(triv.is_ad(), f"{name}: trivial pre-ad is not an ad")
            for F in ads:
                tag = f"{name}, k={k}"
                if not F.is_ad():
                    res["a"].record(False, f"{tag}: sampled pre-ad is not an ad")
                    continue
                # (a) restriction is a functor into ads; relative = absolute and empty on L
                S = _random_subcomplex(K, rng)
                S2 = K.closure(rng.sample(sorted(S, key=repr), max(1, len(S) // 2)))
                FS = F.restrict(S)
                res["a"].record(FS.is_ad(), f"{tag}: restriction to a subcomplex is not an ad")
                res["a"].record(FS.restrict(S2).equals(F.restrict(S2)), f"{tag}: restriction not functorial")
                res["a"].record(F.relax().is_ad(), f"{tag}: (K,L)-ad is not a K-ad")
                # (c)
                iF = T.involute(F)
                res["c"].record(iF.is_ad() and T.involute(iF).equals(F), f"{tag}: involution")
                # (d)
                res["d"].record(T.isomorphic_copy(F, rng).is_ad(), f"{tag}: isomorphic copy")
                # (e)
                for P in (F, T.perturb(F, rng)):
                    if P is None:
                        continue
                    local = all(P.restrict(K.cell_closure(c)).is_ad() for c in K.cells)
                    res["e"].record(local == P.is_ad(), f"{tag}: locality")
                # (f)
                for theta in (kappa(K, L), lambda_(K, L)):
                    G = reindex(theta, F)
                    ok = G.is_ad() and inverse_reindex(theta, G).equals(F)
                    res["f"].record(ok, f"{tag}: {theta.name}^* of an ad")
                    P = T.perturb(F, rng)
                    if P is not None:
                        res["f"].record(not reindex(theta, P).is_ad(), f"{tag}: {theta.name}^* of a non-ad")
                # (h)
                J = T.cylinder(F)
                ends = all(cylinder_end(J, K, L, e).equals(F) for e in ("0", "1"))
                res["h"].record(J.is_ad() and ends, f"{tag}: cylinder")
            # (f) in the other direction: ads on the source come from ads
            theta = kappa(K, L)
            for G in T.sample_ads(theta.source.K, theta.source.L, k + 1, rng, 1):
                if G.is_ad():
                    res["f"].record(inverse_reindex(theta, G).is_ad(), f"{name}: (kappa^*)^-1 of an ad")
            Jt = T.cylinder(triv)
            P, LI = cylinder_complex(K, L)
            res["h"].record(Jt.equals(T.trivial(P, LI, k)), f"{name}: J(trivial) is not trivial")
    for name, R in refinements:
        Lf = frozenset()
        for k in degrees:
            for F in T.sample_ads(R.fine, Lf, k, rng, samples):
                if not F.is_ad():
                    continue
                G = T.glue(R, F)
                ok = G.is_ad()
                for s, (p, e) in residual_cells(R).items():
                    ok &= T.values_equal(G.value(s), F.value(OrientedCell(p, e)))
                res["g"].record(ok, f"{name}, k={k}: gluing")
    return AxiomReport(T.name, res)


# ------------------------------------------------------------------ bordism

@dataclass(frozen=True, eq=False)
class BordismClass:
    theory: AdTheory
    degree: int
    rep: PreAd

    def __post_init__(self):
        if self.rep.K != point() or self.rep.degree != self.degree:
            raise AdError("a bordism class is represented by a point-ad of its degree")

    def same_as(self, other: "BordismClass") -> bool:
        """Decidable equality for ad_C: the difference is a boundary."""
        T = self.theory
        if not isinstance(T, AdCTheory):
            raise AdError("bordism equality is only decidable for ad_C")
        if other.theory is not T or other.degree != self.degree:
            return False
        diff = _vec_add(self.rep.value(()), other.rep.value(()), -1)
        n = -self.degree
        if not any(diff):
            return True
        M = T.C.d.get(n + 1)
        return M is not None and zl.solve(M, list(diff), T.C.rank(n + 1)) is not None


def bordism_add(x: BordismClass, y: BordismClass) -> BordismClass:
    """[F] + [G] through the model complex M: glue the cylinders of kappa^*F
    and kappa^*G into an M'-ad, glue to M, restrict to lambda_5 and undo
    kappa^*."""
    T = x.theory
    if y.theory is not T or x.degree != y.degree:
        raise AdError("bordism classes of different theories or degrees")
    H = _M_ad(T, x.rep, y.rep)
    return BordismClass(T, x.degree, _lambda5_class(T, H))


def _M_ad(T: AdTheory, F: PreAd, G: PreAd) -> PreAd:
    """The M-ad of the construction, restricting to J(kappa^* F) and
    J(kappa^* G) on the two squares."""
    kap = kappa(point())
    JF, JG = T.cylinder(reindex(kap, F)), T.cylinder(reindex(kap, G))
    gamma, delta = square_maps()
    Mp = model_M_prime()
    vals: dict = {}
    for J, m in ((JF, gamma), (JG, delta)):
        for c, t in m.items():
            v = J.value(c)
            if t in vals and not T.values_equal(vals[t], v):
                raise AdError("cylinders disagree on the shared edge")
            vals[t] = v
    Hp = PreAd(T, Mp, frozenset(), F.degree + 1, vals)
    return T.glue(refinement_M(), Hp)


def _lambda5_class(T: AdTheory, H: PreAd) -> PreAd:
    I = interval()
    H5 = H.pull(I, {"0", "1"}, {"I": ("lambda5", 1)})
    return inverse_reindex(kappa(point()), H5)


def bordism_relation_lattice(T: AdCTheory, K: BallComplex, L: Iterable, k: int) -> list[list[int]]:
    """{J|K x 1 - J|K x 0 : J a degree-k (K x I, L x I)-ad}, as vectors of
    Hom(cl(K, L), C)_{-k}."""
    L = frozenset(L)
    P, LI = cylinder_complex(K, L)
    HP, H = T.hom_data(P, LI, k), T.hom_data(K, L, k)
    out = []
    for z in HP.cycles:
        J = HP.to_ad(z)
        d = _vec_sub(H.to_vec(cylinder_end(J, K, L, "1")), H.to_vec(cylinder_end(J, K, L, "0")))
        if any(d):
            out.append(d)
    return out


def _vec_sub(a, b):
    return [x - y for x, y in zip(a, b)]


def bordism_quotient(T: AdCTheory, K: BallComplex, L: Iterable, k: int) -> HomologyGroup:
    """ad^k(K, L) modulo the bordism relation, computed from the
    definition (ads and cylinder-ads), not from the Hom cohomology."""
    H = T.hom_data(K, L, k)
    rel = bordism_relation_lattice(T, K, L, k)
    betti, tors = zl.quotient_invariants(H.cycles, rel, H.dim)
    return HomologyGroup(betti, tuple(tors))


def bordism_group(T: AdCTheory, k: int) -> HomologyGroup:
    """Omega_k: degree -k point-ads modulo bordism."""
    if not isinstance(T, AdCTheory):
        raise AdError("bordism groups are computed for ad_C theories only")
    return bordism_quotient(T, point(), (), -k)


def bordism_representatives(T: AdCTheory, k: int) -> list[BordismClass]:
    H = T.hom_data(point(), frozenset(), -k)
    return [BordismClass(T, -k, H.to_ad(z)) for z in H.cycles]


# ------------------------------------------------------------------ T^k

@dataclass(frozen=True)
class TGroup:
    group: HomologyGroup
    representatives: tuple = ()

    def __str__(self):
        return str(self.group)


def T_group(T: AdCTheory, K: BallComplex, L: Iterable, k: int, representatives: bool = False) -> TGroup:
    """T^k(K, L) as the degree -k homology of Hom(cl(K, L), C)."""
    L = frozenset(L)
    if not K.is_subcomplex(L):
        raise AdError("L is not a subcomplex of K")
    H = T.hom_data(K, L, k)
    G = H.group()
    reps = ()
    if representatives:
        reps = tuple(H.to_ad(z) for z in H.cycles)
    return TGroup(G, reps)


def kunneth_cohomology(K: BallComplex, L: Iterable, C: IntegerChainComplex, k: int) -> HomologyGroup:
    """H^k(K, L; C) from H(cl(K, L)^*) and H(C) by the Kunneth formula."""
    A = hom_dual(cellular_chains(K, L))
    HA, HC = smith_homology(A), smith_homology(C)
    n = -k
    betti, cyc = 0, []
    for p, ga in HA.items():
        gc = HC.get(n - p)
        if gc is not None:
            betti += ga.betti * gc.betti
            cyc += [t for t in ga.torsion for _ in range(gc.betti)]
            cyc += [t for t in gc.torsion for _ in range(ga.betti)]
            cyc += [zl.gcd_list([a, b]) for a in ga.torsion for b in gc.torsion]
        gt = HC.get(n - 1 - p)
        if gt is not None:
            cyc += [zl.gcd_list([a, b]) for a in ga.torsion for b in gt.torsion]
    return HomologyGroup(betti, _invariant_factors(cyc))


def _invariant_factors(orders: list[int]) -> tuple:
    orders = [o for o in orders if o > 1]
    if not orders:
        return ()
    D = [[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))]
    return tuple(x for x in zl.elementary_divisors(D) if x > 1)


# ------------------------------------------------------------------ connecting map and exactness

def _zero_extend(F: PreAd, K: BallComplex) -> Callable:
    T = F.theory
    return lambda c: F.value(c) if c in F.K.dims else T.empty_value(K.dims[c] - F.degree)


def connecting(T: AdCTheory, K: BallComplex, L: Iterable, F: PreAd) -> PreAd:
    """The connecting map ad^k(L) -> ad^{k+1}(K, L): the negative of kappa^*,
    followed by an explicit lift to (I x K, 1 x K u 0 x L) and restriction
    to 0 x K."""
    L = frozenset(L)
    k = F.degree
    Lc = K.restrict(L)
    if F.K != Lc:
        raise AdError("input must be an ad on L")
    I = interval()
    P = product(I, K)
    cell = lambda x, c: product_cell((x, I), (c, K))
    rel = frozenset(cell("1", c) for c in K.cells) | frozenset(cell("0", c) for c in L)
    Ft = _zero_extend(F, K)
    e = -1 if k % 2 else 1  # kappa^* carries i^{k}
    C = T.C
    vals = {}
    for c in K.cells:
        vals[cell("I", c)] = tuple(e * x for x in Ft(c))
    for c in K.cells:
        if c in L:
            continue
        n = K.dims[c]
        # ad condition on I x c solved for the value on 0 x c
        acc = [0] * C.rank(n - k - 1)
        for f, x in K.bd.get(c, {}).items():
            for i, y in enumerate(vals[cell("I", f)]):
                acc[i] -= x * y
        v = vals[cell("I", c)]
        if any(v) and n - k - 1 in C.ranks:
            dv = C.boundary_of(n - k, list(v))
            s = 1 if k % 2 else -1  # -(-1)^{k+1}
            acc = [a + s * b for a, b in zip(acc, dv)]
        vals[cell("0", c)] = tuple(acc)
    H = PreAd(T, P, rel, k + 1, {c: v for c, v in vals.items() if c not in rel})
    if not H.is_ad():
        raise AdError("lift in the connecting map is not an ad")
    kapL = kappa(Lc)
    G = reindex(kapL, F)
    IL = (I, Lc)
    back = H.pull(kapL.source.K, kapL.source.L,
                  {c: (cell(*split_product_cell(c, IL)), 1) for c in kapL.source.objects})
    if not back.equals(G):
        raise AdError("lift does not restrict to kappa^* F")
    out = H.pull(K, L, {c: (cell("0", c), 1) for c in K.cells if c not in L})
    return T.involute(out)


@dataclass
class ExactnessReport:
    spots: dict

    @property
    def exact(self) -> bool:
        return all(self.spots.values())


def _linear_image(f: Callable, basis: list[list[int]]) -> list[list[int]]:
    return [f(z) for z in basis]


def _exact_at(Z_A_img: list, ZB: list, BB: list, g: Callable, BC: list, dimB: int, dimC: int) -> bool:
    """Lattice exactness at B of H(A) -> H(B) -> H(C), with maps given on
    cycles: im = f(Z_A) + B_B and ker = {z in Z_B : g z in B_C}."""
    # composite vanishes
    gf = [g(v) for v in Z_A_img]
    if not zl.span_contains(BC, gf, dimC):
        return False
    # ker contained in im
    gZ = [g(z) for z in ZB]
    cols = gZ + [[-x for x in b] for b in BC]
    if not cols:
        return True
    A = [[c[i] for c in cols] for i in range(dimC)] if dimC else []
    if dimC == 0:
        ker = [[int(i == j) for i in range(len(ZB))] for j in range(len(ZB))]
    else:
        ker = zl.kernel(A, len(cols))
    kz = []
    for w in ker:
        z = [0] * dimB
        for a, zz in zip(w[:len(ZB)], ZB):
            if a:
                for i, x in enumerate(zz):
                    z[i] += a * x
        if any(z):
            kz.append(z)
    return zl.span_contains(Z_A_img + BB, kz, dimB)


def five_term_exactness(T: AdCTheory, K: BallComplex, L: Iterable, k: int) -> ExactnessReport:
    """Exactness of T^{k-1}K -> T^{k-1}L -> T^k(K,L) -> T^kK -> T^kL at its
    three middle terms, by lattice comparison on cycle representatives."""
    L = frozenset(L)
    Lc = K.restrict(L)
    HK1, HL1 = T.hom_data(K, (), k - 1), T.hom_data(Lc, (), k - 1)
    HKL, HK, HL = T.hom_data(K, L, k), T.hom_data(K, (), k), T.hom_data(Lc, (), k)

    def restrict_map(src: HomData, tgt: HomData):
        bases = src.cl.basis or {}
        where = {}
        for i, (q, a, j) in enumerate(src.basis):
            where[(bases[q][a], j)] = i
        tb = tgt.cl.basis or {}
        sel = [where[(tb[q][a], j)] for (q, a, j) in tgt.basis]
        return lambda v: [v[i] for i in sel]

    res_K_L_1 = restrict_map(HK1, HL1)
    res_K_L = restrict_map(HK, HL)
    ext = lambda v: HK.to_vec(_extend_relative(HKL.to_ad(v), K))

    def delta(v):
        return HKL.to_vec(connecting(T, K, L, HL1.to_ad(v)))

    spots = {
        "T^{k-1}L": _exact_at(_linear_image(res_K_L_1, HK1.cycles), HL1.cycles, HL1.boundaries,
                               delta, HKL.boundaries, HL1.dim, HKL.dim),
        "T^k(K,L)": _exact_at(_linear_image(delta, HL1.cycles), HKL.cycles, HKL.boundaries,
                               ext, HK.boundaries, HKL.dim, HK.dim),
        "T^kK": _exact_at(_linear_image(ext, HKL.cycles), HK.cycles, HK.boundaries,
                           res_K_L, HL.boundaries, HK.dim, HL.dim),
    }
    return ExactnessReport(spots)


def _extend_relative(F: PreAd, K: BallComplex) -> PreAd:
    return F.relax()


# ------------------------------------------------------------------ elementary expansions

def expansion_cells(K: BallComplex, K1: Iterable) -> tuple:
    """(sigma, sigma') if K is an elementary expansion of the subcomplex K1."""
    K1 = frozenset(K1)
    if not K.is_subcomplex(K1):
        raise AdError("K1 is not a subcomplex of K")
    extra = [c for c in K.cells if c not in K1]
    if len(extra) != 2:
        raise AdError("not an elementary expansion: need exactly two new cells")
    a, b = sorted(extra, key=lambda c: K.dims[c])
    if K.dims[b] != K.dims[a] + 1 or not K.incidence(b, a):
        raise AdError("not an elementary expansion: new cells are not a free face pair")
    return b, a


def expansion_refinement(K: BallComplex, sigma, sigma_p) -> tuple[Refinement, BallComplex]:
    """The subdivision of the closed cell sigma by A x I, A the closure of
    the faces of sigma other than sigma', with A x 0 = A.  Returns the
    refinement and A."""
    A_cells = K.proper_faces(sigma) - {sigma_p}
    A = K.restrict(A_cells)
    dA = K.proper_faces(sigma_p)
    I = interval()
    P = product(A, I)
    carrier = {}
    for c in P.cells:
        a, x = split_product_cell(c, (A, I))
        if x == "0":
            carrier[c] = a
        elif x == "1" or a in dA:
            carrier[c] = sigma_p
        else:
            carrier[c] = sigma
    coarse = K.restrict(K.cell_closure(sigma))
    return make_refinement(P, coarse, carrier), A


def kan_extend(T: AdTheory, K: BallComplex, L: Iterable, K1: Iterable, F: PreAd,
               method: str = "auto") -> PreAd:
    """Extend a (K1, L n K1)-ad over an elementary expansion (K1, L1) ->
    (K, L).  ``method`` is "linear" (ad_C only), "cylinder" (any theory)
    or "auto"."""
    L = frozenset(L)
    K1 = frozenset(K1)
    sigma, sigma_p = expansion_cells(K, K1)
    if (sigma in L) != (sigma_p in L):
        raise AdError("not an elementary expansion: sigma and sigma' split by L")
    if F.K.cells and frozenset(F.K.cells) != K1:
        raise AdError("ad is not defined on K1")
    if F.L != L & K1:
        raise AdError("ad is not relative to L n K1")
    k = F.degree
    vals = dict(F.values)
    if sigma in L:
        return PreAd(T, K, L, k, vals)
    if method == "auto":
        method = "linear" if isinstance(T, AdCTheory) else "cylinder"
    if method == "linear":
        if not isinstance(T, AdCTheory):
            raise AdError("linear extension needs ad_C")
        vals.update(_linear_extension(T, K, F, sigma, sigma_p))
    else:
        R, A = expansion_refinement(K, sigma, sigma_p)
        FA = F.restrict(A.cells)
        J = T.cylinder(FA)
        G = T.glue(R, J, L & R.coarse.dims.keys())
        for a in A.cells:
            if not T.values_equal(G.value(a), F.value(a)):
                raise AdError("glued ad disagrees with F on A")
        vals[sigma] = G.value(sigma)
        vals[sigma_p] = G.value(sigma_p)
    out = PreAd(T, K, L, k, vals)
    if not out.is_ad():
        raise AdError("extension is not an ad")
    return out


def _linear_extension(T: AdCTheory, K: BallComplex, F: PreAd, sigma, sigma_p) -> dict:
    C, k = T.C, F.degree
    n = K.dims[sigma]
    e = -1 if k % 2 else 1
    r1, r0 = C.rank(n - k), C.rank(n - 1 - k)
    r00 = C.rank(n - 2 - k)
    # unknowns: x = F(sigma) in C_{n-k}, y = F(sigma') in C_{n-1-k}
    known_s = [0] * r0
    for f, x in K.bd[sigma].items():
        if f != sigma_p:
            for i, v in enumerate(F.value(f)):
                known_s[i] += e * x * v
    known_p = [0] * r00
    for f, x in K.bd.get(sigma_p, {}).items():
        for i, v in enumerate(F.value(f)):
            known_p[i] += e * x * v
    inc = K.incidence(sigma, sigma_p)
    rows = []
    rhs = []
    d1 = C.d.get(n - k)
    d0 = C.d.get(n - 1 - k)
    for i in range(r0):
        row = [d1[i][j] if d1 else 0 for j in range(r1)] + [-e * inc * int(i == j) for j in range(r0)]
        rows.append(row)
        rhs.append(known_s[i])
    for i in range(r00):
        row = [0] * r1 + [d0[i][j] if d0 else 0 for j in range(r0)]
        rows.append(row)
        rhs.append(known_p[i])
    if rows:
        x = zl.solve(rows, rhs, r1 + r0)
        if x is None:
            raise AdError("no linear extension exists")
    else:
        x = [0] * (r1 + r0)
    return {sigma: tuple(x[:r1]), sigma_p: tuple(x[r1:])}
