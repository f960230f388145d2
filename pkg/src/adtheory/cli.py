"""Command-line front end.

Every subcommand prints a short human summary and, with ``--out``, writes a
JSON report.  Reports are deterministic: identical inputs and seed give
byte-identical files, so wall-clock timings are only included on request.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field

from . import corpus
from .ad_framework import (
    AdCTheory,
    AdError,
    T_group,
    adC_theory,
    bordism_group,
    check_axioms,
    integer_ring_theory,
    kunneth_cohomology,
    load_ad,
)
from .chain_algebra import (
    ChainComplexError,
    HomologyGroup,
    IntegerChainComplex,
    cellular_chains,
    smith_homology,
    unit_complex,
)
from .complex_core import (
    BallComplex,
    ComplexError,
    barycentric_subdivision,
    coherent_orientation,
    make_refinement,
    simplex,
)


class InputError(Exception):
    """Malformed input; maps to exit code 2."""


@dataclass
class RunReport:
    command: str
    seed: int
    inputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timings: dict | None = None

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})
        return passed

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> str:
        obj = {"format": 1, "command": self.command, "seed": self.seed, "inputs": self.inputs,
               "checks": self.checks, "results": self.results, "passed": self.passed}
        if self.timings is not None:
            obj["timings"] = self.timings
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------------ input resolution

def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def resolve_complex(ref: str, report: RunReport, key: str) -> BallComplex:
    """A complex file, or a corpus name (with or without .json)."""
    if os.path.exists(ref):
        report.inputs[key] = _digest(ref)
        try:
            return BallComplex.from_json(_read_json(ref))
        except ComplexError as exc:
            raise InputError(f"{ref}: {exc}") from None
    name = ref[:-5] if ref.endswith(".json") else ref
    if name in corpus.NAMED:
        report.inputs[key] = f"corpus:{name}"
        return corpus.named(name)
    raise InputError(f"no such complex file or corpus name: {ref!r}")


def resolve_chain_complex(ref: str, report: RunReport, key: str) -> IntegerChainComplex:
    """A chain complex file, ``Z``, or ``cl:<complex>`` for cellular chains."""
    if ref == "Z":
        report.inputs[key] = "Z"
        return unit_complex(0)
    if ref.startswith("cl:"):
        return cellular_chains(resolve_complex(ref[3:], report, key))
    if os.path.exists(ref):
        report.inputs[key] = _digest(ref)
        try:
            return IntegerChainComplex.from_json(_read_json(ref))
        except ChainComplexError as exc:
            raise InputError(f"{ref}: {exc}") from None
    raise InputError(f"no such chain complex: {ref!r}")


def resolve_subcomplex(ref: str, K: BallComplex, report: RunReport, key: str) -> frozenset:
    """``none``, ``boundary``, a JSON list of cell ids, or a file holding one."""
    if ref in ("none", "empty", ""):
        report.inputs[key] = "none"
        return frozenset()
    if ref == "boundary":
        report.inputs[key] = "boundary"
        return K.boundary_subcomplex()
    if os.path.exists(ref):
        report.inputs[key] = _digest(ref)
        raw = _read_json(ref)
    else:
        try:
            raw = json.loads(ref)
        except json.JSONDecodeError:
            raise InputError(f"no such subcomplex: {ref!r}") from None
        report.inputs[key] = ref
    if isinstance(raw, dict):
        if set(raw) - {"format", "cells"}:
            raise InputError("unknown fields in subcomplex file")
        raw = raw.get("cells")
    if not isinstance(raw, list):
        raise InputError("subcomplex must be a list of cell ids")
    cells = frozenset(_tup(x) for x in raw)
    if not cells <= set(K.cells):
        raise InputError("subcomplex names cells outside the complex")
    closed = K.closure(cells)
    if closed != cells:
        raise InputError("subcomplex is not closed under faces")
    return cells


def _tup(x):
    return tuple(_tup(y) for y in x) if isinstance(x, list) else x


def resolve_theory(ref: str, report: RunReport, truncation: int):
    """``adZ``, ``adC:<chain complex>`` or ``sym``."""
    report.inputs["theory"] = ref
    if ref == "adZ":
        return integer_ring_theory()
    if ref.startswith("adC:"):
        inner = ref[4:]
        if inner == "Z":
            return integer_ring_theory()
        if not inner.startswith("cl:") and not os.path.exists(inner):
            inner = "cl:" + inner
        return adC_theory(resolve_chain_complex(inner, report, "theory_C"), name=ref)
    if ref in ("sym", "symmetric"):
        from .symmetric_ads import SymmetricTheory

        return SymmetricTheory(truncation)
    raise InputError(f"unknown theory {ref!r}; use adZ, adC:<complex> or sym")


def resolve_orientation(ref: str, X: BallComplex, report: RunReport) -> dict:
    if ref in ("std", "standard", "coherent"):
        report.inputs["orientation"] = "coherent"
        return coherent_orientation(X)
    if ref in ("reversed", "rev"):
        report.inputs["orientation"] = "reversed"
        return {c: -s for c, s in coherent_orientation(X).items()}
    if not os.path.exists(ref):
        raise InputError(f"no such orientation file: {ref!r}")
    report.inputs["orientation"] = _digest(ref)
    raw = _read_json(ref)
    if not isinstance(raw, dict) or set(raw) - {"format", "signs"} or raw.get("format", 1) != 1:
        raise InputError("orientation files hold {\"format\": 1, \"signs\": [[cell, sign], ...]}")
    out = {}
    for item in raw.get("signs", []):
        if not (isinstance(item, list) and len(item) == 2 and item[1] in (1, -1)):
            raise InputError(f"malformed orientation entry {item!r}")
        c = _tup(item[0])
        if c not in X.dims or X.dims[c] != X.dim:
            raise InputError(f"{c!r} is not a top cell")
        out[c] = item[1]
    return out


def fmt_group(H: HomologyGroup) -> str:
    parts = []
    if H.betti:
        parts.append("Z" if H.betti == 1 else f"Z^{H.betti}")
    parts += [f"Z/{t}" for t in H.torsion]
    return "+".join(parts) if parts else "0"


def _group_json(H: HomologyGroup) -> dict:
    return {"betti": H.betti, "torsion": list(H.torsion)}


# ------------------------------------------------------------------ subcommands

def cmd_homology(args, report: RunReport) -> str:
    K = resolve_complex(args.complex, report, "complex")
    L = resolve_subcomplex(args.relative, K, report, "relative") if args.relative else frozenset()
    C = cellular_chains(K, L)
    H = smith_homology(C, sorted(C.ranks))
    report.results["homology"] = {str(q): _group_json(h) for q, h in sorted(H.items())}
    report.check("d^2 = 0", K.check_dd())
    return " ".join(f"H{q}={fmt_group(h)}" for q, h in sorted(H.items()) if fmt_group(h) != "0") or "0"


def cmd_bordism(args, report: RunReport) -> str:
    C = resolve_chain_complex(args.chaincomplex, report, "chaincomplex")
    T = adC_theory(C)
    out = []
    for k in _degrees(args.k, C):
        B = bordism_group(T, k)
        H = smith_homology(C, [k])[k]
        report.results[f"Omega_{k}"] = _group_json(B)
        report.check(f"Omega_{k} = H_{k}", B == H, f"{fmt_group(B)} vs {fmt_group(H)}")
        out.append(f"Omega{k}={fmt_group(B)}")
    return " ".join(out)


def _degrees(k, C: IntegerChainComplex):
    if k is not None:
        return [k]
    return sorted(C.ranks) if C.ranks else [0]


def cmd_cohomology(args, report: RunReport) -> str:
    K = resolve_complex(args.complex, report, "complex")
    L = resolve_subcomplex(args.subcomplex, K, report, "subcomplex")
    C = resolve_chain_complex(args.chaincomplex, report, "chaincomplex")
    T = adC_theory(C)
    ks = [args.k] if args.k is not None else list(range(-max(C.ranks, default=0), K.dim - min(C.ranks, default=0) + 1))
    out = []
    for k in ks:
        G = T_group(T, K, L, k).group
        O = kunneth_cohomology(K, L, C, k)
        report.results[f"T^{k}"] = _group_json(G)
        report.check(f"T^{k} = H^{k}", G == O, f"{fmt_group(G)} vs {fmt_group(O)}")
        out.append(f"T{k}={fmt_group(G)}")
    return " ".join(out)


def cmd_ad_check(args, report: RunReport) -> str:
    T = resolve_theory(args.theory, report, args.truncation)
    F = _load_ad_file(T, args.ad, report, "ad")
    defects = T.defects(F)
    report.results["defects"] = defects[:50]
    report.check("ad condition", not defects, "; ".join(defects[:3]))
    return "ad" if not defects else f"not an ad: {defects[0]}"


def _load_ad_file(T, path: str, report: RunReport, key: str, K: BallComplex | None = None):
    if not os.path.exists(path):
        raise InputError(f"no such ad file: {path!r}")
    report.inputs[key] = _digest(path)
    try:
        return load_ad(T, _read_json(path), K)
    except (AdError, ComplexError, ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_glue(args, report: RunReport) -> str:
    T = resolve_theory(args.theory, report, args.truncation)
    K = resolve_complex(args.K, report, "K")
    if args.fine in ("sd", "barycentric"):
        report.inputs["fine"] = "barycentric"
        R = barycentric_subdivision(K)
    else:
        if not os.path.exists(args.fine):
            raise InputError(f"no such refinement file: {args.fine!r}")
        report.inputs["fine"] = _digest(args.fine)
        raw = _read_json(args.fine)
        if not isinstance(raw, dict) or set(raw) - {"format", "fine", "carrier"}:
            raise InputError("refinement files hold {\"fine\": complex, \"carrier\": [[fine, coarse], ...]}")
        try:
            fine = BallComplex.from_json(raw["fine"])
            carrier = {_tup(a): _tup(b) for a, b in raw["carrier"]}
            R = make_refinement(fine, K, carrier)
        except (ComplexError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.fine}: {exc}") from None
    F = _load_ad_file(T, args.ad, report, "ad", K=R.fine)
    report.check("input is an ad", F.is_ad())
    G = T.glue(R, F)
    defects = G.defects()
    report.check("glued pre-ad is an ad", not defects, "; ".join(defects[:3]))
    if args.write_ad:
        with open(args.write_ad, "w") as fh:
            json.dump(G.to_json(), fh, sort_keys=True, indent=1)
    report.results["glued_cells"] = len(G.values)
    return "glued ad passes" if not defects else "glued pre-ad fails"


def cmd_signature(args, report: RunReport) -> str:
    from .symmetric_ads import cup_signature_oracle, is_poincare, sig_of, signature

    X = resolve_complex(args.simplicial, report, "simplicial")
    o = resolve_orientation(args.orientation, X, report)
    try:
        S = sig_of(X, o, args.truncation)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    poincare = is_poincare(S)
    report.check("Poincare duality", poincare)
    if not poincare:
        return "duality fails"
    if X.dim % 4:
        raise InputError("signature needs dimension divisible by 4")
    s = signature(S, check=False)
    oracle = cup_signature_oracle(X, o)
    report.results["signature"] = s
    report.results["cup_oracle"] = oracle
    report.check("signature = cup-product oracle", s == oracle, f"{s} vs {oracle}")
    return f"{s:+d} (cup oracle {oracle:+d})"


def cmd_kan_fill(args, report: RunReport) -> str:
    from .quinn_spectra import QuinnSpaceP, sample_simplices

    T = resolve_theory(args.theory, report, args.truncation)
    rng = random.Random(args.seed)
    if os.path.exists(args.horn):
        report.inputs["horn"] = _digest(args.horn)
        raw = _read_json(args.horn)
        if not isinstance(raw, dict) or set(raw) - {"format", "n", "i", "degree", "faces"}:
            raise InputError("horn files hold n, i, degree and faces {j: ad}")
        try:
            n, i, k = int(raw["n"]), int(raw["i"]), int(raw["degree"])
            P = QuinnSpaceP(T, k, args.truncation)
            faces = {int(j): load_ad(T, v, simplex(n - 1)) for j, v in raw["faces"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.horn}: {exc}") from None
    else:
        try:
            n, i = (int(x) for x in args.horn.replace("horn", "").strip("()").split(","))
        except ValueError:
            raise InputError(f"horn must be a file or 'n,i', got {args.horn!r}") from None
        report.inputs["horn"] = f"sampled:{n},{i}"
        k = args.k if args.k is not None else 0
        P = QuinnSpaceP(T, k, args.truncation)
        from .symmetric_ads import SymmetricTheory, tautological_ad

        if isinstance(T, SymmetricTheory):
            F = tautological_ad(T, simplex(n)) if k == 0 else T.trivial(simplex(n), (), k)
        else:
            F = sample_simplices(T, k, n, rng, 3)[-1]
        faces = {j: P.face(j, F) for j in range(n + 1) if j != i}
    if not 0 <= i <= n or n < 1:
        raise InputError(f"no horn ({n}, {i})")
    try:
        G = P.kan_fill(n, i, faces)
    except (AdError, ValueError) as exc:
        report.check("filler exists", False, str(exc))
        return f"no filler: {exc}"
    report.check("filler is an ad", P.contains(G, n))
    report.check("filler restricts to the horn", all(P.face(j, G).equals(f) for j, f in faces.items()))
    if args.write_ad:
        with open(args.write_ad, "w") as fh:
            json.dump(G.to_json(), fh, sort_keys=True, indent=1)
    return f"filled horn({n},{i})"


def cmd_pi(args, report: RunReport) -> str:
    from .quinn_spectra import homotopy_group

    T = resolve_theory(args.theory, report, args.truncation)
    if not isinstance(T, AdCTheory):
        raise InputError("pi is computed for ad_C theories")
    G = homotopy_group(T, args.k, args.n)
    B = bordism_group(T, args.n - args.k)
    report.results["pi"] = _group_json(G)
    report.check(f"pi_{args.n}(P_{args.k}) = Omega_{args.n - args.k}", G == B, f"{fmt_group(G)} vs {fmt_group(B)}")
    return f"pi{args.n}(P{args.k})={fmt_group(G)}"


def cmd_axioms(args, report: RunReport) -> str:
    T = resolve_theory(args.theory, report, args.truncation)
    from .symmetric_ads import SymmetricTheory

    degrees = (0, -1) if isinstance(T, SymmetricTheory) else (0, 1)
    rep = check_axioms(T, rng=random.Random(args.seed), degrees=degrees)
    for a, r in rep.results.items():
        report.check(f"axiom ({a})", r.passed, "; ".join(map(str, r.failures[:3])))
    report.results["axioms"] = {a: {"passed": r.passed, "checks": r.checks} for a, r in rep.results.items()}
    return "\n".join(rep.lines())


def cmd_ring_check(args, report: RunReport) -> str:
    from .quinn_spectra import (
        all_permutations,
        box_product,
        cup_oracle_agrees,
        lemma_unit_left,
        lemma_unit_right,
        sample_R,
        unit_ad,
    )

    T = resolve_theory(args.theory, report, args.truncation)
    if isinstance(T, AdCTheory) and T.mult is None:
        raise InputError("theory is not multiplicative; use adZ or sym")
    rng = random.Random(args.seed)
    samples = []
    for ns in [(1,), (2,), (1, 1)]:
        samples += [(ns, a.ad) for a in sample_R(T, ns, rng, 2)]
    ok_l = all(lemma_unit_left(F, m) for _, F in samples for m in range(3))
    ok_r = all(lemma_unit_right(F, ns, m) for ns, F in samples for m in range(3))
    report.check("left unit identity", ok_l)
    report.check("right unit identity", ok_r)
    E = unit_ad(T)
    units = all(box_product(E, F).equals(F) and box_product(F, E).equals(F) for _, F in samples)
    report.check("unit diagrams", units)
    assoc = True
    for (_, F), (_, G), (_, H) in zip(samples, samples[1:], samples[2:]):
        A, B = box_product(box_product(F, G), H), box_product(F, box_product(G, H))
        assoc &= A.K == B.K and A.L == B.L and A.equals(B)
    report.check("associativity", assoc)
    if isinstance(T, AdCTheory) and T.C.ranks == {0: 1}:
        from .complex_core import boundary_simplex

        K, D = boundary_simplex(3), simplex(1)
        cup = all(cup_oracle_agrees(F, G)
                  for k in (0, 2) for F in T.sample_ads(K, (), k, rng, 2)
                  for L in ((), ((0,), (1,))) for l in (0, 1) for G in T.sample_ads(D, L, l, rng, 2))
        report.check("box product = cup product", cup)
    report.results["samples"] = len(samples)
    return "ring identities hold" if report.passed else "ring identities fail"


# ------------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adtheory", description="Ad theories: checks and invariants.")
    p.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    p.add_argument("--jobs", type=int, default=1, help="upper bound on worker processes")
    p.add_argument("--truncation", type=int, default=3, help="truncation dimension N (default 3)")
    p.add_argument("--out", help="write a JSON report here")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("homology", help="cellular homology of a complex")
    s.add_argument("complex")
    s.add_argument("--relative", help="subcomplex to quotient by")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("bordism", help="bordism groups of ad_C against homology")
    s.add_argument("chaincomplex")
    s.add_argument("-k", type=int)
    s.set_defaults(func=cmd_bordism)

    s = sub.add_parser("cohomology", help="T^k(K, L) against cellular cohomology")
    s.add_argument("complex")
    s.add_argument("subcomplex")
    s.add_argument("chaincomplex")
    s.add_argument("-k", type=int)
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("ad-check", help="check the ad condition")
    s.add_argument("theory")
    s.add_argument("ad")
    s.set_defaults(func=cmd_ad_check)

    s = sub.add_parser("glue", help="glue an ad over a refinement")
    s.add_argument("theory")
    s.add_argument("K")
    s.add_argument("fine", help="'sd' or a refinement file")
    s.add_argument("ad")
    s.add_argument("--write-ad")
    s.set_defaults(func=cmd_glue)

    s = sub.add_parser("signature", help="signature of an oriented 4m-dimensional complex")
    s.add_argument("simplicial")
    s.add_argument("orientation", help="'std', 'reversed' or an orientation file")
    s.set_defaults(func=cmd_signature)

    s = sub.add_parser("kan-fill", help="fill a horn in P_k")
    s.add_argument("theory")
    s.add_argument("horn", help="a horn file or 'n,i'")
    s.add_argument("-k", type=int)
    s.add_argument("--write-ad")
    s.set_defaults(func=cmd_kan_fill)

    s = sub.add_parser("pi", help="homotopy groups of P_k against bordism")
    s.add_argument("theory")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("-n", type=int, required=True)
    s.set_defaults(func=cmd_pi)

    s = sub.add_parser("axioms", help="run the axiom harness")
    s.add_argument("theory")
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("ring-check", help="ring-spectrum identities of a multiplicative theory")
    s.add_argument("theory")
    s.set_defaults(func=cmd_ring_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1 or args.truncation < 0:
        parser.error("--jobs must be positive and --truncation non-negative")
    report = RunReport(args.command, args.seed)
    t0 = time.perf_counter()
    try:
        summary = args.func(args, report)
    except (InputError, ComplexError, ChainComplexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.timings:
        report.timings = {"seconds": round(time.perf_counter() - t0, 3)}
    print(summary)
    for c in report.checks:
        if not c["passed"]:
            print(f"FAIL {c['name']}: {c['detail']}", file=sys.stderr)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
