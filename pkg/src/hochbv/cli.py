"""Batch command-line front end: tables, verification suites, JSON/LaTeX.

Subcommands
    hh       module table of HH^* per resolution level
    bv       presented BV-algebra: generators, relations, Delta table
    bracket  Gerstenhaber bracket tables on monomial pairs
    cyclic   negative cyclic dimension table and Lie-bracket verdict
    verify   chain-map, BV-identity, crosscheck (and oracle) suites
    iso      bounded search for BV isomorphisms between presentations

Exit status: 0 on success or an all-pass verify, 1 when a verification
suite reports violations, 2 on a configuration error.  Output is
deterministic: identical configurations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .algebra import TruncatedPolyAlgebra
from .arith import GF, QQ, ZZ, ModuleDescriptor, RingSpec, homology_of_pair
from .barcomplex import coboundary_matrices, internal_degree_range
from .bvalgebra import (
    PresentedBVAlgebra,
    crosscheck_against_barcomplex,
    delta_closed_form,
    from_payload,
    gerstenhaber_bracket,
    main_theorem_algebra,
    menichi_loop_s2,
    to_payload,
    verify_bv_identities,
)
from .cyclic import NegativeCyclicComplex
from .errors import ConfigError
from .isocheck import SearchSpace, bv_isomorphism_exists
from .resolution import (
    PeriodicComplex,
    hh_modules,
    periodic_component_descriptor,
    verify_chain_map,
)

SCHEMA_VERSION = 1


def thread_count() -> int:
    raw = os.environ.get("HOCHBV_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        k = int(raw)
    except ValueError:
        raise ConfigError(f"HOCHBV_THREADS must be an integer, got {raw!r}")
    if k < 1:
        raise ConfigError(f"HOCHBV_THREADS must be >= 1, got {k}")
    return k


def parse_ring(text: str) -> RingSpec:
    if text == "Z":
        return ZZ
    if text == "Q":
        return QQ
    if text.startswith("F") and text[1:].isdigit():
        try:
            return GF(int(text[1:]))
        except ValueError as e:
            raise ConfigError(str(e))
    raise ConfigError(f"unknown ring {text!r} (use Z, Q, or F<p>)")


def parse_algebra(text: str) -> PresentedBVAlgebra:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return from_payload(json.load(fh))
    parts = text.split(":")
    if parts[0] == "hh" and len(parts) == 4:
        return main_theorem_algebra(parse_ring(parts[1]), int(parts[2]), int(parts[3]))
    if parts[0] == "menichi-ls2":
        ring = parse_ring(parts[1]) if len(parts) == 2 else ZZ
        return menichi_loop_s2(ring)
    raise ConfigError(
        f"unknown algebra spec {text!r} (use hh:RING:n:m, menichi-ls2[:RING], or @file.json)"
    )


@dataclass
class JobConfig:
    command: str
    ring: RingSpec | None
    n: int
    m: int
    fmt: str
    output: str | None
    options: dict

    def __post_init__(self):
        if self.fmt not in ("table", "json", "latex"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.command in ("hh", "bv", "bracket", "cyclic", "verify"):
            if self.n < 1 or self.m < 1:
                raise ConfigError("need n >= 1 and m >= 1")
        if self.command == "cyclic" and self.ring is not None and not self.ring.is_field():
            raise ConfigError("cyclic requires field coefficients (not Z)")
        for key in ("levels", "kmax", "wordlen", "window", "degree", "coeff_bound"):
            if key in self.options and self.options[key] is not None and self.options[key] < 1:
                raise ConfigError(f"{key} must be positive")


# ---------------------------------------------------------------------------
# serialization helpers


def descriptor_json(d: ModuleDescriptor) -> dict:
    return {"free_rank": d.free_rank, "torsion": [str(t) for t in d.torsion]}


def monomial_json(P: PresentedBVAlgebra, mono) -> dict:
    return {g.name: e for g, e in zip(P.generators, mono)}


def element_json(elt) -> list:
    P = elt.parent
    return [
        {"monomial": monomial_json(P, mono), "coeff": str(elt.terms[mono])}
        for mono in sorted(elt.terms)
    ]


def emit_json(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def latex_table(header: list, rows: list) -> str:
    cols = "|" + "c|" * len(header)
    lines = [
        "\\begin{tabular}{" + cols + "}",
        "\\hline",
        " & ".join(header) + " \\\\",
        "\\hline",
    ]
    for row in rows:
        lines.append(" & ".join(str(v) for v in row) + " \\\\")
    lines += ["\\hline", "\\end{tabular}"]
    return "\n".join(lines) + "\n"


def text_table(header: list, rows: list) -> str:
    table = [header] + [[str(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    out = []
    for i, row in enumerate(table):
        out.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def render(fmt: str, header, rows, document) -> str:
    if fmt == "json":
        return emit_json(document)
    if fmt == "latex":
        return latex_table(header, rows)
    return text_table(header, rows)


# ---------------------------------------------------------------------------
# commands


def run_hh(cfg: JobConfig) -> tuple[int, str]:
    levels = cfg.options.get("levels") or 6
    P = PeriodicComplex(TruncatedPolyAlgebra(cfg.ring, cfg.n, cfg.m))
    mods = hh_modules(P, levels)
    rows = [[k, str(d)] for k, d in enumerate(mods)]
    document = {
        "schema_version": SCHEMA_VERSION,
        "job": "hh",
        "ring": str(cfg.ring),
        "parameters": {"n": cfg.n, "m": cfg.m, "levels": levels},
        "results": [
            {"level": k, **descriptor_json(d)} for k, d in enumerate(mods)
        ],
    }
    return 0, render(cfg.fmt, ["level", "module"], rows, document)


def _delta_table(P: PresentedBVAlgebra, kmax: int):
    odd = next((g.name for g in P.generators if g.name in ("u", "v", "b")), None)
    entries = []
    for mono in sorted(P.monomials_within(kmax)):
        elt = P.element(
            [({g.name: e for g, e in zip(P.generators, mono)}, 1)]
        )
        if elt.is_zero():
            continue
        entries.append((mono, delta_closed_form(elt)))
    return entries


def run_bv(cfg: JobConfig) -> tuple[int, str]:
    kmax = cfg.options.get("kmax") or 3
    P = main_theorem_algebra(cfg.ring, cfg.n, cfg.m)
    table = _delta_table(P, kmax)
    zero = P.zero()
    rows = [
        [zero.monomial_str(mono), str(img)] for mono, img in table
    ]
    document = {
        "schema_version": SCHEMA_VERSION,
        "job": "bv",
        "ring": str(cfg.ring),
        "parameters": {"n": cfg.n, "m": cfg.m, "kmax": kmax},
        "results": {
            "presentation": to_payload(P),
            "generators": [
                {"name": g.name, "degree": g.degree} for g in P.generators
            ],
            "delta_table": [
                {"monomial": monomial_json(P, mono), "delta": element_json(img)}
                for mono, img in table
            ],
        },
    }
    if cfg.fmt == "latex":
        gens = ", ".join(f"{g.name}\\ (\\deg {g.degree})" for g in P.generators)
        head = "\\begin{center}\n" + f"Generators: ${gens}$\n" + "\\end{center}\n"
        return 0, head + latex_table(
            ["monomial", "\\Delta"],
            [[zero.monomial_str(mn), str(img)] for mn, img in table],
        )
    return 0, render(cfg.fmt, ["monomial", "Delta"], rows, document)


def run_bracket(cfg: JobConfig) -> tuple[int, str]:
    kmax = cfg.options.get("kmax") or 2
    P = main_theorem_algebra(cfg.ring, cfg.n, cfg.m)
    monos = sorted(P.monomials_within(kmax))
    zero = P.zero()
    rows = []
    results = []
    for m1 in monos:
        a = P.element([({g.name: e for g, e in zip(P.generators, m1)}, 1)])
        if a.is_zero():
            continue
        for m2 in monos:
            b = P.element([({g.name: e for g, e in zip(P.generators, m2)}, 1)])
            if b.is_zero():
                continue
            br = gerstenhaber_bracket(a, b)
            if not br.is_zero():
                rows.append(
                    [zero.monomial_str(m1), zero.monomial_str(m2), str(br)]
                )
            results.append(
                {
                    "left": monomial_json(P, m1),
                    "right": monomial_json(P, m2),
                    "bracket": element_json(br),
                }
            )
    document = {
        "schema_version": SCHEMA_VERSION,
        "job": "bracket",
        "ring": str(cfg.ring),
        "parameters": {"n": cfg.n, "m": cfg.m, "kmax": kmax},
        "results": results,
    }
    return 0, render(cfg.fmt, ["left", "right", "bracket"], rows, document)


def run_cyclic(cfg: JobConfig) -> tuple[int, str]:
    lo, hi = cfg.options.get("degree_range") or (-7, 6)
    window = cfg.options.get("window") or (max(abs(lo), abs(hi)) + 6)
    NC = NegativeCyclicComplex(TruncatedPolyAlgebra(cfg.ring, cfg.n, cfg.m))
    rows = []
    table = []
    basis = []
    for m in range(lo, hi + 1):
        d = NC.hc_minus(m, window)
        rows.append([m, d.free_rank])
        table.append({"degree": m, "dimension": d.free_rank})
        basis.extend(NC.basis(m, window))
    nonzero = []
    for e1 in basis:
        for e2 in basis:
            if not NC.class_is_zero(NC.lie_bracket(e1, e2)):
                nonzero.append(
                    {"left_degree": e1.total_degree, "right_degree": e2.total_degree}
                )
    verdict = "zero on all basis pairs" if not nonzero else (
        f"NONZERO on {len(nonzero)} pairs"
    )
    rows.append(["bracket", verdict])
    document = {
        "schema_version": SCHEMA_VERSION,
        "job": "cyclic",
        "ring": str(cfg.ring),
        "parameters": {
            "n": cfg.n,
            "m": cfg.m,
            "degrees": [lo, hi],
            "window": window,
        },
        "results": {
            "table": table,
            "bracket_pairs_checked": len(basis) ** 2,
            "bracket_nonzero_pairs": nonzero,
        },
    }
    return 0, render(cfg.fmt, ["degree", "dimension"], rows, document)


def _suite_chainmap(cfg):
    P = PeriodicComplex(TruncatedPolyAlgebra(cfg.ring, cfg.n, cfg.m))
    qmax = cfg.options.get("wordlen") or 3
    return [
        {"suite": "chain-map", "witness": str(v)} for v in verify_chain_map(P, qmax)
    ]


def _suite_bv(cfg):
    P = main_theorem_algebra(cfg.ring, cfg.n, cfg.m)
    kmax = cfg.options.get("kmax") or 2
    return [
        {"suite": "bv-identities", "witness": str(v)}
        for v in verify_bv_identities(P, kmax)
    ]


def _suite_crosscheck(cfg):
    records = crosscheck_against_barcomplex(cfg.ring, cfg.n, cfg.m, kmax=2)
    return [
        {
            "suite": "crosscheck",
            "witness": f"monomial {r.monomial}: bar complex gives {r.computed}, closed form {r.expected}",
        }
        for r in records
        if not r.ok
    ]


def _suite_oracle(cfg):
    A = TruncatedPolyAlgebra(cfg.ring, cfg.n, cfg.m)
    P = PeriodicComplex(A)
    qmax = cfg.options.get("wordlen") or 3
    out = []
    for q in range(qmax + 1):
        for D in internal_degree_range(A, q):
            bar = homology_of_pair(*coboundary_matrices(A, q, D)).descriptor
            per = periodic_component_descriptor(P, q, D)
            if bar != per:
                out.append(
                    {
                        "suite": "oracle",
                        "witness": f"component (q={q}, D={D}): bar {bar}, resolution {per}",
                    }
                )
    return out


SUITES = {
    "chainmap": _suite_chainmap,
    "bv": _suite_bv,
    "crosscheck": _suite_crosscheck,
    "oracle": _suite_oracle,
}


def run_verify(cfg: JobConfig) -> tuple[int, str]:
    names = cfg.options.get("suites") or ["chainmap", "bv", "crosscheck"]
    for name in names:
        if name not in SUITES:
            raise ConfigError(f"unknown suite {name!r} (have {sorted(SUITES)})")
    workers = min(thread_count(), len(names))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda nm: (nm, SUITES[nm](cfg)), names))
    violations = [v for _, vs in results for v in vs]
    rows = [
        [name, "PASS" if not vs else f"FAIL ({len(vs)} violations)"]
        for name, vs in results
    ]
    document = {
        "schema_version": SCHEMA_VERSION,
        "job": "verify",
        "ring": str(cfg.ring),
        "parameters": {"n": cfg.n, "m": cfg.m, "suites": names},
        "results": {
            "suites": {name: ("pass" if not vs else "fail") for name, vs in results},
            "violations": violations,
        },
    }
    status = 1 if violations else 0
    return status, render(cfg.fmt, ["suite", "status"], rows, document)


def run_iso(cfg: JobConfig) -> tuple[int, str]:
    left = parse_algebra(cfg.options["left"])
    right = parse_algebra(cfg.options["right"])
    space = SearchSpace(
        cfg.options.get("degree") or 8, cfg.options.get("coeff_bound") or 1
    )
    verdict = bv_isomorphism_exists(left, right, space)
    rows = [["verdict", "YES" if verdict.exists else "NO"]]
    candidates = []
    if verdict.exists:
        rows.append(["witness", verdict.witness.describe()])
        candidates.append({"map": verdict.witness.describe(), "refuted_by": None})
    else:
        for phi, wit in verdict.refutations:
            rows.append(["refuted", f"{phi.describe()}  (witness {wit})"])
            candidates.append(
                {
                    "map": phi.describe(),
                    "refuted_by": monomial_json(phi.source, wit),
                }
            )
    document = {
        "schema_version": SCHEMA_VERSION,
        "job": "iso",
        "ring": str(left.ring),
        "parameters": {
            "left": cfg.options["left"],
            "right": cfg.options["right"],
            "degree_bound": space.degree_bound,
            "coeff_bound": space.coeff_bound,
        },
        "results": {"exists": verdict.exists, "candidates": candidates},
    }
    return 0, render(cfg.fmt, ["key", "value"], rows, document)


COMMANDS = {
    "hh": run_hh,
    "bv": run_bv,
    "bracket": run_bracket,
    "cyclic": run_cyclic,
    "verify": run_verify,
    "iso": run_iso,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hochbv",
        description="Exact BV-algebra structure on HH^* of truncated polynomial rings",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, ring=True):
        if ring:
            p.add_argument("--ring", default="Z", help="Z, Q, or F<p>")
            p.add_argument("--n", type=int, required=True, help="truncation exponent")
            p.add_argument("--m", type=int, default=1, help="half-degree of x")
        p.add_argument(
            "--format", default="table", choices=["table", "json", "latex"]
        )
        p.add_argument("--output", default=None, help="write to file instead of stdout")

    p = sub.add_parser("hh", help="module table of HH^* per level")
    common(p)
    p.add_argument("--levels", type=int, default=6)

    p = sub.add_parser("bv", help="presentation and Delta table")
    common(p)
    p.add_argument("--kmax", type=int, default=3, help="max exponent of t")

    p = sub.add_parser("bracket", help="Gerstenhaber bracket tables")
    common(p)
    p.add_argument("--kmax", type=int, default=2)

    p = sub.add_parser("cyclic", help="negative cyclic cohomology table")
    common(p)
    p.add_argument(
        "--degrees", default="-7:6", help="degree range lo:hi (use --degrees=-7:6)"
    )
    p.add_argument("--window", type=int, default=None)

    p = sub.add_parser("verify", help="verification suites")
    common(p)
    p.add_argument(
        "--suites",
        default="chainmap,bv,crosscheck",
        help=f"comma-separated from {sorted(SUITES)}",
    )
    p.add_argument("--wordlen", type=int, default=3)
    p.add_argument("--kmax", type=int, default=2)

    p = sub.add_parser("iso", help="bounded BV-isomorphism search")
    common(p, ring=False)
    p.add_argument("--left", required=True, help="hh:RING:n:m | menichi-ls2[:RING] | @file")
    p.add_argument("--right", required=True)
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--coeff-bound", type=int, default=1)

    return ap


def config_from_args(args) -> JobConfig:
    options = {}
    ring = None
    n = m = 1
    if args.command != "iso":
        ring = parse_ring(args.ring)
        n, m = args.n, args.m
    if args.command == "hh":
        options["levels"] = args.levels
    elif args.command in ("bv", "bracket"):
        options["kmax"] = args.kmax
    elif args.command == "cyclic":
        try:
            lo, hi = (int(v) for v in args.degrees.split(":"))
        except ValueError:
            raise ConfigError(f"bad degree range {args.degrees!r} (use lo:hi)")
        if lo > hi:
            raise ConfigError("degree range is empty")
        options["degree_range"] = (lo, hi)
        options["window"] = args.window
    elif args.command == "verify":
        options["suites"] = [s for s in args.suites.split(",") if s]
        options["wordlen"] = args.wordlen
        options["kmax"] = args.kmax
    elif args.command == "iso":
        options["left"] = args.left
        options["right"] = args.right
        options["degree"] = args.degree
        options["coeff_bound"] = args.coeff_bound
    return JobConfig(
        args.command, ring, n, m, args.format, args.output, options
    )


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
        thread_count()  # validate the environment variable up front
        status, text = COMMANDS[cfg.command](cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
