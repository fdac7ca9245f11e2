"""Command-line front end: parse group / twist / parameter specs, dispatch
the computations, and emit deterministic machine-readable reports.

Exit codes: 0 ok, 2 bad spec, 3 order cap exceeded, 4 verification failure.
All scalars in reports are exact strings; JSON output is byte-stable across
runs and thread settings.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import catalog as cat
from . import leaves as leaves_mod
from . import linalg as la
from . import verify as verify_mod
from .cherednik import (
    CherednikAlgebra, CherednikError, PoissonCompatibilityError, euler_degree,
    filtration_degree, format_element, parse_element, poisson_bracket,
    rank1_center_relation,
)
from .exactnum import CycNum, ExactDomainError, as_cyc, cyc_parse, cyc_to_str, root_of_unity
from .refgroup import (
    CapExceededError, GroupError, ParameterK, ReflectionGroup,
    catalog as group_catalog, close_group, dihedral_tau,
)
from .tau import TauContext, TauError, build_tau, is_regular, make_full, tau_from_word

DEFAULT_CAP = 10 ** 6

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_CAP = 3
EXIT_VERIFY = 4


class SpecError(Exception):
    pass


# ---------------------------------------------------------------------------
# spec parsing

def _load_json_maybe_file(text: str):
    if text.startswith("@"):
        path = text[1:]
        if not os.path.exists(path):
            raise SpecError(f"file not found: {path}")
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecError(f"bad JSON spec: {exc}") from exc


def _scalar_from_str(s: str) -> CycNum:
    s = s.strip()
    if s.startswith("Q("):
        try:
            return cyc_parse(s)
        except ExactDomainError as exc:
            raise SpecError(str(exc)) from exc
    try:
        return as_cyc(Fraction(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"bad scalar {s!r}") from exc


def resolve_group(spec: str, cap: int) -> ReflectionGroup:
    if spec is None:
        raise SpecError("missing --group")
    if spec.startswith("@") or spec.lstrip().startswith("{"):
        data = _load_json_maybe_file(spec)
        if not isinstance(data, dict):
            raise SpecError("group spec must be an object")
        if "name" in data:
            return group_catalog(str(data["name"]), cap)
        if "generators" in data:
            gens = []
            try:
                for mat in data["generators"]:
                    gens.append(la.mat([[_scalar_from_str(str(x)) for x in row]
                                        for row in mat]))
            except (TypeError, KeyError) as exc:
                raise SpecError(f"bad generator matrix: {exc}") from exc
            return close_group(gens, cap, name="custom")
        raise SpecError("group spec needs 'name' or 'generators'")
    return group_catalog(spec, cap)


def _zeta_from_str(s: str) -> CycNum:
    m = re.fullmatch(r"(\d+)/(\d+)", s.strip())
    if m:
        return root_of_unity(int(m.group(1)), int(m.group(2)))
    if s.strip() == "1":
        return as_cyc(1)
    raise SpecError(f"bad root-of-unity spec {s!r} (want 'N/e')")


def resolve_tau(W: ReflectionGroup, spec: str):
    """Returns (matrix, human label)."""
    if spec is None or spec == "identity":
        return la.identity(W.dim), "identity"
    if spec == "neg":
        return la.mat([[-1 if i == j else 0 for j in range(W.dim)]
                       for i in range(W.dim)]), "neg"
    if spec == "diag-flip":
        return la.mat([[(-1 if i == 0 else 1) if i == j else 0 for j in range(W.dim)]
                       for i in range(W.dim)]), "diag-flip"
    if spec == "swap":
        m = re.fullmatch(r"dihedral(\d+)", W.name or "")
        if not m:
            raise SpecError("the swap twist is defined for dihedral groups")
        return dihedral_tau(int(m.group(1))), "swap"
    if spec.startswith("@") or spec.lstrip().startswith("{"):
        data = _load_json_maybe_file(spec)
        if "matrix" in data:
            try:
                mat = la.mat([[_scalar_from_str(str(x)) for x in row]
                              for row in data["matrix"]])
            except TypeError as exc:
                raise SpecError(f"bad twist matrix: {exc}") from exc
            return mat, "matrix"
        if "word" in data or "zeta" in data:
            zeta = _zeta_from_str(str(data["zeta"])) if "zeta" in data else None
            word = [int(i) for i in data.get("word", [])]
            try:
                return tau_from_word(W, word, zeta), f"word{word}" + \
                    (f"*zeta({data.get('zeta')})" if "zeta" in data else "")
            except TauError as exc:
                raise SpecError(str(exc)) from exc
        raise SpecError("twist spec needs 'matrix' or 'word'/'zeta'")
    raise SpecError(f"unknown twist spec {spec!r}")


def resolve_parameter(W: ReflectionGroup, spec: str) -> ParameterK:
    if spec is None or spec == "zero":
        return ParameterK.zero(W)
    if spec.startswith("@") or spec.lstrip().startswith("{"):
        data = _load_json_maybe_file(spec)
        lists = data.get("orbits")
        if not isinstance(lists, list):
            raise SpecError("parameter spec needs an 'orbits' list")
        per_orbit = [[_scalar_from_str(str(v)) for v in lst] for lst in lists]
    else:
        per_orbit = [[_scalar_from_str(v) for v in chunk.split(",")]
                     for chunk in spec.split(";")]
    try:
        return ParameterK.from_lists(W, per_orbit)
    except GroupError as exc:
        raise SpecError(str(exc)) from exc


# ---------------------------------------------------------------------------
# serialization

def _scalar_str(x) -> str:
    if isinstance(x, CycNum):
        if x.is_rational():
            q = x.as_fraction()
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return cyc_to_str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else str(x)
    return str(x)


def emit(report: dict, fmt: str, rows_key: str | None = None) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    if fmt == "csv":
        if rows_key is None or rows_key not in report:
            raise SpecError("csv format is only available for table reports")
        rows = report[rows_key]
        if not rows:
            return ""
        cols = list(rows[0].keys())
        lines = [",".join(cols)]
        for row in rows:
            lines.append(",".join(str(row[c]) for c in cols))
        return "\n".join(lines) + "\n"
    if fmt == "text":
        return _text_render(report)
    raise SpecError(f"unknown format {fmt!r}")


def _text_render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_text_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        lines = []
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_text_render(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
        return "\n".join(lines)
    return f"{pad}{obj}"


# ---------------------------------------------------------------------------
# commands

def _tau_context(args, W, cap) -> tuple[TauContext, dict]:
    mat, label = resolve_tau(W, args.tau)
    adjusted = False
    try:
        ctx = build_tau(W, mat)
        if not ctx.is_full:
            if args.no_make_full:
                raise SpecError("twist is not full (rerun without --no-make-full)")
            mat = make_full(W, mat)
            ctx = build_tau(W, mat)
            adjusted = True
    except TauError as exc:
        raise SpecError(str(exc)) from exc
    info = {"tau": label, "tau_order": ctx.order, "tau_full_adjusted": adjusted,
            "tau_fixed_dim": len(ctx.v_tau)}
    return ctx, info


def cmd_reflections(args, cap):
    W = resolve_group(args.group, cap)
    rows = []
    for H in W.hyperplanes:
        rows.append({
            "alpha": [_scalar_str(x) for x in H.alpha],
            "e": H.e,
            "orbit": H.orbit_id,
        })
    report = {
        "schema": 1, "command": "reflections", "group": W.name or "custom",
        "rule": "reflection-scan",
        "order": W.order, "reflection_count": len(W.reflections),
        "hyperplane_count": len(W.hyperplanes),
        "hyperplane_orbit_count": W.hyperplane_orbit_count,
        "hyperplanes": rows,
    }
    return report, "hyperplanes"


def cmd_parabolics(args, cap):
    W = resolve_group(args.group, cap)
    rows = []
    for c in W.parabolic_classes():
        N = W.normalizer(c.representative)
        rows.append({
            "class": c.class_id,
            "fixed_dim": c.fixed_dim,
            "order": c.representative.order,
            "members": len(c.members),
            "normalizer_quotient_order": N.order,
        })
    report = {
        "schema": 1, "command": "parabolics", "group": W.name or "custom",
        "rule": "parabolic-classes",
        "class_count": len(rows), "classes": rows,
    }
    return report, "classes"


def cmd_lehrer_springer(args, cap):
    W = resolve_group(args.group, cap)
    ctx, info = _tau_context(args, W, cap)
    from .tau import hyperplane_restriction_matches
    report = {
        "schema": 1, "command": "lehrer-springer", "group": W.name or "custom",
        "rule": "induced-reflection-group",
        **info,
        "regular": is_regular(ctx),
        "induced_order": ctx.w_tau.order,
        "induced_reflections": len(ctx.w_tau.reflections),
        "induced_hyperplanes": len(ctx.w_tau.hyperplanes),
        "reflection_generated": ctx.w_tau.generated_by_reflections(),
        "hyperplanes_match_restrictions": hyperplane_restriction_matches(ctx),
    }
    return report, None


def cmd_tau_split(args, cap):
    W = resolve_group(args.group, cap)
    ctx, info = _tau_context(args, W, cap)
    orbits = []
    for oi, orbit in enumerate(ctx.split_orbits()):
        sp = orbit[0]
        orbits.append({
            "orbit": oi,
            "orbit_size": len(orbit),
            "p_order": sp.parabolic.order,
            "p_class": W.class_of(sp.parabolic).class_id,
            "p_tau_order": sp.p_tau.order,
            "tau_rank": sp.tau_rank,
        })
    report = {
        "schema": 1, "command": "tau-split", "group": W.name or "custom",
        "rule": "split-parabolic-table",
        **info,
        "split_count": len(ctx.split_parabolics()),
        "induced_parabolic_count": len(ctx.w_tau.parabolic_subgroups()),
        "orbits": orbits,
    }
    return report, "orbits"


def cmd_leaves_zero(args, cap):
    W = resolve_group(args.group, cap)
    ctx, info = _tau_context(args, W, cap)
    report = leaves_mod.leaf_report(ctx, W.name or "custom", info["tau"])
    report["command"] = "leaves-zero"
    report.update(info)
    return report, "leaves"


def cmd_catalog_b(args, cap):
    if args.n is None:
        raise SpecError("catalog-B needs --n")
    report = {
        "schema": 1, "command": "catalog-B", "rule": "type-B-leaf-table",
        "smoothness_rule": "eq:B-lisse", "n": args.n,
    }
    if args.ratio is not None:
        ratio = _scalar_from_str(args.ratio)
        report["ratio"] = _scalar_str(ratio)
        try:
            report["smooth"] = cat.smooth_B(args.n, ratio)
        except cat.CatalogError as exc:
            raise SpecError(str(exc)) from exc
    m = args.m if args.m is not None else 0
    report["m"] = m
    try:
        rows = [rec.as_row() for rec in cat.leaves_B(args.n, m)]
    except cat.CatalogError as exc:
        raise SpecError(str(exc)) from exc
    report["rows"] = rows
    return report, "rows"


def cmd_catalog_d(args, cap):
    if args.n is None:
        raise SpecError("catalog-D needs --n")
    try:
        rows = [rec.as_row() for rec in cat.leaves_D(args.n)]
        twist = cat.leaves_D_tau_t(args.n)
    except cat.CatalogError as exc:
        raise SpecError(str(exc)) from exc
    report = {
        "schema": 1, "command": "catalog-D", "rule": "type-D-leaf-table",
        "n": args.n, "rows": rows, "twist_report": twist,
    }
    return report, "rows"


def cmd_catalog_dihedral(args, cap):
    if args.d is None:
        raise SpecError("catalog-dihedral needs --d")
    try:
        record = cat.dihedral_equal_parameter_record(args.d)
    except cat.CatalogError as exc:
        raise SpecError(str(exc)) from exc
    W = group_catalog(f"dihedral{args.d}", cap)
    ctx = build_tau(W, dihedral_tau(args.d))
    atlas = leaves_mod.leaf_report(ctx, W.name, "swap")
    report = {
        "schema": 1, "command": "catalog-dihedral", "rule": record["rule"],
        "d": args.d, "statement": record, "undeformed_twisted_atlas": atlas,
    }
    return report, None


def cmd_cherednik_check(args, cap):
    W = resolve_group(args.group or "cyclic2", cap)
    k = resolve_parameter(W, args.k)
    try:
        rec = rank1_center_relation(k)
    except CherednikError as exc:
        raise SpecError(str(exc)) from exc
    report = {
        "schema": 1, "command": "cherednik-check", "group": W.name or "custom",
        "rule": "rank1-quadric",
        "gamma": _scalar_str(rec["gamma"]),
        "difference": _scalar_str(rec["difference"]),
        "b": _scalar_str(rec["b"]) if rec["b"] is not None else None,
        "b_over_difference": _scalar_str(rec["b_over_difference"])
        if rec["b_over_difference"] is not None else None,
    }
    return report, None


def cmd_poisson(args, cap):
    W = resolve_group(args.group, cap)
    k = resolve_parameter(W, args.k)
    if args.z1 is None or args.z2 is None:
        raise SpecError("poisson needs --z1 and --z2")
    alg = CherednikAlgebra(W, k, "t0")
    try:
        z1 = parse_element(alg, args.z1)
        z2 = parse_element(alg, args.z2)
        bracket = poisson_bracket(z1, z2)
    except (PoissonCompatibilityError, CherednikError) as exc:
        raise SpecError(str(exc)) from exc
    deg = euler_degree(bracket)
    report = {
        "schema": 1, "command": "poisson", "group": W.name or "custom",
        "rule": "deformation-limit-bracket",
        "z1": format_element(z1), "z2": format_element(z2),
        "bracket": format_element(bracket),
        "euler_degree": deg if deg is not None else "inhomogeneous",
        "filtration_degree": filtration_degree(bracket),
    }
    return report, None


def cmd_verify(args, cap):
    W = resolve_group(args.group, cap)
    ctx = None
    info = {}
    if args.tau is not None:
        ctx, info = _tau_context(args, W, cap)
    k = resolve_parameter(W, args.k) if args.k is not None else None
    results = verify_mod.run_suite(W, ctx, k, deep=args.deep)
    failed = [r for r in results if r["status"] != "pass"]
    report = {
        "schema": 1, "command": "verify", "group": W.name or "custom",
        "rule": "invariant-suite",
        **info,
        "pass_count": len(results) - len(failed),
        "fail_count": len(failed),
        "invariants": results,
    }
    return report, "invariants"


COMMANDS = {
    "reflections": cmd_reflections,
    "parabolics": cmd_parabolics,
    "lehrer-springer": cmd_lehrer_springer,
    "tau-split": cmd_tau_split,
    "leaves-zero": cmd_leaves_zero,
    "catalog-B": cmd_catalog_b,
    "catalog-D": cmd_catalog_d,
    "catalog-dihedral": cmd_catalog_dihedral,
    "cherednik-check": cmd_cherednik_check,
    "poisson": cmd_poisson,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# option resolution

def _read_config(path: str) -> dict[str, str]:
    if not os.path.exists(path):
        raise SpecError(f"config file not found: {path}")
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SpecError(f"bad config line {lineno}: {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="leafatlas",
        description="exact leaf combinatorics for twisted reflection quotients")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--group", help="catalog name, inline JSON, or @file.json")
    p.add_argument("--tau", help="identity | neg | swap | diag-flip | JSON | @file")
    p.add_argument("--k", help="zero | per-orbit lists '0,1;2,0' | @file.json")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--ratio", help="exact scalar for the smoothness window")
    p.add_argument("--z1", help="element literal for the poisson command")
    p.add_argument("--z2", help="element literal for the poisson command")
    p.add_argument("--format", choices=["json", "csv", "text"], default=None)
    p.add_argument("--output")
    p.add_argument("--threads", type=int, default=None,
                   help="sharding hint; results are independent of it")
    p.add_argument("--config", help="key = value file; flags take precedence")
    p.add_argument("--cap", type=int, default=None, help="group order cap")
    p.add_argument("--verify", action="store_true",
                   help="run the invariant suite after the computation")
    p.add_argument("--deep", action="store_true",
                   help="lift the desk-scale gates in the invariant suite")
    p.add_argument("--no-make-full", action="store_true",
                   help="fail instead of adjusting a non-full twist")
    return p


_CONFIG_KEYS = ("group", "tau", "k", "format", "output", "ratio", "z1", "z2")
_CONFIG_INT_KEYS = ("n", "m", "d", "threads", "cap")


def resolve_args(argv) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if args.config:
        conf = _read_config(args.config)
        for key in _CONFIG_KEYS:
            if getattr(args, key) is None and key in conf:
                setattr(args, key, conf[key])
        for key in _CONFIG_INT_KEYS:
            if getattr(args, key) is None and key in conf:
                try:
                    setattr(args, key, int(conf[key]))
                except ValueError as exc:
                    raise SpecError(f"config key {key} must be an integer") from exc
    if args.format is None:
        args.format = "json"
    if args.threads is not None and args.threads < 1:
        raise SpecError("--threads must be at least 1")
    return args


def run(argv) -> int:
    try:
        args = resolve_args(argv)
        cap = args.cap
        if cap is None:
            env_cap = os.environ.get("LEAFATLAS_CAP")
            cap = int(env_cap) if env_cap else DEFAULT_CAP
        report, rows_key = COMMANDS[args.command](args, cap)
        exit_code = EXIT_OK
        if args.verify and args.command != "verify":
            W = resolve_group(args.group, cap) if args.group else None
            if W is not None:
                ctx = None
                if args.tau is not None:
                    ctx, _ = _tau_context(args, W, cap)
                k = resolve_parameter(W, args.k) if args.k is not None else None
                results = verify_mod.run_suite(W, ctx, k, deep=args.deep)
                report["invariants"] = results
                if any(r["status"] != "pass" for r in results):
                    exit_code = EXIT_VERIFY
        if args.command == "verify" and report.get("fail_count", 0) > 0:
            exit_code = EXIT_VERIFY
        text = emit(report, args.format, rows_key)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return exit_code
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SpecError, GroupError, TauError, cat.CatalogError, CherednikError,
            ExactDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
