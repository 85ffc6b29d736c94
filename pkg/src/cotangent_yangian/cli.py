"""Command-line front end.

Every subcommand prints deterministic JSON (sorted keys, exact fractions as
[num, den] pairs).  Exit codes: 0 ok, 1 verification failure, 2 usage or
input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .core import GSTAR, G, load_lie_algebra
from .errors import AlgebraError, InternalError

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _nonneg(v: str) -> int:
    n = int(v)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", default="sl2", help="Lie algebra JSON file or fixture name (sl2, sl3)")
    common.add_argument("--r", help="r-matrix tail JSON (default gamma)")
    common.add_argument("--r2", help="second r-matrix for twists")
    common.add_argument("--K", type=_nonneg, help="hbar window")
    common.add_argument("--N", type=_nonneg, help="loop-degree bound")
    common.add_argument("--M", type=_positive, help="leg-weight cap for spectral series")
    common.add_argument("--zdepth", type=_positive, help="z-depth for intertwining checks")
    common.add_argument("--xi", default=None, help="value of hbar on modules (fraction)")
    common.add_argument("--out", help="write the JSON here instead of stdout")
    common.add_argument("--cache", help="JSON result cache file")
    common.add_argument("--workers", type=_positive, default=1, help="processes for `verify all`")

    p = argparse.ArgumentParser(prog="cotangent-yangian", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("inspect", parents=[common], help="validate and describe the Lie algebra")
    sub.add_parser("classical", parents=[common], help="GCYBE and CYBE reports for r")
    for name in ("coproduct", "antipode"):
        sp = sub.add_parser(name, parents=[common], help=f"{name} of a generator")
        sp.add_argument("--gen", required=True, help='e.g. "I^h_1" (eps h t) or "I_h_1" (h t)')
    sub.add_parser("twist", parents=[common], help="the twist F from r to r2")
    sp = sub.add_parser("vertex", parents=[common], help="meromorphic coproduct of a generator")
    sp.add_argument("--gen", required=True)
    sp = sub.add_parser("rmatrix", parents=[common], help="r_sing, R_s or R as a z-series")
    sp.add_argument("--which", choices=("r_sing", "R_s", "R"), default="R")
    sp = sub.add_parser("modules", parents=[common], help="coregular module and R on it")
    sp.add_argument("--L", type=_positive, default=1)
    sp.add_argument("--m", type=_positive, default=2)
    sp = sub.add_parser("verify", parents=[common], help="run a verifier suite")
    sp.add_argument("suite", choices=SUITES + ("all",))
    sp.add_argument("--samples", type=_positive, help="structure suite sample count")
    return p


# --- helpers -----------------------------------------------------------------------

_GEN = re.compile(r"^I(\^|_)([^_^]+)_(-?\d+)$")


def parse_gen(text: str, lie) -> tuple:
    """``I^a_n`` is eps b_a t^n, ``I_a_n`` is b_a t^n; a is a label or 1-based index."""
    m = _GEN.match(text.strip())
    if not m:
        raise UsageError(f"cannot parse generator {text!r}")
    kind, lab, n = m.groups()
    if lab in lie.labels:
        a = lie.labels.index(lab)
    elif lab.isdigit() and 1 <= int(lab) <= lie.dim:
        a = int(lab) - 1
    else:
        raise UsageError(f"unknown label {lab!r}; have {lie.labels}")
    if int(n) < 0:
        raise UsageError("generators need loop degree >= 0")
    return (int(n), a, GSTAR if kind == "^" else G)


def _window(args, key: str, default: int) -> int:
    v = getattr(args, key, None)
    return default if v is None else v


def _load_r(lie, path):
    from .classical import RMatrixInput, gamma

    return gamma(lie) if path is None else RMatrixInput.from_json(lie, path)


def _xi(args):
    try:
        return Fraction(args.xi) if args.xi is not None else Fraction(1)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --xi {args.xi!r}")


def _check_files(args):
    for key in ("r", "r2"):
        v = getattr(args, key, None)
        if v is not None and not Path(v).is_file():
            raise UsageError(f"--{key}: no such file {v}")
    g = args.g
    if (g.endswith(".json") or "/" in g) and not Path(g).is_file():
        from .core import FIXTURES

        if not (FIXTURES / Path(g).name).is_file():
            raise UsageError(f"--g: no such file {g}")


def _lie(args):
    g = args.g
    if not Path(g).is_file():
        g = Path(g).name
        g = g[:-5] if g.endswith(".json") else g
    return load_lie_algebra(g)


# --- subcommands ---------------------------------------------------------------------

def cmd_inspect(args, lie) -> tuple[dict, bool]:
    from .core import casimir_d

    return {"d": lie.dim, "dim_cotangent": 2 * lie.dim, "labels": list(lie.labels), "jacobi": "pass",
            "form": "nondegenerate, invariant",
            "casimir_d_terms": len(casimir_d(lie))}, True


def cmd_classical(args, lie):
    from .classical import boundedness, check_cybe_rho, lift_rho, skew_defect, validate_gcybe

    r = _load_r(lie, args.r)
    order = _window(args, "N", 4)
    g, c = validate_gcybe(r, order), check_cybe_rho(lift_rho(r), order)
    skew = skew_defect(lift_rho(r), order)
    out = {"r": r.to_json(), "gcybe": g, "cybe_rho": c, "rho_skew": "pass" if not skew else "fail"}
    if g.ok:
        out["boundedness"] = list(boundedness(r, 2))
    return out, g.ok and c.ok and not skew


def cmd_coproduct(args, lie, which="coproduct"):
    from .duality import tensor_to_json
    from .yangian import quantize

    q = quantize(_load_r(lie, args.r), K=_window(args, "K", 2))
    g = parse_gen(args.gen, lie)
    t = q.coproduct_gen(g) if which == "coproduct" else q.antipode_gen(g)
    return {"generator": args.gen, "K": q.K, which: tensor_to_json(t)}, True


def cmd_twist(args, lie):
    from .duality import tensor_to_json
    from .twist import Twist

    r1 = _load_r(lie, args.r)
    r2 = _load_r(lie, args.r2)
    K, N = _window(args, "K", 2), _window(args, "N", 2)
    tw = Twist(r1, r2, K, N)
    return {"K": K, "N": N, "F": tensor_to_json(tw.F)}, True


def cmd_vertex(args, lie):
    from .rmat import series_json
    from .vertex import MeromorphicCoproduct, VacuumModule

    K, W = _window(args, "K", 2), _window(args, "M", 4)
    V = VacuumModule(lie, K=K)
    g = parse_gen(args.gen, lie)
    d = MeromorphicCoproduct(V, W=W).delta_gen(g)
    return {"generator": args.gen, "K": K, "weight": W, "delta_z": series_json(V.q, d)}, True


def cmd_rmatrix(args, lie):
    from .rmat import RMatrices, series_json

    K, W = _window(args, "K", 2), _window(args, "M", 3)
    M = RMatrices(lie, K, W)
    t = {"r_sing": M.rs, "R_s": M.Rs, "R": M.R}[args.which]
    return {"which": args.which, "K": K, "weight": W, "series": series_json(M.q, t)}, True


def cmd_modules(args, lie):
    from .repmod import build_coregular, evaluate_R
    from .rmat import RMatrices

    K = _window(args, "K", max(2 * (args.m - 1), 1))
    Mod, closure = build_coregular(args.L, args.m, _xi(args), lie=lie, K=K)
    ev, rep = evaluate_R(RMatrices(lie, Mod.q.K, 2, Mod.q), Mod, Mod)
    R = {" ".join(map(str, z)): [[i, j, v.numerator, v.denominator] for (i, j), v in sorted(m.items())]
         for z, m in sorted(ev.items())}
    return {"module": Mod.to_json(), "closure": closure, "R": {"finite": rep, "matrices": R}}, rep.ok


def _suite_job(job):
    name, g, opts = job
    from .suites import run_suite

    lie = load_lie_algebra(g)
    r = opts.pop("r_path", None)
    r2 = opts.pop("r2_path", None)
    if r:
        opts["r"] = _load_r(lie, r)
    if r2:
        opts["r2"] = _load_r(lie, r2)
    return json.loads(json.dumps(run_suite(name, lie, opts), default=str))


def cmd_verify(args, lie):
    from .suites import SUITES

    names = list(SUITES) if args.suite == "all" else [args.suite]
    opts = {"K": args.K, "N": args.N, "M": args.M, "zdepth": args.zdepth, "samples": args.samples,
            "r_path": args.r, "r2_path": args.r2}
    if args.xi is not None:
        opts["xi"] = _xi(args)
    jobs = [(n, _g_spec(args), dict(opts)) for n in names]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            reports = list(ex.map(_suite_job, jobs))
    else:
        reports = [_suite_job(j) for j in jobs]
    ok = all(r["status"].startswith("pass") for r in reports)
    if len(reports) == 1:
        return reports[0], ok
    return {"identity": "all suites", "status": "pass" if ok else "fail",
            "suites": {n: r for n, r in zip(names, reports)},
            "window": {}, "domain": "see suites",
            "witnesses": [n for n, r in zip(names, reports) if not r["status"].startswith("pass")]}, ok


def _g_spec(args) -> str:
    if Path(args.g).is_file():
        return str(Path(args.g).resolve())
    name = Path(args.g).name
    return name[:-5] if name.endswith(".json") else name


COMMANDS = {
    "inspect": cmd_inspect, "classical": cmd_classical, "coproduct": cmd_coproduct,
    "antipode": lambda a, l: cmd_coproduct(a, l, "antipode"), "twist": cmd_twist, "vertex": cmd_vertex,
    "rmatrix": cmd_rmatrix, "modules": cmd_modules, "verify": cmd_verify,
}


# --- cache ---------------------------------------------------------------------------

def _file_digest(path) -> str | None:
    if path is None:
        return None
    p = Path(path)
    return hashlib.sha256(p.read_bytes()).hexdigest() if p.is_file() else path


def cache_key(args) -> str:
    """Normalized arguments plus content hashes of every input file."""
    d = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "cache", "workers")}
    for k in ("g", "r", "r2"):
        d[k] = _file_digest(d.get(k)) if d.get(k) and Path(d[k]).is_file() else d.get(k)
    d["schema"] = SCHEMA
    d["version"] = __version__
    return hashlib.sha256(json.dumps(d, sort_keys=True, default=str).encode()).hexdigest()


def _cache_load(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError):
        return {}
    return data.get("entries", {}) if data.get("schema") == SCHEMA else {}


def _cache_store(path, entries: dict) -> None:
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps({"schema": SCHEMA, "entries": entries}, sort_keys=True))
    tmp.replace(path)


# --- entry point -----------------------------------------------------------------------

def render(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=1, default=str) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return EXIT_USAGE if ex.code not in (0, None) else EXIT_OK
    try:
        _check_files(args)
        key = cache_key(args) if args.cache else None
        entries = _cache_load(args.cache) if args.cache else {}
        hit = entries.get(key) if key else None
        if hit is not None:
            text, code = hit["text"], hit["code"]
        else:
            lie = _lie(args)
            payload, ok = COMMANDS[args.cmd](args, lie)
            text, code = render(payload), (EXIT_OK if ok else EXIT_FAIL)
            if key:
                entries[key] = {"text": text, "code": code}
                _cache_store(args.cache, entries)
    except (UsageError, FileNotFoundError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except InternalError as ex:
        print(f"internal error: {ex}", file=sys.stderr)
        return EXIT_INTERNAL
    except (AlgebraError, ValueError, KeyError, json.JSONDecodeError) as ex:
        print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as ex:  # noqa: BLE001 - anything else is a bug
        print(f"internal error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
