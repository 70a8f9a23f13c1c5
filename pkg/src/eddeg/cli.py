"""Command-line front end. Every invocation prints exactly one JSON document.

Exit codes: 0 success, 2 usage or malformed input, 3 domain error,
4 data stayed degenerate after all retries.
"""
from __future__ import annotations

import argparse
import inspect
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__, rng
from .errors import DomainError, RetrySignal, StructuralError

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_RETRY = 0, 2, 3, 4
MAX_RETRIES = 5
SOLVE_STREAM = 0x501E
DATA_BITS = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ------------------------------------------------------------ parsing helpers

def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _frac_list(text: str) -> List[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _points(text: str):
    return [tuple(_frac_list(p)) for p in text.split(";") if p.strip()]


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed_default() -> int:
    env = os.environ.get("EDDEG_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"EDDEG_SEED must be an integer, got {env!r}")


# formula flags; each formula takes the subset named in its signature
_FORMULA_INT = ["n", "d", "m", "w", "p", "s", "t", "r", "g", "d1", "d2", "ed", "codim",
                "deg_dual", "codim_dual", "delta", "k", "c1sq", "c2", "degc1"]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                        help="random seed (default: $EDDEG_SEED or 0)")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")
    common.add_argument("--progress", action="store_true", help="progress text on stderr")

    ap = _Parser(prog="eddeg", description="Euclidean distance degree toolkit")
    ap.add_argument("--version", action="version", version=f"eddeg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    from .formulas import FORMULAS
    f = sub.add_parser("formula", parents=[common], help="closed-form ED degrees")
    f.add_argument("name", choices=sorted(FORMULAS))
    for k in _FORMULA_INT:
        f.add_argument("--" + k.replace("_", "-"), dest=k, type=int)
    f.add_argument("--degrees", type=_int_list)
    f.add_argument("--classes", type=_int_list, help="polar classes or Chern degrees")
    f.add_argument("--kind", help="discriminant family")
    f.add_argument("--homogeneous", action="store_true")
    f.add_argument("--projective", action="store_true")

    t = sub.add_parser("toric", parents=[common], help="ED degree of a toric variety")
    src = t.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", type=Path, help="vertex file, one lattice point per line")
    src.add_argument("--segment", type=_positive)
    src.add_argument("--simplex", type=_positive)
    src.add_argument("--cube", type=_positive)
    src.add_argument("--simplex-product", type=_int_list)
    t.add_argument("--dilate", type=_positive, default=1)
    t.add_argument("--brute-force", action="store_true")

    s = sub.add_parser("segre", parents=[common], help="ED degree of Segre-Veronese varieties")
    s.add_argument("--dims", type=_int_list, required=True)
    s.add_argument("--weights", type=_int_list)

    so = sub.add_parser("solve", parents=[common], help="count critical points exactly")
    what = so.add_mutually_exclusive_group(required=True)
    what.add_argument("--curve", help="plane curve polynomial")
    what.add_argument("--param", help="parametrization, components separated by ';'")
    so.add_argument("--projective", action="store_true")
    so.add_argument("--closure", action="store_true", help="also solve the projective closure")
    so.add_argument("--singular", type=_points, default=[], help="known singular points 'a,b;c,d'")
    so.add_argument("--data", type=_frac_list, help="data point (default: drawn from the seed)")
    so.add_argument("--k", type=_positive, default=1, help="degree of the parametrization")
    so.add_argument("--weights", type=_frac_list)

    h = sub.add_parser("hurwitz", parents=[common], help="constructive Hurwitz ED degree")
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--homogeneous", action="store_true")
    h.add_argument("--data", type=_frac_list)

    mx = sub.add_parser("matrix", parents=[common], help="Eckart-Young critical points")
    mx.add_argument("--file", type=Path, required=True)
    mx.add_argument("--rank", type=_positive, required=True)
    mx.add_argument("--check-duality", action="store_true")

    a = sub.add_parser("aed", parents=[common], help="average ED degree")
    a.add_argument("--model", required=True,
                   help="ellipse | cardioid | gamma3 | rnc:N | matrix:S,T,R | tensor:D1,D2,...")
    a.add_argument("--samples", type=_positive, default=10000)
    a.add_argument("--workers", type=_positive, default=1)
    a.add_argument("--quadrature", action="store_true", help="ellipse only: deterministic quadrature")
    a.add_argument("--resolution", type=int, default=256)

    from .reference import TABLES
    tb = sub.add_parser("table", parents=[common], help="reference-only datasets")
    tb.add_argument("name", choices=sorted(TABLES))
    return ap


def parse(argv: Optional[List[str]] = None) -> argparse.Namespace:
    ns = build_parser().parse_args(argv)
    if ns.seed is None:
        ns.seed = _seed_default()
    return ns


# ------------------------------------------------------------ commands

def _echo(ns) -> dict:
    out = {}
    for k, v in sorted(vars(ns).items()):
        if k in ("timings", "progress") or v is None or v is False or v == []:
            continue
        if isinstance(v, Path):
            v = str(v)
        elif isinstance(v, list):
            v = [_jsonable(x) for x in v]
        out[k] = v
    return out


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _run_formula(ns, diag):
    from .formulas import FORMULAS
    fn = FORMULAS[ns.name]
    given = {k: getattr(ns, k) for k in _FORMULA_INT if getattr(ns, k) is not None}
    if ns.name == "discriminant":
        if not ns.kind:
            raise UsageError("discriminant needs --kind")
        return fn(ns.kind, **given)
    params = list(inspect.signature(fn).parameters)
    kw = {}
    for name in params:
        if name in given:
            kw[name] = given.pop(name)
        elif name == "degrees" and ns.degrees is not None:
            kw[name] = tuple(ns.degrees)
        elif name in ("cd", "pc") and ns.classes is not None:
            kw[name] = ns.classes
        elif name == "homogeneous":
            kw[name] = ns.homogeneous
        elif name == "projective":
            kw[name] = ns.projective
    extra = set(given)
    if ns.degrees is not None and "degrees" not in kw:
        extra.add("degrees")
    if ns.classes is not None and not ({"cd", "pc"} & set(kw)):
        extra.add("classes")
    if ns.kind is not None:
        extra.add("kind")
    if extra:
        raise UsageError(f"formula {ns.name} does not take --{', --'.join(sorted(extra))}")
    missing = [p for p in params if p not in kw and
               inspect.signature(fn).parameters[p].default is inspect.Parameter.empty]
    if missing:
        raise UsageError(f"formula {ns.name} needs {', '.join(missing)}")
    out = fn(**kw)
    return list(out) if isinstance(out, tuple) else out


def _run_toric(ns, diag):
    from . import toric
    if ns.file is not None:
        P = toric.read_polytope(ns.file.read_text())
    elif ns.segment:
        P = toric.segment(ns.segment)
    elif ns.simplex:
        P = toric.simplex(ns.simplex)
    elif ns.cube:
        P = toric.cube(ns.cube)
    else:
        P = toric.simplex_product(ns.simplex_product)
    if ns.dilate > 1:
        P = toric.dilate(P, ns.dilate)
    table = toric.enumerate_faces(P, brute_force=True if ns.brute_force else None)
    return {"dim": P.dim, "vertices": len(P.vertices), "f_vector": list(table.f),
            "volume_sums": list(table.V), "ed_degree": toric.ed_toric(P, table)}


def _run_segre(ns, diag):
    from .tensors import TensorShape, ed_segre_veronese
    shape = TensorShape(tuple(ns.dims), tuple(ns.weights or ()))
    return {"dims": list(shape.dims), "weights": list(shape.weights), "ed_degree": ed_segre_veronese(shape)}


def _random_data(seed: int, attempt: int, count: int) -> List[Fraction]:
    z = rng.normals(seed, SOLVE_STREAM + attempt, 0, count)
    return [Fraction(round(x * (1 << DATA_BITS)), 1 << DATA_BITS) for x in z]


def _with_retries(ns, diag, count, body):
    """Run body(u); re-draw u from derived streams on RetrySignal."""
    if ns.data is not None:
        if len(ns.data) != count:
            raise UsageError(f"--data needs {count} coordinates")
        try:
            return body(list(ns.data)), list(ns.data)
        except RetrySignal as e:
            diag["retries"] = [str(e)]
            raise
    log = []
    for attempt in range(MAX_RETRIES + 1):
        u = _random_data(ns.seed, attempt, count)
        try:
            out = body(u)
            diag["retries"] = log
            return out, u
        except RetrySignal as e:
            log.append(f"attempt {attempt}: {e}")
            if ns.progress:
                print(f"retry {attempt + 1}: {e}", file=sys.stderr)
    diag["retries"] = log
    raise RetrySignal(f"data stayed degenerate after {MAX_RETRIES} retries")


def _run_solve(ns, diag):
    from .algebra.poly import parse_poly
    from .solver import curves, param
    diag["tolerances"] = {"singular": curves.SINGULAR_TOL, "isotropic": curves.ISOTROPIC_TOL,
                          "simple": curves.SIMPLE_TOL, "rank": param.RANK_TOL}
    if ns.param is not None:
        psi = [parse_poly(c, 2) for c in ns.param.split(";") if c.strip()]

        def body(u):
            return param.param_critical_count(psi, u, ns.k, ns.weights)
        rep, u = _with_retries(ns, diag, len(psi), body)
        res = rep.to_json()
        res["data"] = [_jsonable(c) for c in u]
        res["diagnostics"] = _clean(rep.diagnostics)
        return res
    curve = curves.PlaneCurve.parse(ns.curve, ns.projective, ns.singular)
    n = 3 if ns.projective else 2
    if ns.closure:
        if ns.projective:
            raise UsageError("--closure applies to affine curves")

        def body(u):
            return curves.affine_vs_closure(curve, u)
        (ea, ec, info), u = _with_retries(ns, diag, n, body)
        return {"data": [_jsonable(c) for c in u], "ed_affine": ea, "ed_closure": ec,
                "affine": info["affine"].to_json(), "closure": info["closure"].to_json(),
                "lemma_residual": info["lemma_residual"]}

    def body(u):
        return curves.count_critical(curve, u)
    rep, u = _with_retries(ns, diag, n, body)
    res = rep.to_json()
    res["data"] = [_jsonable(c) for c in u]
    res["diagnostics"] = _clean(rep.diagnostics)
    return res


def _clean(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, (int, float, str, bool)) or v is None:
            out[k] = v
        elif isinstance(v, (list, tuple)):
            out[k] = [_jsonable(x) for x in v]
        elif isinstance(v, dict):
            out[k] = _clean(v)
        else:
            out[k] = str(v)
    return out


def _run_hurwitz(ns, diag):
    from .formulas import ed_hurwitz
    from .solver.hurwitz import hurwitz_count
    count = ns.n + 1 if ns.homogeneous else ns.n

    def body(u):
        return hurwitz_count(ns.n, u, ns.homogeneous)
    val, u = _with_retries(ns, diag, count, body)
    return {"n": ns.n, "homogeneous": ns.homogeneous, "data": [_jsonable(c) for c in u],
            "ed_degree": val, "formula": ed_hurwitz(ns.n, ns.homogeneous)}


def _run_matrix(ns, diag):
    from . import spectral
    data = spectral.read_matrix(ns.file.read_text())
    svd = spectral.jacobi_svd(data)
    crit = spectral.eckart_young_critical(data, ns.rank, svd)
    diag["tolerances"] = {"tie": spectral.TIE_TOL}
    res = {"shape": [data.s, data.t], "rank": ns.rank,
           "singular_values": svd.singular_values.tolist(),
           "critical_points": [{"subset": list(c.subset), "distance": c.distance,
                                "matrix": c.matrix.tolist()} for c in crit],
           "ed_degree": len(crit)}
    if ns.check_duality:
        res["duality"] = spectral.duality_check(data, ns.rank).to_json()
    return res


def _run_aed(ns, diag):
    from . import montecarlo as mc
    model = mc.ModelSpec.parse(ns.model)
    if ns.quadrature:
        if model.kind != "ellipse":
            raise UsageError("--quadrature is available for the ellipse model only")
        return {"model": model.name, "method": "quadrature", "resolution": ns.resolution,
                "aed": mc.aed_quadrature_ellipse(ns.resolution)}

    def prog(done, total):
        print(f"chunk {done}/{total}", file=sys.stderr)
    est = mc.aed_estimate(model, ns.samples, ns.seed, ns.workers, prog if ns.progress else None)
    w = mc.retry_warning(est)
    if w:
        diag["warnings"] = [w]
    return est.to_json()


def _run_table(ns, diag):
    from .reference import reference_table
    return reference_table(ns.name)


_DISPATCH = {"formula": _run_formula, "toric": _run_toric, "segre": _run_segre,
             "solve": _run_solve, "hurwitz": _run_hurwitz, "matrix": _run_matrix,
             "aed": _run_aed, "table": _run_table}


def run(ns: argparse.Namespace) -> dict:
    diag: dict = {}
    t0 = time.perf_counter()
    result = _DISPATCH[ns.command](ns, diag)
    if ns.timings:
        diag["timings"] = {"total_seconds": time.perf_counter() - t0}
    return {"command": _echo(ns), "result": result, "diagnostics": diag, "version": __version__}


def _emit_error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": {"kind": kind, "message": message, "exit_code": code}}), file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    try:
        ns = parse(argv)
        report = run(ns)
    except UsageError as e:
        return _emit_error("usage", str(e), EXIT_USAGE)
    except RetrySignal as e:
        return _emit_error("retry_exhausted", str(e), EXIT_RETRY)
    except StructuralError as e:
        return _emit_error("usage", str(e), EXIT_USAGE)
    except (DomainError, OSError) as e:
        return _emit_error("domain", str(e), EXIT_DOMAIN)
    print(json.dumps(report, indent=2, sort_keys=True, allow_nan=False))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
