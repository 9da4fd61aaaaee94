"""Command line front end.

Each invocation reads one JSON job file and writes a JSON report (or a CSV
grid).  Complex numbers are ``[re, im]`` pairs; theta and alpha may be given
as exact fraction strings such as ``"3/2"``.

Exit codes: 0 success, 2 parse error, 3 invariant violation,
4 inconsistency verdict, 5 numerical tolerance failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from fractions import Fraction

from .germ import DevelopingGerm, InvalidGerm, Log, Power
from .metric import Conical, Cusp, Divisor, annular_points, cartesian_points, gauss_bonnet_admissible, sample_grid
from .mobius import MobiusMap, Model
from .normalform import (
    Inconsistency,
    NeverDiskValued,
    NormalForm,
    analyze_schwarzian,
    classify_singularity,
    escape_witness,
    germ_from_ratio,
    normal_coordinate,
    obstructed_value,
    verify_normal_form,
)
from .frobenius import basis_residual
from .schwarzian import SingularityData
from .series import DEFAULT_ORDER, TruncSeries

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_INCONSISTENT = 4
EXIT_TOLERANCE = 5

OUT_DIR_ENV = "HYPSING_OUT_DIR"

# Matrix used for the escape witness when the job does not supply one.
DEFAULT_WITNESS_MATRIX = (1, 1, 2)


class ParseError(ValueError):
    pass


# -- input --------------------------------------------------------------------


def _complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise ParseError(f"expected a number or [re, im], got {v!r}")


def _real(v) -> Fraction | float:
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError as exc:
            raise ParseError(f"bad fraction {v!r}") from exc
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return v
    raise ParseError(f"expected a real number or 'p/q', got {v!r}")


def _series(v) -> TruncSeries:
    if not isinstance(v, list) or not v:
        raise ParseError("coefficient list must be a nonempty list")
    return TruncSeries([_complex(c) for c in v])


def _field(payload: dict, key: str, default=None):
    if key in payload:
        return payload[key]
    if default is None:
        raise ParseError(f"missing field {key!r}")
    return default


def _matrix(v) -> MobiusMap:
    if not isinstance(v, list) or len(v) != 4:
        raise ParseError("a Mobius map is a list [a, b, c, d]")
    return MobiusMap(*(_complex(t) for t in v))


def _model(v) -> Model:
    try:
        return Model(v)
    except ValueError as exc:
        raise ParseError(f"model must be 'disk' or 'halfplane', got {v!r}") from exc


def parse_germ(payload: dict) -> DevelopingGerm:
    branch = _field(payload, "branch")
    if branch == "log":
        b = Log()
    elif isinstance(branch, dict) and "power" in branch:
        b = Power(_real(branch["power"]))
    else:
        raise ParseError("branch must be 'log' or {'power': alpha}")
    inner = _series(payload["inner"]) if "inner" in payload else None
    return DevelopingGerm(_matrix(_field(payload, "moebius")), b, _model(payload.get("model", "disk")), inner)


def parse_data(payload: dict) -> SingularityData:
    phi = _series(payload["phi"]) if "phi" in payload else None
    return SingularityData(_real(_field(payload, "theta")), _complex(payload.get("d", 0)), phi)


def parse_kind(v):
    if v == "cusp":
        return Cusp()
    if isinstance(v, dict) and "conical" in v:
        return Conical(float(_real(v["conical"])))
    raise ParseError("kind must be 'cusp' or {'conical': alpha}")


def parse_points(grid: dict) -> list[complex]:
    kind = _field(grid, "type")
    if kind == "annular":
        return annular_points(float(grid["r_min"]), float(grid["r_max"]), int(grid["n_r"]), int(grid["n_phi"]))
    if kind == "cartesian":
        return cartesian_points(tuple(grid["re"]), tuple(grid["im"]), int(grid["n_re"]), int(grid["n_im"]))
    raise ParseError("grid type must be 'annular' or 'cartesian'")


# -- output -------------------------------------------------------------------


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dump(obj, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, complex):
        return dump([obj.real, obj.imag], indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dump(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dump(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _coeffs(s: TruncSeries) -> list:
    return [_cx(c) for c in s.coeffs]


def _kind(kind) -> dict:
    if isinstance(kind, Cusp):
        return {"type": "Cusp"}
    return {"type": "Conical", "alpha": float(kind.alpha)}


def _matrix_out(m: MobiusMap) -> list:
    return [_cx(m.a), _cx(m.b), _cx(m.c), _cx(m.d)]


# -- jobs ---------------------------------------------------------------------


def run_classify(payload: dict, args) -> tuple[dict, int]:
    germ = parse_germ(payload)
    declared = _matrix(payload["monodromy"]) if "monodromy" in payload else None
    verdict = classify_singularity(germ, declared)
    if isinstance(verdict, Inconsistency):
        return {"verdict": "Inconsistency", "reason": verdict.reason.value, "detail": verdict.detail}, EXIT_INCONSISTENT
    return {"verdict": _kind(verdict)}, EXIT_OK


def run_normalize(payload: dict, args) -> tuple[dict, int]:
    germ = parse_germ(payload)
    verdict = classify_singularity(germ)
    if isinstance(verdict, Inconsistency):
        return {"verdict": "Inconsistency", "reason": verdict.reason.value, "detail": verdict.detail}, EXIT_INCONSISTENT
    if "coord" in payload:
        nf = NormalForm(verdict, _series(payload["coord"]))
    else:
        nf = normal_coordinate(germ, args.order)
    residual = verify_normal_form(nf, germ)
    report = {
        "verdict": _kind(nf.kind),
        "coord": _coeffs(nf.coord),
        "residual": residual,
        "tolerance": args.tol,
    }
    return report, EXIT_OK if residual < args.tol else EXIT_TOLERANCE


def run_analyze(payload: dict, args) -> tuple[dict, int]:
    data = parse_data(payload)
    rep = analyze_schwarzian(data, args.order)
    residual = basis_residual(rep.basis)
    report = {
        "theta": str(data.theta) if isinstance(data.theta, Fraction) else data.theta,
        "local_monodromy": _matrix_out(rep.local_monodromy),
        "basis_residual": residual,
    }
    status = EXIT_OK
    v = rep.verdict
    if isinstance(v, NeverDiskValued):
        a, c, d = (_complex(t) for t in payload.get("witness_matrix", DEFAULT_WITNESS_MATRIX))
        x = escape_witness(v.m, rep.ratio.phi, a, c, d)
        report["verdict"] = {
            "type": "NeverDiskValued",
            "m": v.m,
            "Rm": _cx(v.Rm),
            "phi": _coeffs(rep.ratio.phi),
            "witness_matrix": [_cx(a), _cx(c), _cx(d)],
            "witness": _cx(x),
            "abs_F": abs(obstructed_value(v.m, rep.ratio.phi, a, c, d, x)),
        }
        status = EXIT_INCONSISTENT
    else:
        germ = germ_from_ratio(rep.ratio)
        nf = normal_coordinate(germ, args.order)
        report["verdict"] = {"type": type(v).__name__}
        if hasattr(v, "alpha"):
            report["verdict"]["alpha"] = v.alpha
        if hasattr(rep.ratio, "unit"):
            report["ratio"] = {"type": "PowerRatio", "alpha": float(rep.ratio.alpha), "unit": _coeffs(rep.ratio.unit)}
        else:
            report["ratio"] = {"type": "LogRatio", "psi": _coeffs(rep.ratio.psi)}
        report["coord"] = _coeffs(nf.coord)
        report["normal_form_residual"] = verify_normal_form(nf, germ)
    if residual > args.tol:
        status = EXIT_TOLERANCE
    return report, status


def run_grid(payload: dict, args) -> tuple[str, int]:
    kind = parse_kind(_field(payload, "kind"))
    pts = parse_points(_field(payload, "grid"))
    rows = sample_grid(kind, pts, float(payload.get("h", 1e-3)))
    buf = io.StringIO(newline="")
    buf.write("re,im,density,curvature\n")
    for row in rows:
        buf.write(",".join(fmt_float(float(v)) for v in row) + "\n")
    return buf.getvalue(), EXIT_OK


def run_admissible(payload: dict, args) -> tuple[dict, int]:
    genus = _field(payload, "genus")
    if not isinstance(genus, int):
        raise ParseError("genus must be an integer")
    thetas = [_real(t) for t in _field(payload, "thetas", [])]
    div = Divisor(genus, thetas)
    return {"sum": float(div.euler_sum()), "admissible": gauss_bonnet_admissible(div)}, EXIT_OK


COMMANDS = {
    "classify": run_classify,
    "normalize": run_normalize,
    "analyze": run_analyze,
    "grid": run_grid,
    "admissible": run_admissible,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypsing", description="Classify and normalize isolated singularities of hyperbolic metrics.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("job", help="JSON job file ('-' for stdin)")
        s.add_argument("--order", type=int, default=DEFAULT_ORDER, help="series truncation order")
        s.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
        s.add_argument("--out", help="output path (default stdout)")
    return p


def _resolve_out(path: str) -> str:
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        if args.job == "-":
            payload = json.load(sys.stdin)
        else:
            with open(args.job) as fh:
                payload = json.load(fh)
        if not isinstance(payload, dict):
            raise ParseError("job file must hold a JSON object")
    except (OSError, json.JSONDecodeError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        result, status = COMMANDS[args.command](payload, args)
    except (ParseError, KeyError, TypeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, ArithmeticError, InvalidGerm) as exc:
        print(f"invariant violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except RuntimeError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    text = result if isinstance(result, str) else dump(result) + "\n"
    if args.out:
        with open(_resolve_out(args.out), "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status
