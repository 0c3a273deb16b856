"""Command-line front end.

Usage::

    steinerpoly coeffs body.json [--quad-level N] [--format csv|jsonl] [--output PATH]
    steinerpoly roots  body.json
    steinerpoly verify body.json [--tol T] [--identity-tol T]
    steinerpoly chain  body.json
    steinerpoly sweep  body.json --param semi_axes.0 --values 1:2:11

A body file holds one JSON object.  ``dimension`` is required at the top
level and inherited by nested bodies.  Types and their keys:

    ball        radius
    ellipsoid   semi_axes
    sum         terms        (list of bodies)
    offset      inner, shift (shift < 0 means the inner parallel body)
    complement  inner, c     (the ball of radius c minus inner)

Exit codes: 0 success, 1 verification failed, 2 invalid input,
3 summand condition violated, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from .body import Ball, ConvexBody, Ellipsoid, MinkowskiSum, radii_extrema
from .bounds import (THEOREM_TOL, p2_empirical_check, planar_chain_check,
                     reflection_identity_check, shift_identity_check, theorem2_check)
from .errors import PreconditionError, SteinerError, SummandViolationError, UnsupportedBodyError
from .minkowski import ball_complement, inner_parallel, outer_parallel
from .quadrature import build_rule, default_level
from .roots import hurwitz_stable, roots
from .steiner import steiner_polynomial

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_SUMMAND = 3
EXIT_NUMERIC = 4

COMMANDS = ("coeffs", "roots", "verify", "chain", "sweep")
IDENTITY_TOL = 1e-6
CHAIN_TOL = 1e-7
MIN_QUAD_LEVEL = 4

_BODY_KEYS = {
    "ball": {"radius"},
    "ellipsoid": {"semi_axes"},
    "sum": {"terms"},
    "offset": {"inner", "shift"},
    "complement": {"inner", "c"},
}


class BodyFileError(PreconditionError):
    """A body description that does not match the schema."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    quad_level: int | None = None
    tolerance: float | None = None
    identity_tolerance: float = IDENTITY_TOL
    output_format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command {self.command!r}")
        if self.quad_level is not None and self.quad_level < MIN_QUAD_LEVEL:
            raise PreconditionError(f"--quad-level must be >= {MIN_QUAD_LEVEL}")
        for name in ("tolerance", "identity_tolerance"):
            value = getattr(self, name)
            if value is not None and not (value > 0 and math.isfinite(value)):
                raise PreconditionError(f"{name} must be positive, got {value}")
        if self.output_format not in ("csv", "jsonl"):
            raise PreconditionError(f"unknown output format {self.output_format!r}")

    def rule_for(self, n: int):
        return build_rule(n, self.quad_level or default_level(n))


# ---------------------------------------------------------------------------
# body files


def _number(value, path, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise BodyFileError(f"{path}: expected a finite number, got {value!r}")
    if positive and not value > 0:
        raise BodyFileError(f"{path}: must be positive, got {value!r}")
    return float(value)


def body_from_dict(spec: Any, dimension: int | None = None, path: str = "$") -> ConvexBody:
    """Build a validated body from a parsed JSON object.

    Offsets with a negative shift and complements run the summand check
    here, so a `SummandViolationError` surfaces at parse time.
    """
    if not isinstance(spec, dict):
        raise BodyFileError(f"{path}: expected an object, got {type(spec).__name__}")
    if "dimension" in spec:
        dim = spec["dimension"]
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
            raise BodyFileError(f"{path}.dimension: expected an integer >= 2, got {dim!r}")
        if dimension is not None and dim != dimension:
            raise BodyFileError(f"{path}.dimension: {dim} conflicts with enclosing {dimension}")
        dimension = dim
    if dimension is None:
        raise BodyFileError(f"{path}: missing 'dimension'")
    kind = spec.get("type")
    if kind not in _BODY_KEYS:
        raise BodyFileError(f"{path}.type: unsupported body type {kind!r}; "
                            f"expected one of {sorted(_BODY_KEYS)}")
    allowed = _BODY_KEYS[kind] | {"type", "dimension"}
    extra = sorted(set(spec) - allowed)
    if extra:
        raise BodyFileError(f"{path}: unexpected key(s) {extra} for type {kind!r}")
    missing = sorted(_BODY_KEYS[kind] - set(spec))
    if missing:
        raise BodyFileError(f"{path}: missing key(s) {missing} for type {kind!r}")

    try:
        if kind == "ball":
            return Ball(dimension, _number(spec["radius"], f"{path}.radius", positive=True))
        if kind == "ellipsoid":
            axes = spec["semi_axes"]
            if not isinstance(axes, list) or len(axes) != dimension:
                raise BodyFileError(f"{path}.semi_axes: expected a list of {dimension} numbers")
            return Ellipsoid(tuple(_number(a, f"{path}.semi_axes[{k}]", positive=True)
                                   for k, a in enumerate(axes)))
        if kind == "sum":
            terms = spec["terms"]
            if not isinstance(terms, list) or not terms:
                raise BodyFileError(f"{path}.terms: expected a non-empty list of bodies")
            return MinkowskiSum(tuple(body_from_dict(t, dimension, f"{path}.terms[{k}]")
                                      for k, t in enumerate(terms)))
        inner = body_from_dict(spec["inner"], dimension, f"{path}.inner")
        if kind == "offset":
            shift = _number(spec["shift"], f"{path}.shift")
            return outer_parallel(inner, shift) if shift >= 0 else inner_parallel(inner, -shift)
        return ball_complement(inner, _number(spec["c"], f"{path}.c", positive=True))
    except SummandViolationError as exc:
        raise SummandViolationError(f"{path}: {exc}", exc.margin) from exc
    except BodyFileError:
        raise
    except PreconditionError as exc:
        raise BodyFileError(f"{path}: {exc}") from exc


def load_body_spec(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise BodyFileError(f"{path}: cannot read body file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BodyFileError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


def parse_body_file(path: str) -> ConvexBody:
    return body_from_dict(load_body_spec(path))


# ---------------------------------------------------------------------------
# commands; each returns (exit code, list of flat records)


def _coeffs(body, config):
    poly, table = steiner_polynomial(body, config.rule_for(body.dimension))
    rows = [{"i": i, "coefficient": poly.coefficients[i], "mixed_volume": table.values[i],
             "discrepancy": table.method_discrepancy[i]} for i in range(body.dimension + 1)]
    return EXIT_OK, rows


def _roots(body, config):
    poly, _ = steiner_polynomial(body, config.rule_for(body.dimension))
    rs = roots(poly)
    stab = hurwitz_stable(poly)
    verdict = "stable" if stab.stable else "unstable"
    rows = [{"re": r.real, "im": r.imag, "multiplicity": k, "hurwitz": verdict,
             "routh_margin": stab.margin} for r, k in rs.clusters]
    return EXIT_OK, rows


def _check(name, parameter, value, tolerance, passed, flag=""):
    return {"check": name, "parameter": parameter, "value": value, "tolerance": tolerance,
            "pass": bool(passed), "flag": flag}


def _verify(body, config):
    rule = config.rule_for(body.dimension)
    tol = config.tolerance or THEOREM_TOL
    itol = config.identity_tolerance
    poly, table = steiner_polynomial(body, rule)
    rep = theorem2_check(body, rule, tol)
    flag = "" if rep.hypothesis_verified else "hypothesis_unverified"
    rows = [
        _check("dual_formulas", math.nan, float(np.nanmax(table.method_discrepancy)), itol,
               np.nanmax(table.method_discrepancy) <= itol),
        _check("root_upper_bound", rep.rho_min, rep.upper_margin, tol, rep.upper_margin >= -tol, flag),
        _check("root_lower_bound", rep.rho_max, rep.lower_margin, tol, rep.lower_margin >= -tol, flag),
    ]
    stab = hurwitz_stable(poly)
    rows.append(_check("hurwitz", math.nan, stab.margin, math.nan, stab.stable,
                       "" if body.dimension <= 5 else "hypothesis_unverified"))
    for c in (0.5 * rep.rho_min, rep.rho_min):
        err = shift_identity_check(body, c, rule)
        rows.append(_check("shift_identity", c, err, itol, err <= itol))
    for c in (rep.rho_max, 2.0 * rep.rho_max):
        err = reflection_identity_check(body, c, rule)
        rows.append(_check("reflection_identity", c, err, itol, err <= itol))
    p2 = p2_empirical_check(body, rule)
    rows.append(_check("inradius_root_bound", p2.inradius, p2.slack, p2.tolerance, p2.holds,
                       "empirical_marginal" if p2.marginal else "empirical"))
    ok = all(r["pass"] for r in rows)
    return (EXIT_OK if ok else EXIT_FAILED), rows


def _chain(body, config):
    rep = planar_chain_check(body, config.rule_for(body.dimension), config.tolerance or CHAIN_TOL)
    gaps = rep.gaps + (math.nan,)
    rows = [{"label": label, "value": v, "gap_to_next": g, "mode": rep.mode}
            for label, v, g in zip(rep.labels, rep.values, gaps)]
    ok = rep.strict if rep.mode == "strict" else rep.equal
    return (EXIT_OK if ok else EXIT_FAILED), rows


def _sweep_row(body, config):
    n = body.dimension
    rule = config.rule_for(n)
    poly, table = steiner_polynomial(body, rule)
    ext = radii_extrema(body)
    re = roots(poly).real_parts_sorted
    tol = config.tolerance or THEOREM_TOL
    row = {"rho_min": ext.rho_min, "rho_max": ext.rho_max}
    row.update({f"re_{k + 1}": v for k, v in enumerate(re)})
    row["hurwitz"] = "stable" if hurwitz_stable(poly).stable else "unstable"
    row["theorem_pass"] = bool(-ext.rho_min - re[-1] >= -tol and re[0] + ext.rho_max >= -tol)
    row["max_discrepancy"] = float(np.nanmax(table.method_discrepancy))
    if n == 2:
        chain = planar_chain_check(body, rule)
        row.update({"chain_width": chain.values[-1] - chain.values[0],
                    "chain_min_gap": min(chain.gaps), "chain_mode": chain.mode})
    return row


_RUNNERS = {"coeffs": _coeffs, "roots": _roots, "verify": _verify, "chain": _chain}


def run(command: str, config: RunConfig, body: ConvexBody) -> tuple[int, list[dict]]:
    """Run one command on a parsed body; returns the exit code and records."""
    if command == "sweep":
        return EXIT_OK, [_sweep_row(body, config)]
    return _RUNNERS[command](body, config)


def parse_values(text: str) -> list[float]:
    """``start:stop:num`` (inclusive, evenly spaced) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            count = int(num)
            if count < 1:
                raise ValueError
            return [float(v) for v in np.linspace(float(start), float(stop), count)]
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise BodyFileError(f"--values: expected start:stop:num or a comma list, got {text!r}")


def set_path(spec: dict, dotted: str, value: float) -> dict:
    """Copy of `spec` with the field at `dotted` (e.g. ``inner.semi_axes.0``) replaced."""
    out = copy.deepcopy(spec)
    keys = dotted.split(".")
    node = out
    try:
        for key in keys[:-1]:
            node = node[int(key)] if isinstance(node, list) else node[key]
        last = keys[-1]
        if isinstance(node, list):
            node[int(last)] = value
        elif last in node:
            node[last] = value
        else:
            raise KeyError(last)
    except (KeyError, IndexError, ValueError, TypeError):
        raise BodyFileError(f"--param: no field at path {dotted!r}")
    return out


def sweep(spec: dict, param: str, values: list[float], config: RunConfig) -> list[dict]:
    rows = []
    for v in values:
        body = body_from_dict(set_path(spec, param, v))
        row = {"param": param, "value": v}
        row.update(_sweep_row(body, config))
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# output


def _format_float(x: float, null: str) -> str:
    return null if not math.isfinite(x) else "%.17g" % x


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value), "nan")
    return str(value)


def _json_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value), "null")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return json.dumps(value)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join("{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}"
                                       for k, v in row.items()) + "}\n" for row in rows)
    buf = io.StringIO()
    columns: list[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) if c in row else "" for c in columns])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinerpoly",
        description="Steiner polynomials of smooth convex bodies and their root bounds.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("body", help="JSON body description")
    parser.add_argument("--quad-level", type=int, default=None,
                        help="quadrature level (>= 4); default depends on the dimension")
    parser.add_argument("--tol", type=float, default=None,
                        help="theorem tolerance (verify, sweep) or gap tolerance (chain)")
    parser.add_argument("--identity-tol", type=float, default=IDENTITY_TOL,
                        help="tolerance for the identity and dual-formula checks")
    parser.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    parser.add_argument("--output", default=None, help="output file (default stdout)")
    parser.add_argument("--param", help="sweep: dotted path of the field to vary")
    parser.add_argument("--values", help="sweep: start:stop:num or a comma list")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID

    try:
        config = RunConfig(command=args.command, quad_level=args.quad_level,
                           tolerance=args.tol, identity_tolerance=args.identity_tol,
                           output_format=args.format)
        spec = load_body_spec(args.body)
        if args.command == "sweep":
            if not args.param or not args.values:
                raise BodyFileError("sweep needs --param and --values")
            code, rows = EXIT_OK, sweep(spec, args.param, parse_values(args.values), config)
        else:
            code, rows = run(args.command, config, body_from_dict(spec))
    except SummandViolationError as exc:
        print(f"error: summand condition violated: {exc}", file=sys.stderr)
        return EXIT_SUMMAND
    except (PreconditionError, UnsupportedBodyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SteinerError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    text = render(rows, config.output_format)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_INVALID
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
