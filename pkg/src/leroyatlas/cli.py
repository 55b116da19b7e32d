"""``leroy-atlas`` command line.

Subcommands: ``eval``, ``check``, ``verify``, ``sweep``, ``radius``.
Machine output goes to stdout, diagnostics to stderr. Exit codes:
0 ok/pass, 1 negative check or verification, 2 usage or config error,
3 computational error.

Options may also come from ``--config FILE``, a flat ``key=value`` file
(``#`` starts a comment, repeated ``triple=a,b,c`` lines build a
multi-index parameter set, ``axis`` and ``theorem`` may repeat). Flags
given on the command line override the file.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

from leroyatlas import jsonfmt
from leroyatlas.criteria import SINGLE_TRIPLE_THEOREMS, THEOREM_IDS, check
from leroyatlas.disk import (
    GridSpec,
    cross_validate,
    estimate_radius,
    sample_property,
    verify_bound,
    verify_close_to_convex,
    verify_convex,
    verify_exp_convex,
    verify_exp_starlike,
    verify_exp_subordination,
    verify_growth_inequality,
    verify_starlike,
)
from leroyatlas.errors import ArityError, DomainError, LeRoyError
from leroyatlas.series import LeRoyParams, evaluate, evaluate_derivative, evaluate_normalized

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3

VERIFY_PROPERTIES = (
    "bound", "exp-subordination", "starlike", "convex",
    "exp-starlike", "exp-convex", "close-to-convex", "growth",
)
AXIS_NAMES = ("alpha", "beta", "gamma", "triple-index")
MAX_AXES = 2
DEFAULT_WITNESS_FILE = "disagreements.jsonl"

# config key -> (argparse dest, repeatable)
CONFIG_KEYS = {
    "triple": ("params", True),
    "params": ("params", True),
    "axis": ("axis", True),
    "theorem": ("theorem", True),
    "tol": ("tol", False),
    "grid_angles": ("grid_angles", False),
    "grid_radii": ("grid_radii", False),
    "output": ("output", False),
    "witness_file": ("witness_file", False),
    "figure": ("figure", False),
    "jobs": ("jobs", False),
    "z": ("z", False),
    "property": ("property", False),
    "radius": ("radius", False),
    "order": ("order", False),
    "k_max": ("k_max", False),
}


class UsageError(Exception):
    pass


def _fmt12(x: float) -> str:
    return format(x, ".12g")


# -- argument parsing -------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--params", action="append", metavar="A,B,C[;A,B,C]",
                   help="parameter triple(s); repeat or separate with ';' for multi-index")
    p.add_argument("--tol", type=float, help="series tolerance (default 1e-12)")
    p.add_argument("--grid-angles", type=int, dest="grid_angles", help="angles per circle (default 720)")
    p.add_argument("--grid-radii", dest="grid_radii", help="comma separated radii")
    p.add_argument("--rays", action="store_true", default=None, help="add radial rays to the grid")
    p.add_argument("--output", choices=("json", "csv"))
    p.add_argument("--config", type=Path, help="key=value config file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="leroy-atlas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate F, its normalization or derivatives")
    p.add_argument("--z", help="complex argument as re,im")
    p.add_argument("--normalized", action="store_true", default=None)
    p.add_argument("--derivative", type=int, choices=(0, 1, 2))

    p = sub.add_parser("check", parents=[common], help="check a theorem's hypotheses")
    p.add_argument("--theorem", action="append")
    p.add_argument("--k-max", type=int, dest="k_max", help="Ozaki chain length (default 50)")

    p = sub.add_parser("verify", parents=[common], help="verify a geometric property on the disk")
    p.add_argument("--property", choices=VERIFY_PROPERTIES)
    p.add_argument("--radius", type=float, help="radius limit (default 0.999)")
    p.add_argument("--order", type=float, help="order for starlike/convex (default 0)")
    p.add_argument("--x-max", type=float, dest="x_max", default=5.0, help="growth: right end of x grid")
    p.add_argument("--points", type=int, default=100, help="growth: number of x samples")
    p.add_argument("--dump-grid", type=Path, dest="dump_grid", help="write radius,angle,value CSV")
    p.add_argument("--figure", type=Path, help="render the sampled metric to an image file")

    p = sub.add_parser("sweep", parents=[common], help="sweep parameters and cross-validate theorems")
    p.add_argument("--axis", action="append", metavar="NAME[@I]:START:STOP:STEP")
    p.add_argument("--theorem", action="append", help="theorem id, or 'all'")
    p.add_argument("--witness-file", type=Path, dest="witness_file")
    p.add_argument("--figure", type=Path, help="render the agreement matrix to an image file")
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")

    p = sub.add_parser("radius", parents=[common], help="bisect the radius of starlikeness/convexity")
    p.add_argument("--property", choices=("starlike", "convex"))
    p.add_argument("--order", type=float)
    return parser


def read_config(path: Path) -> dict[str, object]:
    out: dict[str, object] = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected a known key=value, got {raw!r}")
        dest, repeat = CONFIG_KEYS[key]
        value = value.strip()
        if repeat:
            out.setdefault(dest, []).append(value)  # type: ignore[union-attr]
        else:
            out[dest] = value
    return out


def _apply_config(args: argparse.Namespace) -> None:
    if args.config is None:
        return
    conv = {"tol": float, "grid_angles": int, "jobs": int, "radius": float, "order": float, "k_max": int,
            "witness_file": Path, "figure": Path}
    for dest, value in read_config(args.config).items():
        if not hasattr(args, dest) or getattr(args, dest) not in (None, []):
            continue
        try:
            setattr(args, dest, conv[dest](value) if dest in conv else value)
        except ValueError as exc:
            raise UsageError(f"config value for {dest}: {exc}") from exc


def _params(args: argparse.Namespace) -> LeRoyParams:
    if not args.params:
        raise UsageError("--params is required")
    try:
        return LeRoyParams.parse(args.params)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _grid(args: argparse.Namespace) -> GridSpec:
    kw: dict = {}
    try:
        if args.grid_radii:
            kw["radii"] = tuple(float(r) for r in str(args.grid_radii).split(","))
        if args.grid_angles is not None:
            kw["angles_per_circle"] = args.grid_angles
        if args.rays:
            kw["include_radial_rays"] = True
        return GridSpec(**kw)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"invalid grid: {exc}") from exc


def _parse_z(text: str | None) -> complex:
    if text is None:
        raise UsageError("--z is required (re,im)")
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse z {text!r}; expected re,im")


def _emit_json(obj: dict, out: IO[str]) -> None:
    out.write(jsonfmt.dumps(obj) + "\n")


def _emit_csv_row(fields: Sequence[str], row: dict, out: IO[str], header: bool = True) -> None:
    w = csv.DictWriter(out, fieldnames=list(fields), lineterminator="\n")
    if header:
        w.writeheader()
    w.writerow({k: (_fmt12(v) if isinstance(v, float) else v) for k, v in row.items()})


# -- subcommands -------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace, out: IO[str]) -> int:
    params = _params(args)
    z = _parse_z(args.z)
    tol = args.tol if args.tol is not None else 1e-12
    order = args.derivative or 0
    try:
        if order:
            sv = evaluate_derivative(params, z, order, tol)
        elif args.normalized:
            sv = evaluate_normalized(params, z, tol)
        else:
            sv = evaluate(params, z, tol)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if args.output == "csv":
        _emit_csv_row(("value_re", "value_im", "tail_bound", "terms_used"),
                      {"value_re": sv.value.real, "value_im": sv.value.imag,
                       "tail_bound": sv.tail_bound, "terms_used": sv.terms_used}, out)
    else:
        _emit_json(sv.to_dict(), out)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, out: IO[str]) -> int:
    params = _params(args)
    if not args.theorem or len(args.theorem) != 1:
        raise UsageError("check takes exactly one --theorem")
    tid = args.theorem[0]
    if tid not in THEOREM_IDS:
        raise UsageError(f"unknown theorem {tid!r}; known: {', '.join(THEOREM_IDS)}")
    if tid == "ozaki":
        from leroyatlas.criteria import check_ozaki_close_to_convex

        try:
            cert = check_ozaki_close_to_convex(params, args.k_max or 50)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    else:
        cert = check(tid, params)
    if args.output == "csv":
        fields = ("theorem_id", "name", "lhs", "relation", "rhs", "margin", "pass", "informational")
        w = csv.DictWriter(out, fieldnames=list(fields), lineterminator="\n")
        w.writeheader()
        for c in cert.clauses:
            row = c.to_dict()
            w.writerow({"theorem_id": tid, **{k: (_fmt12(v) if isinstance(v, float) else v) for k, v in row.items()}})
    else:
        _emit_json(cert.to_dict(), out)
    return EXIT_OK if cert.satisfied else EXIT_NEGATIVE


def _run_verify(args: argparse.Namespace, params: LeRoyParams, grid: GridSpec):
    prop = args.property.replace("-", "_")
    # explicit radii without --radius are taken as given
    radius = args.radius if args.radius is not None else (grid.r_max if args.grid_radii else 0.999)
    order = args.order or 0.0
    if prop == "growth":
        return prop, None, verify_growth_inequality(params, args.x_max, args.points)
    if prop in ("bound", "exp_subordination"):
        g = grid.scaled(radius)
        fn = verify_bound if prop == "bound" else verify_exp_subordination
        return prop, g, fn(params, g)
    g = grid.scaled(radius)
    if prop == "starlike":
        return prop, g, verify_starlike(params, radius, order, grid)
    if prop == "convex":
        return prop, g, verify_convex(params, radius, order, grid)
    fn = {"exp_starlike": verify_exp_starlike, "exp_convex": verify_exp_convex,
          "close_to_convex": verify_close_to_convex}[prop]
    return prop, g, fn(params, radius, grid)


def cmd_verify(args: argparse.Namespace, out: IO[str]) -> int:
    params = _params(args)
    if args.property is None:
        raise UsageError("--property is required")
    grid = _grid(args)
    try:
        prop, sampled, report = _run_verify(args, params, grid)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if args.output == "csv":
        _emit_csv_row(
            ("property", "radius_limit", "extremal_value", "witness_re", "witness_im", "pass", "notes"),
            {"property": report.property, "radius_limit": report.radius_limit,
             "extremal_value": report.extremal_value,
             "witness_re": "" if report.witness is None else report.witness.real,
             "witness_im": "" if report.witness is None else report.witness.imag,
             "pass": report.passed, "notes": report.notes}, out)
    else:
        _emit_json(report.to_dict(), out)

    if sampled is not None and (args.dump_grid or args.figure):
        samples = sample_property(params, prop, sampled)
        if args.dump_grid:
            with open(args.dump_grid, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["radius", "angle", "value"])
                for r, a, v in zip(samples.radius, samples.angle, samples.values):
                    w.writerow([_fmt12(float(r)), _fmt12(float(a)), _fmt12(float(v))])
        if args.figure:
            from leroyatlas.plotting import disk_figure

            disk_figure(samples, report, args.figure)
    elif args.dump_grid or args.figure:
        print("leroy-atlas: growth has no disk grid; --dump-grid/--figure ignored", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_radius(args: argparse.Namespace, out: IO[str]) -> int:
    params = _params(args)
    if args.property is None:
        raise UsageError("--property is required")
    order = args.order or 0.0
    try:
        r = estimate_radius(params, args.property, order, _grid(args))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    row = {"property": args.property, "order": order, "radius": r, "resolution": 1e-4}
    if args.output == "csv":
        _emit_csv_row(tuple(row), row, out)
    else:
        _emit_json(row, out)
    return EXIT_OK


# -- sweep -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    name: str
    index: int
    start: float
    stop: float
    step: float

    @property
    def label(self) -> str:
        return self.name if self.name == "triple-index" or self.index == 0 else f"{self.name}@{self.index}"

    def values(self) -> list[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(count)]


def parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"axis {text!r}: expected NAME[@I]:START:STOP:STEP")
    name, _, idx = parts[0].partition("@")
    if name not in AXIS_NAMES:
        raise UsageError(f"axis {text!r}: name must be one of {', '.join(AXIS_NAMES)}")
    try:
        index = int(idx) if idx else 0
        start, stop, step = (float(v) for v in parts[1:])
    except ValueError as exc:
        raise UsageError(f"axis {text!r}: {exc}") from exc
    if not step > 0 or start > stop:
        raise UsageError(f"axis {text!r}: need step > 0 and start <= stop")
    if name == "triple-index" and not (start >= 1 and float(start).is_integer() and float(step).is_integer()):
        raise UsageError(f"axis {text!r}: triple-index takes integer start >= 1 and step")
    return Axis(name, index, start, stop, step)


@dataclass
class SweepSpec:
    base: LeRoyParams
    axes: list[Axis]
    theorem_ids: list[str]
    grid: GridSpec
    output: str = "csv"
    witness_file: Path = Path(DEFAULT_WITNESS_FILE)
    jobs: int = 1
    figure: Path | None = None
    points: list[tuple[float, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.theorem_ids:
            raise UsageError("sweep needs at least one --theorem")
        for tid in self.theorem_ids:
            if tid not in THEOREM_IDS:
                raise UsageError(f"unknown theorem {tid!r}")
        if len(self.axes) > MAX_AXES:
            raise UsageError(f"at most {MAX_AXES} swept axes per run")
        self.theorem_ids = sorted(set(self.theorem_ids))
        self.points = list(itertools.product(*(a.values() for a in self.axes)))
        for pt in self.points:
            p = self.params_at(pt)
            if p.n > 1 and SINGLE_TRIPLE_THEOREMS.intersection(self.theorem_ids):
                raise UsageError("single-triple theorems cannot be swept over multi-index parameters")

    def params_at(self, point: tuple[float, ...]) -> LeRoyParams:
        triples = [list(t) for t in self.base.triples]
        for axis, v in zip(self.axes, point):
            if axis.name == "triple-index":
                triples = [list(triples[0]) for _ in range(int(v))]
        for axis, v in zip(self.axes, point):
            if axis.name == "triple-index":
                continue
            if axis.index >= len(triples):
                raise UsageError(f"axis {axis.label}: no triple at index {axis.index}")
            triples[axis.index][("alpha", "beta", "gamma").index(axis.name)] = v
        try:
            return LeRoyParams.of(*triples)
        except DomainError as exc:
            raise UsageError(f"sweep point {point}: {exc}") from exc


def _sweep_point(job: tuple[LeRoyParams, list[str], GridSpec]):
    params, tids, grid = job
    return [cross_validate(check(tid, params), grid) for tid in tids]


def sweep_from_args(args: argparse.Namespace) -> SweepSpec:
    base = LeRoyParams.parse(args.params) if args.params else LeRoyParams.single(1.0, 1.0, 1.0)
    theorems: list[str] = []
    for t in args.theorem or []:
        for tid in str(t).split(","):
            tid = tid.strip()
            if tid == "all":
                theorems.extend(THEOREM_IDS)
            elif tid:
                theorems.append(tid)
    return SweepSpec(
        base=base,
        axes=[parse_axis(a) for a in (args.axis or [])],
        theorem_ids=theorems,
        grid=_grid(args),
        output=args.output or "csv",
        witness_file=Path(args.witness_file) if args.witness_file else Path(DEFAULT_WITNESS_FILE),
        jobs=max(1, args.jobs or 1),
        figure=args.figure,
    )


SWEEP_FIELDS = ("point", "params", "theorem_id", "certificate_satisfied", "verified_pass",
                "agree", "extremal_value", "witness_re", "witness_im")


def run_sweep(sweep: SweepSpec, out: IO[str], err: IO[str] | None = None) -> int:
    err = err or sys.stderr
    labels = [a.label for a in sweep.axes]
    fields = ["point", *labels, *SWEEP_FIELDS[1:]]
    writer = None
    if sweep.output == "csv":
        writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        out.flush()

    jobs = [(sweep.params_at(pt), sweep.theorem_ids, sweep.grid) for pt in sweep.points]
    counts = {"checked": 0, "satisfied": 0, "verified": 0, "disagreements": 0}
    status: list[list[str]] = [[] for _ in sweep.theorem_ids]
    disagreements: list[str] = []
    code = EXIT_OK

    if sweep.jobs > 1:
        pool = ProcessPoolExecutor(sweep.jobs)
        results = pool.map(_sweep_point, jobs)
    else:
        pool = None
        results = map(_sweep_point, jobs)
    try:
        for i, (pt, (params, _, _), agreements) in enumerate(zip(sweep.points, jobs, results)):
            axes = dict(zip(labels, pt))
            per_theorem = {}
            for row_idx, ag in enumerate(agreements):
                tid = ag.certificate.theorem_id
                sat, ver = ag.certificate.satisfied, ag.report.passed
                counts["checked"] += 1
                counts["satisfied"] += sat
                counts["verified"] += ver
                status[row_idx].append("DISAGREE" if not ag.agree else
                                       "both" if sat else "verified only" if ver else "neither")
                if not ag.agree:
                    counts["disagreements"] += 1
                    disagreements.append(jsonfmt.dumps({"point": i, "axes": axes, **ag.to_dict()}))
                    print(f"leroy-atlas: DISAGREEMENT {tid} at {params}: witness {ag.report.witness}", file=err)
                per_theorem[tid] = {
                    "certificate_satisfied": sat, "verified_pass": ver, "agree": ag.agree,
                    "extremal_value": ag.report.extremal_value,
                }
                if writer is not None:
                    w = ag.report.witness
                    writer.writerow({
                        "point": i, **{k: _fmt12(v) for k, v in axes.items()}, "params": str(params),
                        "theorem_id": tid, "certificate_satisfied": sat, "verified_pass": ver,
                        "agree": ag.agree, "extremal_value": _fmt12(ag.report.extremal_value),
                        "witness_re": "" if w is None else _fmt12(w.real),
                        "witness_im": "" if w is None else _fmt12(w.imag),
                    })
            if writer is None:
                _emit_json({"point": i, "axes": axes, "params": params.to_list(), "results": per_theorem}, out)
            out.flush()
    except LeRoyError as exc:
        print(f"leroy-atlas: sweep aborted: {exc}", file=err)
        code = EXIT_COMPUTE
    finally:
        if pool is not None:
            pool.shutdown()

    sweep.witness_file.write_text("".join(d + "\n" for d in disagreements))
    if sweep.figure is not None and code == EXIT_OK:
        from leroyatlas.plotting import sweep_figure

        point_labels = [",".join(f"{k}={v:g}" for k, v in zip(labels, pt)) or "base" for pt in sweep.points]
        sweep_figure(point_labels, sweep.theorem_ids, status, sweep.figure)
    err.write("summary " + jsonfmt.dumps(counts) + "\n")
    return code


def cmd_sweep(args: argparse.Namespace, out: IO[str]) -> int:
    return run_sweep(sweep_from_args(args), out)


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "verify": cmd_verify, "sweep": cmd_sweep, "radius": cmd_radius}


def main(argv: Sequence[str] | None = None, out: IO[str] | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"leroy-atlas: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArityError as exc:
        print(f"leroy-atlas: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except LeRoyError as exc:
        print(f"leroy-atlas: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
