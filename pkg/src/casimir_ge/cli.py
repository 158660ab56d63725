"""Command line interface: ``casimir-ge {force,sweep,compare,table1}``.

Separations and the lens radius are given in micrometres, temperature in
kelvin; forces are reported as magnitudes in piconewtons.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
non-convergence, 3 mismatch against the published table (``table1 --check``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from . import golden
from .dielectric import (
    GE_ELECTRONS,
    GE_HOLES,
    GE_OSCILLATOR,
    MODEL_NAMES,
    CarrierSpecies,
    OscillatorModel,
    ge_model,
)
from .engine import ConvergenceError, EngineConfig, ForceResult, model_difference, sweep
from .quantities import Geometry

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_MISMATCH = 0, 1, 2, 3

CSV_FIELDS = ("a_um", "model", "force_pN", "converged", "l_used", "rel_err_est")
FORMATS = ("table", "csv", "json")
UM = 1.0e-6
PN = 1.0e12


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    separations_um: list[float] = field(default_factory=lambda: [1.0])
    R_um: float = golden.RADIUS_M / UM
    T: float = golden.TEMPERATURE_K
    models: list[str] = field(default_factory=lambda: list(MODEL_NAMES))
    osc: OscillatorModel = GE_OSCILLATOR
    electrons: CarrierSpecies = GE_ELECTRONS
    holes: CarrierSpecies = GE_HOLES
    engine: EngineConfig = field(default_factory=EngineConfig)
    format: str = "table"
    output: str | None = None
    precision: int = 2
    verbose: bool = False
    workers: int = 1

    def build_models(self) -> dict:
        return {name: ge_model(name, self.osc, self.electrons, self.holes) for name in self.models}


def parse_models(spec) -> list[str]:
    if isinstance(spec, str):
        names = [s.strip() for s in spec.split(",") if s.strip()]
    else:
        names = [str(s).strip() for s in spec]
    if names == ["all"]:
        return list(MODEL_NAMES)
    if not names:
        raise UsageError("model list is empty")
    for name in names:
        if name not in MODEL_NAMES:
            raise UsageError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)} or 'all'")
    if len(set(names)) != len(names):
        raise UsageError("model list contains duplicates")
    return names


def parse_range(spec) -> list[float]:
    """``start:stop:step`` (inclusive of stop) or a 3-sequence, in micrometres."""
    try:
        if isinstance(spec, str):
            start, stop, step = (float(x) for x in spec.split(":"))
        else:
            start, stop, step = (float(x) for x in spec)
    except (TypeError, ValueError):
        raise UsageError(f"bad separation range {spec!r}; expected start:stop:step") from None
    if not (start > 0.0 and step > 0.0 and stop >= start):
        raise UsageError("separation range must be ascending with positive start and step")
    n = int(round((stop - start) / step))
    if start + n * step > stop * (1.0 + 1.0e-12):
        n -= 1
    # rounded so that 0.6 + 3*0.1 prints as 0.9
    return [round(start + i * step, 12) for i in range(n + 1)]


def _species(base: CarrierSpecies, data: dict) -> CarrierSpecies:
    unknown = set(data) - {"density", "mass_ratio", "gamma"}
    if unknown:
        raise UsageError(f"unknown carrier keys: {sorted(unknown)}")
    return CarrierSpecies(**{**asdict(base), **data})


_CONFIG_KEYS = {"a_um", "a_range_um", "R_um", "T", "models", "material", "engine", "format", "output", "precision", "workers"}


def load_config(path: str | Path) -> RunConfig:
    """Read a JSON run configuration; every key is optional."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return config_from_dict(data)


def config_from_dict(data: dict) -> RunConfig:
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig()
    try:
        if "a_um" in data:
            cfg.separations_um = [float(data["a_um"])]
        if "a_range_um" in data:
            cfg.separations_um = parse_range(data["a_range_um"])
        if "R_um" in data:
            cfg.R_um = float(data["R_um"])
        if "T" in data:
            cfg.T = float(data["T"])
        if "models" in data:
            cfg.models = parse_models(data["models"])
        material = data.get("material", {})
        bad = set(material) - {"eps_inf", "eps_0", "omega_0", "electrons", "holes"}
        if bad:
            raise UsageError(f"unknown material keys: {sorted(bad)}")
        osc_keys = {k: material[k] for k in ("eps_inf", "eps_0", "omega_0") if k in material}
        cfg.osc = OscillatorModel(**{**asdict(GE_OSCILLATOR), **osc_keys})
        cfg.electrons = _species(GE_ELECTRONS, material.get("electrons", {}))
        cfg.holes = _species(GE_HOLES, material.get("holes", {}))
        cfg.engine = EngineConfig(**data.get("engine", {}))
        for key in ("format", "output"):
            if key in data:
                setattr(cfg, key, data[key])
        if "precision" in data:
            cfg.precision = int(data["precision"])
        if "workers" in data:
            cfg.workers = int(data["workers"])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None
    if cfg.format not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}")
    return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--model", help="comma separated model names, or 'all'")
    common.add_argument("--a", type=float, help="separation in um")
    common.add_argument("--a-range", help="separations start:stop:step in um")
    common.add_argument("--R", type=float, help="lens radius in um (default 151000)")
    common.add_argument("--T", type=float, help="temperature in K (default 300)")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--precision", type=int, help="decimals in the human table (default 2)")
    common.add_argument("--rel-tol", type=float)
    common.add_argument("--y-tail-cut", type=float)
    common.add_argument("--l-max", type=int)
    common.add_argument("--quadrature", choices=("qags", "gk21", "gk15"))
    common.add_argument("--workers", type=int, help="evaluate sweep points concurrently")
    common.add_argument("--verbose", action="store_true")

    parser = _Parser(prog="casimir-ge", description="Thermal Casimir force between a Ge lens and a Ge plate.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("force", parents=[common], help="force at one separation")
    sub.add_parser("sweep", parents=[common], help="force over a range of separations")
    sub.add_parser("compare", parents=[common], help="model comparison with ordering checks")
    t1 = sub.add_parser("table1", parents=[common], help="recompute the published table")
    t1.add_argument("--check", action="store_true", help="exit 3 if any value misses its tolerance")
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.command == "table1":
        cfg.separations_um = list(golden.SEPARATIONS_UM)
        cfg.models = list(MODEL_NAMES)
    if args.model is not None:
        cfg.models = parse_models(args.model)
    if args.a is not None and args.a_range is not None:
        raise UsageError("give either --a or --a-range, not both")
    if args.a is not None:
        cfg.separations_um = [args.a]
    if args.a_range is not None:
        cfg.separations_um = parse_range(args.a_range)
    if args.R is not None:
        cfg.R_um = args.R
    if args.T is not None:
        cfg.T = args.T
    for attr in ("format", "output", "precision", "workers"):
        value = getattr(args, attr)
        if value is not None:
            setattr(cfg, attr, value)
    cfg.verbose = args.verbose
    overrides = {
        "rel_tol": args.rel_tol,
        "y_tail_cut": args.y_tail_cut,
        "l_max_hard": args.l_max,
        "quadrature_rule": args.quadrature,
    }
    try:
        cfg.engine = EngineConfig(**{**asdict(cfg.engine), **{k: v for k, v in overrides.items() if v is not None}})
        for a in cfg.separations_um:
            Geometry(a * UM, cfg.R_um * UM, cfg.T)
        if cfg.T <= 0.0:
            raise ValueError("temperature must be positive")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.command == "force" and len(cfg.separations_um) != 1:
        raise UsageError("force takes a single separation; use sweep for a range")
    if args.command == "compare" and len(cfg.models) < 2:
        raise UsageError("compare needs at least two models")
    if cfg.precision < 0:
        raise UsageError("precision must be non-negative")
    return cfg


def compute(cfg: RunConfig) -> dict[str, list[ForceResult]]:
    """Forces for every selected model, each list ordered like ``cfg.separations_um``."""
    separations = [a * UM for a in cfg.separations_um]
    return {
        name: sweep(model, separations, cfg.R_um * UM, cfg.T, cfg.engine, workers=cfg.workers)
        for name, model in cfg.build_models().items()
    }


# ---------------------------------------------------------------- formatting


def _fmt_a(a_um: float) -> str:
    return repr(a_um)


def csv_rows(cfg: RunConfig, results: dict[str, list[ForceResult]]) -> list[dict]:
    rows = []
    for i, a in enumerate(cfg.separations_um):
        for name in cfg.models:
            r = results[name][i]
            rows.append(
                {
                    "a_um": _fmt_a(a),
                    "model": name,
                    "force_pN": repr(r.magnitude * PN),
                    "converged": str(r.converged).lower(),
                    "l_used": str(r.l_used),
                    "rel_err_est": repr(r.rel_err_est),
                }
            )
    return rows


def write_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse CSV output back into typed rows."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(
            {
                "a_um": float(row["a_um"]),
                "model": row["model"],
                "force_pN": float(row["force_pN"]),
                "converged": row["converged"] == "true",
                "l_used": int(row["l_used"]),
                "rel_err_est": float(row["rel_err_est"]),
            }
        )
    return out


def typed_rows_to_csv(rows: Sequence[dict]) -> str:
    return write_csv(
        [
            {
                "a_um": _fmt_a(r["a_um"]),
                "model": r["model"],
                "force_pN": repr(r["force_pN"]),
                "converged": str(r["converged"]).lower(),
                "l_used": str(r["l_used"]),
                "rel_err_est": repr(r["rel_err_est"]),
            }
            for r in rows
        ]
    )


def result_to_dict(r: ForceResult, verbose: bool) -> dict:
    d = {
        "a_um": r.geometry.a / UM if r.geometry else None,
        "R_um": r.geometry.R / UM if r.geometry else None,
        "T": r.geometry.T if r.geometry else None,
        "model": r.model,
        "force": r.force,
        "magnitude": r.magnitude,
        "force_pN": r.magnitude * PN,
        "l_used": r.l_used,
        "truncation_bound": r.truncation_bound,
        "quadrature_error": r.quadrature_error,
        "rel_err_est": r.rel_err_est,
        "converged": r.converged,
    }
    if verbose:
        d["terms"] = [asdict(t) for t in r.terms]
    return d


def human_table(cfg: RunConfig, results: dict[str, list[ForceResult]]) -> str:
    p = cfg.precision
    lines = [", ".join(["a_um", *cfg.models])]
    for i, a in enumerate(cfg.separations_um):
        lines.append(", ".join([_fmt_a(a), *(f"{results[m][i].magnitude * PN:.{p}f}" for m in cfg.models)]))
    if cfg.verbose:
        for m in cfg.models:
            for a, r in zip(cfg.separations_um, results[m]):
                lines.append(
                    f"# {m} a={a:g}um: converged={r.converged} l_used={r.l_used} "
                    f"rel_err_est={r.rel_err_est:.2e} truncation_bound={r.truncation_bound:.2e} N"
                )
    return "\n".join(lines) + "\n"


def render(cfg: RunConfig, results: dict[str, list[ForceResult]], extra: dict | None = None) -> str:
    if cfg.format == "csv":
        return write_csv(csv_rows(cfg, results))
    if cfg.format == "json":
        doc = {
            "results": [
                result_to_dict(results[m][i], cfg.verbose) for i in range(len(cfg.separations_um)) for m in cfg.models
            ]
        }
        doc.update(extra or {})
        return json.dumps(doc, indent=2) + "\n"
    return human_table(cfg, results)


# ---------------------------------------------------------------- commands


def table1_diff(results: dict[str, list[ForceResult]]) -> list[dict]:
    rows = []
    for i, a in enumerate(golden.SEPARATIONS_UM):
        for name in MODEL_NAMES:
            computed = results[name][i].magnitude * PN
            ref = golden.TABLE1_PN[name][i]
            rel = (computed - ref) / ref
            tol = golden.TOLERANCE[name]
            rows.append(
                {
                    "a_um": a,
                    "model": name,
                    "computed_pN": round(computed, 6),
                    "published_pN": ref,
                    "rel_diff": rel,
                    "tolerance": tol,
                    "ok": abs(rel) <= tol,
                }
            )
    return rows


def cmd_table1(cfg: RunConfig, check: bool = False) -> tuple[int, str]:
    results = compute(cfg)
    diff = table1_diff(results)
    if cfg.format == "json":
        text = render(cfg, results, {"diff": diff})
    elif cfg.format == "csv":
        text = render(cfg, results)
    else:
        buf = io.StringIO()
        buf.write(human_table(cfg, results))
        buf.write("\n# diff against published values\n")
        fields = ("a_um", "model", "computed_pN", "published_pN", "rel_diff", "tolerance", "ok")
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in diff:
            writer.writerow({**row, "rel_diff": f"{row['rel_diff']:.3e}", "ok": str(row["ok"]).lower()})
        text = buf.getvalue()
    status = EXIT_MISMATCH if check and not all(r["ok"] for r in diff) else EXIT_OK
    return status, text


# Drude versus plasma: "almost identical" threshold on the relative difference
ALMOST_IDENTICAL = 2.0e-4
ORDER = ("neglected", "diffusion", "drude", "plasma")


def ordering_ok(mags: dict[str, float]) -> bool:
    """``|F_neglected| < |F_diffusion| < |F_drude| <= |F_plasma|`` over the models present."""
    chain = [m for m in ORDER if m in mags]
    for lo, hi in zip(chain, chain[1:]):
        if (lo, hi) == ("drude", "plasma"):
            if not mags[lo] <= mags[hi]:
                return False
        elif not mags[lo] < mags[hi]:
            return False
    return True


def comparison(cfg: RunConfig, results: dict[str, list[ForceResult]]) -> dict:
    models = cfg.build_models()
    points = []
    for i, a in enumerate(cfg.separations_um):
        geom = Geometry(a * UM, cfg.R_um * UM, cfg.T)
        mags = {m: results[m][i].magnitude for m in cfg.models}
        pairs = []
        for j, ma in enumerate(cfg.models):
            for mb in cfg.models[j + 1 :]:
                diff = model_difference(models[mb], models[ma], geom, cfg.engine)
                pairs.append(
                    {"a": ma, "b": mb, "diff_pN": diff * PN, "rel_diff_pct": 100.0 * diff / mags[ma]}
                )
        point = {"a_um": a, "force_pN": {m: v * PN for m, v in mags.items()}, "pairs": pairs, "ordering_ok": ordering_ok(mags)}
        if "drude" in mags and "plasma" in mags:
            rel = abs(mags["plasma"] - mags["drude"]) / mags["drude"]
            point["drude_plasma_rel"] = rel
            point["almost_identical_ok"] = rel < ALMOST_IDENTICAL
        points.append(point)
    return {"points": points}


def cmd_compare(cfg: RunConfig) -> tuple[int, str]:
    results = compute(cfg)
    report = comparison(cfg, results)
    if cfg.format == "json":
        return EXIT_OK, render(cfg, results, {"comparison": report})
    if cfg.format == "csv":
        return EXIT_OK, render(cfg, results)
    p = cfg.precision
    lines = [human_table(cfg, results).rstrip("\n"), ""]
    for point in report["points"]:
        for pair in point["pairs"]:
            lines.append(
                f"a={_fmt_a(point['a_um'])}um  |F_{pair['b']}| - |F_{pair['a']}| = {pair['diff_pN']:.{p}f} pN"
                f" ({pair['rel_diff_pct']:+.4f}%)"
            )
    chain = " < ".join(f"|F_{m}|" for m in ORDER if m in cfg.models).replace("|F_drude| < |F_plasma|", "|F_drude| <= |F_plasma|")
    all_ok = all(pt["ordering_ok"] for pt in report["points"])
    lines.append(f"ordering {chain}: {'PASS' if all_ok else 'FAIL'}")
    if all("almost_identical_ok" in pt for pt in report["points"]):
        worst = max(pt["drude_plasma_rel"] for pt in report["points"])
        ok = all(pt["almost_identical_ok"] for pt in report["points"])
        lines.append(
            f"drude vs plasma almost identical: {'PASS' if ok else 'FAIL'} "
            f"(max {100 * worst:.4f}% < {100 * ALMOST_IDENTICAL:.2f}%)"
        )
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_force(cfg: RunConfig) -> tuple[int, str]:
    results = compute(cfg)
    return EXIT_OK, render(cfg, results)


cmd_sweep = cmd_force


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        if args.command == "table1":
            status, text = cmd_table1(cfg, check=args.check)
        elif args.command == "compare":
            status, text = cmd_compare(cfg)
        else:
            status, text = cmd_force(cfg)
    except UsageError as exc:
        print(f"casimir-ge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"casimir-ge: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    _emit(text, cfg.output)
    if status == EXIT_MISMATCH:
        print("casimir-ge: computed values differ from the published table", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
