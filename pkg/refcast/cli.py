"""The ``refcast`` command line.

Every subcommand exits 0 on success, 2 when an input cannot be read and 3
when a model or validation rule rejects it. Data goes to stdout (or
``--out``), diagnostics to stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from .exceptions import IngestError, InputError, RefcastError
from .fixtures import DIAMER_BHASHA, fixture_path
from .lmm.builder import ModelSpecBuilder
from .lmm.fit import fit_spec
from .lmm.stepwise import stepwise
from .dammodels.descriptor import load_descriptor
from .dammodels.published import PublishedModelEnum, published_model_id, prediction_surface, predict_published
from .dammodels.report import forecast_report
from .rcf.benchmarks import LargeDamSummary, compare_asset_classes, load_benchmarks
from .rcf.describe import describe
from .rcf.uplift import DEFAULT_RISKS, UpliftCurve
from .refdata.ingest import ingest_macro_csv, ingest_reference_csv, write_reference_csv
from .stats.density import kde_density
from .synth.generator import gen_reference_class, write_synth_bundle
from .synth.spec import SynthSpec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3

SURFACE_MONTHS = tuple(range(24, 241, 12))
SURFACE_INFLATION = (2.0, 5.0, 10.0, 20.0, 40.0)


def _risk(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid risk {text!r}")
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"risk must be within (0, 1), got {text}")
    return value


# --------------------------- Output --------------------------- #
def _dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2)


def _write(args: argparse.Namespace, text: str):
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        print(text)


def _write_frame(args: argparse.Namespace, rows: Sequence[Dict[str, Any]] | Sequence[Sequence[Any]], columns=None):
    frame = pd.DataFrame(list(rows), columns=columns)
    _write(args, frame.to_csv(index=False, lineterminator="\n").rstrip("\n"))


def _load_reference(args: argparse.Namespace):
    if getattr(args, "builtin", False) or not args.refclass:
        return LargeDamSummary.load()
    rc, diagnostics = ingest_reference_csv(args.refclass, strict=args.strict)
    for d in diagnostics:
        print(str(d), file=sys.stderr)
    return rc


def _curves(reference) -> Dict[str, UpliftCurve]:
    if isinstance(reference, LargeDamSummary):
        return {"cost": reference.cost_curve(), "schedule": reference.schedule_curve()}
    return {"cost": UpliftCurve(reference.cost_distribution()), "schedule": UpliftCurve(reference.schedule_distribution())}


# --------------------------- Subcommands --------------------------- #
def cmd_ingest(args: argparse.Namespace) -> int:
    rc, diagnostics = ingest_reference_csv(args.refclass, strict=args.strict)
    macro_diagnostics = []
    n_countries = None
    if args.macro:
        macro, macro_diagnostics = ingest_macro_csv(args.macro, strict=args.strict)
        n_countries = len(macro)
    for d in diagnostics + macro_diagnostics:
        print(str(d), file=sys.stderr)
    if args.out:
        write_reference_csv(rc, args.out)

    summary = {
        "records": len(rc),
        "observations": len(rc.observations),
        "diagnostics": [d.to_dict() for d in diagnostics],
        "macro_countries": n_countries,
        "macro_diagnostics": [d.to_dict() for d in macro_diagnostics],
    }
    if args.format == "json":
        print(_dumps(summary))
    elif args.format == "csv":
        if not args.out:
            write_reference_csv(rc, sys.stdout)
    else:
        lines = [
            f"records accepted: {len(rc)}",
            f"observations: {len(rc.observations)}",
            f"diagnostics: {len(diagnostics)}",
        ]
        if n_countries is not None:
            lines.append(f"macro countries: {n_countries}, diagnostics: {len(macro_diagnostics)}")
        print("\n".join(lines))
    return EXIT_OK


def cmd_describe(args: argparse.Namespace) -> int:
    rc, diagnostics = ingest_reference_csv(args.refclass, strict=args.strict)
    for d in diagnostics:
        print(str(d), file=sys.stderr)
    description = describe(rc)
    if args.format == "json":
        _write(args, _dumps(description.to_dict()))
    elif args.format == "csv":
        _write_frame(args, [r.to_dict() for r in description.regions])
    else:
        _write(args, description.to_text())
    return EXIT_OK


def cmd_rcf(args: argparse.Namespace) -> int:
    reference = _load_reference(args)
    curve = _curves(reference)[args.kind]
    if args.density:
        rows = kde_density(curve.source.sample, args.grid_points)
        header = ("x", "density")
    else:
        rows = curve.table(args.risk or DEFAULT_RISKS)
        header = ("acceptable_risk", "uplift_pct")
    if args.format == "json":
        _write(args, _dumps({"source": curve.source.label, "kind": args.kind, "rows": [dict(zip(header, r)) for r in rows]}))
    elif args.format == "csv":
        _write_frame(args, rows, list(header))
    else:
        lines = [curve.source.label, f"{header[0]:>16} {header[1]:>12}"]
        lines.extend(f"{x:>16.4g} {y:>12.4g}" for x, y in rows)
        _write(args, "\n".join(lines))
    return EXIT_OK


def _load_spec(path: str):
    try:
        with open(path, "r", encoding="utf-8") as f:
            cfg = json.load(f)
        return ModelSpecBuilder().from_dict(cfg).build()
    except OSError as e:
        raise InputError(f"cannot read model spec {path}: {e}")
    except (json.JSONDecodeError, TypeError, AttributeError) as e:
        raise InputError(f"invalid model spec {path}: {e}")


def cmd_fit(args: argparse.Namespace) -> int:
    rc, diagnostics = ingest_reference_csv(args.refclass, strict=args.strict)
    macro, macro_diagnostics = ingest_macro_csv(args.macro, strict=args.strict)
    for d in diagnostics + macro_diagnostics:
        print(str(d), file=sys.stderr)
    spec = _load_spec(args.spec)

    trace = []
    if args.stepwise:
        spec, trace = stepwise(rc, macro, spec, alpha=args.alpha, method=args.method)
        for step in trace:
            print(f"stepwise: removed {step.term} (p = {step.p_value:.4g})", file=sys.stderr)
    model = fit_spec(rc, macro, spec, method=args.method)

    if args.out:
        Path(args.out).write_text(model.to_json() + "\n", encoding="utf-8")
    if args.format == "json":
        data = model.to_dict()
        if args.stepwise:
            data["stepwise_trace"] = [s.to_dict() for s in trace]
        print(_dumps(data))
    elif args.format == "csv":
        print(pd.DataFrame(model.coefficient_table()).to_csv(index=False, lineterminator="\n").rstrip("\n"))
    else:
        print(model.format_table())
    return EXIT_OK


def _model_ids(models: Optional[List[str]]) -> List[PublishedModelEnum]:
    return [published_model_id(m) for m in models] if models else list(PublishedModelEnum)


def cmd_predict(args: argparse.Namespace) -> int:
    descriptor = load_descriptor(args.descriptor)
    if args.surface:
        rows = prediction_surface(
            PublishedModelEnum.M1_COST_OVERRUN,
            descriptor,
            "estimated_schedule_months",
            SURFACE_MONTHS,
            "long_term_inflation",
            SURFACE_INFLATION,
        )
        if args.format == "json":
            _write(args, _dumps(rows))
        else:
            _write_frame(args, rows)
        return EXIT_OK

    predictions = [predict_published(m, descriptor) for m in _model_ids(args.models)]
    if args.format == "json":
        _write(args, _dumps([p.to_dict() for p in predictions]))
    elif args.format == "csv":
        _write_frame(args, [{k: v for k, v in p.to_dict().items() if k != "caveats"} for p in predictions])
    else:
        lines = [f"Published model predictions for {descriptor.name} (fixed effects only)"]
        for p in predictions:
            shown = f"{p.overrun_pct:.1f} % over" if p.is_ratio else f"{p.value:.1f} months"
            lines.append(f"  {p.model_id.value:<20} {p.response} = {p.linear_predictor:.4f} -> {shown}")
            lines.extend(f"    note: {c}" for c in p.caveats)
        _write(args, "\n".join(lines))
    return EXIT_OK


def cmd_forecast(args: argparse.Namespace) -> int:
    descriptor = load_descriptor(args.descriptor)
    reference = _load_reference(args)
    reports = [
        forecast_report(descriptor, reference, risk, models=args.models) for risk in (args.risk or [0.2])
    ]
    if args.format == "json":
        _write(args, _dumps([r.to_dict() for r in reports]))
    elif args.format == "csv":
        rows = [
            (r.rcf_branch.acceptable_risk if r.rcf_branch else None, section, key, value)
            for r in reports
            for section, key, value in r.to_csv_rows()
        ]
        _write_frame(args, rows, ["acceptable_risk", "section", "quantity", "value"])
    else:
        _write(args, "\n\n".join(r.to_text() for r in reports))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(n_countries=args.countries, projects_per_country=args.per_country, seed=args.seed)
    rc, truth = gen_reference_class(spec)
    if args.out:
        refclass_path, macro_path = write_synth_bundle(rc, truth.macro, args.out)
        (Path(args.out) / "truth.json").write_text(_dumps(truth.to_dict()) + "\n", encoding="utf-8")
        print(f"wrote {refclass_path} and {macro_path}", file=sys.stderr)
    if args.format == "json":
        print(_dumps(truth.to_dict()))
    elif args.format == "csv":
        if not args.out:
            write_reference_csv(rc, sys.stdout)
    else:
        print(f"{len(rc)} records in {spec.n_countries} countries, seed {spec.seed} ({truth.generator})")
        for name, b in zip(truth.column_names, truth.beta):
            print(f"  {name:<30} {b:g}")
        print(f"  group variance {truth.sigma2_group:g}, residual variance {truth.sigma2_resid:g}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    reference = _load_reference(args)
    curve = _curves(reference)["cost"]
    rows = [b.to_dict() for b in compare_asset_classes(load_benchmarks(), curve)]
    if args.format == "json":
        _write(args, _dumps(rows))
    elif args.format == "csv":
        _write_frame(args, rows)
    else:

        def pct(value):
            return "" if value is None else f"{value:.0f}"

        lines = [f"{'Category':<28} {'Mean %':>7} {'P50 %':>7} {'P80 %':>7}"]
        for r in rows:
            lines.append(
                f"{r['category']:<28} {pct(r['mean_overrun_pct']):>7} {pct(r['p50_uplift_pct']):>7} "
                f"{pct(r['p80_uplift_pct']):>7}"
            )
        _write(args, "\n".join(lines))
    return EXIT_OK


# --------------------------- Parser --------------------------- #
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text", help="Output format")
    common.add_argument("--out", default=None, help="Output file (directory for synth)")
    common.add_argument("--seed", type=int, default=0, help="Seed for synthetic data")
    common.add_argument("--strict", action="store_true", help="Fail on any ingest diagnostic")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    parser = argparse.ArgumentParser(prog="refcast", description="Reference class forecasting for large dams")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="Validate a reference class CSV")
    p.add_argument("refclass")
    p.add_argument("--macro", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("describe", parents=[common], help="Descriptive statistics of a reference class")
    p.add_argument("refclass")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("rcf", parents=[common], help="Export an uplift curve or density trace")
    p.add_argument("refclass", nargs="?")
    p.add_argument("--builtin", action="store_true", help="Use the bundled large-dam distributions")
    p.add_argument("--kind", choices=("cost", "schedule"), default="cost")
    p.add_argument("--risk", type=_risk, nargs="+", default=None)
    p.add_argument("--density", action="store_true")
    p.add_argument("--grid-points", type=int, default=512)
    p.set_defaults(func=cmd_rcf)

    p = sub.add_parser("fit", parents=[common], help="Fit a random-intercept model")
    p.add_argument("refclass")
    p.add_argument("macro")
    p.add_argument("spec", help="Model spec JSON")
    p.add_argument("--method", choices=("reml", "ml"), default="reml")
    p.add_argument("--stepwise", action="store_true")
    p.add_argument("--alpha", type=_risk, default=0.05)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", parents=[common], help="Evaluate the published models")
    p.add_argument("descriptor", nargs="?", default=str(fixture_path(DIAMER_BHASHA)))
    p.add_argument("--models", nargs="+", default=None)
    p.add_argument("--surface", action="store_true", help="Cost overrun against duration and inflation")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("forecast", parents=[common], help="Two-pronged forecast of a project")
    p.add_argument("descriptor")
    p.add_argument("refclass", nargs="?")
    p.add_argument("--builtin", action="store_true")
    p.add_argument("--risk", type=_risk, nargs="+", default=None)
    p.add_argument("--models", nargs="+", default=None)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("synth", parents=[common], help="Generate a synthetic reference class")
    p.add_argument("--countries", type=int, default=60)
    p.add_argument("--per-country", type=int, default=4)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", parents=[common], help="Compare with other asset classes")
    p.add_argument("refclass", nargs="?")
    p.add_argument("--builtin", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)
    logging.captureWarnings(True)

    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        if isinstance(e, IngestError):
            for d in e.diagnostics:
                print(f"  {d}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (RefcastError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
