"""Command line: ``ppfd synth``, ``ppfd evaluate``, ``ppfd compare``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
from datetime import timedelta
from pathlib import Path

from . import __version__
from .evaluation import (MODEL_KINDS, SCHEMA_VERSION, ExperimentConfig,
                         ExperimentError, run_experiment)
from .persistence import save_model
from .series import (SeriesError, linear_interpolate, parse_duration,
                     parse_instant, read_csv, truncate_after, write_csv)
from .synth import SynthSpec, generate, summary

log = logging.getLogger("ppfd")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

OUTPUT_DIR_ENV = "PPFD_OUTPUT_DIR"

TABLE_COLUMNS = ["Model", "c", "RMSE", "RWSE", "Peak RMSE", "Peak RWSE",
                 "Under Predicted", "Over Predicted"]
MODEL_LABELS = {"ann": "ANN", "arima": "ARIMA", "fourier": "FOURIER",
                "ppfd-ann": "PPFD with ANN", "ppfd-arima": "PPFD with ARIMA"}


class UsageError(Exception):
    pass


def _output_dir():
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _component(text):
    try:
        period, amp = text.split(":")
        return float(period), float(amp)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"component must be PERIOD:AMPLITUDE, got {text!r}") from None


def _order(text):
    try:
        p, q = (int(v) for v in text.split(","))
        return p, q
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"order must be P,Q, got {text!r}") from None


def _duration(text):
    try:
        return parse_duration(text)
    except SeriesError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ppfd", description="Peak-oriented forecasting with Fourier "
        "seasonal decomposition.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write the synthetic trend + sines CSV")
    p.add_argument("--out", type=Path, default=None,
                   help=f"output CSV (default ${OUTPUT_DIR_ENV}/synthetic.csv)")
    p.add_argument("--n", type=int, default=SynthSpec.n)
    p.add_argument("--slope", type=float, default=SynthSpec.slope)
    p.add_argument("--intercept", type=float, default=SynthSpec.intercept)
    p.add_argument("--component", type=_component, action="append",
                   metavar="PERIOD:AMPLITUDE",
                   help="sine component; repeat to add more. Replaces the "
                   "default weekly/monthly/yearly set when given")
    p.add_argument("--start", default="2000-01-01",
                   help="timestamp of the first sample (ISO-8601)")
    p.add_argument("--step", type=_duration, default=timedelta(days=1))
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("evaluate",
                       help="forward-chaining evaluation of one model")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out", type=Path, default=None,
                   help="report JSON (default "
                   f"${OUTPUT_DIR_ENV}/<input>-<model>.json)")
    p.add_argument("--model", choices=MODEL_KINDS, default="ppfd-ann")
    p.add_argument("-c", "--components", dest="c", type=int, default=3,
                   help="seasonal components extracted (ppfd models)")
    p.add_argument("--window", type=int, default=None,
                   help="input window (default 7 for daily, 24 for hourly)")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=_duration, default=None,
                   help="sampling step, e.g. 1d or 1h; required for integer "
                   "timestamps")
    p.add_argument("--interpolate", action=argparse.BooleanOptionalAction,
                   default=True, help="fill interior gaps linearly")
    p.add_argument("--truncate-after", default=None, metavar="INSTANT",
                   help="drop samples after this timestamp")
    p.add_argument("--arima-order", type=_order, default=None, metavar="P,Q",
                   help="fixed ARIMA orders instead of AIC selection")
    p.add_argument("--max-p", type=int, default=5)
    p.add_argument("--max-q", type=int, default=5)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--solver", choices=("gd", "lbfgs"), default="gd")
    p.add_argument("--jobs", type=int, default=1,
                   help="folds evaluated in parallel")
    p.add_argument("--plot-data", type=Path, default=None,
                   help="write index,actual,forecast,is_peak for the last fold")
    p.add_argument("--save-model", type=Path, default=None,
                   help="write the last fold's fitted model as JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="tabulate evaluation reports")
    p.add_argument("reports", type=Path, nargs="+")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", type=Path, default=None,
                   help="write the table here instead of stdout")
    p.set_defaults(func=cmd_compare)
    return parser


def _dump_json(doc, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def cmd_synth(args):
    components = (tuple(args.component) if args.component
                  else SynthSpec.__dataclass_fields__["components"].default)
    try:
        spec = SynthSpec(args.n, args.slope, args.intercept, components)
        origin = parse_instant(args.start)
    except (ValueError, SeriesError) as exc:
        raise UsageError(str(exc)) from exc
    if isinstance(origin, int):
        series = generate(spec, origin=origin, step=1)
    else:
        series = generate(spec, origin=origin, step=args.step)
    out = args.out or _output_dir() / "synthetic.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(series, out)
    stats = summary(series)
    print(json.dumps({"output": str(out), **stats}, indent=2))
    return EXIT_OK


def _default_window(step):
    if isinstance(step, timedelta):
        if step == timedelta(hours=1):
            return 24
    return 7


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_plot_data(fold, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    peaks = set(fold.peaks.tolist())
    start = fold.validate[0]
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "actual", "forecast", "is_peak"])
        for i, (a, f) in enumerate(zip(fold.actual, fold.forecast)):
            w.writerow([start + i, repr(float(a)), repr(float(f)),
                        int(i in peaks)])


def cmd_evaluate(args):
    if not args.input.is_file():
        raise FileNotFoundError(f"input file not found: {args.input}")
    series, gaps = read_csv(args.input, step=args.step)
    if isinstance(series.origin, int) and args.step is None:
        raise UsageError("integer timestamps need --step (e.g. --step 1d)")
    if gaps:
        if not args.interpolate:
            raise SeriesError(f"{args.input}: {gaps.missing} missing samples "
                              "and --no-interpolate given")
        log.info("interpolating %d missing samples in %d gaps",
                 gaps.missing, len(gaps))
        series = linear_interpolate(series, gaps)
    if args.truncate_after is not None:
        series = truncate_after(series, parse_instant(args.truncate_after))
    nominal = args.step if args.step is not None else series.step
    window = args.window or _default_window(nominal)
    try:
        config = ExperimentConfig(
            model=args.model, c=args.c, window=window, alpha=args.alpha,
            folds=args.folds, arima_order=args.arima_order, max_p=args.max_p,
            max_q=args.max_q, learning_rate=args.learning_rate,
            epochs=args.epochs, solver=args.solver, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = run_experiment(series, config, n_jobs=args.jobs)

    out = args.out or _output_dir() / f"{args.input.stem}-{args.model}.json"
    outputs = {"report": str(out)}
    if args.plot_data:
        _write_plot_data(report.fold_results[-1], args.plot_data)
        outputs["plot_data"] = str(args.plot_data)
    if args.save_model:
        args.save_model.parent.mkdir(parents=True, exist_ok=True)
        save_model(report.fold_results[-1].model, args.save_model)
        outputs["model"] = str(args.save_model)
    cfg = report.to_dict()["config"]
    manifest = {
        "tool_version": __version__,
        "input": {"path": str(args.input), "sha256": _sha256(args.input),
                  "n_samples": len(series), "interpolated": gaps.missing
                  if args.interpolate else 0},
        "outputs": outputs,
        "config_hash": hashlib.sha256(json.dumps(
            cfg, sort_keys=True).encode()).hexdigest()[:16],
    }
    _dump_json(report.to_dict(extra={"manifest": manifest}), out)
    avg = report.averaged
    print(f"{MODEL_LABELS[args.model]}: RMSE {avg.rmse:.5f}  RWSE "
          f"{avg.rwse:.5f}  Peak RMSE {avg.peak_rmse:.5f}  Peak RWSE "
          f"{avg.peak_rwse:.5f}  under {avg.under_predicted}  over "
          f"{avg.over_predicted}  -> {out}")
    return EXIT_OK


def _fmt(v):
    return "" if v is None else f"{v:.5f}"


def table_rows(docs):
    rows = []
    for doc in docs:
        cfg, avg = doc["config"], doc["averaged"]
        c = cfg.get("c") if cfg["model"].startswith("ppfd") else None
        rows.append([MODEL_LABELS.get(cfg["model"], cfg["model"]),
                     "" if c is None else str(c),
                     _fmt(avg["rmse"]), _fmt(avg["rwse"]),
                     _fmt(avg["peak_rmse"]), _fmt(avg["peak_rwse"]),
                     str(avg["under_predicted"]), str(avg["over_predicted"])])
    return rows


def cmd_compare(args):
    docs = []
    for path in args.reports:
        doc = json.loads(path.read_text(encoding="utf-8"))
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaError(f"{path}: schema_version {version!r}, "
                              f"expected {SCHEMA_VERSION}")
        docs.append(doc)
    rows = table_rows(docs)
    alphas = sorted({d["config"]["alpha"] for d in docs})
    note = (f"warning: reports use different alpha values: "
            f"{', '.join(map(str, alphas))}" if len(alphas) > 1 else None)
    if args.format == "csv":
        lines = [",".join(TABLE_COLUMNS)] + [",".join(r) for r in rows]
        if note:
            lines.append(f"# {note}")
    else:
        widths = [max(len(h), *(len(r[i]) for r in rows))
                  for i, h in enumerate(TABLE_COLUMNS)]
        fmt = lambda r: "  ".join(v.ljust(w) if i == 0 else v.rjust(w)
                                  for i, (v, w) in enumerate(zip(r, widths)))
        lines = [fmt(TABLE_COLUMNS), "  ".join("-" * w for w in widths)]
        lines += [fmt(r) for r in rows]
        if note:
            lines += ["", note]
    text = "\n".join(lines) + "\n"
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


class SchemaError(ValueError):
    pass


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"ppfd: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SeriesError, SchemaError, ExperimentError, ValueError,
            ArithmeticError) as exc:
        print(f"ppfd: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
