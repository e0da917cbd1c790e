"""``pupilload`` command line: split estimation, feature extraction, experiments,
fit plots and synthetic data.

Every flag can also be given in a ``key=value`` file passed with ``--config``
(keys use the long flag name, dashes or underscores). Flags on the command
line win over the file, and ``PUPILLOAD_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .distfit import DEFAULT_BINS
from .experiments import (TABLE1_METHODS, TABLE2_METHODS, TABLE2_WINDOWS, TABLE3_HIDDEN,
                          ExperimentConfig, format_table, rows_to_records, run_table1, run_table2,
                          run_table3, split_count_report)
from .features import SegmentDistributionFeatures
from .fitplot import export_fits
from .ingest import (DEFAULT_CONFIDENCE, DEFAULT_RATE_HZ, ManifestEntry, filter_confidence,
                     load_dataset, load_recording, write_manifest, write_recording)
from .learn import TrainingDivergedError
from .segmentation import DEFAULT_SUBSET_FRACTION, MIN_SAMPLES_PER_SEGMENT
from .synth import SynthSpec, generate_dataset

logger = logging.getLogger("pupilload")

EXIT_DATA_ERROR = 2


class DataError(Exception):
    pass


def _csv_list(kind):
    def parse(text):
        items = [s.strip() for s in str(text).split(",") if s.strip()]
        if not items:
            raise argparse.ArgumentTypeError("expected a comma-separated list")
        try:
            return [kind(s) for s in items]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def default_seed() -> int:
    raw = os.environ.get("PUPILLOAD_SEED")
    if raw is None or not raw.strip():
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"pupilload: PUPILLOAD_SEED must be an integer, got {raw!r}")


def read_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _common(p: argparse.ArgumentParser, seed: int) -> None:
    p.add_argument("--seed", type=int, default=seed, help="random seed (default: $PUPILLOAD_SEED or 0)")
    p.add_argument("--config", help="key=value file supplying defaults for any flag")
    p.add_argument("-v", "--verbose", action="store_true")


def _data_flags(p):
    p.add_argument("manifest", help="dataset manifest CSV")
    p.add_argument("--confidence", type=float, default=DEFAULT_CONFIDENCE,
                   help="drop samples below this tracker confidence")
    p.add_argument("--rate", type=float, default=DEFAULT_RATE_HZ, help="nominal sampling rate (Hz)")


def _split_flags(p, with_k=True):
    if with_k:
        p.add_argument("--k", type=int, default=None, help="fixed segment count (skips estimation)")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS, help="histogram bins on [0, 1]")
    p.add_argument("--k-max", type=int, default=30, help="largest segment count searched")
    p.add_argument("--subset-fraction", type=float, default=DEFAULT_SUBSET_FRACTION,
                   help="fraction of training recordings searched for k")
    p.add_argument("--min-samples", type=int, default=MIN_SAMPLES_PER_SEGMENT,
                   help="minimum samples per segment")


def build_parser(seed: int | None = None) -> argparse.ArgumentParser:
    seed = default_seed() if seed is None else seed
    parser = argparse.ArgumentParser(prog="pupilload", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate-splits", help="estimate the segment count k on a training split")
    _data_flags(p)
    _split_flags(p, with_k=False)
    _common(p, seed)

    p = sub.add_parser("extract", help="write the segment-distribution feature of every recording")
    _data_flags(p)
    _split_flags(p)
    p.add_argument("--out", default="features.csv", help="output CSV")
    p.add_argument("--baseline", action="store_true", help="also append pupil mean/std/skew/kurtosis")
    _common(p, seed)

    p = sub.add_parser("table1", help="whole-recording classification")
    _data_flags(p)
    _split_flags(p)
    p.add_argument("--methods", type=_csv_list(str), default=list(TABLE1_METHODS))
    p.add_argument("--csv", default="table1.csv", help="machine-readable results")
    _common(p, seed)

    p = sub.add_parser("table2", help="sliding-window classification")
    _data_flags(p)
    _split_flags(p)
    p.add_argument("--windows", type=_csv_list(float), default=list(TABLE2_WINDOWS),
                   help="window lengths in seconds")
    p.add_argument("--methods", type=_csv_list(str), default=list(TABLE2_METHODS))
    p.add_argument("--csv", default="table2.csv")
    _common(p, seed)

    p = sub.add_parser("table3", help="TLX score regression with small neural networks")
    _data_flags(p)
    _split_flags(p)
    p.add_argument("--hidden", type=_csv_list(int), default=list(TABLE3_HIDDEN))
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--csv", default="table3.csv")
    _common(p, seed)

    p = sub.add_parser("plot-fits", help="per-segment histogram and fitted densities")
    p.add_argument("recording", help="recording CSV (t,diameter[,confidence])")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--min-samples", type=int, default=MIN_SAMPLES_PER_SEGMENT)
    p.add_argument("--confidence", type=float, default=DEFAULT_CONFIDENCE)
    p.add_argument("--out", default="fits", help="output directory")
    _common(p, seed)

    p = sub.add_parser("synth", help="write a synthetic labelled dataset and its manifest")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--n-per-class", type=int, default=40)
    p.add_argument("--duration", type=float, default=60.0, help="seconds per recording")
    p.add_argument("--rate", type=float, default=DEFAULT_RATE_HZ)
    _common(p, seed)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            values = read_config(args.config)
        except OSError as exc:
            parser.error(f"cannot read config: {exc}")
        except DataError as exc:
            parser.error(str(exc))
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            parser.error(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        # string defaults pass through each argument's type converter
        subparser.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def _config_header(args) -> str:
    skip = {"command", "verbose"}
    items = [f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in skip]
    return f"# pupilload {args.command} " + " ".join(items)


def _experiment_config(args) -> ExperimentConfig:
    if args.k_max < 1:
        raise DataError(f"--k-max must be >= 1, got {args.k_max}")
    return ExperimentConfig(seed=args.seed, k=getattr(args, "k", None), bins=args.bins,
                            k_max=args.k_max, subset_fraction=args.subset_fraction,
                            min_samples=args.min_samples)


def _load(args):
    return load_dataset(args.manifest, args.confidence, args.rate)


def _write_records(records, path) -> None:
    if not path:
        return
    cols = list(dict.fromkeys(k for r in records for k in r))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(records)
    logger.info("wrote %s", path)


def cmd_estimate_splits(args) -> int:
    est = split_count_report(_load(args), _experiment_config(args))
    print(format_table([{"recording": r, "k_opt": k} for r, k in est.optima.items()]))
    if est.skipped:
        print(f"skipped (no feasible k): {', '.join(est.skipped)}")
    print(f"k* = {est.k}")
    return 0


def cmd_extract(args) -> int:
    recs = _load(args)
    feat = _experiment_config(args).proposed().fit(recs)
    X = feat.transform(recs)
    names = list(feat.get_feature_names_out())
    if args.baseline:
        from .features import BaselinePupilStats

        base = BaselinePupilStats().fit(recs)
        X = [list(a) + list(b) for a, b in zip(X, base.transform(recs))]
        names += list(base.get_feature_names_out())
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["recording", "label", "tlx_mean"] + names)
        for rec, row in zip(recs, X):
            w.writerow([rec.id, rec.label.label, repr(rec.label.mean_score)]
                       + [repr(float(v)) for v in row])
    print(f"k = {feat.n_splits_}; wrote {len(recs)} rows to {args.out}")
    return 0


def _table(rows, path) -> int:
    records = rows_to_records(rows)
    print(format_table(records))
    _write_records(records, path)
    return 0


def cmd_table1(args) -> int:
    return _table(run_table1(_load(args), _experiment_config(args), args.methods), args.csv)


def cmd_table2(args) -> int:
    return _table(run_table2(_load(args), _experiment_config(args), args.windows, args.methods),
                  args.csv)


def cmd_table3(args) -> int:
    return _table(run_table3(_load(args), _experiment_config(args), args.hidden, args.epochs,
                             args.lr), args.csv)


def cmd_plot_fits(args) -> int:
    rec = filter_confidence(load_recording(args.recording), args.confidence)
    if args.k < 1:
        raise DataError(f"--k must be >= 1, got {args.k}")
    paths = export_fits(rec, args.k, args.out, args.bins, args.min_samples)
    for p in paths:
        print(p)
    return 0


def cmd_synth(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    profile = SynthSpec(duration_s=args.duration, rate_hz=args.rate)
    recs = generate_dataset(args.n_per_class, profile, seed=args.seed)
    entries = []
    for rec in recs:
        path = out / f"{rec.id}.csv"
        write_recording(rec, path)
        entries.append(ManifestEntry(path, rec.subject_id, rec.activity_id, rec.label.subscores))
    write_manifest(entries, out / "manifest.csv")
    print(f"wrote {len(recs)} recordings and {out / 'manifest.csv'}")
    return 0


COMMANDS = {
    "estimate-splits": cmd_estimate_splits,
    "extract": cmd_extract,
    "table1": cmd_table1,
    "table2": cmd_table2,
    "table3": cmd_table3,
    "plot-fits": cmd_plot_fits,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    print(_config_header(args))
    try:
        return COMMANDS[args.command](args)
    except (DataError, ValueError, OSError) as exc:
        # RecordingError, SparseSegmentError and NotEnoughClassesError are ValueErrors
        print(f"pupilload {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except TrainingDivergedError as exc:
        print(f"pupilload {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
