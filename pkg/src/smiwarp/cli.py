"""Command-line interface: ``smiwarp {synth,align,smi,eval,bench}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from pathlib import Path

from . import io as sio
from .ctw import ctw_align
from .errors import DataError, NumericalError
from .evalbench.metrics import alignment_error
from .evalbench.retrieval import METHODS
from .evalbench.runs import (
    multimodal_suite,
    nongaussian_sweep,
    parse_grid,
    retrieval_suite,
    summarize,
    write_outputs,
)
from .evalbench.synth import SynthSpec, generate
from .lsdtw import LsdtwConfig, lsdtw_align, resolve_grid
from .lsmi import cross_validate, fit_ratio, smi_estimate
from .seqcore import gather_pairs, uniform_init
from .warp import dtw_align

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="write result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--quiet", "-q", action="store_true", default=argparse.SUPPRESS)

    p = _Parser(prog="smiwarp", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", parents=[common], help="generate a synthetic pair with ground truth")
    s.add_argument("--kind", choices=("multimodal", "nongaussian"), required=True)
    s.add_argument("--nx", type=_pos_int, default=None)
    s.add_argument("--ny", type=_pos_int, default=None)
    s.add_argument("--eta", type=_nonneg_float, default=0.0)
    s.add_argument("--m", type=_pos_int, default=None, help="latent length (nongaussian)")
    s.add_argument("--latent-scale", type=float, default=3.0)
    s.add_argument("--out-dir", default=".")

    a = sub.add_parser("align", parents=[common], help="align two CSV sequences")
    a.add_argument("--method", choices=METHODS, required=True)
    a.add_argument("x")
    a.add_argument("y")
    a.add_argument("--max-iter", type=_pos_int, default=None)
    a.add_argument("--cv-folds", type=int, default=3)
    a.add_argument("--refit-cv", action="store_true")
    a.add_argument("--center-cap", type=_pos_int, default=100)
    a.add_argument("--init", choices=("auto", "uniform", "ctw"), default="auto")
    a.add_argument("--init-path", default=None, help="JSON path to start LSDTW/CTW from")
    a.add_argument("--epsilon", type=_nonneg_float, default=0.01, help="CCA regularizer (ctw)")

    m = sub.add_parser("smi", parents=[common], help="fit LSMI on a path and report the SMI estimate")
    m.add_argument("x")
    m.add_argument("y")
    m.add_argument("--path", default=None, help="path JSON (default: uniform path)")
    m.add_argument("--cv-folds", type=int, default=3)
    m.add_argument("--center-cap", type=_pos_int, default=100)

    e = sub.add_parser("eval", parents=[common], help="alignment error between two paths")
    e.add_argument("truth")
    e.add_argument("estimate")

    b = sub.add_parser("bench", parents=[common], help="run a benchmark suite")
    b.add_argument("--suite", choices=("multimodal", "nongaussian-sweep", "retrieval"), required=True)
    b.add_argument("--runs", type=_pos_int, default=5)
    b.add_argument("--eta", default="0:0.6:3.0", help="start:step:stop (inclusive) or comma list")
    b.add_argument("--N", type=_pos_int, default=10, help="largest retrieval count (retrieval)")
    b.add_argument("--methods", default=",".join(METHODS))
    b.add_argument("--nx", type=_pos_int, default=None)
    b.add_argument("--ny", type=_pos_int, default=None)
    b.add_argument("--jobs", type=_pos_int, default=1)
    b.add_argument("--out-dir", default="bench_out")
    b.add_argument("--no-truth-init", action="store_true",
                   help="multimodal: use the automatic LSDTW/CTW initialization instead of the true path")
    return p


def _emit(text: str, args) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        print(text)


def _path_csv(path) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pi_x", "pi_y"])
    w.writerows(zip(path.pi_x.tolist(), path.pi_y.tolist()))
    return buf.getvalue()


def cmd_synth(args) -> int:
    if args.kind == "multimodal":
        ny = args.ny or (args.nx // 2 if args.nx else 100)
        nx = args.nx or 2 * ny
    else:
        nx, ny = args.nx or 100, args.ny or 100
    try:
        spec = SynthSpec(args.kind, nx, ny, args.eta, args.m, getattr(args, "seed", 0), args.latent_scale)
    except DataError as exc:
        raise UsageError(str(exc)) from exc
    x, y, truth = generate(spec)
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        files = [out / "x.csv", out / "y.csv", out / "truth.json"]
        sio.write_sequence_csv(x, files[0])
        sio.write_sequence_csv(y, files[1])
        sio.write_path_json(truth, files[2])
    except OSError as exc:
        raise DataError(f"cannot write to {out}: {exc}") from exc
    if not getattr(args, "quiet", False):
        for f in files:
            print(f)
    return 0


def cmd_align(args) -> int:
    x = sio.read_sequence_csv(args.x)
    y = sio.read_sequence_csv(args.y)
    init_path = sio.read_path_json(args.init_path) if args.init_path else None
    seed = getattr(args, "seed", 0)
    t0 = time.perf_counter()
    if args.method == "dtw":
        path, cost = dtw_align(x, y)
        rec = {"method": "dtw", "path": path.to_dict(), "cost": cost}
    elif args.method == "ctw":
        model = ctw_align(x, y, args.epsilon, args.max_iter or 50, init_path=init_path)
        path = model.path
        rec = dict(method="ctw", **model.to_dict())
    else:
        cfg = LsdtwConfig(
            max_iterations=args.max_iter or 20, cv_folds=args.cv_folds, seed=seed,
            refit_cv_each_iteration=args.refit_cv, center_cap=args.center_cap,
            init=args.init, init_path=init_path, ctw_epsilon=args.epsilon,
        )
        res = lsdtw_align(x, y, cfg)
        path = res.path
        rec = dict(method="lsdtw", **res.to_dict())
        if res.warnings:
            rec["warnings"] = res.warnings
    rec["wall_ms"] = 1e3 * (time.perf_counter() - t0)
    if getattr(args, "format", "json") == "csv":
        _emit(_path_csv(path), args)
    else:
        _emit(sio.dump_json(rec), args)
    return 0


def cmd_smi(args) -> int:
    x = sio.read_sequence_csv(args.x)
    y = sio.read_sequence_csv(args.y)
    path = sio.read_path_json(args.path) if args.path else uniform_init(x.n, y.n)
    pairs = gather_pairs(x, y, path)
    cfg = LsdtwConfig(cv_folds=args.cv_folds, seed=getattr(args, "seed", 0), center_cap=args.center_cap)
    cv = cross_validate(pairs, resolve_grid(x, y, cfg), cfg.cv_folds, cfg.seed, cfg.center_cap)
    model = fit_ratio(pairs, cv.selected, cfg.center_cap)
    est = smi_estimate(pairs, model)
    rec = {"smi": est.value, "m": est.m, "selected_params": cv.selected.to_dict(), "cv": cv.to_dict()}
    _emit(sio.dump_json(rec), args)
    return 0


def cmd_eval(args) -> int:
    truth = sio.read_path_json(args.truth)
    est = sio.read_path_json(args.estimate)
    truth.check(*truth.shape)
    est.check(*est.shape)
    _emit(f"{alignment_error(truth, est):.6f}", args)
    return 0


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise UsageError(f"unknown methods {bad}; choose from {','.join(METHODS)}")
    seed = getattr(args, "seed", 0)
    if args.suite == "nongaussian-sweep":
        try:
            etas = parse_grid(args.eta)
        except (DataError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        if any(e < 0 for e in etas):
            raise UsageError("noise levels must be >= 0")
        runs = nongaussian_sweep(etas, args.runs, methods, args.nx or 100, args.ny or 100,
                                 seed, args.jobs)
    elif args.suite == "multimodal":
        ny = args.ny or (args.nx // 2 if args.nx else 100)
        runs = multimodal_suite(args.runs, methods, ny, seed, args.jobs,
                                init_truth=not args.no_truth_init)
    else:
        if args.N > 30:
            raise UsageError("N cannot exceed the database size (30)")
        runs = retrieval_suite(args.runs, range(1, args.N + 1), methods, seed, args.jobs)
    files = write_outputs(runs, args.out_dir)
    if not getattr(args, "quiet", False):
        for r in summarize(runs):
            n = "" if r.N is None else f" N={r.N}"
            print(f"{r.method:6s} {r.setting:>10s}{n}: mean={r.mean:.4f} std={r.std:.4f} "
                  f"ok={r.n_ok} failed={r.n_failed}")
        for f in files.values():
            print(f)
    return 0


COMMANDS = {"synth": cmd_synth, "align": cmd_align, "smi": cmd_smi, "eval": cmd_eval, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    logging.basicConfig(level=logging.ERROR if getattr(args, "quiet", False) else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"smiwarp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"smiwarp: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"smiwarp: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"smiwarp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
