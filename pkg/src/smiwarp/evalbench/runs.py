"""Benchmark suites: method x setting x seed grids with JSONL/CSV persistence."""
from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence as Seq

import numpy as np

from ..errors import DataError, NumericalError
from ..io import append_jsonl
from ..seqcore import AlignmentPath
from .metrics import alignment_error
from .retrieval import METHODS, accuracy_at, align_pair, retrieval_distances
from .synth import SynthSpec, gen_class_dataset, generate


@dataclass
class BenchRun:
    method: str
    setting: str  # eta value or dataset name
    seed: int
    value: Optional[float]  # alignment error, or accuracy for retrieval
    wall_ms: float
    status: str = "ok"
    message: str = ""
    metric: str = "error"
    N: Optional[int] = None
    true_path: Optional[dict] = None
    estimated_path: Optional[dict] = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def parse_grid(text: str) -> List[float]:
    """``start:step:stop`` (inclusive) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DataError(f"grid must look like start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise DataError(f"bad grid {text!r}")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 10) for k in range(n)]
    return [float(t) for t in text.split(",") if t.strip()]


def run_synthetic(method: str, spec: SynthSpec, init_truth: bool = False,
                  keep_paths: bool = True) -> BenchRun:
    """Align one generated pair and score it against the generator's truth.

    With ``init_truth`` the iterative methods start from the true path.
    """
    x, y, truth = generate(spec)
    setting = spec.kind if spec.kind == "multimodal" else repr(float(spec.eta))
    t0 = time.perf_counter()
    try:
        est = align_pair(method, x, y, seed=spec.seed,
                         init_path=truth if init_truth and method != "dtw" else None)
    except (DataError, NumericalError) as exc:
        return BenchRun(method, setting, spec.seed, None, 1e3 * (time.perf_counter() - t0),
                        "failed", str(exc))
    wall = 1e3 * (time.perf_counter() - t0)
    return BenchRun(
        method, setting, spec.seed, alignment_error(truth, est), wall,
        true_path=truth.to_dict() if keep_paths else None,
        estimated_path=est.to_dict() if keep_paths else None,
    )


def _star_run(args):
    return run_synthetic(*args)


def _map(fn, jobs_args, jobs: int):
    if jobs <= 1:
        return [fn(a) for a in jobs_args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, jobs_args))


def run_seed(base_seed: int, run: int) -> int:
    return base_seed * 1000 + run


def nongaussian_sweep(etas: Seq[float], runs: int, methods: Seq[str] = METHODS,
                      n_x: int = 100, n_y: int = 100, seed: int = 0, jobs: int = 1,
                      keep_paths: bool = True) -> List[BenchRun]:
    """Same latent curve, warps and unit noise per run across all noise levels."""
    args = [
        (m, SynthSpec("nongaussian", n_x, n_y, float(eta), seed=run_seed(seed, r)), False, keep_paths)
        for eta in etas for r in range(runs) for m in methods
    ]
    return _map(_star_run, args, jobs)


def multimodal_suite(runs: int, methods: Seq[str] = METHODS, n_y: int = 100, seed: int = 0,
                     jobs: int = 1, init_truth: bool = True, keep_paths: bool = True) -> List[BenchRun]:
    args = [
        (m, SynthSpec("multimodal", 2 * n_y, n_y, seed=run_seed(seed, r)), init_truth, keep_paths)
        for r in range(runs) for m in methods
    ]
    return _map(_star_run, args, jobs)


def _retrieval_one(args):
    method, s, Ns, ds_kwargs = args
    queries = gen_class_dataset(seed=s, split=0, **ds_kwargs)
    database = gen_class_dataset(seed=s, split=1, **ds_kwargs)
    t0 = time.perf_counter()
    D = retrieval_distances(queries, database, method, seed=s)
    wall = 1e3 * (time.perf_counter() - t0)
    ql, dl = [q.id for q in queries], [d.id for d in database]
    return [
        BenchRun(method, "synthetic3", s, accuracy_at(D, ql, dl, N), wall, metric="accuracy", N=N)
        for N in Ns
    ]


def retrieval_suite(runs: int, Ns: Seq[int], methods: Seq[str] = METHODS, seed: int = 0,
                    jobs: int = 1, **dataset_kwargs) -> List[BenchRun]:
    args = [(m, run_seed(seed, r), list(Ns), dataset_kwargs) for r in range(runs) for m in methods]
    out: List[BenchRun] = []
    for chunk in _map(_retrieval_one, args, jobs):
        out.extend(chunk)
    return out


@dataclass
class SummaryRow:
    method: str
    setting: str
    N: Optional[int]
    n_ok: int
    n_failed: int
    mean: float
    std: float


def summarize(runs: Iterable[BenchRun]) -> List[SummaryRow]:
    cells = {}
    for r in runs:
        cells.setdefault((r.setting, r.N, r.method), []).append(r)
    rows = []
    for (setting, N, method), rs in cells.items():
        vals = np.array([r.value for r in rs if r.status == "ok"], dtype=float)
        rows.append(SummaryRow(
            method, setting, N, len(vals), len(rs) - len(vals),
            float(vals.mean()) if len(vals) else float("nan"),
            float(vals.std()) if len(vals) else float("nan"),
        ))
    return rows


def summary_table(rows: Seq[SummaryRow]) -> dict:
    """``{(setting, N): {method: mean}}`` for quick comparisons."""
    out = {}
    for r in rows:
        out.setdefault((r.setting, r.N), {})[r.method] = r.mean
    return out


def write_outputs(runs: Seq[BenchRun], out_dir) -> dict:
    """Write ``runs.jsonl``, per-run ``runs.csv`` and aggregated ``summary.csv``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jsonl = out_dir / "runs.jsonl"
    jsonl.write_text("", encoding="utf-8")
    append_jsonl((r.to_dict() for r in runs), jsonl)

    per_run = out_dir / "runs.csv"
    with per_run.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "eta_or_dataset", "seed", "N", "metric", "value", "wall_ms", "status"])
        for r in runs:
            w.writerow([r.method, r.setting, r.seed, "" if r.N is None else r.N, r.metric,
                        "" if r.value is None else repr(r.value), f"{r.wall_ms:.3f}", r.status])

    summary = out_dir / "summary.csv"
    rows = summarize(runs)
    with summary.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "eta_or_dataset", "N", "n_ok", "n_failed", "mean", "std"])
        for r in rows:
            w.writerow([r.method, r.setting, "" if r.N is None else r.N, r.n_ok, r.n_failed,
                        repr(r.mean), repr(r.std)])
    return {"runs_jsonl": str(jsonl), "runs_csv": str(per_run), "summary_csv": str(summary)}
