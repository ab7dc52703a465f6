"""Least-squares dynamic time warping.

Alternates two steps until the path stops improving: fit the LSMI ratio
model on the pairs of the current path, then propose a new path by running
the reward DP on the fitted ratio evaluated over the full index grid. A
proposal is kept only if the SMI estimate of a model refit on its own pairs
strictly increases.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence as Seq

import numpy as np

from .ctw import DEFAULT_EPSILON, ctw_align
from .errors import DataError, NumericalError
from .lsmi import (
    DEFAULT_CENTER_CAP,
    CvReport,
    KernelParams,
    RatioModel,
    cross_validate,
    fit_ratio,
    grid_from_bandwidths,
    median_bandwidth,
    select_best,
    smi_estimate,
)
from .seqcore import AlignmentPath, Sequence, as_sequence, gather_pairs, uniform_init
from .warp import reward_dp

log = logging.getLogger(__name__)


@dataclass
class LsdtwConfig:
    max_iterations: int = 20
    grid: Optional[List[KernelParams]] = None
    cv_folds: int = 3
    seed: int = 0
    refit_cv_each_iteration: bool = False
    center_cap: int = DEFAULT_CENTER_CAP
    init: str = "auto"  # "auto" | "uniform" | "ctw"
    init_path: Optional[AlignmentPath] = None  # overrides ``init`` when given
    ctw_epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.max_iterations < 1:
            raise DataError("max_iterations must be >= 1")
        if self.cv_folds < 2:
            raise DataError("cv_folds must be >= 2")
        if self.center_cap < 1:
            raise DataError("center_cap must be >= 1")
        if self.init not in ("auto", "uniform", "ctw"):
            raise DataError(f"unknown init strategy {self.init!r}")


@dataclass(eq=False)
class AlignmentResult:
    path: AlignmentPath
    smi_trace: List[float]
    iterations_run: int
    converged: bool
    selected_params: KernelParams
    init_label: str
    warnings: List[str] = field(default_factory=list)
    cv: Optional[CvReport] = None

    def to_dict(self) -> dict:
        return {
            "path": self.path.to_dict(),
            "smi_trace": [float(v) for v in self.smi_trace],
            "iterations_run": self.iterations_run,
            "converged": self.converged,
            "selected_params": self.selected_params.to_dict(),
            "init_label": self.init_label,
        }


@dataclass(eq=False)
class InitChoice:
    path: AlignmentPath
    label: str
    smi: float
    params: KernelParams
    model: RatioModel
    cv: Optional[CvReport]
    candidates: dict = field(default_factory=dict)  # label -> SMI
    warning: Optional[str] = None


def _bandwidth(seq: Sequence) -> float:
    # a single sample makes every kernel value 1, so any width is equivalent
    return 1.0 if seq.n == 1 else median_bandwidth(seq)


def resolve_grid(x: Sequence, y: Sequence, config: LsdtwConfig) -> List[KernelParams]:
    if config.grid is not None:
        return list(config.grid)
    return grid_from_bandwidths(_bandwidth(x), _bandwidth(y))


def evaluate_reward_grid(x, y, model: RatioModel) -> np.ndarray:
    """``R[i, j] = r(x_i, y_j)`` for every index pairing."""
    x, y = as_sequence(x), as_sequence(y)
    return model.grid(x.samples, y.samples)


def _select(pairs, grid, config: LsdtwConfig):
    if pairs.m < config.cv_folds:
        # too few pairs to split; take the smoothest candidate
        return select_best([(p, 0.0) for p in grid])[0], None
    cv = cross_validate(pairs, grid, config.cv_folds, config.seed, config.center_cap)
    return cv.selected, cv


def _fit_and_score(pairs, params, config):
    model = fit_ratio(pairs, params, config.center_cap)
    return model, smi_estimate(pairs, model).value


def choose_init(x, y, config: Optional[LsdtwConfig] = None) -> InitChoice:
    """Pick the initial path: uniform or CTW, whichever has the larger SMI.

    Each candidate gets its own CV-selected model. Ties go to uniform. A CTW
    failure falls back to uniform and sets ``warning``.
    """
    config = config or LsdtwConfig()
    x, y = as_sequence(x), as_sequence(y)
    grid = resolve_grid(x, y, config)

    cands = []
    warning = None
    if config.init_path is not None:
        cands.append(("given", config.init_path.check(x.n, y.n)))
    else:
        uni = uniform_init(x.n, y.n)
        if config.init in ("auto", "uniform"):
            cands.append(("uniform", uni))
        if config.init in ("auto", "ctw"):
            if x.n == 1 or y.n == 1:
                cands.append(("ctw", uni))
            else:
                try:
                    cands.append(("ctw", ctw_align(x, y, config.ctw_epsilon).path))
                except (DataError, NumericalError) as exc:
                    warning = f"CTW initialization failed ({exc}); using uniform"
                    log.warning(warning)
                    if not cands:
                        cands.append(("uniform", uni))

    best = None
    scores = {}
    for label, path in cands:
        pairs = gather_pairs(x, y, path)
        params, cv = _select(pairs, grid, config)
        model, smi = _fit_and_score(pairs, params, config)
        scores[label] = smi
        if best is None or smi > best.smi:
            best = InitChoice(path, label, smi, params, model, cv)
    best.candidates = scores
    best.warning = warning
    return best


def lsdtw_align(x, y, config: Optional[LsdtwConfig] = None) -> AlignmentResult:
    config = config or LsdtwConfig()
    x, y = as_sequence(x), as_sequence(y)
    grid = resolve_grid(x, y, config)

    init = choose_init(x, y, config)
    path, params, model, cur = init.path, init.params, init.model, init.smi
    cv = init.cv
    trace = [cur]
    warnings = [init.warning] if init.warning else []

    if x.n == 1 or y.n == 1:
        return AlignmentResult(path, trace, 0, True, params, init.label, warnings, cv)

    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        if config.refit_cv_each_iteration and it > 1:
            pairs = gather_pairs(x, y, path)
            params, cv = _select(pairs, grid, config)
            model, cur = _fit_and_score(pairs, params, config)
        rewards = evaluate_reward_grid(x, y, model)
        new_path, _ = reward_dp(rewards)
        if new_path == path:
            converged = True
            break
        new_model, new_smi = _fit_and_score(gather_pairs(x, y, new_path), params, config)
        if not new_smi > max(cur, trace[-1]):
            converged = True
            break
        path, model, cur = new_path, new_model, new_smi
        trace.append(new_smi)

    return AlignmentResult(path, trace, it, converged, params, init.label, warnings, cv)
