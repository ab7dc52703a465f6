"""Dynamic-programming alignment engines.

``dtw_align`` minimizes the summed squared Euclidean distance along the
path; ``reward_dp`` maximizes the summed reward. Both allow the three unit
steps (diagonal, advance x, advance y) and break ties in that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

from . import _dp
from .errors import DataError, DimensionMismatchError
from .seqcore import AlignmentPath, as_sequence


@dataclass(frozen=True, eq=False)
class DpTable:
    accum: np.ndarray
    steps: np.ndarray  # codes from smiwarp._dp: START, DIAG, UP (advance x), LEFT (advance y)


def _run(values: np.ndarray, maximize: bool) -> Tuple[AlignmentPath, float, DpTable]:
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
        raise DataError(f"DP needs a non-empty 2-D matrix, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise DataError("DP matrix contains non-finite entries")
    acc, steps = _dp.accumulate(values, maximize)
    px, py = _dp.backtrack(steps)
    return AlignmentPath(px, py), float(acc[-1, -1]), DpTable(acc, steps)


def sq_euclidean_costs(x, y) -> np.ndarray:
    x, y = as_sequence(x), as_sequence(y)
    if x.d != y.d:
        raise DimensionMismatchError(
            f"DTW needs equal dimensionality, got d_x={x.d} and d_y={y.d}"
        )
    return cdist(x.samples, y.samples, "sqeuclidean")


def dtw_align(x, y, return_table: bool = False):
    """Classical DTW.

    Returns
    -------
    path : AlignmentPath
    cost : float
        Sum of squared Euclidean distances along ``path``.
    """
    path, cost, table = _run(sq_euclidean_costs(x, y), maximize=False)
    if return_table:
        return path, cost, table
    return path, cost


def dtw_costmatrix(costs: np.ndarray):
    """DTW on a precomputed cost matrix."""
    path, cost, _ = _run(costs, maximize=False)
    return path, cost


def reward_dp(rewards, return_table: bool = False):
    """Path maximizing the summed reward over all valid paths.

    ``rewards[i, j]`` is the score of pairing x-index ``i+1`` with y-index
    ``j+1``. Negative entries are allowed.
    """
    path, total, table = _run(np.asarray(rewards, dtype=np.float64), maximize=True)
    if return_table:
        return path, total, table
    return path, total


def surrogate_smi_score(total_reward: float, n_x: int, n_y: int) -> float:
    """DP surrogate score with the path length replaced by ``n_x + n_y``."""
    return total_reward / (2.0 * (n_x + n_y)) - 0.5


def path_cost(costs: np.ndarray, path: AlignmentPath) -> float:
    ix, iy = path.zero_based()
    return float(np.sum(costs[ix, iy]))
