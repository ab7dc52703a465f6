"""Canonical time warping: alternate regularized CCA and DTW in the latent space."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DataError, NumericalError
from .seqcore import AlignmentPath, as_sequence, gather_pairs, uniform_init
from .warp import dtw_align

DEFAULT_EPSILON = 0.01
DEFAULT_MAX_ITER = 50
CORRELATION_ENERGY = 0.9


@dataclass(frozen=True, eq=False)
class CcaResult:
    v_x: np.ndarray  # (d_x, k)
    v_y: np.ndarray  # (d_y, k)
    correlations: np.ndarray  # descending, length k = min(d_x, d_y)
    mean_x: np.ndarray
    mean_y: np.ndarray


def _inv_sqrt(c: np.ndarray, side: str) -> np.ndarray:
    try:
        w, q = np.linalg.eigh(c)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition of the {side}-side covariance failed") from exc
    if w[0] <= 1e-12 * max(1.0, w[-1]):
        raise NumericalError(
            f"{side}-side covariance is rank deficient after regularization "
            f"(smallest eigenvalue {w[0]:.3g}); increase epsilon"
        )
    return (q / np.sqrt(w)) @ q.T


def regularized_cca(px, py, epsilon: float = DEFAULT_EPSILON) -> CcaResult:
    """CCA with ``epsilon I`` added to both covariances, solved by whitening then SVD.

    Canonical variates have unit variance under the regularized covariance.
    Each direction pair is sign-fixed so the largest-magnitude x loading is positive.
    """
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    if px.ndim == 1:
        px = px[:, None]
    if py.ndim == 1:
        py = py[:, None]
    m = px.shape[0]
    if m < 2 or py.shape[0] != m:
        raise DataError("CCA needs at least two row-paired samples")
    mx, my = px.mean(axis=0), py.mean(axis=0)
    xc, yc = px - mx, py - my
    cxx = xc.T @ xc / m + epsilon * np.eye(px.shape[1])
    cyy = yc.T @ yc / m + epsilon * np.eye(py.shape[1])
    cxy = xc.T @ yc / m
    wx = _inv_sqrt(cxx, "x")
    wy = _inv_sqrt(cyy, "y")
    try:
        u, s, vt = np.linalg.svd(wx @ cxy @ wy, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("SVD of the whitened cross-covariance failed") from exc
    k = min(px.shape[1], py.shape[1])
    vx = wx @ u[:, :k]
    vy = wy @ vt.T[:, :k]
    for c in range(k):
        if vx[np.argmax(np.abs(vx[:, c])), c] < 0:
            vx[:, c] *= -1
            vy[:, c] *= -1
    return CcaResult(vx, vy, s[:k].copy(), mx, my)


def latent_dim(correlations, energy: float = CORRELATION_ENERGY) -> int:
    """Smallest ``b`` whose top-``b`` correlations reach ``energy`` of their total."""
    c = np.asarray(correlations, dtype=np.float64)
    total = c.sum()
    if not total > 0:
        return 1
    b = int(np.searchsorted(np.cumsum(c), energy * total - 1e-12 * total) + 1)
    return max(1, min(b, len(c)))


@dataclass(eq=False)
class CtwModel:
    v_x: np.ndarray
    v_y: np.ndarray
    b: int
    epsilon: float
    path: AlignmentPath
    objective_trace: List[float] = field(default_factory=list)
    iterations_run: int = 0
    converged: bool = False
    correlations: np.ndarray = None
    init_label: str = "dtw"

    def to_dict(self) -> dict:
        return {
            "path": self.path.to_dict(),
            "objective_trace": [float(v) for v in self.objective_trace],
            "iterations_run": self.iterations_run,
            "converged": self.converged,
            "b": self.b,
            "epsilon": float(self.epsilon),
            "init_label": self.init_label,
        }


def ctw_align(
    x,
    y,
    epsilon: float = DEFAULT_EPSILON,
    max_iterations: int = DEFAULT_MAX_ITER,
    init_path: Optional[AlignmentPath] = None,
) -> CtwModel:
    """Alternate CCA on the current pairs and DTW between the projected sequences.

    The starting path is DTW on the raw data when dimensions agree, else the
    uniform path; ``init_path`` overrides both. Iteration stops when the path
    repeats, the projected DTW cost fails to decrease, or at the cap.
    """
    x, y = as_sequence(x), as_sequence(y)
    if x.n < 2 or y.n < 2:
        raise DataError("CTW needs at least two samples per sequence")
    if np.all(np.ptp(x.samples, axis=0) == 0) or np.all(np.ptp(y.samples, axis=0) == 0):
        raise DataError("CTW needs non-constant sequences")
    if max_iterations < 1:
        raise DataError("max_iterations must be >= 1")

    if init_path is not None:
        path = init_path.check(x.n, y.n)
        init_label = "given"
    elif x.d == y.d:
        path, _ = dtw_align(x, y)
        init_label = "dtw"
    else:
        path = uniform_init(x.n, y.n)
        init_label = "uniform"

    state = None
    trace: List[float] = []
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        pairs = gather_pairs(x, y, path)
        cca = regularized_cca(pairs.x, pairs.y, epsilon)
        b = latent_dim(cca.correlations)
        zx = (x.samples - cca.mean_x) @ cca.v_x[:, :b]
        zy = (y.samples - cca.mean_y) @ cca.v_y[:, :b]
        new_path, obj = dtw_align(zx, zy)
        if state is not None and (new_path == path or obj >= trace[-1]):
            converged = True
            break
        state = (cca, b)
        trace.append(obj)
        if new_path == path:
            converged = True
            break
        path = new_path

    cca, b = state
    return CtwModel(
        v_x=cca.v_x[:, :b],
        v_y=cca.v_y[:, :b],
        b=b,
        epsilon=epsilon,
        path=path,
        objective_trace=trace,
        iterations_run=it,
        converged=converged,
        correlations=cca.correlations,
        init_label=init_label,
    )
