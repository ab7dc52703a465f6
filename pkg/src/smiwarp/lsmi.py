"""Least-squares estimation of squared-loss mutual information.

The density ratio ``p(x, y) / (p(x) p(y))`` is modelled as a weighted sum of
product Gaussian kernels centred on aligned pairs,

    r(x, y) = sum_l alpha_l K(x, xc_l) L(y, yc_l),

and ``alpha`` is the ridge solution ``(H + lambda I)^-1 h``. The SMI estimate
is half the mean fitted ratio over the pairs, minus one half.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence as Seq, Tuple

import numpy as np
from scipy import linalg
from scipy.spatial.distance import cdist, pdist

from .errors import DataError, DegenerateBandwidthError, NumericalError
from .seqcore import AlignedPairs, as_sequence

log = logging.getLogger(__name__)

DEFAULT_CENTER_CAP = 100
LAMBDA_ESCALATIONS = 3
CV_TIE_TOL = 1e-12


@dataclass(frozen=True)
class KernelParams:
    sigma_x: float
    sigma_y: float
    lam: float

    def __post_init__(self):
        if not (self.sigma_x > 0 and self.sigma_y > 0):
            raise DataError(f"kernel widths must be positive, got {self.sigma_x}, {self.sigma_y}")
        if not self.lam >= 0:
            raise DataError(f"ridge parameter must be non-negative, got {self.lam}")

    def to_dict(self) -> dict:
        return {"sigma_x": float(self.sigma_x), "sigma_y": float(self.sigma_y), "lambda": float(self.lam)}

    @classmethod
    def from_dict(cls, d: dict) -> "KernelParams":
        return cls(float(d["sigma_x"]), float(d["sigma_y"]), float(d["lambda"]))

    def preference_key(self) -> Tuple[float, float, float]:
        # larger is smoother: used to break CV ties
        return (self.lam, self.sigma_x, self.sigma_y)


def gaussian_kernel(u, v, sigma: float) -> float:
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    if u.shape != v.shape:
        raise DataError(f"kernel arguments differ in dimension: {u.shape} vs {v.shape}")
    if not sigma > 0:
        raise DataError("kernel width must be positive")
    return float(np.exp(-np.sum((u - v) ** 2) / (2.0 * sigma * sigma)))


def gaussian_gram(a: np.ndarray, b: np.ndarray, sigma: float) -> np.ndarray:
    """``G[i, l] = exp(-||a_i - b_l||^2 / (2 sigma^2))``."""
    return np.exp(-cdist(a, b, "sqeuclidean") / (2.0 * sigma * sigma))


def median_bandwidth(seq) -> float:
    """``2^{-1/2}`` times the median distance over unordered row pairs ``i < j``."""
    s = as_sequence(seq).samples
    if s.shape[0] < 2:
        raise DegenerateBandwidthError("median heuristic needs at least two samples")
    med = float(np.median(pdist(s)))
    if not med > 0:
        raise DegenerateBandwidthError("median pairwise distance is zero (constant sequence)")
    return med / np.sqrt(2.0)


def default_grid(x, y) -> List[KernelParams]:
    """Twenty candidates: ten width multipliers ``k^{-1/2}`` (k = 2.0, 1.8, ..., 0.2) times two ridges."""
    mx, my = median_bandwidth(x), median_bandwidth(y)
    return grid_from_bandwidths(mx, my)


def grid_from_bandwidths(mx: float, my: float) -> List[KernelParams]:
    ks = [round(2.0 - 0.2 * i, 10) for i in range(10)]
    return [KernelParams(k ** -0.5 * mx, k ** -0.5 * my, lam) for k in ks for lam in (1e-1, 1e-2)]


def stride_indices(m: int, cap: int = DEFAULT_CENTER_CAP) -> np.ndarray:
    """Deterministic, evenly spaced subset of ``range(m)`` of size ``min(m, cap)``."""
    l = min(m, cap)
    if l == m:
        return np.arange(m)
    return np.round(np.linspace(0, m - 1, l)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class RatioFitProblem:
    h: np.ndarray
    H: np.ndarray


def _problem_from_grams(gk: np.ndarray, gl: np.ndarray) -> RatioFitProblem:
    m = gk.shape[0]
    H = (gk.T @ gk) * (gl.T @ gl) / (m * m)
    H = 0.5 * (H + H.T)
    h = np.einsum("il,il->l", gk, gl) / m
    if not (np.all(np.isfinite(H)) and np.all(np.isfinite(h))):
        raise NumericalError("non-finite kernel evaluations")
    return RatioFitProblem(h, H)


def build_fit_problem(pairs: AlignedPairs, centers: AlignedPairs, params: KernelParams) -> RatioFitProblem:
    """Empirical ``h`` and ``H`` via the factorization ``H = (GK'GK) * (GL'GL) / m^2``."""
    if pairs.m < 1 or centers.m < 1:
        raise DataError("need at least one pair and one center")
    gk = gaussian_gram(pairs.x, centers.x, params.sigma_x)
    gl = gaussian_gram(pairs.y, centers.y, params.sigma_y)
    return _problem_from_grams(gk, gl)


def _solve(problem: RatioFitProblem, lam: float) -> Tuple[np.ndarray, float, float]:
    """Returns ``(alpha, lambda_used, relative_residual)``."""
    H, h = problem.H, problem.h
    eye = np.eye(len(h))
    cur = float(lam)
    for attempt in range(LAMBDA_ESCALATIONS + 1):
        A = H + cur * eye
        try:
            c = linalg.cho_factor(A, lower=True, check_finite=False)
            alpha = linalg.cho_solve(c, h, check_finite=False)
        except linalg.LinAlgError:
            alpha = None
        if alpha is not None and np.all(np.isfinite(alpha)):
            hn = np.linalg.norm(h)
            res = np.linalg.norm(A @ alpha - h) / hn if hn > 0 else float(np.linalg.norm(A @ alpha))
            if attempt:
                log.warning("ridge escalated from %g to %g after factorization failure", lam, cur)
            return alpha, cur, float(res)
        if attempt == LAMBDA_ESCALATIONS:
            break
        # lambda = 0 would never escalate by scaling alone
        cur = max(cur * 10.0, 1e-10)
    raise NumericalError(
        f"H + lambda I not positive definite for lambda in [{lam:g}, {cur:g}]"
    )


def solve_ratio(problem: RatioFitProblem, lam: float) -> np.ndarray:
    """Ridge solution ``(H + lam I)^-1 h`` by Cholesky, escalating ``lam`` tenfold on failure."""
    return _solve(problem, lam)[0]


@dataclass(frozen=True, eq=False)
class RatioModel:
    centers_x: np.ndarray
    centers_y: np.ndarray
    alpha: np.ndarray
    params: KernelParams
    lam_used: Optional[float] = None

    def __post_init__(self):
        if not (len(self.alpha) == len(self.centers_x) == len(self.centers_y) >= 1):
            raise DataError("model needs equally many centers and coefficients (>= 1)")
        if not np.all(np.isfinite(self.alpha)):
            raise NumericalError("non-finite ratio coefficients")

    @property
    def l(self) -> int:
        return len(self.alpha)

    def design(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return (
            gaussian_gram(np.atleast_2d(x), self.centers_x, self.params.sigma_x),
            gaussian_gram(np.atleast_2d(y), self.centers_y, self.params.sigma_y),
        )

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Ratio values at row-paired inputs ``(x[i], y[i])``."""
        gk, gl = self.design(x, y)
        return (gk * gl) @ self.alpha

    def grid(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Ratio values at every pairing ``(x[i], y[j])``."""
        gk, gl = self.design(x, y)
        return (gk * self.alpha) @ gl.T


def fit_ratio(pairs: AlignedPairs, params: KernelParams, center_cap: int = DEFAULT_CENTER_CAP) -> RatioModel:
    centers = pairs.subset(stride_indices(pairs.m, center_cap))
    problem = build_fit_problem(pairs, centers, params)
    alpha, lam_used, _ = _solve(problem, params.lam)
    return RatioModel(centers.x, centers.y, alpha, params, lam_used)


@dataclass(frozen=True)
class SmiEstimate:
    value: float
    m: int


def smi_estimate(pairs: AlignedPairs, model: RatioModel) -> SmiEstimate:
    if pairs.m < 1:
        raise DataError("need at least one pair")
    r = model(pairs.x, pairs.y)
    value = float(np.sum(r) / (2.0 * pairs.m) - 0.5)
    if not np.isfinite(value):
        raise NumericalError("non-finite SMI estimate")
    return SmiEstimate(value, pairs.m)


def lsmi(pairs: AlignedPairs, params: KernelParams, center_cap: int = DEFAULT_CENTER_CAP):
    """Fit the ratio model on ``pairs`` and score the same pairs."""
    model = fit_ratio(pairs, params, center_cap)
    return smi_estimate(pairs, model), model


def fold_indices(m: int, k: int, seed: int) -> List[np.ndarray]:
    """Random permutation of ``range(m)`` dealt round-robin into ``k`` folds."""
    if k < 2:
        raise DataError("cross-validation needs at least two folds")
    if m < k:
        raise DataError(f"cannot split {m} pairs into {k} non-empty folds")
    perm = np.random.default_rng(seed).permutation(m)
    return [np.sort(perm[f::k]) for f in range(k)]


@dataclass(eq=False)
class CvReport:
    grid: List[Tuple[KernelParams, float]]
    selected: KernelParams
    selected_score: float
    folds: int
    max_residual: float = 0.0
    fold_sizes: List[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "folds": self.folds,
            "grid": [dict(p.to_dict(), j_kcv=float(s)) for p, s in self.grid],
            "selected": dict(self.selected.to_dict(), j_kcv=float(self.selected_score)),
        }


def select_best(scored: Seq[Tuple[KernelParams, float]]) -> Tuple[KernelParams, float]:
    best = min(s for _, s in scored)
    tied = [(p, s) for p, s in scored if s <= best + CV_TIE_TOL]
    return max(tied, key=lambda ps: ps[0].preference_key())


def cross_validate(
    pairs: AlignedPairs,
    grid: Seq[KernelParams],
    K: int = 3,
    seed: int = 0,
    center_cap: int = DEFAULT_CENTER_CAP,
) -> CvReport:
    """K-fold selection of kernel widths and ridge by held-out ``J``.

    For each fold the model is fit on the remaining pairs (centers strided
    over those training pairs only) and scored on the held-out fold with
    ``J = alpha' H_k alpha / 2 - h_k' alpha``.
    """
    grid = list(grid)
    if not grid:
        raise DataError("empty hyper-parameter grid")
    folds = fold_indices(pairs.m, K, seed)
    scores = np.zeros(len(grid))
    max_res = 0.0

    sigmas: Dict[Tuple[float, float], List[int]] = {}
    for gi, p in enumerate(grid):
        sigmas.setdefault((p.sigma_x, p.sigma_y), []).append(gi)

    all_idx = np.arange(pairs.m)
    for hold in folds:
        train = np.setdiff1d(all_idx, hold, assume_unique=True)
        ctr = train[stride_indices(len(train), center_cap)]
        cx, cy = pairs.x[ctr], pairs.y[ctr]
        dtx = cdist(pairs.x[train], cx, "sqeuclidean")
        dty = cdist(pairs.y[train], cy, "sqeuclidean")
        dhx = cdist(pairs.x[hold], cx, "sqeuclidean")
        dhy = cdist(pairs.y[hold], cy, "sqeuclidean")
        for (sx, sy), members in sigmas.items():
            train_prob = _problem_from_grams(
                np.exp(-dtx / (2 * sx * sx)), np.exp(-dty / (2 * sy * sy))
            )
            hold_prob = _problem_from_grams(
                np.exp(-dhx / (2 * sx * sx)), np.exp(-dhy / (2 * sy * sy))
            )
            for gi in members:
                alpha, _, res = _solve(train_prob, grid[gi].lam)
                max_res = max(max_res, res)
                j = 0.5 * alpha @ hold_prob.H @ alpha - hold_prob.h @ alpha
                scores[gi] += j / K

    scored = list(zip(grid, scores.tolist()))
    sel, sel_score = select_best(scored)
    return CvReport(scored, sel, sel_score, K, max_res, [len(f) for f in folds])
