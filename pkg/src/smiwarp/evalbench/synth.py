"""Synthetic sequence pairs with known ground-truth alignment."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..errors import DataError
from ..seqcore import AlignmentPath, Sequence, expand_anchors

ETA_GRID = tuple(round(0.3 * k, 10) for k in range(11))


@dataclass(frozen=True)
class SynthSpec:
    kind: str  # "multimodal" | "nongaussian"
    n_x: int = 200
    n_y: int = 100
    eta: float = 0.0
    m: Optional[int] = None  # latent length; defaults to max(n_x, n_y)
    seed: int = 0
    latent_scale: float = 3.0  # per-dimension std of the latent curve

    def __post_init__(self):
        if self.kind not in ("multimodal", "nongaussian"):
            raise DataError(f"unknown synthetic kind {self.kind!r}")
        if self.n_x < 2 or self.n_y < 2:
            raise DataError("synthetic sequences need at least two samples")
        if not self.eta >= 0:
            raise DataError(f"noise level must be non-negative, got {self.eta}")
        if not self.latent_scale > 0:
            raise DataError("latent_scale must be positive")
        if self.m is not None and self.m < 2:
            raise DataError("latent length must be >= 2")
        if self.kind == "multimodal" and self.n_x != 2 * self.n_y:
            raise DataError("multimodal data needs n_x = 2 * n_y")

    @property
    def latent_length(self) -> int:
        return self.m if self.m is not None else max(self.n_x, self.n_y)


def gen_multimodal(spec: SynthSpec) -> Tuple[Sequence, Sequence, AlignmentPath]:
    """``x_i = z_i + 0.4 sin(2 pi z_i)`` with ``z_i = i / n_x``; ``y_j = z_{2j-1}``."""
    n_x, n_y = spec.n_x, spec.n_y
    z = np.arange(1, n_x + 1) / n_x
    x = z + 0.4 * np.sin(2 * np.pi * z)
    src = 2 * np.arange(1, n_y + 1) - 1
    y = z[src - 1]
    anchors = list(zip(src.tolist(), range(1, n_y + 1)))
    anchors.append((n_x, n_y))
    return Sequence(x, id="x"), Sequence(y, id="y"), expand_anchors(anchors)


def shifted_exponential(rng: np.random.Generator, shape) -> np.ndarray:
    """Exponential(rate 1) draws shifted to zero mean."""
    return rng.exponential(1.0, size=shape) - 1.0


def latent_trajectory(rng: np.random.Generator, m: int, scale: float = 1.0) -> np.ndarray:
    """Smooth 2-D random walk of length ``m`` with per-dimension std ``scale``. Shape ``(2, m)``."""
    pad = 2
    walk = np.cumsum(rng.normal(0.0, 1.0, size=(2, m + 2 * pad)), axis=1)
    kernel = np.ones(5) / 5.0
    z = np.vstack([np.convolve(row, kernel, mode="valid") for row in walk])
    z = z - z.mean(axis=1, keepdims=True)
    sd = z.std(axis=1, keepdims=True)
    sd[sd == 0] = 1.0
    return scale * z / sd


def random_monotone_path(rng: np.random.Generator, n: int, m: int) -> AlignmentPath:
    """Random valid path over an ``n x m`` grid: each step picks uniformly among the admissible moves."""
    i, j = 1, 1
    px, py = [1], [1]
    while i < n or j < m:
        moves = []
        if i < n and j < m:
            moves.append((1, 1))
        if i < n:
            moves.append((1, 0))
        if j < m:
            moves.append((0, 1))
        di, dj = moves[rng.integers(len(moves))]
        i += di
        j += dj
        px.append(i)
        py.append(j)
    return AlignmentPath(px, py)


def warp_matrix(path: AlignmentPath, n: int, m: int) -> np.ndarray:
    """Row-stochastic ``(n, m)`` matrix averaging the latent columns paired with each sample."""
    w = np.zeros((n, m))
    w[path.pi_x - 1, path.pi_y - 1] = 1.0
    return w / w.sum(axis=1, keepdims=True)


def compose_truth(warp_x: AlignmentPath, warp_y: AlignmentPath) -> AlignmentPath:
    """Ground-truth x-y path through the shared latent index of two sample-to-latent warps."""
    m = int(warp_x.pi_y[-1])
    if int(warp_y.pi_y[-1]) != m:
        raise DataError("warps end at different latent lengths")
    anchors = []
    for k in range(1, m + 1):
        xs = warp_x.pi_x[warp_x.pi_y == k]
        ys = warp_y.pi_x[warp_y.pi_y == k]
        anchors.append((int(xs.min()), int(ys.min())))
        anchors.append((int(xs.max()), int(ys.max())))
    return expand_anchors(anchors)


def compose_nongaussian(z, u_x, u_y, warp_x, warp_y, e_x, e_y, eta):
    """``X = U_x' Z M_x' + eta E_x`` and likewise for ``Y``; rows of the returned arrays are time steps."""
    n_x, n_y = int(warp_x.pi_x[-1]), int(warp_y.pi_x[-1])
    m = z.shape[1]
    mx = warp_matrix(warp_x, n_x, m)
    my = warp_matrix(warp_y, n_y, m)
    xm = u_x.T @ z @ mx.T + eta * e_x
    ym = u_y.T @ z @ my.T + eta * e_y
    return xm.T, ym.T


def gen_nongaussian(spec: SynthSpec) -> Tuple[Sequence, Sequence, AlignmentPath]:
    """Two random affine views of a shared 2-D latent curve, independently warped, plus shifted-exponential noise."""
    rng = np.random.default_rng(spec.seed)
    m = spec.latent_length
    u_x = rng.standard_normal((2, 2))
    u_y = rng.standard_normal((2, 2))
    z = latent_trajectory(rng, m, spec.latent_scale)
    warp_x = random_monotone_path(rng, spec.n_x, m)
    warp_y = random_monotone_path(rng, spec.n_y, m)
    e_x = shifted_exponential(rng, (2, spec.n_x))
    e_y = shifted_exponential(rng, (2, spec.n_y))
    xs, ys = compose_nongaussian(z, u_x, u_y, warp_x, warp_y, e_x, e_y, spec.eta)
    return Sequence(xs, id="x"), Sequence(ys, id="y"), compose_truth(warp_x, warp_y)


def generate(spec: SynthSpec):
    if spec.kind == "multimodal":
        return gen_multimodal(spec)
    return gen_nongaussian(spec)


def gen_class_dataset(
    n_classes: int = 3,
    per_class: int = 10,
    length: int = 30,
    eta: float = 0.5,
    seed: int = 0,
    split: int = 0,
    amplitude_jitter: float = 0.0,
) -> List[Sequence]:
    """Labelled sequences: one latent curve per class, fresh warp, affine view and noise per instance.

    Class curves depend only on ``seed``; ``split`` selects an independent
    draw of instances, so ``split=0`` and ``split=1`` give query and
    database sets over the same classes. ``amplitude_jitter`` is the
    standard deviation of a per-instance log-scale factor.
    """
    class_rng = np.random.default_rng([seed, 0])
    curves = [latent_trajectory(class_rng, length) for _ in range(n_classes)]
    rng = np.random.default_rng([seed, 1 + split])
    out = []
    for c, z in enumerate(curves):
        for k in range(per_class):
            n = int(rng.integers(int(0.8 * length), int(1.2 * length) + 1))
            warp = random_monotone_path(rng, n, length)
            u = np.eye(2) + 0.3 * rng.standard_normal((2, 2))
            if amplitude_jitter:
                u = u * np.exp(amplitude_jitter * rng.standard_normal())
            e = shifted_exponential(rng, (2, n))
            xs = (u.T @ z @ warp_matrix(warp, n, length).T + eta * e).T
            out.append(Sequence(xs, id=f"class{c}"))
    return out
