"""2D map layout: exact t-SNE over lens vectors + per-video chronological rows.

The t-SNE here is the exact O(N^2) variant (no tree approximation): corpora
top out around a few thousand frames, and the exact form keeps the gradient
simple enough to verify against finite differences. Affinities are computed
from squared Euclidean distances over L2-normalized rows, which orders pairs
identically to cosine distance — the same geometry the rest of the system
uses for neighbors.

The rearrangement step implements the "rows through the centroid" layout:
each video's frames are placed on a horizontal line through the centroid of
its raw t-SNE points, in chronological order, equally spaced. Raw coordinates
are kept; neighbor math never reads display coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import pdist, squareform

from videomap.errors import EmptyInput, NonFiniteInput, PerplexityInfeasible

MACHINE_EPSILON = np.finfo(np.double).eps

EXPLORATION_ITERS = 250
EARLY_EXAGGERATION = 12.0
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8
INIT_SIGMA = 1e-4

DEFAULT_SPACING_FRACTION = 0.005


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 30.0
    iterations: int = 1000
    learning_rate: float = 200.0
    seed: int = 0

    def __post_init__(self):
        if self.iterations < EXPLORATION_ITERS:
            raise ValueError(f"iterations must be >= {EXPLORATION_ITERS}")
        if self.perplexity <= 0:
            raise ValueError("perplexity must be positive")


@dataclass(frozen=True)
class MapPoint2D:
    lens: str
    video_id: str
    frame_index: int
    raw_xy: tuple[float, float]
    display_xy: tuple[float, float] = field(default=(0.0, 0.0))


def l2_normalize_rows(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0  # all-zero rows stay at the origin
    return X / norms


def _binary_search_perplexity(sqdist: np.ndarray, perplexity: float,
                              n_steps: int = 100, tol: float = 1e-5) -> np.ndarray:
    """Per-row Gaussian precisions matched to the desired perplexity.

    Returns the conditional probability matrix P[i, j] = p(j|i) with zero
    diagonal; every row sums to 1.
    """
    n = sqdist.shape[0]
    target_entropy = np.log(perplexity)
    P = np.zeros((n, n), dtype=np.float64)
    off_diag = ~np.eye(n, dtype=bool)

    for i in range(n):
        beta, beta_min, beta_max = 1.0, -np.inf, np.inf
        di = sqdist[i][off_diag[i]]
        for _ in range(n_steps):
            row = np.exp(-di * beta)
            s = row.sum()
            if s == 0.0:
                s = MACHINE_EPSILON
            row /= s
            entropy = np.log(s) + beta * float(np.dot(di, row))
            diff = entropy - target_entropy
            if abs(diff) <= tol:
                break
            if diff > 0.0:
                beta_min = beta
                beta = beta * 2.0 if beta_max == np.inf else (beta + beta_max) / 2.0
            else:
                beta_max = beta
                beta = beta / 2.0 if beta_min == -np.inf else (beta + beta_min) / 2.0
        P[i][off_diag[i]] = row
    return P


def joint_probabilities(X_normalized: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized joint P from squared Euclidean distances, sum(P) == 1."""
    sqdist = squareform(pdist(X_normalized, "sqeuclidean"))
    cond = _binary_search_perplexity(sqdist, perplexity)
    P = cond + cond.T
    P /= np.maximum(P.sum(), MACHINE_EPSILON)
    return np.maximum(P, MACHINE_EPSILON)


def kl_divergence_and_grad(Y: np.ndarray, P: np.ndarray) -> tuple[float, np.ndarray]:
    """KL(P || Q) under the Student-t kernel plus its analytic gradient.

    dC/dy_i = 4 * sum_j (p_ij - q_ij) (1 + ||y_i - y_j||^2)^-1 (y_i - y_j)
    """
    n = Y.shape[0]
    num = 1.0 / (1.0 + squareform(pdist(Y, "sqeuclidean")))
    np.fill_diagonal(num, 0.0)
    Q = np.maximum(num / np.maximum(num.sum(), MACHINE_EPSILON), MACHINE_EPSILON)

    kl = float(np.sum(P * np.log(P / Q)))

    PQn = (P - Q) * num
    # grad_i = 4 * (y_i * sum_j w_ij - sum_j w_ij y_j)
    grad = 4.0 * (Y * PQn.sum(axis=1, keepdims=True) - PQn @ Y)
    return kl, grad


def gaussian_init(n: int, seed: int) -> np.ndarray:
    rng = np.random.RandomState(seed)
    return rng.standard_normal((n, 2)) * INIT_SIGMA


def _gradient_descent(P: np.ndarray, Y0: np.ndarray, config: TsneConfig) -> np.ndarray:
    Y = Y0.copy()
    update = np.zeros_like(Y)
    gains = np.ones_like(Y)
    min_gain = 0.01

    for it in range(config.iterations):
        exaggerate = it < EXPLORATION_ITERS
        momentum = MOMENTUM_EARLY if exaggerate else MOMENTUM_LATE
        P_it = P * EARLY_EXAGGERATION if exaggerate else P
        _, grad = kl_divergence_and_grad(Y, P_it)

        inc = update * grad < 0.0
        gains[inc] += 0.2
        gains[~inc] *= 0.8
        np.clip(gains, min_gain, np.inf, out=gains)
        update = momentum * update - config.learning_rate * (gains * grad)
        Y += update
    return Y


def tsne_project(vectors: np.ndarray, config: TsneConfig = TsneConfig()) -> np.ndarray:
    """Project N x D vectors to N x 2. Deterministic for a fixed seed."""
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise EmptyInput("need at least one row")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("input vectors contain nan/inf")

    n = X.shape[0]
    if n == 1:
        return np.zeros((1, 2), dtype=np.float64)
    if n == 2:
        # Two points carry no affinity structure worth optimizing.
        return gaussian_init(2, config.seed)

    perplexity = min(config.perplexity, (n - 1) / 3.0)
    if perplexity < 2.0:
        raise PerplexityInfeasible(
            f"perplexity {perplexity:.3g} after clamping for N={n} (need >= 2)")

    P = joint_probabilities(l2_normalize_rows(X), perplexity)
    Y0 = gaussian_init(n, config.seed)
    return _gradient_descent(P, Y0, config)


def rearrange_by_video(points: list[MapPoint2D],
                       spacing_fraction: float = DEFAULT_SPACING_FRACTION) -> list[MapPoint2D]:
    """Fill display_xy: per-video horizontal rows through the raw centroid.

    Frame i of a video with m frames sits at (cx + (i - (m-1)/2) * s, cy)
    where s = spacing_fraction * global raw bounding-box width. Input order
    and raw_xy are preserved.
    """
    if not points:
        raise EmptyInput("no points to rearrange")

    xs = np.array([p.raw_xy[0] for p in points], dtype=np.float64)
    width = float(xs.max() - xs.min())
    if width == 0.0:
        width = 1.0  # degenerate map: keep chronological x strictly increasing
    s = spacing_fraction * width

    by_video: dict[str, list[int]] = {}
    for idx, p in enumerate(points):
        by_video.setdefault(p.video_id, []).append(idx)

    out: list[MapPoint2D] = list(points)
    for indices in by_video.values():
        indices.sort(key=lambda i: points[i].frame_index)
        m = len(indices)
        cx = float(np.mean([points[i].raw_xy[0] for i in indices]))
        cy = float(np.mean([points[i].raw_xy[1] for i in indices]))
        for rank, i in enumerate(indices):
            x = cx + (rank - (m - 1) / 2.0) * s
            out[i] = replace(points[i], display_xy=(x, cy))
    return out
