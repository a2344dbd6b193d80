"""Independent Monte-Carlo verification of the analytic stability indices.

Everything here works at the return-map level, iterating the cross-section
maps directly rather than trusting any eigen-structure argument:

* point orbits are followed in log coordinates eta = ln x, where the maps
  are affine eta -> M_j eta + F_j; extremely small positive coordinates stay
  representable and overflow of exp is the only escape hatch needed;
* delta-basin membership demands that every partial-turn image stays below
  delta in max-norm over a budget of full returns, with a decreasing
  max-norm trend over the last quarter of the budget standing in for
  convergence to the cycle;
* the local index is estimated by sampling uniform points in positive-orthant
  eps-cubes at a ladder of levels, fitting the slopes of ln(fraction) and
  ln(1 - fraction) against ln(eps) over levels strictly inside (0, 1);
* the escape-exponent slope of a single half-space slice is estimated the
  same way from the membership test |x_1^{a_1} ... x_N^{a_N}| < 1.

Estimates are deterministic: the RNG stream of every level is derived from
(seed, level index), so results are bit-identical for identical configs
regardless of how levels are scheduled.  HETSTAB_THREADS > 1 evaluates
ladder levels in a thread pool; the reduction is per-level and order-free.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .findex import ZeroVectorError
from .stability import IndeterminateError
from .transition import CycleLike, TransitionMatrix, _entries, as_basic_matrices, log_offsets

LOG_CAP = 709.0          # exp overflow boundary in double precision
DEEP_LOG = -1e9          # max-norm in log coordinates below this counts as converged
MIN_FIT_HITS = 8         # levels with fewer hits carry too much ln() bias to fit


class NonPositiveInput(ValueError):
    """Cross-section points must lie in the open positive orthant."""


class InsufficientResolution(RuntimeError):
    """Too few usable ladder levels to fit a slope."""


class Escaped:
    """Sentinel: an orbit left the representable / tracked region."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ESCAPED"


ESCAPED = Escaped()


@dataclass(frozen=True)
class EstimatorConfig:
    """Sampling plan for the delta-basin index estimator.

    delta caps the tube around the cycle; epsilon_ladder is a strictly
    decreasing list of cube half-widths, all below delta; max_full_turns
    bounds the orbit budget per sample.
    """

    delta: float = 1e-2
    epsilon_ladder: tuple[float, ...] = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)
    samples_per_level: int = 4000
    max_full_turns: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon_ladder", tuple(float(e) for e in self.epsilon_ladder))
        if not self.delta > 0:
            raise ValueError("delta must be > 0")
        lad = self.epsilon_ladder
        if not lad or any(not e > 0 for e in lad):
            raise ValueError("epsilon ladder must be non-empty and positive")
        if any(a <= b for a, b in zip(lad, lad[1:])):
            raise ValueError("epsilon ladder must be strictly decreasing")
        if any(e >= self.delta for e in lad):
            raise ValueError("every ladder level must be < delta")
        if self.samples_per_level < 1 or self.max_full_turns < 4:
            raise ValueError("need samples_per_level >= 1 and max_full_turns >= 4")


@dataclass(frozen=True)
class LevelEstimate:
    epsilon: float
    sigma_frac: float      # basin fraction Sigma-hat at this level
    stderr: float          # binomial standard error
    samples: int


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual: float        # rms of weighted fit residuals
    n_points: int


@dataclass(frozen=True)
class BasinEstimate:
    levels: tuple[LevelEstimate, ...]
    sigma_minus: float
    sigma_plus: float
    fit_minus: SlopeFit | None
    fit_plus: SlopeFit | None
    sigma_hat: float


@dataclass(frozen=True)
class FplusEstimate:
    levels: tuple[LevelEstimate, ...]   # sigma_frac = fraction inside the slice
    fit: SlopeFit | None
    fplus_hat: float


# ---------------------------------------------------------------------------
# Point maps
# ---------------------------------------------------------------------------


def apply_matrix_map(
    matrix: TransitionMatrix | np.ndarray,
    x: Sequence[float],
    consts: Sequence[float] | None = None,
    log_cap: float = LOG_CAP,
):
    """One cross-section map in original coordinates: x'_i = c_i prod_k x_k^{M_ik}.

    Evaluated through log coordinates; returns ESCAPED when the image
    overflows exp (any log coordinate above log_cap or non-finite).
    """
    M = _entries(matrix)
    x = np.asarray(x, float)
    if x.shape != (M.shape[0],):
        raise ValueError(f"point has wrong shape {x.shape} for {M.shape} matrix")
    if np.any(x <= 0.0) or not np.all(np.isfinite(x)):
        raise NonPositiveInput("point must have finite, strictly positive coordinates")
    eta = M @ np.log(x)
    if consts is not None:
        eta = eta + np.log(np.asarray(consts, float))
    if not np.all(np.isfinite(eta)) or np.any(eta > log_cap):
        return ESCAPED
    return np.exp(eta)


def _gmaps(cycle: CycleLike) -> tuple[list[np.ndarray], list[np.ndarray]]:
    return as_basic_matrices(cycle), log_offsets(cycle)


def _basin_mask(
    mats: list[np.ndarray],
    offs: list[np.ndarray],
    j: int,
    eta0: np.ndarray,
    delta: float,
    max_full_turns: int,
) -> np.ndarray:
    """Vectorised delta-basin membership for a batch of log-coordinate points.

    A sample is in the basin when no partial-turn image ever reaches delta in
    max-norm and its orbit either dives below DEEP_LOG or shows a decreasing
    max-norm trend over the last quarter of the turn budget.
    """
    m = len(mats)
    ln_delta = math.log(delta)
    n_samples = eta0.shape[0]
    result = np.zeros(n_samples, dtype=bool)

    idx = np.arange(n_samples)
    mx = eta0.max(axis=1)
    keep = mx < ln_delta
    idx, eta = idx[keep], eta0[keep]
    if idx.size == 0:
        return result

    q3 = (3 * max_full_turns) // 4
    q3_max = np.full(n_samples, np.inf)
    mx = eta.max(axis=1)
    for turn in range(max_full_turns):
        for step in range(m):
            l = (j + step) % m
            eta = eta @ mats[l].T + offs[l]
            mx = eta.max(axis=1)
            deep = mx <= DEEP_LOG
            if deep.any():
                result[idx[deep]] = True
            escaped = (mx >= ln_delta) | np.isnan(mx)
            keep = ~(deep | escaped)
            if not keep.all():
                idx, eta, mx = idx[keep], eta[keep], mx[keep]
            if idx.size == 0:
                return result
        if turn == q3:
            q3_max[idx] = mx
    result[idx[mx < q3_max[idx]]] = True
    return result


def in_delta_basin(cycle: CycleLike, j: int, x: Sequence[float], config: EstimatorConfig) -> bool:
    """Does the orbit of x from the incoming section of node j stay in the
    delta-tube and converge?"""
    mats, offs = _gmaps(cycle)
    x = np.asarray(x, float)
    if np.any(x <= 0.0) or not np.all(np.isfinite(x)):
        raise NonPositiveInput("point must have finite, strictly positive coordinates")
    eta0 = np.log(x)[None, :]
    return bool(
        _basin_mask(mats, offs, j, eta0, config.delta, config.max_full_turns)[0]
    )


# ---------------------------------------------------------------------------
# Slope fitting
# ---------------------------------------------------------------------------


def _weighted_line_fit(xs, ys, ws) -> SlopeFit:
    xs, ys, ws = (np.asarray(a, float) for a in (xs, ys, ws))
    wsum = ws.sum()
    xb = (ws * xs).sum() / wsum
    yb = (ws * ys).sum() / wsum
    sxx = (ws * (xs - xb) ** 2).sum()
    slope = (ws * (xs - xb) * (ys - yb)).sum() / sxx
    intercept = yb - slope * xb
    res = ys - (slope * xs + intercept)
    residual = math.sqrt(float((ws * res**2).sum() / wsum))
    return SlopeFit(slope=float(slope), intercept=float(intercept),
                    residual=residual, n_points=len(xs))


def _tail_slope(levels: Sequence[LevelEstimate], use_complement: bool) -> SlopeFit | None:
    """Fit ln(frac) or ln(1-frac) against ln(eps) over usable interior levels.

    Levels saturated at 0 or 1 are excluded; so are levels whose relevant
    hit count falls below MIN_FIT_HITS, where the log of a tiny count is
    biased.  Weights are inverse delta-method variances and the log estimate
    carries the matching first-order bias correction.

    Two passes: choosing the window from *observed* counts keeps only levels
    that fluctuated upward near the cutoff, tilting the slope, so the first
    fit's predicted counts (noise-independent) pick the final window and
    weights, and only then are the observed fractions refit.
    """
    interior = []
    for lev in levels:
        p = 1.0 - lev.sigma_frac if use_complement else lev.sigma_frac
        if 0.0 <= p < 1.0:
            interior.append((math.log(lev.epsilon), p, lev.samples))

    xs, ys, ws = [], [], []
    for x, p, n in interior:
        if p * n < MIN_FIT_HITS:
            continue
        xs.append(x)
        ys.append(math.log(p) + (1.0 - p) / (2.0 * n * p))
        ws.append(n * p / (1.0 - p))
    if len(xs) < 2:
        return None
    first = _weighted_line_fit(xs, ys, ws)

    xs, ys, ws = [], [], []
    for x, p, n in interior:
        p_pred = math.exp(first.intercept + first.slope * x)
        if not 0.0 < p_pred < 1.0 or p_pred * n < MIN_FIT_HITS or p == 0.0:
            continue
        xs.append(x)
        ys.append(math.log(p) + (1.0 - p_pred) / (2.0 * n * p_pred))
        ws.append(n * p_pred / (1.0 - p_pred))
    if len(xs) < 2:
        return first
    return _weighted_line_fit(xs, ys, ws)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("HETSTAB_THREADS", "1")))
    except ValueError:
        return 1


def _map_levels(func, n_levels: int) -> list:
    threads = _thread_count()
    if threads == 1:
        return [func(i) for i in range(n_levels)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, range(n_levels)))


def _sample_log_cube(rng: np.random.Generator, eps: float, n: int, dim: int) -> np.ndarray:
    # ln of Uniform(0, eps): ln(eps) + ln(U), U in (0, 1]; no underflow at any depth
    return math.log(eps) + np.log1p(-rng.random((n, dim)))


def estimate_sigma_mc(cycle: CycleLike, j: int, config: EstimatorConfig) -> BasinEstimate:
    """Monte-Carlo local stability index at the incoming section of node j.

    Per ladder level eps, samples uniform points of the positive-orthant
    eps-cube (one RNG stream per (seed, level)), measures the delta-basin
    fraction, then fits

        sigma_minus ~ slope of ln(Sigma-hat)   vs ln(eps)
        sigma_plus  ~ slope of ln(1-Sigma-hat) vs ln(eps)

    over interior levels, returning sigma_hat = sigma_plus - sigma_minus.
    Uniform saturation at 1 (or 0) short-circuits to the +inf (-inf)
    candidate; partial saturation with fewer than two usable levels raises
    InsufficientResolution.
    """
    mats, offs = _gmaps(cycle)
    dim = mats[0].shape[0]
    if not 0 <= j < len(mats):
        raise IndexError(f"node index {j} out of range for m={len(mats)}")

    def one_level(li: int) -> LevelEstimate:
        eps = config.epsilon_ladder[li]
        rng = np.random.default_rng((config.seed, li))
        eta0 = _sample_log_cube(rng, eps, config.samples_per_level, dim)
        mask = _basin_mask(mats, offs, j, eta0, config.delta, config.max_full_turns)
        frac = float(mask.mean())
        stderr = math.sqrt(frac * (1.0 - frac) / config.samples_per_level)
        return LevelEstimate(epsilon=eps, sigma_frac=frac, stderr=stderr,
                             samples=config.samples_per_level)

    levels = tuple(_map_levels(one_level, len(config.epsilon_ladder)))

    if all(lev.sigma_frac == 1.0 for lev in levels):
        return BasinEstimate(levels, sigma_minus=0.0, sigma_plus=math.inf,
                             fit_minus=None, fit_plus=None, sigma_hat=math.inf)
    if all(lev.sigma_frac == 0.0 for lev in levels):
        return BasinEstimate(levels, sigma_minus=math.inf, sigma_plus=0.0,
                             fit_minus=None, fit_plus=None, sigma_hat=-math.inf)

    fit_minus = _tail_slope(levels, use_complement=False)
    fit_plus = _tail_slope(levels, use_complement=True)
    if fit_minus is None or fit_plus is None:
        side = "basin" if fit_minus is None else "complement"
        raise InsufficientResolution(
            f"fewer than two usable ladder levels on the {side} side; "
            "deepen the ladder or raise samples_per_level"
        )
    return BasinEstimate(
        levels=levels,
        sigma_minus=fit_minus.slope,
        sigma_plus=fit_plus.slope,
        fit_minus=fit_minus,
        fit_plus=fit_plus,
        sigma_hat=fit_plus.slope - fit_minus.slope,
    )


def estimate_fplus_mc(
    alpha: Iterable[float],
    epsilon_ladder: Sequence[float],
    samples: int,
    seed: int,
) -> FplusEstimate:
    """Monte-Carlo escape exponent of one half-space slice.

    Per level eps = e^R, samples the positive-orthant eps-cube and counts
    the fraction with |x_1^{a_1} ... x_N^{a_N}| < 1, i.e. alpha . ln(x) < 0;
    the slope of ln(1 - fraction) against R is the escape exponent.  A run
    saturated inside the slice at every level reports the +inf candidate; one
    that never enters reports exactly 0.
    """
    a = np.asarray([float(v) for v in alpha])
    if a.size == 0 or np.all(a == 0.0):
        raise ZeroVectorError("zero direction vector has no escape exponent")
    ladder = [float(e) for e in epsilon_ladder]
    if not ladder or any(not e > 0 for e in ladder):
        raise ValueError("epsilon ladder must be non-empty and positive")
    if any(x <= y for x, y in zip(ladder, ladder[1:])):
        raise ValueError("epsilon ladder must be strictly decreasing")
    if samples < 1:
        raise ValueError("samples must be >= 1")

    def one_level(li: int) -> LevelEstimate:
        eps = ladder[li]
        rng = np.random.default_rng((seed, li))
        eta = _sample_log_cube(rng, eps, samples, a.size)
        frac = float((eta @ a < 0.0).mean())
        stderr = math.sqrt(frac * (1.0 - frac) / samples)
        return LevelEstimate(epsilon=eps, sigma_frac=frac, stderr=stderr, samples=samples)

    levels = tuple(_map_levels(one_level, len(ladder)))

    if all(lev.sigma_frac == 1.0 for lev in levels):
        return FplusEstimate(levels=levels, fit=None, fplus_hat=math.inf)
    if all(lev.sigma_frac == 0.0 for lev in levels):
        return FplusEstimate(levels=levels, fit=None, fplus_hat=0.0)
    fit = _tail_slope(levels, use_complement=True)
    if fit is None:
        raise InsufficientResolution(
            "fewer than two usable ladder levels for the complement fraction"
        )
    return FplusEstimate(levels=levels, fit=fit, fplus_hat=fit.slope)


# ---------------------------------------------------------------------------
# Brute-force divergence test for a single matrix
# ---------------------------------------------------------------------------


def matrix_basin_membership(
    matrix: TransitionMatrix | np.ndarray,
    y: Sequence[float],
    max_iterations: int = 400,
    blowup_factor: float = 1e9,
) -> bool | np.ndarray:
    """Does iterating y <- M y drive every component to -inf?

    Brute force, no eigen-analysis: iterate until the largest component
    crosses -blowup_factor * ||y||_inf (diverged to -inf in every component,
    True) or +blowup_factor * ||y||_inf / reaches non-finite values (False),
    else judge by the max-component trend over the final quarter of the
    budget.  A flat trend at the cap raises IndeterminateError.

    y may be a single strictly negative vector or a batch of them stacked in
    rows; batches return a boolean array.
    """
    M = _entries(matrix)
    arr = np.asarray(y, float)
    single = arr.ndim == 1
    batch = arr[None, :] if single else np.array(arr, dtype=float)
    if batch.ndim != 2 or batch.shape[1] != M.shape[0]:
        raise ValueError(f"samples have wrong shape {arr.shape} for {M.shape} matrix")
    if np.any(batch >= 0.0) or not np.all(np.isfinite(batch)):
        raise ValueError("initial points must be finite and strictly negative")

    scale = np.abs(batch).max(axis=1)
    neg_wall = -blowup_factor * scale
    pos_wall = blowup_factor * scale

    n = batch.shape[0]
    result = np.zeros(n, dtype=bool)
    idx = np.arange(n)
    cur = batch
    q3 = (3 * max_iterations) // 4
    q3_max = np.full(n, np.nan)
    mx = cur.max(axis=1)
    for it in range(max_iterations):
        cur = cur @ M.T
        mx = cur.max(axis=1)
        finite = np.isfinite(cur).all(axis=1)
        diverged = (mx <= neg_wall[idx]) & finite
        # escape means the signed max component blowing up, not magnitude:
        # a diverging orbit's most negative component grows just as fast
        blown = ((mx >= pos_wall[idx]) & finite) | ~finite
        if diverged.any():
            result[idx[diverged]] = True
        keep = ~(diverged | blown)
        if not keep.all():
            idx, cur, mx = idx[keep], cur[keep], mx[keep]
        if idx.size == 0:
            break
        if it == q3:
            q3_max[idx] = mx

    if idx.size:
        ref = q3_max[idx]
        falling = mx < ref - np.abs(ref) * 1e-12
        rising = mx > ref + np.abs(ref) * 1e-12
        flat = ~(falling | rising) | np.isnan(ref)
        if flat.any():
            raise IndeterminateError(
                node=-1,
                cause=RuntimeError(
                    f"{int(flat.sum())} orbit(s) neither diverging nor escaping "
                    f"after {max_iterations} iterations"
                ),
            )
        result[idx[falling]] = True

    return bool(result[0]) if single else result
