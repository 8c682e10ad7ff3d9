"""
Gaussian mixture clustering with BIC model selection.
Handles the covariance floor, skipped degenerate fits and the optional EM
log-likelihood trace.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.mixture import GaussianMixture

logger = logging.getLogger(__name__)

DEFAULT_K_RANGE = tuple(range(1, 10))

class NominationError(Exception):
    """Base exception for clustering and nomination errors."""
    pass

class GmmError(NominationError):
    """Exception raised when no mixture model can be fit."""
    pass

@dataclass(frozen=True, eq=False)
class GmmModel:
    """A fitted full-covariance mixture; immutable and shareable."""
    k: int
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    assignment: np.ndarray
    bic: float
    log_likelihood: float
    covariance_floor: float

def covariance_floor(points: np.ndarray, scale: float = 1e-6) -> float:
    """Regularization added to covariance diagonals: scale * trace(cov) / d."""
    d = points.shape[1]
    trace = float(np.var(points, axis=0).sum()) if points.shape[0] > 1 else 0.0
    floor = scale * trace / d
    return floor if floor > 0 else scale

def _mixture(k: int, floor: float, n_init: int, tol: float, max_iter: int, random_state: int,
             **kwargs) -> GaussianMixture:
    return GaussianMixture(
        n_components=k,
        covariance_type='full',
        reg_covar=floor,
        n_init=n_init,
        init_params='k-means++',
        tol=tol,
        max_iter=max_iter,
        random_state=random_state,
        **kwargs,
    )

def em_trace(points: np.ndarray, k: int, floor: float, random_state: int, max_iter: int = 500,
             tol: float = 1e-8, monotone_tolerance: float = 1e-9) -> List[float]:
    """
    Run EM one iteration at a time and record the total log-likelihood.

    Raises:
        GmmError: If the log-likelihood decreases by more than the tolerance
    """
    model = _mixture(k, floor, 1, tol, 1, random_state, warm_start=True)
    trace: List[float] = []
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', ConvergenceWarning)
        for _ in range(max_iter):
            model.fit(points)
            ll = float(model.score(points) * points.shape[0])
            if trace and ll < trace[-1] - monotone_tolerance * max(1.0, abs(trace[-1])):
                raise GmmError(f"EM log-likelihood decreased from {trace[-1]} to {ll} at k={k}")
            if trace and abs(ll - trace[-1]) <= tol * max(1.0, abs(trace[-1])):
                trace.append(ll)
                break
            trace.append(ll)
    return trace

def fit_gmm(points: np.ndarray, k_range: Iterable[int] = DEFAULT_K_RANGE, n_init: int = 5,
            random_state: int = 0, floor_scale: float = 1e-6, tol: float = 1e-8,
            max_iter: int = 500, check_monotone: bool = False) -> GmmModel:
    """
    Fit full-covariance mixtures over a range of k and keep the BIC-optimal one.

    Args:
        points: n x d data
        k_range: Candidate component counts; k > n is skipped
        n_init: k-means++ restarts per k
        random_state: Seed for initialization
        floor_scale: Covariance floor as a fraction of trace(cov) / d
        tol: EM convergence tolerance
        max_iter: EM iteration cap
        check_monotone: Re-run the selected k stepwise and assert monotone EM

    Returns:
        The selected model; ties in BIC go to the smaller k

    Raises:
        GmmError: If every k fails
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 1:
        raise GmmError(f"Expected a nonempty n x d matrix, got shape {points.shape}")
    floor = covariance_floor(points, floor_scale)

    best: Optional[GaussianMixture] = None
    best_bic = np.inf
    for k in sorted(set(k_range)):
        if k < 1 or k > points.shape[0]:
            logger.debug(f"Skipping k={k} for {points.shape[0]} points")
            continue
        model = _mixture(k, floor, n_init, tol, max_iter, random_state)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', ConvergenceWarning)
                model.fit(points)
        except (ValueError, np.linalg.LinAlgError) as e:
            # sklearn raises ValueError when a component covariance is singular even with reg_covar
            logger.warning(f"GMM with k={k} collapsed below the covariance floor, skipping: {e}")
            continue
        bic = float(model.bic(points))
        if not np.isfinite(bic):
            logger.warning(f"GMM with k={k} has a non-finite BIC, skipping")
            continue
        logger.debug(f"GMM k={k}: BIC {bic:.4f}")
        if bic < best_bic:
            best, best_bic = model, bic

    if best is None:
        raise GmmError("Gaussian mixture fitting failed for every k")

    if check_monotone:
        em_trace(points, best.n_components, floor, random_state, max_iter=max_iter, tol=tol)

    return GmmModel(
        k=int(best.n_components),
        weights=best.weights_.copy(),
        means=best.means_.copy(),
        covariances=best.covariances_.copy(),
        assignment=best.predict(points),
        bic=best_bic,
        log_likelihood=float(best.score(points) * points.shape[0]),
        covariance_floor=floor,
    )
