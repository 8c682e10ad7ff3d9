"""
Vertex nomination by spectral embedding, seeded alignment and mixture clustering.
Handles the Mahalanobis max-distance score, multi-vertex min-aggregation and
deterministic rank lists.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist, mahalanobis

from embedding import Embedding, align, ase, procrustes, select_pair_dim
from graphs import Obfuscation
from models import NominatablePair
from .gmm import DEFAULT_K_RANGE, GmmModel, NominationError, fit_gmm

logger = logging.getLogger(__name__)

TIEBREAK = 'score, then label (lexicographic)'

@dataclass(frozen=True)
class NominationConfig:
    """Pipeline settings; ``d=None`` selects the dimension from the scree plots."""
    d: Optional[int] = None
    k_range: Tuple[int, ...] = DEFAULT_K_RANGE
    n_init: int = 5
    covariance_floor_scale: float = 1e-6
    tol: float = 1e-8
    max_iter: int = 500
    pooled: bool = True
    exclude_seeds: bool = True
    check_monotone: bool = False
    random_state: int = 0

    def __post_init__(self):
        if self.d is not None and self.d < 1:
            raise NominationError(f"d must be positive, got {self.d}")
        if not self.k_range or min(self.k_range) < 1:
            raise NominationError(f"k_range must hold positive integers, got {self.k_range}")
        if self.n_init < 1:
            raise NominationError(f"n_init must be positive, got {self.n_init}")

@dataclass(frozen=True)
class NominationList:
    """Total order of candidate vertices with their scores."""
    order: Tuple[Hashable, ...]
    scores: Tuple[float, ...]
    tiebreak: str = TIEBREAK
    _ranks: Dict[Hashable, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'order', tuple(self.order))
        object.__setattr__(self, 'scores', tuple(float(s) for s in self.scores))
        if len(self.order) != len(self.scores):
            raise NominationError("order and scores differ in length")
        ranks = {label: k for k, label in enumerate(self.order, start=1)}
        if len(ranks) != len(self.order):
            raise NominationError("Nomination list repeats a vertex")
        if any(b < a for a, b in zip(self.scores, self.scores[1:])):
            raise NominationError("Scores must be nondecreasing along the list")
        object.__setattr__(self, '_ranks', ranks)

    def __len__(self) -> int:
        return len(self.order)

    def rank_of(self, label: Hashable) -> Optional[int]:
        """1-based rank, or None if the vertex is not in the list."""
        return self._ranks.get(label)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'rank': range(1, len(self.order) + 1),
            'g2_label': list(self.order),
            'score': list(self.scores),
        })

    def write_csv(self, path: str):
        self.to_frame().to_csv(path, index=False, float_format='%.10g', lineterminator='\n')

def _sorted_list(labels: Sequence[Hashable], scores: np.ndarray) -> NominationList:
    ranked = sorted(zip(scores.tolist(), [str(label) for label in labels], range(len(labels))))
    return NominationList(tuple(labels[i] for _, _, i in ranked), tuple(s for s, _, _ in ranked))

def mahalanobis_delta(xu: np.ndarray, xv: np.ndarray, cov_u: np.ndarray, cov_v: np.ndarray) -> float:
    """
    Max of the Mahalanobis distances of u - v under both covariances.

    Raises:
        NominationError: If a covariance is not symmetric positive definite
    """
    distances = []
    for cov in (cov_u, cov_v):
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise NominationError("Covariance is not positive definite") from None
        distances.append(mahalanobis(np.atleast_1d(xu), np.atleast_1d(xv), np.linalg.inv(cov)))
    return float(max(distances))

@dataclass(frozen=True, eq=False)
class FittedPipeline:
    """Aligned embeddings plus mixture fits, ready to score vertex pairs."""
    pair: NominatablePair
    seeds: Tuple[Hashable, ...]
    x1: Embedding
    x2: Embedding
    gmm1: GmmModel
    gmm2: GmmModel
    assignment1: Dict[Hashable, int]
    assignment2: Dict[Hashable, int]
    d: int

    def candidates(self, exclude_seeds: bool = True) -> Tuple[Hashable, ...]:
        """g2 vertices eligible for the list."""
        excluded = {self.pair.correspondence[s] for s in self.seeds} if exclude_seeds else set()
        return tuple(u for u in self.pair.g2.labels if u not in excluded)

    def score_matrix(self, voi: Sequence[Hashable], candidates: Sequence[Hashable]) -> np.ndarray:
        """
        Delta(v, u) for every vertex of interest v (rows) and candidate u (columns).

        Each distance uses the covariance of the mixture component that v
        (in g1) or u (in g2) is assigned to.
        """
        X = self.x1.rows(voi)
        Y = self.x2.rows(candidates)
        comp_v = np.array([self.assignment1[v] for v in voi])
        comp_u = np.array([self.assignment2[u] for u in candidates])

        per_component: Dict[Tuple[int, int], np.ndarray] = {}
        for key in {(1, c) for c in comp_v} | {(2, c) for c in comp_u}:
            model = self.gmm1 if key[0] == 1 else self.gmm2
            VI = np.linalg.inv(model.covariances[key[1]])
            per_component[key] = cdist(X, Y, 'mahalanobis', VI=VI)

        D_v = np.stack([per_component[(1, c)][i] for i, c in enumerate(comp_v)])
        D_u = np.stack([per_component[(2, c)][:, j] for j, c in enumerate(comp_u)], axis=1)
        return np.maximum(D_v, D_u)

    def nominate(self, voi: Sequence[Hashable], exclude_seeds: bool = True,
                 obfuscation: Optional[Obfuscation] = None) -> NominationList:
        """Rank candidates by min over voi of Delta; ties by (obfuscated) label."""
        if not voi:
            raise NominationError("At least one vertex of interest is required")
        candidates = self.candidates(exclude_seeds)
        scores = self.score_matrix(voi, candidates).min(axis=0)
        labels = [obfuscation[u] for u in candidates] if obfuscation is not None else list(candidates)
        return _sorted_list(labels, scores)

    def lone_ranks(self, voi: Sequence[Hashable], exclude_seeds: bool = True,
                   obfuscation: Optional[Obfuscation] = None) -> Dict[Hashable, Optional[int]]:
        """
        Rank of each vertex's counterpart when that vertex alone is the vertex of interest.

        Ties fall to the obfuscated label when an obfuscation is given.
        Vertices without a counterpart among the candidates get None.
        """
        candidates = self.candidates(exclude_seeds)
        position = {u: j for j, u in enumerate(candidates)}
        nominated = [v for v in voi if self.pair.counterpart(v) in position]
        ranks: Dict[Hashable, Optional[int]] = {v: None for v in voi}
        if not nominated:
            return ranks
        labels = [obfuscation[u] for u in candidates] if obfuscation is not None else list(candidates)
        matrix = self.score_matrix(nominated, candidates)
        for row, v in zip(matrix, nominated):
            ranked = _sorted_list(labels, row)
            ranks[v] = ranked.rank_of(labels[position[self.pair.counterpart(v)]])
        return ranks

class NominationPipeline:
    def __init__(self, config: Optional[NominationConfig] = None):
        """
        Initialize the pipeline.

        Args:
            config: Pipeline settings
        """
        self.config = config or NominationConfig()

    def _check_seeds(self, pair: NominatablePair, seeds: Sequence[Hashable]) -> Tuple[Hashable, ...]:
        seeds = tuple(dict.fromkeys(seeds))
        if not seeds:
            raise NominationError("At least one seed is required")
        missing = [s for s in seeds if s not in pair.correspondence]
        if missing:
            raise NominationError(f"Seeds must be core vertices present in both graphs, got {missing[:5]}")
        return seeds

    def fit(self, pair: NominatablePair, seeds: Sequence[Hashable]) -> FittedPipeline:
        """
        Embed both graphs, align on the seeds and cluster.

        Args:
            pair: Nominatable pair
            seeds: g1 labels of the seed vertices

        Returns:
            The fitted pipeline
        """
        cfg = self.config
        seeds = self._check_seeds(pair, seeds)
        if cfg.d is not None:
            d = min(cfg.d, pair.g1.n, pair.g2.n)
        else:
            d = select_pair_dim(pair.g1, pair.g2).d

        x1 = ase(pair.g1, d)
        y2 = ase(pair.g2, d)
        alignment = procrustes(x1.rows(seeds), y2.rows([pair.correspondence[s] for s in seeds]))
        x2 = align(y2, alignment.rotation)

        fit_kwargs = dict(k_range=cfg.k_range, n_init=cfg.n_init, random_state=cfg.random_state,
                          floor_scale=cfg.covariance_floor_scale, tol=cfg.tol, max_iter=cfg.max_iter,
                          check_monotone=cfg.check_monotone)
        if cfg.pooled:
            gmm = fit_gmm(np.vstack([x1.points, x2.points]), **fit_kwargs)
            gmm1 = gmm2 = gmm
            labels1 = gmm.assignment[:pair.g1.n]
            labels2 = gmm.assignment[pair.g1.n:]
        else:
            gmm1 = fit_gmm(x1.points, **fit_kwargs)
            gmm2 = fit_gmm(x2.points, **fit_kwargs)
            labels1, labels2 = gmm1.assignment, gmm2.assignment

        logger.info(f"Fitted pipeline: d={d}, k={gmm1.k}/{gmm2.k}, {len(seeds)} seeds, "
                    f"Procrustes residual {alignment.residual:.4g}")
        return FittedPipeline(
            pair=pair,
            seeds=seeds,
            x1=x1,
            x2=x2,
            gmm1=gmm1,
            gmm2=gmm2,
            assignment1=dict(zip(x1.vertex_order, labels1.tolist())),
            assignment2=dict(zip(x2.vertex_order, labels2.tolist())),
            d=d,
        )

    def nominate(self, pair: NominatablePair, seeds: Sequence[Hashable],
                 obfuscation: Optional[Obfuscation] = None) -> NominationList:
        """
        Nominate g2 vertices for the pair's vertices of interest.

        Raises:
            NominationError: If no vertex of interest remains after excluding seeds
        """
        fitted = self.fit(pair, seeds)
        voi = [v for v in pair.voi if not (self.config.exclude_seeds and v in fitted.seeds)]
        if not voi:
            raise NominationError("No vertex of interest remains after excluding seeds")
        return fitted.nominate(voi, self.config.exclude_seeds, obfuscation)

def nominate(pair: NominatablePair, seeds: Sequence[Hashable],
             cfg: Optional[NominationConfig] = None,
             obfuscation: Optional[Obfuscation] = None) -> NominationList:
    """Run the full pipeline and return the nomination list."""
    return NominationPipeline(cfg).nominate(pair, seeds, obfuscation)
