"""Feature-vector store: exact cosine top-k search and a 2D projection.

Search is brute-force exact over unit-normalized vectors. The projection is
a deliberately simplified neighbor-embedding in the UMAP family, fully
deterministic for a fixed seed: exact k-NN graph, per-point adaptive kernel
widths, symmetrized edge weights, and a stochastic attract/repel layout
optimization with the kernel phi(d) = 1 / (1 + d^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class SimilarityError(ValueError):
    pass


class DimensionMismatch(SimilarityError):
    pass


class ZeroVector(SimilarityError):
    pass


class NonFiniteEntry(SimilarityError):
    pass


class UnknownFeatureId(KeyError):
    pass


class TooFewPoints(SimilarityError):
    pass


@dataclass
class ProjectionConfig:
    k_neighbors: int = 15
    n_epochs: int = 200
    learning_rate: float = 1.0
    negative_samples: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.k_neighbors < 2:
            raise ValueError("k_neighbors must be >= 2")
        if self.n_epochs < 1:
            raise ValueError("n_epochs must be >= 1")


@dataclass
class StoredVector:
    feature_id: str
    values: np.ndarray
    metadata: dict
    version: int = 1


class VectorStore:
    """Fixed-dimension store of unit-normalized feature vectors."""

    def __init__(self, dim: Optional[int] = None):
        self.dim = dim
        self._vectors: dict[str, StoredVector] = {}

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, feature_id: str) -> bool:
        return feature_id in self._vectors

    def get(self, feature_id: str) -> StoredVector:
        try:
            return self._vectors[feature_id]
        except KeyError:
            raise UnknownFeatureId(feature_id) from None

    def add_vector(self, feature_id: str, values: Sequence[float],
                   metadata: Optional[dict] = None) -> StoredVector:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise DimensionMismatch("values must be a flat vector")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteEntry(f"non-finite entry in vector {feature_id!r}")
        if self.dim is None:
            self.dim = int(arr.shape[0])
        elif arr.shape[0] != self.dim:
            raise DimensionMismatch(
                f"expected dim {self.dim}, got {arr.shape[0]} for {feature_id!r}")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ZeroVector(f"zero vector for {feature_id!r}")
        prior = self._vectors.get(feature_id)
        version = prior.version + 1 if prior else 1
        stored = StoredVector(feature_id, arr / norm, dict(metadata or {}), version)
        self._vectors[feature_id] = stored
        return stored

    def _query_values(self, query) -> np.ndarray:
        if isinstance(query, str):
            return self.get(query).values
        arr = np.asarray(query, dtype=np.float64)
        if self.dim is not None and arr.shape != (self.dim,):
            raise DimensionMismatch(f"query has shape {arr.shape}, store dim {self.dim}")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ZeroVector("zero query vector")
        return arr / norm

    def search_topk(self, query, k: int, exclude_self: bool = True
                    ) -> list[tuple[str, float]]:
        """Exact cosine top-k, ties broken by feature_id ascending."""
        if not self._vectors:
            raise SimilarityError("store is empty")
        if k < 1:
            raise SimilarityError("k must be >= 1")
        q = self._query_values(query)
        self_id = query if isinstance(query, str) and exclude_self else None
        scored = [(-float(np.dot(q, sv.values)), fid)
                  for fid, sv in self._vectors.items() if fid != self_id]
        scored.sort()
        return [(fid, -neg) for neg, fid in scored[:k]]

    # -- 2D projection ----------------------------------------------------------

    def project_2d(self, config: Optional[ProjectionConfig] = None
                   ) -> dict[str, tuple[float, float]]:
        cfg = config or ProjectionConfig()
        ids = sorted(self._vectors)
        n = len(ids)
        if n < 3:
            raise TooFewPoints(f"projection needs >= 3 vectors, got {n}")
        mat = np.stack([self._vectors[i].values for i in ids])
        layout = _embed(mat, cfg)
        return {fid: (float(layout[i, 0]), float(layout[i, 1]))
                for i, fid in enumerate(ids)}


def _knn_cosine(mat: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact k nearest neighbors by cosine distance d = 1 - similarity."""
    n = mat.shape[0]
    k = min(k, n - 1)
    dist = 1.0 - mat @ mat.T
    np.fill_diagonal(dist, np.inf)
    idx = np.argsort(dist, axis=1, kind="stable")[:, :k]
    d = np.take_along_axis(dist, idx, axis=1)
    return idx, np.maximum(d, 0.0)


def _membership_weights(knn_d: np.ndarray, k: int) -> np.ndarray:
    """Directed neighbor weights exp(-max(0, d - rho_i) / sigma_i).

    sigma_i is found by binary search so the row sums to log2(k).
    """
    n = knn_d.shape[0]
    rho = knn_d[:, 0]
    target = math.log2(max(k, 2))
    weights = np.empty_like(knn_d)
    for i in range(n):
        adj = np.maximum(0.0, knn_d[i] - rho[i])
        lo, hi = 1e-6, 1e3
        sigma = 1.0
        for _ in range(64):
            sigma = (lo + hi) / 2.0
            s = float(np.exp(-adj / sigma).sum())
            if s > target:
                hi = sigma
            else:
                lo = sigma
        weights[i] = np.exp(-adj / sigma)
    return weights


def _edge_list(knn_idx: np.ndarray, weights: np.ndarray
               ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetrize w = u + u^T - u*u^T over the directed k-NN weights."""
    n = knn_idx.shape[0]
    directed: dict[tuple[int, int], float] = {}
    for i in range(n):
        for c, j in enumerate(knn_idx[i]):
            directed[(i, int(j))] = float(weights[i, c])
    combined: dict[tuple[int, int], float] = {}
    for (i, j) in directed:
        key = (min(i, j), max(i, j))
        if key in combined:
            continue
        uf = directed.get(key, 0.0)
        ub = directed.get((key[1], key[0]), 0.0)
        combined[key] = uf + ub - uf * ub
    keys = sorted(combined)
    heads = np.array([k[0] for k in keys], dtype=np.int64)
    tails = np.array([k[1] for k in keys], dtype=np.int64)
    w = np.array([combined[k] for k in keys], dtype=np.float64)
    return heads, tails, w


def _embed(mat: np.ndarray, cfg: ProjectionConfig) -> np.ndarray:
    n = mat.shape[0]
    knn_idx, knn_d = _knn_cosine(mat, cfg.k_neighbors)
    weights = _membership_weights(knn_d, cfg.k_neighbors)
    heads, tails, w = _edge_list(knn_idx, weights)
    w_max = float(w.max()) if len(w) else 1.0

    rng = np.random.default_rng(cfg.seed)
    layout = rng.uniform(-10.0, 10.0, size=(n, 2))

    clip = 4.0
    eps = 1e-4
    for epoch in range(cfg.n_epochs):
        lr = cfg.learning_rate * (1.0 - epoch / cfg.n_epochs)
        fire = rng.random(len(w)) < (w / w_max)
        for e in np.nonzero(fire)[0]:
            i, j = int(heads[e]), int(tails[e])
            diff = layout[i] - layout[j]
            d2 = float(diff @ diff)
            # attractive: gradient of -log(1/(1+d^2)) wrt layout[i]
            grad = np.clip(2.0 * diff / (1.0 + d2), -clip, clip)
            layout[i] -= lr * grad
            layout[j] += lr * grad
            for _ in range(cfg.negative_samples):
                kneg = int(rng.integers(n))
                if kneg == i:
                    continue
                diff = layout[i] - layout[kneg]
                d2 = float(diff @ diff)
                # repulsive: gradient of -log(1 - 1/(1+d^2)) wrt layout[i]
                grad = np.clip(2.0 * diff / ((d2 + eps) * (1.0 + d2)), -clip, clip)
                layout[i] += lr * grad
    return layout
