"""Inverse-distance-weighted accuracy surrogate over evaluated paths."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .model import PathSpec, ValidationError
from .reward import average_accuracy
from .throughput import BaselineMetrics, PathThroughput


class EmptyKnownSet(ValueError):
    pass


class EvaluatedSet:
    """Paths with known accuracy, kept in evaluation order.

    Predictions read a canonical (sorted) snapshot, so they do not depend on
    the insertion order.
    """

    def __init__(self, items: Iterable[tuple[PathSpec, float]] = ()):
        self._paths: list[PathSpec] = []
        self._acc: list[float] = []
        self._keys: set = set()
        for path, acc in items:
            self.add(path, acc)

    def add(self, path: PathSpec, accuracy: float) -> None:
        if path.key() in self._keys:
            raise ValidationError(f"{path.label()} already evaluated")
        if not 0.0 <= accuracy <= 1.0:
            raise ValidationError(f"accuracy {accuracy!r} not in [0, 1]")
        self._keys.add(path.key())
        self._paths.append(path)
        self._acc.append(float(accuracy))

    def __len__(self) -> int:
        return len(self._paths)

    def __contains__(self, path: PathSpec) -> bool:
        return path.key() in self._keys

    def items(self) -> list[tuple[PathSpec, float]]:
        return list(zip(self._paths, self._acc))

    def arrays(self, n_f: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted ``(vectors, accuracies)``; shape ``(n, 4)`` and ``(n,)``."""
        rows = sorted((p.vector(n_f), a) for p, a in zip(self._paths, self._acc))
        vecs = np.array([r for r, _ in rows], dtype=np.int64).reshape(-1, 4)
        acc = np.array([a for _, a in rows], dtype=np.float64)
        return vecs, acc


def _as_known(known) -> EvaluatedSet:
    return known if isinstance(known, EvaluatedSet) else EvaluatedSet(known)


def predict_many(candidates: Sequence[PathSpec], known, n_f: int) -> np.ndarray:
    """Vectorized prediction for several candidates against one snapshot."""
    known = _as_known(known)
    if len(known) == 0:
        raise EmptyKnownSet("cannot predict from an empty evaluated set")
    vecs, acc = known.arrays(n_f)
    cand = np.array([p.vector(n_f) for p in candidates], dtype=np.int64).reshape(-1, 4)
    diff = cand[:, None, :] - vecs[None, :, :]
    # exact integer squared distances; sqrt is the only rounding step
    dist = np.sqrt((diff * diff).sum(axis=2).astype(np.float64))
    lo, hi = acc.min(), acc.max()
    out = np.empty(len(cand))
    for i in range(len(cand)):
        d = dist[i]
        hit = np.flatnonzero(d == 0.0)
        if hit.size:
            out[i] = acc[hit[0]]
            continue
        w = 1.0 / d
        # clip keeps the weighted mean inside the hull despite rounding
        out[i] = min(max(np.dot(w, acc) / w.sum(), lo), hi)
    return out


def predict_accuracy(candidate: PathSpec, known, n_f: int) -> float:
    """Inverse-distance-weighted mean of known accuracies.

    A candidate that coincides with a known path gets that path's stored
    accuracy back unchanged.
    """
    return float(predict_many([candidate], known, n_f)[0])


def predict_average_accuracy(
    candidate: PathSpec,
    predicted_a: float,
    tp: PathThroughput,
    baseline: BaselineMetrics,
) -> float:
    return average_accuracy(tp, baseline.a_0, predicted_a)
