"""Identity-balanced mini-batch construction (P identities x Q samples each)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ValidationError


@dataclass(frozen=True)
class BatchPlan:
    """Row indices of one mini-batch: exactly ``p`` identities, ``q`` slots each."""

    indices: np.ndarray
    p: int
    q: int

    def __len__(self) -> int:
        return len(self.indices)


def _as_rng(rng_state) -> np.random.Generator:
    if isinstance(rng_state, np.random.Generator):
        return rng_state
    return np.random.default_rng(rng_state)


def _pick_for_identity(rng: np.random.Generator, rows: np.ndarray, q: int) -> np.ndarray:
    # Identities with fewer than q samples are drawn with replacement so the
    # batch shape stays fixed at p*q.
    return rng.choice(rows, size=q, replace=len(rows) < q)


def pk_sample(dataset: Dataset, p: int, q: int, rng_state) -> BatchPlan:
    """One batch: p identities uniformly without replacement, q slots each.

    Deterministic given ``rng_state`` (an int seed or a Generator).
    """
    if p < 1 or q < 1:
        raise ValidationError("p and q must be at least 1")
    index = dataset.identity_index
    if p > len(index):
        raise ValidationError(
            f"cannot sample {p} identities from a dataset with {len(index)}")
    rng = _as_rng(rng_state)
    ids = np.array(sorted(index), dtype=np.int64)
    chosen = rng.choice(ids, size=p, replace=False)
    picks = [_pick_for_identity(rng, index[int(ident)], q) for ident in chosen]
    return BatchPlan(indices=np.concatenate(picks), p=p, q=q)


def epoch_batches(dataset: Dataset, p: int, q: int, rng_state) -> list[BatchPlan]:
    """One epoch of batches: a single shuffled pass over the identities.

    Identities are consumed in chunks of p, so an epoch has ceil(ids/p)
    batches and every identity appears at least once. A short final chunk is
    topped up with identities already used earlier in the epoch.
    """
    if p < 1 or q < 1:
        raise ValidationError("p and q must be at least 1")
    index = dataset.identity_index
    if p > len(index):
        raise ValidationError(
            f"cannot sample {p} identities from a dataset with {len(index)}")
    rng = _as_rng(rng_state)
    order = rng.permutation(np.array(sorted(index), dtype=np.int64))

    plans = []
    for start in range(0, len(order), p):
        chunk = order[start:start + p]
        if len(chunk) < p:
            used = order[:start]
            topup = rng.choice(used, size=p - len(chunk), replace=False)
            chunk = np.concatenate([chunk, topup])
        picks = [_pick_for_identity(rng, index[int(ident)], q) for ident in chunk]
        plans.append(BatchPlan(indices=np.concatenate(picks), p=p, q=q))
    return plans
