"""Overlap metrics between predicted and ground-truth masks."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError


def dice_jaccard(pred, truth) -> tuple[float, float]:
    """Dice and Jaccard overlap of two binary masks.

    dice = 2|A & B| / (|A| + |B|), jaccard = |A & B| / |A | B|.
    Two empty masks count as perfect agreement: (1, 1).
    """
    pred = np.asarray(pred).astype(bool)
    truth = np.asarray(truth).astype(bool)
    if pred.shape != truth.shape:
        raise DimensionError(f"mask shapes differ: {pred.shape} vs {truth.shape}")
    a = int(pred.sum())
    b = int(truth.sum())
    if a == 0 and b == 0:
        return 1.0, 1.0
    inter = int(np.logical_and(pred, truth).sum())
    union = a + b - inter
    return 2.0 * inter / (a + b), inter / union
