"""Coin-based elicitation, panel aggregation, and revision support.

Instead of filling n(n-1)/2 pairwise cells, a decision-maker can price
every item once against a private unit of account.  The n prices expand
to a full comparison matrix that is coherent by construction, so the
elicitation effort drops from O(n^2) to O(n) and the consistency check
becomes vacuous.

Several decision-makers are merged by weighted geometric averaging of
their price vectors: averaging in logs is the only way the coherence
property survives aggregation.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass

from .core import (
    ComparisonMatrix,
    Normalization,
    PriorityVector,
    ValidationError,
    from_weights,
)
from .priority import deviation_matrix, nearest_transitive


@dataclass(frozen=True)
class CoinVector:
    """Prices of the n items in units of one private coin."""

    prices: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.prices, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise ValidationError(f"need at least two prices, got shape {p.shape}")
        if not np.all(np.isfinite(p)) or not np.all(p > 0.0):
            raise ValidationError("prices must be finite and strictly positive")
        p = np.array(p)
        p.flags.writeable = False
        object.__setattr__(self, "prices", p)

    @property
    def n(self) -> int:
        return self.prices.shape[0]


@dataclass(frozen=True)
class PanelWeights:
    """Importance shares of the decision-makers; nonnegative, summing to 1.

    A zero share is allowed and simply silences that panelist.
    """

    importance: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.importance, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise ValidationError(f"importance must be a nonempty vector, got shape {a.shape}")
        if not np.all(np.isfinite(a)) or np.any(a < 0.0):
            raise ValidationError("importance values must be finite and >= 0")
        if abs(a.sum() - 1.0) > 1e-12:
            raise ValidationError(f"importance must sum to 1, got {a.sum()!r}")
        a = np.array(a)
        a.flags.writeable = False
        object.__setattr__(self, "importance", a)

    @property
    def m(self) -> int:
        return self.importance.shape[0]


@dataclass(frozen=True)
class RevisionHint:
    """The single judgment whose revision pays off most."""

    row: int
    col: int
    current_value: float
    suggested_value: float


def coin_to_matrix(c: CoinVector) -> ComparisonMatrix:
    """Expand coin prices into the full ratio matrix c_i / c_j.

    n inputs produce the same n x n matrix that would otherwise take
    n(n-1)/2 pairwise judgments, and it is coherent by construction.
    """
    return from_weights(c.prices)


def aggregate_panel(vectors: list[CoinVector], p: PanelWeights) -> CoinVector:
    """Importance-weighted geometric mean of the panel's price vectors."""
    if len(vectors) != p.m:
        raise ValidationError(f"got {len(vectors)} vectors for {p.m} importance shares")
    n = vectors[0].n
    if any(v.n != n for v in vectors):
        raise ValidationError("all coin vectors must have the same dimension")
    logs = np.stack([np.log(v.prices) for v in vectors])
    return CoinVector(np.exp(p.importance @ logs))


def synthesize_hierarchy(
    criteria_weights: PriorityVector,
    alternative_weights: list[PriorityVector],
) -> PriorityVector:
    """Two-level synthesis: criteria weights times per-criterion scores.

    Global weight of alternative j is sum_k c_k * a[k]_j.  All inputs
    must be SUM_ONE; the output is SUM_ONE over the alternatives.
    """
    if criteria_weights.normalization is not Normalization.SUM_ONE:
        raise ValidationError("criteria weights must be SUM_ONE normalized")
    k = criteria_weights.n
    if len(alternative_weights) != k:
        raise ValidationError(f"got {len(alternative_weights)} alternative vectors for {k} criteria")
    n = alternative_weights[0].n
    for av in alternative_weights:
        if av.normalization is not Normalization.SUM_ONE:
            raise ValidationError("alternative weights must be SUM_ONE normalized")
        if av.n != n:
            raise ValidationError("alternative vectors must share one dimension")
    table = np.stack([av.weights for av in alternative_weights])  # (k, n)
    global_w = criteria_weights.weights @ table
    return PriorityVector.normalized(global_w, Normalization.SUM_ONE)


def revision_hint(m: ComparisonMatrix) -> RevisionHint | None:
    """Locate the judgment with the largest log residual.

    Returns the offending cell together with the fitted ratio that
    would replace it, or None when the matrix is already transitive and
    there is nothing to revise.  Ties break toward the smallest
    (row, col) in lexicographic order.
    """
    if m.is_transitive():
        return None
    dev = deviation_matrix(m)
    mag = np.abs(dev.residuals)
    np.fill_diagonal(mag, -1.0)  # keep the argmax off the diagonal
    flat = int(np.argmax(mag))   # argmax scans row-major, giving the tie rule
    row, col = divmod(flat, m.n)
    fitted = nearest_transitive(m)
    return RevisionHint(
        row=row,
        col=col,
        current_value=float(m.entries[row, col]),
        suggested_value=float(fitted.entries[row, col]),
    )
