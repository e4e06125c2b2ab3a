"""Flows/growths split and complex eigenbasis of a matrix rate.

A square rate matrix decomposes uniquely into a diagonal *growths*
part holding each column's total and a *flows* part whose columns sum
to zero, the internal transfers.  In the eigenbasis of the rate the
dynamics are diagonal, so the flows part of the diagonalized rate
vanishes: every component grows autonomously and nothing circulates.

These operations act on arbitrary square rate matrices, not on
comparison matrices; entries of any sign are allowed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import ValidationError


class NonDiagonalizableError(ValidationError):
    """Eigenvector basis too ill-conditioned to invert reliably."""

    def __init__(self, condition: float, limit: float):
        self.condition = condition
        self.limit = limit
        super().__init__(
            f"eigenvector matrix condition {condition:.3e} exceeds {limit:.1e}; "
            "matrix is numerically non-diagonalizable"
        )


@dataclass(frozen=True)
class RateDecomposition:
    """Additive split of a rate matrix, with optional eigenstructure.

    ``flows + growths`` reproduces the input; ``growths`` is diagonal
    and every column of ``flows`` sums to zero.  The eigen fields are
    populated by :func:`complex_eigenbasis` and None otherwise.
    """

    flows: np.ndarray
    growths: np.ndarray
    eigenvalues: np.ndarray | None = None
    transition: np.ndarray | None = None
    reconstruction_error: float | None = None

    @property
    def n(self) -> int:
        return self.flows.shape[0]

    def to_dict(self) -> dict:
        def complex_pairs(a):
            return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in a]

        out: dict = {
            "flows": [[float(v) for v in row] for row in self.flows.real]
            if not np.iscomplexobj(self.flows)
            else complex_pairs(self.flows),
            "growths": [[float(v) for v in row] for row in self.growths.real]
            if not np.iscomplexobj(self.growths)
            else complex_pairs(self.growths),
        }
        if self.eigenvalues is not None:
            out["eigenvalues"] = [
                {"re": float(z.real), "im": float(z.imag)} for z in self.eigenvalues
            ]
        if self.transition is not None:
            out["transition"] = complex_pairs(self.transition)
        if self.reconstruction_error is not None:
            out["reconstruction_error"] = self.reconstruction_error
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if not np.iscomplexobj(a):
        a = a.astype(float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"rate matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("rate matrix entries must be finite")
    return a


def decompose_rate(m) -> RateDecomposition:
    """Split a rate matrix into zero-column-sum flows plus diagonal growths.

    Taking growths as the column sums is the unique choice that makes
    every flows column sum to zero.
    """
    a = _as_square(m)
    growths = np.diag(a.sum(axis=0))
    flows = a - growths
    return RateDecomposition(flows=flows, growths=growths)


def complex_eigenbasis(m, cond_limit: float = 1e12) -> RateDecomposition:
    """Eigenvalues and eigenvector basis of a rate matrix.

    The returned transition matrix T satisfies
    ``T @ diag(eigenvalues) @ inv(T) ~= m`` with the Frobenius error
    reported.  Defective (numerically non-diagonalizable) matrices are
    rejected with the condition estimate; no Jordan-form fallback.
    """
    a = _as_square(m)
    eigenvalues, transition = np.linalg.eig(a)
    condition = float(np.linalg.cond(transition))
    if not np.isfinite(condition) or condition > cond_limit:
        raise NonDiagonalizableError(condition, cond_limit)
    reconstructed = transition @ np.diag(eigenvalues) @ np.linalg.inv(transition)
    error = float(np.linalg.norm(reconstructed - a))
    base = decompose_rate(a)
    return RateDecomposition(
        flows=base.flows,
        growths=base.growths,
        eigenvalues=eigenvalues,
        transition=transition,
        reconstruction_error=error,
    )
