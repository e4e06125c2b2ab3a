"""Domain types for pairwise comparison data.

A comparison matrix holds strictly positive relative judgments: entry
(i, j) is the value of item i expressed in units of item j, so a
perfectly coherent matrix has entries ``w_i / w_j`` for some positive
weight vector ``w``.  The matrix convention used everywhere in this
package is that weight-ratio form; transposing the inputs gives the
price-list convention instead.

All values here are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

#: Default relative tolerance for the structural predicates
#: (reciprocity, transitivity).
EPS_STRUCT = 1e-9

#: Tolerance for normalization invariants of priority vectors.
EPS_NORM = 1e-12


class ValidationError(ValueError):
    """Raised when input data violates a structural invariant."""


class ParseError(ValidationError):
    """Raised when serialized matrix data cannot be parsed."""


class Normalization(str, Enum):
    """Gauge convention for a priority vector."""

    SUM_ONE = "SUM_ONE"          # weights sum to 1
    PRODUCT_ONE = "PRODUCT_ONE"  # log-weights sum to 0 (balanced prices)


class FillMode(str, Enum):
    """How :func:`build_matrix` completes the lower triangle."""

    RECIPROCAL = "RECIPROCAL"  # mirror entries are forced to 1/value
    EXPLICIT = "EXPLICIT"      # every off-diagonal entry must be supplied


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ComparisonMatrix:
    """Square, strictly positive matrix of relative judgments.

    Invariants enforced at construction: all entries finite and > 0,
    diagonal exactly 1, dimension at least 2.  Reciprocity and
    transitivity are *predicates*, not invariants: real judgment data
    routinely violates both.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"comparison matrix must be square, got shape {a.shape}")
        if a.shape[0] < 2:
            raise ValidationError(f"dimension must be >= 2, got {a.shape[0]}")
        if not np.all(np.isfinite(a)):
            raise ValidationError("comparison matrix entries must be finite")
        if not np.all(a > 0.0):
            bad = np.argwhere(a <= 0.0)[0]
            raise ValidationError(
                f"entry ({bad[0]}, {bad[1]}) is not strictly positive: {a[bad[0], bad[1]]}"
            )
        if not np.all(np.diag(a) == 1.0):
            bad = int(np.flatnonzero(np.diag(a) != 1.0)[0])
            raise ValidationError(f"diagonal entry ({bad}, {bad}) must equal 1, got {a[bad, bad]}")
        object.__setattr__(self, "entries", _as_readonly(a))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def is_reciprocal(self, eps: float = EPS_STRUCT) -> bool:
        """True if ``u_ij * u_ji == 1`` for all pairs, within ``eps``."""
        return bool(np.all(np.abs(self.entries * self.entries.T - 1.0) <= eps))

    def is_transitive(self, eps: float = EPS_STRUCT) -> bool:
        """True if ``u_ik * u_kj == u_ij`` for all triples, within
        ``eps`` relative to ``u_ij``."""
        u = self.entries
        # products[i, k, j] = u_ik * u_kj, compared against u_ij
        products = u[:, :, None] * u[None, :, :]
        return bool(np.all(np.abs(products - u[:, None, :]) <= eps * u[:, None, :]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComparisonMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.all(self.entries == other.entries)
        )

    def __hash__(self) -> int:  # frozen dataclass with array field
        return hash((self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"ComparisonMatrix(n={self.n})"


@dataclass(frozen=True)
class PriorityVector:
    """Strictly positive weights under a declared normalization."""

    weights: np.ndarray
    normalization: Normalization

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValidationError(f"weights must be a nonempty vector, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or not np.all(w > 0.0):
            raise ValidationError("weights must be finite and strictly positive")
        norm = Normalization(self.normalization)
        if norm is Normalization.SUM_ONE:
            if abs(w.sum() - 1.0) > EPS_NORM:
                raise ValidationError(f"SUM_ONE weights must sum to 1, got {w.sum()!r}")
        else:
            if abs(np.log(w).sum()) > EPS_NORM:
                raise ValidationError(
                    f"PRODUCT_ONE log-weights must sum to 0, got {np.log(w).sum()!r}"
                )
        object.__setattr__(self, "weights", _as_readonly(w))
        object.__setattr__(self, "normalization", norm)

    @classmethod
    def normalized(cls, values, normalization: Normalization) -> "PriorityVector":
        """Rescale arbitrary positive ``values`` into the requested gauge."""
        v = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(v)) or not np.all(v > 0.0):
            raise ValidationError("weights must be finite and strictly positive")
        normalization = Normalization(normalization)
        if normalization is Normalization.SUM_ONE:
            v = v / v.sum()
        else:
            logs = np.log(v)
            v = np.exp(logs - logs.mean())
        return cls(v, normalization)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def renormalized(self, normalization: Normalization) -> "PriorityVector":
        return PriorityVector.normalized(self.weights, normalization)

    def to_json(self) -> str:
        return json.dumps(
            {"weights": [float(x) for x in self.weights],
             "normalization": self.normalization.value}
        )

    @classmethod
    def from_json(cls, text: str) -> "PriorityVector":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid priority vector JSON: {exc}") from exc
        if not isinstance(obj, dict) or "weights" not in obj or "normalization" not in obj:
            raise ParseError('priority vector JSON needs "weights" and "normalization"')
        try:
            norm = Normalization(obj["normalization"])
        except ValueError as exc:
            raise ParseError(f"unknown normalization {obj['normalization']!r}") from exc
        return cls(np.asarray(obj["weights"], dtype=float), norm)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PriorityVector):
            return NotImplemented
        return self.normalization is other.normalization and bool(
            np.all(self.weights == other.weights)
        )

    def __hash__(self) -> int:
        return hash((self.normalization, self.weights.tobytes()))

    def __repr__(self) -> str:
        return f"PriorityVector({np.array2string(self.weights, precision=6)}, {self.normalization.value})"


@dataclass(frozen=True)
class DeviationMatrix:
    """Log-scale residuals of a matrix against its nearest coherent one.

    ``residuals[i, j] = ln u_ij - ln (q*_i / q*_j)`` where ``q*`` is the
    log-least-squares fit.  In market terms these are per-trade
    transaction-cost rates; a zero matrix means no arbitrage.

    The minimizer's first-order condition makes each index's row sum
    equal its column sum, and the constructor checks that balance.
    """

    residuals: np.ndarray

    def __post_init__(self) -> None:
        r = np.asarray(self.residuals, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValidationError(f"residual matrix must be square, got shape {r.shape}")
        if not np.all(np.isfinite(r)):
            raise ValidationError("residuals must be finite")
        if np.any(np.diag(r) != 0.0):
            raise ValidationError("residual diagonal must be exactly zero")
        balance = r.sum(axis=1) - r.sum(axis=0)
        if np.max(np.abs(balance)) > 1e-9:
            raise ValidationError(
                f"residuals violate row/column balance by {np.max(np.abs(balance)):.3e}"
            )
        object.__setattr__(self, "residuals", _as_readonly(r))

    @property
    def n(self) -> int:
        return self.residuals.shape[0]

    def frobenius_norm(self) -> float:
        return float(np.sqrt((self.residuals * self.residuals).sum()))

    def __repr__(self) -> str:
        return f"DeviationMatrix(n={self.n}, fro={self.frobenius_norm():.6g})"


def build_matrix(
    n: int,
    entries: list[tuple[int, int, float]] | None = None,
    fill: FillMode = FillMode.RECIPROCAL,
    default: float = 1.0,
) -> ComparisonMatrix:
    """Assemble a comparison matrix from sparse off-diagonal judgments.

    Indices are 0-based.  In RECIPROCAL mode only upper-triangle entries
    (row < col) may be given; unsupplied pairs get ``default`` and every
    mirror cell is set to the reciprocal.  In EXPLICIT mode every
    off-diagonal cell must be supplied, which permits non-reciprocal
    margins such as buy/sell spreads.
    """
    if n < 2:
        raise ValidationError(f"dimension must be >= 2, got {n}")
    fill = FillMode(fill)
    entries = entries or []

    seen: set[tuple[int, int]] = set()
    a = np.full((n, n), np.nan)
    np.fill_diagonal(a, 1.0)

    for row, col, value in entries:
        row, col = int(row), int(col)
        if not (0 <= row < n and 0 <= col < n):
            raise ValidationError(f"entry index ({row}, {col}) out of range for n={n}")
        if row == col:
            raise ValidationError(f"diagonal entry ({row}, {col}) cannot be supplied")
        if fill is FillMode.RECIPROCAL and row > col:
            raise ValidationError(
                f"entry ({row}, {col}) is below the diagonal; RECIPROCAL mode takes row < col"
            )
        if (row, col) in seen:
            raise ValidationError(f"duplicate entry ({row}, {col})")
        value = float(value)
        if not np.isfinite(value) or value <= 0.0:
            raise ValidationError(f"entry ({row}, {col}) must be finite and > 0, got {value}")
        seen.add((row, col))
        a[row, col] = value

    if fill is FillMode.RECIPROCAL:
        if not (np.isfinite(default) and default > 0.0):
            raise ValidationError(f"default value must be finite and > 0, got {default}")
        iu, ju = np.triu_indices(n, 1)
        upper = a[iu, ju]
        upper[np.isnan(upper)] = default
        a[iu, ju] = upper
        a[ju, iu] = 1.0 / upper
    else:
        missing = np.argwhere(np.isnan(a))
        if missing.size:
            i, j = missing[0]
            raise ValidationError(f"EXPLICIT mode is missing entry ({i}, {j})")

    return ComparisonMatrix(a)


def from_weights(w: PriorityVector | np.ndarray) -> ComparisonMatrix:
    """Comparison matrix of the ratios ``w_i / w_j``.

    The result is reciprocal and transitive by construction.
    """
    values = w.weights if isinstance(w, PriorityVector) else np.asarray(w, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise ValidationError("need at least two weights")
    if not np.all(np.isfinite(values)) or not np.all(values > 0.0):
        raise ValidationError("weights must be finite and strictly positive")
    a = values[:, None] / values[None, :]
    np.fill_diagonal(a, 1.0)
    return ComparisonMatrix(a)


# --- serialization ----------------------------------------------------------
#
# CSV: n lines of n comma-separated decimals, no header.
# JSON: {"n": int, "entries": [[...], ...]}.
# Floats are written with repr so a round trip is bit-exact.


def to_csv(m: ComparisonMatrix) -> str:
    return "\n".join(",".join(repr(float(v)) for v in row) for row in m.entries)


def to_json(m: ComparisonMatrix) -> str:
    return json.dumps({"n": m.n, "entries": [[float(v) for v in row] for row in m.entries]})


def parse_csv(text: str) -> ComparisonMatrix:
    lines = [line for line in text.strip().splitlines() if line.strip()]
    if not lines:
        raise ParseError("empty CSV matrix")
    n = len(lines)
    rows = []
    for i, line in enumerate(lines):
        cells = line.split(",")
        if len(cells) != n:
            raise ParseError(f"row {i} has {len(cells)} values, expected {n}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise ParseError(f"row {i} has a non-numeric value: {exc}") from exc
    return ComparisonMatrix(np.asarray(rows))


def parse_json(text: str) -> ComparisonMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid matrix JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise ParseError('matrix JSON needs "n" and "entries"')
    n = obj["n"]
    entries = obj["entries"]
    if len(entries) != n or any(len(row) != n for row in entries):
        raise ParseError(
            f"dimension mismatch: n={n} but entries are "
            f"{len(entries)}x{max((len(r) for r in entries), default=0)}"
        )
    return ComparisonMatrix(np.asarray(entries, dtype=float))


def parse_matrix(text: str) -> ComparisonMatrix:
    """Parse either serialized form, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_csv(text)
