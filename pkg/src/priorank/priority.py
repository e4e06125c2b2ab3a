"""Weight derivation and coherence measurement.

Two routes from a comparison matrix to weights:

* ``eigen_weights``: principal right eigenvector by power iteration.
  Entrywise-positive matrices have a dominant positive eigenvector, so
  power iteration is the production path; a dense eigensolver appears
  only in tests as an oracle.
* ``llsm_weights``: closed-form logarithmic least squares.  It finds
  the balanced price vector q* minimizing the squared log residuals

      I(q) = sum_{i,j} (ln u_ij - ln q_i + ln q_j)^2

  and works for non-reciprocal matrices too (margins, spreads).

The residual matrix at q* prices each judgment's departure from
coherence, and sqrt(I) is the scalar intransitivity: the total
arbitrage opportunity left in the data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ComparisonMatrix,
    DeviationMatrix,
    Normalization,
    PriorityVector,
    ValidationError,
    from_weights,
)


class ConvergenceError(RuntimeError):
    """Power iteration failed to settle; the matrix is pathological."""

    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"power iteration did not converge in {iterations} iterations "
            f"(residual {residual:.3e})"
        )


@dataclass(frozen=True)
class EigenResult:
    """Principal eigenpair of a comparison matrix."""

    weights: PriorityVector   # SUM_ONE
    lambda_max: float
    iterations: int
    residual: float           # last successive-iterate max-norm difference


@dataclass(frozen=True)
class ConsistencyReport:
    """Coherence verdict for a comparison matrix.

    ``cr`` follows the classic (lambda_max - n) / ((n - 1) * RI) recipe
    and is reported for comparison with the conventional 10% rule; the
    verdict itself uses sqrt(I) against ``delta``.  The delta default of
    0.1 is a convention, not a derived constant, so it is configurable.
    ``ri`` and ``cr`` are None for non-reciprocal input, where the
    random-index calibration does not apply.
    """

    n: int
    lambda_max: float
    ci: float
    ri: float | None
    cr: float | None
    intransitivity: float
    per_pair_intransitivity: float
    delta: float
    acceptable: bool

    def to_dict(self) -> dict:
        return {
            "lambda_max": self.lambda_max,
            "ci": self.ci,
            "ri": self.ri,
            "cr": self.cr,
            "intransitivity": self.intransitivity,
            "per_pair_intransitivity": self.per_pair_intransitivity,
            "delta": self.delta,
            "acceptable": self.acceptable,
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _power_iteration_batch(mats: np.ndarray, tol: float, max_iter: int):
    """Power iteration over a stack of positive matrices.

    Converged matrices are frozen so each one's trajectory is identical
    to what it would be alone; the Monte Carlo census relies on this to
    reproduce single-matrix results bit for bit.

    Returns (lambda_max, vectors, iterations, residuals, converged).
    """
    b, n, _ = mats.shape
    x = np.full((b, n), 1.0 / n)
    iterations = np.zeros(b, dtype=np.int64)
    residuals = np.full(b, np.inf)
    active = np.ones(b, dtype=bool)

    it = 0
    while active.any() and it < max_iter:
        it += 1
        idx = np.flatnonzero(active)
        xa = x[idx]
        y = np.matmul(mats[idx], xa[:, :, None])[:, :, 0]
        xn = y / y.sum(axis=1, keepdims=True)
        diff = np.max(np.abs(xn - xa), axis=1)
        x[idx] = xn
        done = diff <= tol
        iterations[idx] = it
        residuals[idx] = diff
        active[idx[done]] = False

    lam = np.matmul(mats, x[:, :, None])[:, :, 0].sum(axis=1)
    return lam, x, iterations, residuals, ~active


def eigen_weights(
    m: ComparisonMatrix, tol: float = 1e-12, max_iter: int = 10000
) -> EigenResult:
    """Principal right eigenvector and dominant eigenvalue.

    lambda_max is the 1-norm ratio before/after one application of the
    matrix to the converged normalized vector, which keeps the whole
    computation in real arithmetic.
    """
    if tol <= 0.0:
        raise ValidationError(f"tol must be > 0, got {tol}")
    lam, vecs, iters, resids, converged = _power_iteration_batch(
        m.entries[None, :, :], tol, max_iter
    )
    if not converged[0]:
        raise ConvergenceError(float(resids[0]), int(iters[0]))
    w = vecs[0] / vecs[0].sum()
    return EigenResult(
        weights=PriorityVector(w, Normalization.SUM_ONE),
        lambda_max=float(lam[0]),
        iterations=int(iters[0]),
        residual=float(resids[0]),
    )


def _log_residuals(m: ComparisonMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Balanced log-prices x (sum 0) and the residual matrix at x."""
    logs = np.log(m.entries)
    x = (logs.sum(axis=1) - logs.sum(axis=0)) / (2.0 * m.n)
    x = x - x.mean()  # kill accumulated rounding in the gauge
    r = logs - x[:, None] + x[None, :]
    return x, r


def llsm_weights(m: ComparisonMatrix) -> PriorityVector:
    """Closed-form log-least-squares weights, balanced to product 1.

    Reciprocity is not required; for reciprocal matrices this reduces
    to the vector of geometric row means.
    """
    x, _ = _log_residuals(m)
    return PriorityVector(np.exp(x), Normalization.PRODUCT_ONE)


def intransitivity(m: ComparisonMatrix) -> float:
    """sqrt of the minimized residual functional I; 0 iff transitive.

    Invariant under per-item rescaling of units, so it measures genuine
    incoherence rather than choice of scale.
    """
    _, r = _log_residuals(m)
    return float(np.sqrt((r * r).sum()))


def deviation_matrix(m: ComparisonMatrix) -> DeviationMatrix:
    """Log residuals against the nearest coherent matrix."""
    _, r = _log_residuals(m)
    return DeviationMatrix(r)


def nearest_transitive(m: ComparisonMatrix) -> ComparisonMatrix:
    """The coherent matrix of fitted ratios q*_i / q*_j.  Idempotent."""
    return from_weights(llsm_weights(m))


def _resolve_ri(ri_source, n: int) -> float:
    if isinstance(ri_source, dict):
        try:
            return float(ri_source[n])
        except KeyError:
            raise ValidationError(f"RI table has no entry for n={n}") from None
    if hasattr(ri_source, "ri"):
        return float(ri_source.ri(n))
    raise ValidationError(
        f"ri_source must be a dict or expose .ri(n), got {type(ri_source).__name__}"
    )


def consistency_report(
    m: ComparisonMatrix,
    ri_source=None,
    delta: float = 0.1,
) -> ConsistencyReport:
    """Full coherence report for a comparison matrix.

    ``ri_source`` may be a {n: RI} table or any object with ``.ri(n)``;
    by default a cached Monte Carlo estimator is used so the package
    carries no external calibration table.  For n=2 reciprocal matrices
    CR is 0 by definition (transitivity is automatic and RI(2)=0 would
    divide by zero).  Non-reciprocal input still gets an intransitivity
    verdict, with ri/cr marked absent.
    """
    if delta <= 0.0:
        raise ValidationError(f"delta must be > 0, got {delta}")
    n = m.n
    eig = eigen_weights(m)
    lam = eig.lambda_max
    ci = (lam - n) / (n - 1)
    sqrt_i = intransitivity(m)
    per_pair = sqrt_i / math.sqrt(n * (n - 1))

    ri: float | None
    cr: float | None
    if not m.is_reciprocal():
        ri = None
        cr = None
    elif n == 2:
        ri = 0.0
        cr = 0.0
    else:
        if ri_source is None:
            from .montecarlo import default_ri_source  # deferred; avoids import cycle

            ri_source = default_ri_source()
        ri = _resolve_ri(ri_source, n)
        cr = ci / ri

    return ConsistencyReport(
        n=n,
        lambda_max=lam,
        ci=ci,
        ri=ri,
        cr=cr,
        intransitivity=sqrt_i,
        per_pair_intransitivity=per_pair,
        delta=delta,
        acceptable=sqrt_i < delta,
    )
