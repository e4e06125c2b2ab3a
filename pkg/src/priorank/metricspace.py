"""Hilbert projective metric and induced distances between rate matrices.

The distance between positive vectors is the classic cross-ratio form

    d(x, y) = ln( max_i x_i/y_i * max_j y_j/x_j )

which depends only on rays, so portfolios are compared up to scale.
Two matrices are then compared through their action on portfolios:
either the worst case over the simplex (a maximization, estimated from
seeded random starts plus hill climbing, and reported as a lower bound)
or the average against the uniform Dirichlet measure (plain Monte
Carlo with a standard error).

Sampling is restricted to the strictly positive orthant: the metric
lives on a cone, so sign-mixed portfolios are out of scope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import ComparisonMatrix, ValidationError

_HILL_CLIMB_FACTOR = 1.1
_HILL_CLIMB_MAX_STEPS = 1000


@dataclass(frozen=True)
class PortfolioPoint:
    """Ray of strictly positive holdings, stored as its simplex representative."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValidationError(f"coords must be a nonempty vector, got shape {c.shape}")
        if not np.all(np.isfinite(c)) or not np.all(c > 0.0):
            raise ValidationError("portfolio coordinates must be finite and strictly positive")
        c = np.array(c / c.sum())
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class SamplingPlan:
    """Seeded simplex-sampling budget for the induced distances."""

    samples: int = 256
    seed: int = 0
    refine: bool = True

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValidationError(f"samples must be >= 1, got {self.samples}")

    def to_json(self) -> str:
        return json.dumps({"samples": self.samples, "seed": self.seed, "refine": self.refine})

    @classmethod
    def from_json(cls, text: str) -> "SamplingPlan":
        obj = json.loads(text)
        return cls(
            samples=int(obj.get("samples", 256)),
            seed=int(obj.get("seed", 0)),
            refine=bool(obj.get("refine", True)),
        )


@dataclass(frozen=True)
class MaxDistanceEstimate:
    """Lower-bound estimate of the worst-case induced distance."""

    value: float
    samples: int
    refined: bool


@dataclass(frozen=True)
class IntegralDistanceEstimate:
    """Monte Carlo estimate of the measure-averaged induced distance."""

    value: float
    std_error: float
    samples: int


def _hilbert(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.log(np.max(x / y) * np.max(y / x)))


def hilbert_distance(x: PortfolioPoint, y: PortfolioPoint) -> float:
    """Projective distance between two portfolios.

    Zero iff the portfolios are proportional; symmetric; satisfies the
    triangle inequality; invariant under positive diagonal rescaling.
    """
    if x.n != y.n:
        raise ValidationError(f"dimension mismatch: {x.n} vs {y.n}")
    return _hilbert(x.coords, y.coords)


def _as_positive_matrix(a) -> np.ndarray:
    m = a.entries if isinstance(a, ComparisonMatrix) else np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)) or not np.all(m > 0.0):
        raise ValidationError("matrix must be strictly positive and finite")
    return m


def _image_distance(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> float:
    return _hilbert(a @ p, b @ p)


def _dirichlet_starts(n: int, plan: SamplingPlan) -> np.ndarray:
    # one child stream per sample: the kth start is the same whatever
    # the total budget or worker layout, and estimates grow monotonely
    # with the sample count
    children = np.random.SeedSequence(plan.seed).spawn(plan.samples)
    starts = np.empty((plan.samples, n))
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        starts[i] = rng.dirichlet(np.ones(n))
    return starts


def _hill_climb(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> float:
    """Greedy multiplicative coordinate search from p; returns the best value."""
    n = p.shape[0]
    best = _image_distance(a, b, p)
    for _ in range(_HILL_CLIMB_MAX_STEPS):
        candidates = np.tile(p, (2 * n, 1))
        for i in range(n):
            candidates[2 * i, i] *= _HILL_CLIMB_FACTOR
            candidates[2 * i + 1, i] /= _HILL_CLIMB_FACTOR
        imgs_a = candidates @ a.T
        imgs_b = candidates @ b.T
        ratios = imgs_a / imgs_b
        values = np.log(ratios.max(axis=1) / ratios.min(axis=1))
        k = int(values.argmax())
        if values[k] <= best:
            break
        best = float(values[k])
        p = candidates[k]
    return best


def induced_max_distance(a, b, plan: SamplingPlan | None = None) -> MaxDistanceEstimate:
    """Estimated worst-case Hilbert distance between the images Ap and Bp.

    Seeded Dirichlet starts, each optionally refined by coordinatewise
    hill climbing.  The result is a lower bound on the true maximum for
    n > 2; it is exact only when a start reaches the global optimum.
    """
    plan = plan or SamplingPlan()
    ma, mb = _as_positive_matrix(a), _as_positive_matrix(b)
    if ma.shape != mb.shape:
        raise ValidationError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    best = 0.0
    for p in _dirichlet_starts(ma.shape[0], plan):
        value = _hill_climb(ma, mb, p) if plan.refine else _image_distance(ma, mb, p)
        best = max(best, value)
    return MaxDistanceEstimate(value=best, samples=plan.samples, refined=plan.refine)


def induced_integral_distance(a, b, plan: SamplingPlan | None = None) -> IntegralDistanceEstimate:
    """Mean Hilbert distance between images over uniform simplex samples."""
    plan = plan or SamplingPlan()
    ma, mb = _as_positive_matrix(a), _as_positive_matrix(b)
    if ma.shape != mb.shape:
        raise ValidationError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    starts = _dirichlet_starts(ma.shape[0], plan)
    imgs_a = starts @ ma.T
    imgs_b = starts @ mb.T
    ratios = imgs_a / imgs_b
    values = np.log(ratios.max(axis=1) / ratios.min(axis=1))
    mean = float(values.mean())
    if plan.samples > 1:
        se = float(values.std(ddof=1) / np.sqrt(plan.samples))
    else:
        se = float("nan")
    return IntegralDistanceEstimate(value=mean, std_error=se, samples=plan.samples)
