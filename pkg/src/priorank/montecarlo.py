"""Random reciprocal matrices, Random Index estimation, and the census.

Matrices are drawn uniformly from the 17-value judgment scale
{1/9 ... 1/2, 1, 2 ... 9} on the upper triangle, mirrored reciprocally.
The Random Index for each dimension is the mean consistency index of
such matrices, estimated here rather than copied from published tables
so the package calibrates itself; pass ``SAATY_RI`` anywhere an RI
source is accepted to compare against the textbook values.

Samples are partitioned into fixed-size blocks, each driven by a seed
substream derived from (seed, dimension, stream, block).  Aggregation
is associative over blocks in index order, so results are bit-identical
across runs and across worker counts.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import ComparisonMatrix, ValidationError
from .priority import _power_iteration_batch

#: The standard 17-value judgment scale.
SAATY_SCALE = np.array(
    [1 / 9, 1 / 8, 1 / 7, 1 / 6, 1 / 5, 1 / 4, 1 / 3, 1 / 2, 1, 2, 3, 4, 5, 6, 7, 8, 9]
)
SAATY_SCALE.flags.writeable = False

#: Published Random Index table, provided only as an override hook for
#: comparing against the self-estimated values.
SAATY_RI = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}

_BLOCK_SIZE = 4096
_RI_STREAM, _CENSUS_STREAM = 0, 1

_POWER_TOL = 1e-12
_POWER_MAX_ITER = 10000


@dataclass(frozen=True)
class RiEstimate:
    """Monte Carlo Random Index with its standard error."""

    n: int
    value: float
    std_error: float
    samples: int
    seed: int


@dataclass(frozen=True)
class CensusResult:
    """Share of random matrices below the CR threshold at one dimension."""

    n: int
    samples: int
    seed: int
    ri_estimate: float
    cr_below_threshold: int
    fraction: float
    threshold: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "ri_estimate": self.ri_estimate,
            "cr_below_threshold": self.cr_below_threshold,
            "fraction": self.fraction,
            "threshold": self.threshold,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def census_to_csv(results: Sequence[CensusResult]) -> str:
    """Tabulate census results as CSV (n, samples, ri, count, fraction)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "samples", "ri", "count", "fraction"])
    for r in results:
        writer.writerow([r.n, r.samples, repr(r.ri_estimate), r.cr_below_threshold, repr(r.fraction)])
    return buf.getvalue()


def _scale_matrix_block(n: int, count: int, rng: np.random.Generator,
                        scale: np.ndarray) -> np.ndarray:
    """Stack of `count` random reciprocal matrices as a (count, n, n) array."""
    k = n * (n - 1) // 2
    values = scale[rng.integers(0, len(scale), size=(count, k))]
    mats = np.ones((count, n, n))
    iu, ju = np.triu_indices(n, 1)
    mats[:, iu, ju] = values
    mats[:, ju, iu] = 1.0 / values
    return mats


def random_reciprocal(n: int, rng_seed: int, scale: np.ndarray = SAATY_SCALE) -> ComparisonMatrix:
    """One random reciprocal matrix on the judgment scale; deterministic per seed."""
    if n < 2:
        raise ValidationError(f"dimension must be >= 2, got {n}")
    rng = np.random.default_rng(rng_seed)
    return ComparisonMatrix(_scale_matrix_block(n, 1, rng, np.asarray(scale, dtype=float))[0])


def _block_seed(seed: int, n: int, stream: int, block: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(n, stream, block))


def _ci_block(args) -> np.ndarray:
    """Consistency indices for one block of random matrices."""
    n, count, seed, stream, block = args
    rng = np.random.default_rng(_block_seed(seed, n, stream, block))
    mats = _scale_matrix_block(n, count, rng, SAATY_SCALE)
    lam, _, _, resids, converged = _power_iteration_batch(mats, _POWER_TOL, _POWER_MAX_ITER)
    if not converged.all():
        worst = float(resids[~converged].max())
        raise RuntimeError(f"power iteration stalled in census block (residual {worst:.3e})")
    return (lam - n) / (n - 1)


def _block_plan(n: int, samples: int, seed: int, stream: int):
    blocks = []
    offset = 0
    block = 0
    while offset < samples:
        count = min(_BLOCK_SIZE, samples - offset)
        blocks.append((n, count, seed, stream, block))
        offset += count
        block += 1
    return blocks


def _stream_ci(n: int, samples: int, seed: int, stream: int, workers: int) -> np.ndarray:
    plan = _block_plan(n, samples, seed, stream)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_ci_block, plan))
    else:
        parts = [_ci_block(args) for args in plan]
    return np.concatenate(parts)


def estimate_ri(n: int, samples: int, seed: int, workers: int = 1) -> RiEstimate:
    """Mean consistency index of random reciprocal matrices.

    For n=2 every reciprocal matrix is consistent, so the analog is 0
    by definition and no sampling happens.
    """
    if n < 2:
        raise ValidationError(f"dimension must be >= 2, got {n}")
    if n == 2:
        return RiEstimate(n=2, value=0.0, std_error=0.0, samples=0, seed=seed)
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    ci = _stream_ci(n, samples, seed, _RI_STREAM, workers)
    se = float(ci.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float("nan")
    return RiEstimate(n=n, value=float(ci.mean()), std_error=se, samples=samples, seed=seed)


def consistency_census(
    n_range: Sequence[int],
    samples: int,
    threshold: float = 0.1,
    seed: int = 0,
    workers: int = 1,
    progress: Callable[[str], None] | None = None,
) -> list[CensusResult]:
    """Count random matrices below the CR threshold per dimension.

    The RI used for each dimension is estimated from an independent
    seeded stream of the same size, so the census is self-calibrating.
    Deterministic for fixed (n_range, samples, threshold, seed)
    regardless of the worker count.
    """
    if samples < 1:
        raise ValidationError(f"samples must be >= 1, got {samples}")
    if threshold <= 0.0:
        raise ValidationError(f"threshold must be > 0, got {threshold}")
    results = []
    for n in n_range:
        if n < 3:
            raise ValidationError(f"census needs n >= 3, got {n}")
        ri = float(_stream_ci(n, samples, seed, _RI_STREAM, workers).mean())
        ci = _stream_ci(n, samples, seed, _CENSUS_STREAM, workers)
        count = int(np.count_nonzero(ci / ri < threshold))
        results.append(
            CensusResult(
                n=n,
                samples=samples,
                seed=seed,
                ri_estimate=ri,
                cr_below_threshold=count,
                fraction=count / samples,
                threshold=threshold,
            )
        )
        if progress is not None:
            progress(f"n={n}: ri={ri:.4f}, {count}/{samples} below CR {threshold}")
    return results


def census_matrices(n: int, seed: int, count: int) -> list[ComparisonMatrix]:
    """Regenerate the first `count` matrices of the census stream at `n`.

    Useful for auditing a census: the returned matrices are exactly the
    ones whose consistency ratios were counted.
    """
    out: list[ComparisonMatrix] = []
    block = 0
    while len(out) < count:
        rng = np.random.default_rng(_block_seed(seed, n, _CENSUS_STREAM, block))
        take = min(_BLOCK_SIZE, count - len(out))
        mats = _scale_matrix_block(n, _BLOCK_SIZE, rng, SAATY_SCALE)[:take]
        out.extend(ComparisonMatrix(m) for m in mats)
        block += 1
    return out


class MonteCarloRI:
    """Caching Monte Carlo Random Index source for consistency reports."""

    def __init__(self, samples: int = 10000, seed: int = 1729):
        self.samples = samples
        self.seed = seed
        self._cache: dict[int, float] = {}

    def ri(self, n: int) -> float:
        if n not in self._cache:
            self._cache[n] = estimate_ri(n, self.samples, self.seed).value
        return self._cache[n]


_default_source: MonteCarloRI | None = None


def default_ri_source() -> MonteCarloRI:
    """Shared process-wide RI source used when a report gets none."""
    global _default_source
    if _default_source is None:
        _default_source = MonteCarloRI()
    return _default_source
