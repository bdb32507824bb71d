"""Biased sample central moments and standardized skewness/kurtosis.

All moments use the divisor n (not n - 1), matching the definitions the
test statistics are built on. Computation is two-pass: the mean is removed
first, then centered powers are accumulated, which avoids the cancellation
that single-pass formulas suffer for fourth powers. Summation uses numpy's
pairwise reduction over the stored value order, so results for a given
value order are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonFiniteError,
    SampleTooSmallError,
    ZeroScaleError,
    ZeroVarianceError,
)

__all__ = [
    "Sample",
    "MomentSummary",
    "central_moments",
    "central_moment_arrays",
    "shift_scale",
]


@dataclass(frozen=True)
class Sample:
    """A finite list of real observations with positive variance.

    Parameters
    ----------
    values : array_like
        Observations. Stored as a read-only float64 array in the order
        given.

    Raises
    ------
    SampleTooSmallError
        If fewer than 3 observations are supplied.
    NonFiniteError
        If any observation is NaN or infinite.
    ZeroVarianceError
        If all observations are equal, or their spread is so small that
        the squared variance underflows (below roughly 1.5e-162), which
        would make the standardized moments 0/0.
    """

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            arr = arr.reshape(-1)
        if arr.size < 3:
            raise SampleTooSmallError(
                f"need at least 3 observations, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("sample contains NaN or infinite values")
        d = arr - arr.mean()
        m2 = float((d * d).mean())
        if m2 * m2 == 0.0:
            # equal values, or a spread so small that m2 or its square
            # underflows; either way b2 = m4/m2^2 is 0/0 downstream
            raise ZeroVarianceError(
                "sample variance is zero or too small for float64 "
                "moment ratios"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class MomentSummary:
    """Mean, central moments m2..m4, and derived sqrt(b1), b2.

    sqrt_b1 = m3 / m2**1.5 and b2 = m4 / m2**2 exactly as computed from
    the divisor-n moments.
    """

    mean: float
    m2: float
    m3: float
    m4: float
    sqrt_b1: float
    b2: float


def central_moments(sample: Sample) -> MomentSummary:
    """Compute divisor-n central moments and skewness/kurtosis.

    Parameters
    ----------
    sample : Sample

    Returns
    -------
    MomentSummary
    """
    m2, m3, m4, sqrt_b1, b2 = central_moment_arrays(sample.values[None, :])
    return MomentSummary(
        mean=float(sample.values.mean()),
        m2=float(m2[0]),
        m3=float(m3[0]),
        m4=float(m4[0]),
        sqrt_b1=float(sqrt_b1[0]),
        b2=float(b2[0]),
    )


def central_moment_arrays(x: np.ndarray):
    """Row-wise divisor-n central moments of a 2-D array.

    Parameters
    ----------
    x : ndarray, shape (reps, n)
        One sample per row.

    Returns
    -------
    m2, m3, m4, sqrt_b1, b2 : ndarray, shape (reps,)
        Rows with zero variance yield NaN in sqrt_b1 and b2.
    """
    x = np.asarray(x, dtype=np.float64)
    d = x - x.mean(axis=1, keepdims=True)
    d2 = d * d
    m2 = d2.mean(axis=1)
    m3 = (d2 * d).mean(axis=1)
    m4 = (d2 * d2).mean(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        sqrt_b1 = m3 / m2**1.5
        b2 = m4 / (m2 * m2)
    return m2, m3, m4, sqrt_b1, b2


def shift_scale(sample: Sample, a: float, b: float) -> Sample:
    """Return the sample transformed to a + b*x elementwise.

    Parameters
    ----------
    sample : Sample
    a : float
        Shift.
    b : float
        Scale; must be nonzero.

    Raises
    ------
    ZeroScaleError
        If b == 0.
    """
    if b == 0:
        raise ZeroScaleError("scale factor b must be nonzero")
    return Sample(a + b * sample.values)
