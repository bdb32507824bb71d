"""Seeded variate generation for the null and alternative distributions.

Streams are Philox counter-based: the bit generator key is the pair
(seed, stream_id), so any replication's stream can be reconstructed
independently of thread scheduling or draw order. stream_id is the
replication index in the Monte Carlo harness; ids at and above 2**48 are
reserved for internal calibration runs (see montecarlo).

Sampling methods are numpy Generator implementations (ziggurat normals,
Marsaglia-Tsang gamma, inversion Weibull, exp-of-normal lognormal,
gamma-ratio beta); population moments below are exact closed forms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParamsError
from .moments import Sample

__all__ = [
    "Family",
    "AlternativeSpec",
    "SeededStream",
    "sample",
    "draw_values",
    "population_moments",
    "POWER_STUDY_ALTERNATIVES",
]


class Family(str, enum.Enum):
    NORMAL = "normal"
    BETA = "beta"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    LOGNORMAL = "lognormal"

    def __str__(self) -> str:
        return self.value


_PARAM_COUNT = {
    Family.NORMAL: 0,
    Family.BETA: 2,
    Family.GAMMA: 1,
    Family.WEIBULL: 1,
    Family.LOGNORMAL: 2,
}


@dataclass(frozen=True)
class AlternativeSpec:
    """A sampling distribution: family plus family-specific parameters.

    BETA takes (p, q), GAMMA and WEIBULL a shape, LOGNORMAL (mu, sigma).
    GAMMA and WEIBULL use unit scale; every implemented test is scale
    invariant, so the choice is unobservable.
    """

    family: Family
    params: tuple[float, ...] = ()

    def __post_init__(self):
        family = Family(self.family)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        want = _PARAM_COUNT[family]
        if len(params) != want:
            raise InvalidParamsError(
                f"{family} takes {want} parameter(s), got {len(params)}"
            )
        if any(not math.isfinite(p) for p in params):
            raise InvalidParamsError(f"{family} parameters must be finite")
        if family is Family.LOGNORMAL:
            if params[1] <= 0:
                raise InvalidParamsError("lognormal sigma must be positive")
        elif any(p <= 0 for p in params):
            raise InvalidParamsError(f"{family} parameters must be positive")

    @classmethod
    def parse(cls, text: str) -> "AlternativeSpec":
        """Parse a spec string like 'beta:2,1', 'gamma:3', or 'normal'."""
        name, sep, rest = text.strip().partition(":")
        try:
            family = Family(name.strip().lower())
        except ValueError:
            raise InvalidParamsError(f"unknown distribution family {name!r}")
        if not sep:
            return cls(family)
        try:
            params = tuple(float(p) for p in rest.split(","))
        except ValueError:
            raise InvalidParamsError(f"malformed parameters in {text!r}")
        return cls(family, params)

    @property
    def label(self) -> str:
        """Canonical spec string, e.g. 'beta:2,1'."""
        if not self.params:
            return self.family.value
        body = ",".join(format(p, "g") for p in self.params)
        return f"{self.family.value}:{body}"


# the six alternative configurations studied in the power experiments
POWER_STUDY_ALTERNATIVES = (
    AlternativeSpec(Family.BETA, (2.0, 1.0)),
    AlternativeSpec(Family.BETA, (3.0, 2.0)),
    AlternativeSpec(Family.WEIBULL, (2.0,)),
    AlternativeSpec(Family.GAMMA, (3.0,)),
    AlternativeSpec(Family.GAMMA, (2.0,)),
    AlternativeSpec(Family.LOGNORMAL, (0.0, 0.5)),
)


@dataclass(frozen=True)
class SeededStream:
    """An independent random stream identified by (seed, stream_id)."""

    seed: int
    stream_id: int

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise InvalidParamsError(f"{name} must fit in 64 bits, got {v}")
            object.__setattr__(self, name, int(v))

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def draw_values(spec: AlternativeSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n variates from spec using the given generator."""
    if n < 1:
        raise InvalidParamsError(f"n must be positive, got {n}")
    family = spec.family
    if family is Family.NORMAL:
        return rng.standard_normal(n)
    if family is Family.BETA:
        return rng.beta(spec.params[0], spec.params[1], n)
    if family is Family.GAMMA:
        return rng.gamma(spec.params[0], 1.0, n)
    if family is Family.WEIBULL:
        return rng.weibull(spec.params[0], n)
    if family is Family.LOGNORMAL:
        return rng.lognormal(spec.params[0], spec.params[1], n)
    raise InvalidParamsError(f"unhandled family {family!r}")


def sample(spec: AlternativeSpec, n: int, stream: SeededStream) -> Sample:
    """Draw a Sample of size n from spec on the given stream.

    Bit-reproducible for fixed (spec, n, seed, stream_id).
    """
    return Sample(draw_values(spec, n, stream.generator()))


def population_moments(spec: AlternativeSpec) -> tuple[float, float]:
    """Exact population skewness sqrt(beta1) and kurtosis beta2."""
    family = spec.family
    if family is Family.NORMAL:
        return 0.0, 3.0
    if family is Family.BETA:
        p, q = spec.params
        s = p + q
        sqrt_beta1 = 2.0 * (q - p) * math.sqrt(s + 1.0) / ((s + 2.0) * math.sqrt(p * q))
        gamma2 = (
            6.0
            * ((p - q) ** 2 * (s + 1.0) - p * q * (s + 2.0))
            / (p * q * (s + 2.0) * (s + 3.0))
        )
        return sqrt_beta1, 3.0 + gamma2
    if family is Family.GAMMA:
        a = spec.params[0]
        return 2.0 / math.sqrt(a), 3.0 + 6.0 / a
    if family is Family.WEIBULL:
        k = spec.params[0]
        g1, g2, g3, g4 = (math.gamma(1.0 + i / k) for i in (1, 2, 3, 4))
        var = g2 - g1 * g1
        mu3 = g3 - 3.0 * g1 * g2 + 2.0 * g1**3
        mu4 = g4 - 4.0 * g1 * g3 + 6.0 * g1 * g1 * g2 - 3.0 * g1**4
        return mu3 / var**1.5, mu4 / (var * var)
    if family is Family.LOGNORMAL:
        sigma = spec.params[1]
        w = math.exp(sigma * sigma)
        sqrt_beta1 = (w + 2.0) * math.sqrt(w - 1.0)
        beta2 = w**4 + 2.0 * w**3 + 3.0 * w * w - 3.0
        return sqrt_beta1, beta2
    raise InvalidParamsError(f"unhandled family {family!r}")
