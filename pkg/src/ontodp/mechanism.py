"""Seeded Laplace release of count-query answers."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidEpsilon
from .graph import Graph
from .sensitivity import CountQuery, evaluate

log = logging.getLogger(__name__)

SAMPLER_ID = "numpy-PCG64/seedseq(seed,index)/laplace-inverse-cdf-v1"
ZERO_SENSITIVITY_WARNING = "SENSITIVITY_ZERO_RAW_RELEASE"
_U64 = 1 << 64


@dataclass(frozen=True)
class ReleaseSpec:
    epsilon: float
    sensitivity: int
    seed: int = 0

    def __post_init__(self):
        if not (self.epsilon > 0) or math.isinf(self.epsilon):
            raise InvalidEpsilon(f"epsilon must be a finite positive number, got {self.epsilon}")
        if self.sensitivity < 0:
            raise ValueError(f"sensitivity must be non-negative, got {self.sensitivity}")
        if not 0 <= self.seed < _U64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def scale(self) -> float:
        return self.sensitivity / self.epsilon


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    """Independent stream for call ``index`` under ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def laplace_from_uniform(u, scale: float):
    """Inverse CDF of Laplace(0, scale) evaluated at ``u`` in (-1/2, 1/2)."""
    u = np.asarray(u, dtype=float)
    out = -scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))
    return float(out) if out.ndim == 0 else out


def sample_laplace(scale: float, rng: np.random.Generator, size: int | None = None):
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    n = 1 if size is None else size
    u = rng.random(n) - 0.5
    # rng.random() lies in [0, 1); the endpoint -1/2 would map to -inf.
    while np.any(bad := u <= -0.5):
        u[bad] = rng.random(int(bad.sum())) - 0.5
    x = laplace_from_uniform(u, scale)
    return float(x[0]) if size is None else x


def release(q: CountQuery, d: Graph, spec: ReleaseSpec, call_index: int = 0) -> float:
    """Noisy answer of ``q`` on ``d``; with zero sensitivity the raw answer goes out."""
    answer = evaluate(q, d)
    if spec.sensitivity == 0:
        log.warning("sensitivity is 0: releasing the exact answer without noise")
        return float(answer)
    return answer + sample_laplace(spec.scale, rng_for(spec.seed, call_index))


@dataclass
class ReleaseRecord:
    noisy_value: float
    epsilon: float
    sensitivity: int
    sensitivity_semantics: str
    seed: int
    sampler: str = SAMPLER_ID
    warnings: list[str] = field(default_factory=list)
    true_answer: int | None = None

    def to_dict(self) -> dict:
        out = {
            "noisy_value": self.noisy_value,
            "epsilon": self.epsilon,
            "sensitivity": self.sensitivity,
            "sensitivity_semantics": self.sensitivity_semantics,
            "seed": self.seed,
            "sampler": self.sampler,
            "warnings": list(self.warnings),
        }
        if self.true_answer is not None:
            out["true_answer"] = self.true_answer
        return out


def release_record(
    q: CountQuery,
    d: Graph,
    spec: ReleaseSpec,
    semantics: str,
    call_index: int = 0,
    reveal_true_answer: bool = False,
) -> ReleaseRecord:
    value = release(q, d, spec, call_index)
    warnings = [ZERO_SENSITIVITY_WARNING] if spec.sensitivity == 0 else []
    return ReleaseRecord(
        noisy_value=value,
        epsilon=spec.epsilon,
        sensitivity=spec.sensitivity,
        sensitivity_semantics=semantics,
        seed=spec.seed,
        warnings=warnings,
        true_answer=evaluate(q, d) if reveal_true_answer else None,
    )
