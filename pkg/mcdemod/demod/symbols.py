from __future__ import annotations

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat, model_validator

from mcdemod.signals import PiecewiseConstant

logger = logging.getLogger(__name__)


class CMSymbolSet(BaseModel):
    """Concentration-modulation alphabet.

    Symbol ``k`` holds the signal at ``amplitudes[k]`` on ``[0, duration)`` and at
    ``off_level`` afterwards. ``priors`` default to equiprobable symbols; a zero prior
    is allowed and gives a log-prior of ``-inf``.
    """

    model_config = ConfigDict(frozen=True)

    amplitudes: tuple[PositiveFloat, ...] = Field(min_length=1)
    off_level: float = Field(default=1.0, ge=1.0)
    duration: PositiveFloat
    priors: tuple[NonNegativeFloat, ...] | None = None

    @model_validator(mode="after")
    def _check(self) -> CMSymbolSet:
        for a in self.amplitudes:
            if a <= self.off_level:
                raise ValueError(f"amplitude {a} must exceed the OFF level {self.off_level}")
            if a < 10 * self.off_level:
                logger.warning("amplitude %g is less than ten times the OFF level %g", a, self.off_level)
        if self.priors is not None:
            if len(self.priors) != len(self.amplitudes):
                raise ValueError(f"{len(self.priors)} priors for {len(self.amplitudes)} symbols")
            if not np.isclose(sum(self.priors), 1.0, rtol=0, atol=1e-9) or max(self.priors) <= 0:
                raise ValueError("priors must be non-negative and sum to 1")
        return self

    @property
    def K(self) -> int:
        return len(self.amplitudes)

    @property
    def prior_probabilities(self) -> np.ndarray:
        if self.priors is None:
            return np.full(self.K, 1.0 / self.K)
        return np.asarray(self.priors, dtype=float)

    @property
    def log_priors(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.prior_probabilities)

    def signal(self, symbol: int) -> PiecewiseConstant:
        """lambda_k(t); also the input u(t) when ``symbol`` is transmitted."""
        return PiecewiseConstant.rectangular(self.amplitudes[symbol], self.off_level, self.duration)
