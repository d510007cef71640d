"""Type-I hybrid censoring: stop at the R-th failure or at time T, whichever
comes first, and record the failures observed up to that point."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["HybridScheme", "HybridSample", "ReciprocalSample", "apply_scheme", "reciprocals"]


@dataclass(frozen=True)
class HybridScheme:
    """Test design: ``n`` units on test, failure budget ``R``, time budget ``T``.

    ``T = inf`` is the conventional way to express "no time limit", which with
    ``R = n`` reduces to a complete sample.
    """

    n: int
    R: int
    T: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.R <= self.n:
            raise DomainError(f"R must satisfy 1 <= R <= n, got R={self.R}, n={self.n}")
        if not self.T > 0:
            raise DomainError(f"T must be positive, got {self.T}")


@dataclass(frozen=True)
class HybridSample:
    """Observed portion of a censored test.

    ``times`` holds the ``r`` ascending failure times, every one ``<= u``.
    The censoring terminus ``u`` is the R-th failure time when that failure
    occurred within the time budget, and ``T`` otherwise; the remaining
    ``n - r`` units survived past ``u``.
    """

    times: np.ndarray
    r: int
    u: float
    scheme: HybridScheme

    @property
    def n(self) -> int:
        return self.scheme.n


@dataclass(frozen=True)
class ReciprocalSample:
    """Reciprocals ``x_i = 1/t_(i)`` of the observed failure times.

    The order follows ``times``, so ``x`` is nonincreasing with every entry
    ``>= 1/u``.  This is the working representation of the likelihood code:
    inverse Weibull data become Weibull data under ``t -> 1/t``.
    """

    x: np.ndarray
    u: float
    r: int
    n: int


def apply_scheme(complete_times, scheme: HybridScheme) -> HybridSample:
    """Censor a complete sample of ``scheme.n`` failure times.

    Sorts ascending (stable, so ties keep their order), then truncates at
    ``u = min(t_(R), T)``.  A failure exactly at ``T`` counts as observed.
    When the R-th failure occurs within the budget, exactly ``R`` failures are
    kept even if further ties at ``t_(R)`` exist: the test stops at that
    failure event.
    """
    times = np.asarray(complete_times, dtype=float)
    if times.ndim != 1 or times.size != scheme.n:
        raise DomainError(
            f"expected exactly {scheme.n} complete failure times, got {times.size}"
        )
    if not np.all(np.isfinite(times)) or np.any(times <= 0.0):
        raise DomainError("failure times must be strictly positive and finite")
    srt = np.sort(times, kind="stable")
    t_R = srt[scheme.R - 1]
    if t_R <= scheme.T:
        observed = srt[: scheme.R]
        u = float(t_R)
    else:
        observed = srt[srt <= scheme.T]
        u = float(scheme.T)
    return HybridSample(times=observed.copy(), r=int(observed.size), u=u, scheme=scheme)


def reciprocals(s: HybridSample) -> ReciprocalSample:
    """Map observed times to their reciprocals, carrying (u, r, n) through."""
    if np.any(s.times <= 0.0):
        raise DomainError("failure times must be strictly positive")
    return ReciprocalSample(x=1.0 / s.times, u=s.u, r=s.r, n=s.n)
