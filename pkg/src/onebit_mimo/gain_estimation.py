"""UE-side estimation of the precoding factor from received samples.

Each UE rescales its received samples by an estimate of the common
precoding factor before minimum-distance detection. Three methods:

- genie: the exact factor, taken from the precoder output (reference curves)
- pilot_mle: one pilot slot carrying sqrt(Es) at every UE; the estimate is
  the real part of sqrt(Es)/y_u[1]
- blind: matches the sample variance of the received signal to
  beta^-2 Es + E0 + N0 and solves for the factor; the error energy E0 is
  unknown in practice and defaults to 0

The estimators are undefined for nonpositive real parts / denominators, so
values are clamped (and the event flagged) to keep sweeps running.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import PrecodeResult

#: lower clamp for the estimate itself
EPS_BETA = 1e-9
#: lower clamp for the blind estimator's variance denominator
EPS_DENOM = 1e-12


@dataclass(frozen=True)
class BetaEstimate:
    value: float
    method: str  # "genie" | "pilot_mle" | "blind"
    ue: int
    clamped: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise ValueError("estimate must be finite and positive")


def pilot_mle(y_u1: complex, es: float = 1.0, ue: int = 0) -> BetaEstimate:
    """Maximum-likelihood estimate from the single pilot observation.

    beta_hat = Re{sqrt(Es) / y_u[1]}, clamped to [EPS_BETA, inf).
    """
    y_u1 = complex(y_u1)
    if abs(y_u1) < 1e-12:
        return BetaEstimate(value=EPS_BETA, method="pilot_mle", ue=ue, clamped=True)
    raw = (math.sqrt(es) / y_u1).real
    if raw < EPS_BETA:
        return BetaEstimate(value=EPS_BETA, method="pilot_mle", ue=ue, clamped=True)
    return BetaEstimate(value=raw, method="pilot_mle", ue=ue)


def blind_estimate(y_u: np.ndarray, es: float, noise_var: float,
                   err_energy: float = 0.0, ue: int = 0) -> BetaEstimate:
    """Blind estimate from the sample variance of the received slots.

    beta_hat = sqrt(Es / (mean_k |y_u[k]|^2 - E0 - N0)) with the denominator
    clamped to EPS_DENOM; all slots carry payload. ``noise_var`` and
    ``err_energy`` are the values the UE assumes, not generated quantities,
    so zero is allowed for both.
    """
    y_u = np.asarray(y_u, dtype=complex).ravel()
    if y_u.size < 1:
        raise ValueError("need at least one received sample")
    denom = float(np.mean(np.abs(y_u) ** 2)) - err_energy - noise_var
    if denom < EPS_DENOM:
        return BetaEstimate(value=math.sqrt(es / EPS_DENOM), method="blind",
                            ue=ue, clamped=True)
    return BetaEstimate(value=math.sqrt(es / denom), method="blind", ue=ue)


def genie_estimate(result: PrecodeResult, ue: int = 0) -> BetaEstimate:
    """Exact factor granted by a genie; used for reference curves."""
    if result.beta < EPS_BETA:
        return BetaEstimate(value=EPS_BETA, method="genie", ue=ue, clamped=True)
    return BetaEstimate(value=result.beta, method="genie", ue=ue)
