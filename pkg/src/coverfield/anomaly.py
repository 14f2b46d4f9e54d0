"""Residual- and range-based flagging of new measurements against a fit.

Two checks per sample, with range taking precedence: a reading outside
the configured absolute range is physically invalid regardless of fit
quality; otherwise the residual against the smoothed surface is scored
in units of the fit's residual sigma and flagged beyond ``k`` sigmas.
"""

from dataclasses import dataclass
from typing import List

from .samples import SampleSet, ScatterSample
from .surface import BiquadraticSurface

REASON_NONE = "none"
REASON_RESIDUAL = "residual"
REASON_RANGE = "range"


@dataclass(frozen=True)
class AnomalyReport:
    """Per-sample verdict: prediction, residual, z-score and flag reason."""

    sample: ScatterSample
    predicted: float
    residual: float
    z_score: float
    flagged: bool
    reason: str


def detect(
    samples: SampleSet,
    surface: BiquadraticSurface,
    sigma: float,
    k: float = 3.0,
    lo: float = float("-inf"),
    hi: float = float("inf"),
) -> List[AnomalyReport]:
    """Score every sample against the fitted surface, preserving order.

    Parameters
    ----------
    samples : SampleSet
        Measurements to screen.
    surface : BiquadraticSurface
        The fitted (smoothed) reference field.
    sigma : float
        Residual scale of the fit (>= 0); with sigma = 0 the z-score is
        reported as 0 and only range flags are possible.
    k : float, default=3.0
        Residual threshold in sigmas (> 0).
    lo, hi : float
        Valid absolute value range; readings outside [lo, hi] are
        flagged with reason "range", which wins over "residual".
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if not k > 0:
        raise ValueError("k must be strictly positive")
    if not lo < hi:
        raise ValueError("range lower bound must be below upper bound")

    reports = []
    for sample in samples:
        predicted = surface.eval_smoothed(sample.x, sample.y)
        residual = sample.value - predicted
        z_score = residual / sigma if sigma > 0 else 0.0
        if not lo <= sample.value <= hi:
            reason = REASON_RANGE
        elif sigma > 0 and abs(z_score) > k:
            reason = REASON_RESIDUAL
        else:
            reason = REASON_NONE
        reports.append(
            AnomalyReport(
                sample=sample,
                predicted=predicted,
                residual=residual,
                z_score=z_score,
                flagged=reason != REASON_NONE,
                reason=reason,
            )
        )
    return reports
