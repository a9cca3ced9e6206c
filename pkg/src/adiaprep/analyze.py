"""Oscillation statistics and the residual-excitation diagnosis.

A state a|g> + b|e> held under the target makes every observable with an
off-diagonal element beat at the level splitting. Windowed over whole
periods, the record's variance equals 2*|ab|^2*|O_ge|^2, so the variance
hands back the excitation weight |b|^2 without knowing the state; that
weight then removes the bias it imprints on the time-averaged expectation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolve import ResidualDecomposition
from .measure import TimeSeries
from .model import ModelSpec

__all__ = [
    "OscillationStats",
    "VacuumDiagnosis",
    "diagnose_anticommuting",
    "diagnose_general",
    "oscillation_stats",
    "predicted_series",
]

MIN_SAMPLES_PER_PERIOD = 16


@dataclass(frozen=True)
class OscillationStats:
    """Windowed statistics of a hold record over whole oscillation periods.

    mean_minmax is the midpoint of the extremes (insensitive to how the
    grid phases align with the peaks); mean_arith and variance are taken
    over the half-open window of window_size points covering exactly
    window_periods periods, so commensurate grids give them exactly.
    """

    mean_minmax: float
    mean_arith: float
    variance: float
    peak_to_peak: float
    amplitude: float
    window_periods: int
    window_size: int

    def __post_init__(self) -> None:
        if self.variance < 0.0 or self.peak_to_peak < 0.0:
            raise ValueError("variance and peak_to_peak must be nonnegative")
        if self.window_periods < 1 or self.window_size < 2:
            raise ValueError("window must cover at least one period of two samples")
        # a pure tone has variance amplitude^2/2; anything above amplitude^2
        # means the window arithmetic went wrong
        if self.variance > self.amplitude**2 * 1.01 + 1e-15:
            raise ValueError(
                f"variance {self.variance!r} inconsistent with amplitude {self.amplitude!r}"
            )


def oscillation_stats(
    series: TimeSeries,
    angular_frequency: float,
    *,
    channel: str = "exact",
) -> OscillationStats:
    """Window the series to whole periods of the given beat frequency.

    Requires at least one whole period in the record and at least
    MIN_SAMPLES_PER_PERIOD samples per period; coarser grids alias the
    beat and the variance loses its meaning.
    """
    if not (np.isfinite(angular_frequency) and angular_frequency > 0.0):
        raise ValueError(f"angular_frequency must be positive, got {angular_frequency!r}")
    if channel == "exact":
        values = series.exact_values
    elif channel == "sampled":
        if series.sampled_values is None:
            raise ValueError("series has no sampled channel")
        values = series.sampled_values
    else:
        raise ValueError(f"channel must be 'exact' or 'sampled', got {channel!r}")

    h = series.spacing
    period = 2.0 * np.pi / angular_frequency
    per_period = period / h
    if per_period < MIN_SAMPLES_PER_PERIOD - 1e-9:
        raise ValueError(
            f"{per_period:.3g} samples per period; need at least {MIN_SAMPLES_PER_PERIOD}"
        )
    span = float(series.times[-1] - series.times[0])
    periods = int(np.floor(span / period + 1e-9))
    if periods < 1:
        raise ValueError(f"record spans {span / period:.3g} periods; need at least one")
    # half-open window [0, periods*period): commensurate grids sum whole
    # cosine periods exactly, which is what makes the variance identity exact
    q = int(np.floor(periods * per_period + 1e-9))
    q = min(q, series.n_points - 1)
    window = values[:q]
    closed = values[: q + 1]
    vmax = float(np.max(closed))
    vmin = float(np.min(closed))
    return OscillationStats(
        mean_minmax=0.5 * (vmax + vmin),
        mean_arith=float(np.mean(window)),
        variance=float(np.var(window)),
        peak_to_peak=vmax - vmin,
        amplitude=0.5 * (vmax - vmin),
        window_periods=periods,
        window_size=q,
    )


@dataclass(frozen=True)
class VacuumDiagnosis:
    """Excitation weight inferred from a hold record, and the corrected average.

    beta_sq is the smaller root of b*(1-b) = alpha_beta_sq; beta_sq_shortcut
    is the |alpha| ~ 1 approximation beta_sq ~ alpha_beta_sq. For observables
    anti-commuting with the target the reference value is 0 and the raw
    average is already unbiased; otherwise the record oscillates around
    c*(1 - 2*beta_sq) and dividing restores the ground-state value c.
    """

    beta_sq: float
    alpha_beta_sq: float
    raw_average: float
    corrected_value: float
    reference_value: float
    model_kind: str
    beta_sq_shortcut: float
    noise_floor: float = 0.0
    predicted_conserved: float | None = None


def _effective_variance(variance: float, noise_floor: float) -> float:
    if noise_floor < 0.0:
        raise ValueError(f"noise_floor must be >= 0, got {noise_floor!r}")
    return max(variance - noise_floor, 0.0)


def _smaller_weight_root(alpha_beta_sq: float) -> float:
    """Solve b*(1-b) = alpha_beta_sq for the root below 1/2."""
    discriminant = 1.0 - 4.0 * alpha_beta_sq
    # the boundary |ab|^2 = 1/4 (equal weights) must reject even when float
    # rounding leaves the discriminant a hair positive
    if discriminant <= 1e-12:
        raise ValueError(
            f"|alpha*beta|^2 = {alpha_beta_sq!r} implies excitation weight >= 1/2; "
            "the record is not dominated by the ground state"
        )
    return 0.5 * (1.0 - np.sqrt(discriminant))


def _pick_mean(stats: OscillationStats, estimator: str) -> float:
    if estimator == "minmax":
        return stats.mean_minmax
    if estimator == "arith":
        return stats.mean_arith
    raise ValueError(f"mean_estimator must be 'minmax' or 'arith', got {estimator!r}")


def diagnose_anticommuting(
    stats: OscillationStats,
    *,
    noise_floor: float = 0.0,
    mean_estimator: str = "minmax",
) -> VacuumDiagnosis:
    """Diagnosis for an observable that anti-commutes with the target.

    Such an observable is purely off-diagonal in the reference pair with
    unit matrix element, so the record is 2*|ab|*cos(w*t + theta): variance
    2*|ab|^2, zero mean. The time average needs no correction; the payoff
    is beta_sq itself and the predicted value -1 + 2*beta_sq of the
    conserved companion observable.
    """
    variance = _effective_variance(stats.variance, noise_floor)
    alpha_beta_sq = 0.5 * variance
    beta_sq = _smaller_weight_root(alpha_beta_sq)
    raw = _pick_mean(stats, mean_estimator)
    return VacuumDiagnosis(
        beta_sq=beta_sq,
        alpha_beta_sq=alpha_beta_sq,
        raw_average=raw,
        corrected_value=raw,
        reference_value=0.0,
        model_kind="anticommuting",
        beta_sq_shortcut=alpha_beta_sq,
        noise_floor=noise_floor,
        predicted_conserved=-1.0 + 2.0 * beta_sq,
    )


def diagnose_general(
    stats: OscillationStats,
    ground_expectation_gap: float,
    *,
    noise_floor: float = 0.0,
    mean_estimator: str = "minmax",
) -> VacuumDiagnosis:
    """Diagnosis for an observable whose record oscillates around an offset.

    ground_expectation_gap is c = <g|O|g> with <e|O|e> = -c and |<g|O|e>| =
    c (the built-in Hadamard model has c = 1/sqrt(2)). The record is then
    c*(1-2b^2) + 2c*|ab|*cos(...): variance 2*c^2*|ab|^2, and the raw
    average understates c by the factor (1 - 2*beta_sq) that the correction
    divides out.
    """
    c = float(ground_expectation_gap)
    if not (np.isfinite(c) and c != 0.0):
        raise ValueError(f"ground_expectation_gap must be nonzero, got {ground_expectation_gap!r}")
    variance = _effective_variance(stats.variance, noise_floor)
    alpha_beta_sq = variance / (2.0 * c * c)
    beta_sq = _smaller_weight_root(alpha_beta_sq)
    raw = _pick_mean(stats, mean_estimator)
    occupation_factor = 1.0 - 2.0 * beta_sq
    return VacuumDiagnosis(
        beta_sq=beta_sq,
        alpha_beta_sq=alpha_beta_sq,
        raw_average=raw,
        corrected_value=raw / occupation_factor,
        reference_value=c,
        model_kind="general",
        beta_sq_shortcut=alpha_beta_sq,
        noise_floor=noise_floor,
    )


def predicted_series(
    decomposition: ResidualDecomposition,
    spec: ModelSpec,
    times: np.ndarray,
    observable_label: str = "Z",
) -> TimeSeries:
    """Closed-form hold record implied by a residual decomposition.

    Only the built-in models have pinned closed forms: for the bit-flip
    target <Z> = 2|ab|cos(2Jt + theta) and <-X> = -1 + 2b^2; for the
    Hadamard target <Z> = (1-2b^2)/sqrt(2) + sqrt(2)|ab|cos(2Jt + theta).
    """
    if spec.kind not in ("model1", "model2"):
        raise ValueError("closed-form predictions exist only for the built-in models")
    t = np.asarray(times, dtype=np.float64)
    ab = decomposition.alpha_mod * decomposition.beta_mod
    omega = spec.oscillation_angular_frequency()
    phase = omega * t + decomposition.theta
    if spec.kind == "model1":
        if observable_label == "Z":
            y = 2.0 * ab * np.cos(phase)
        elif observable_label == "-X":
            y = np.full(t.shape, -1.0 + 2.0 * decomposition.beta_sq)
        else:
            raise ValueError(f"no closed form for observable {observable_label!r} in model1")
    else:
        if observable_label != "Z":
            raise ValueError(f"no closed form for observable {observable_label!r} in model2")
        sqrt2 = np.sqrt(2.0)
        y = (1.0 - 2.0 * decomposition.beta_sq) / sqrt2 + sqrt2 * ab * np.cos(phase)
    return TimeSeries(
        times=t,
        exact_values=y,
        sampled_values=None,
        stderr_values=None,
        shots_per_point=0,
        observable_label=f"{observable_label} (predicted)",
    )
