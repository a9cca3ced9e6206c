import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adiaprep.analyze import (
    OscillationStats,
    diagnose_anticommuting,
    diagnose_general,
    oscillation_stats,
    predicted_series,
)
from adiaprep.evolve import decompose, superposition_state
from adiaprep.measure import ShotSampler, TimeSeries, hold_series
from adiaprep.model import model_one, model_two, pauli

SQRT2 = np.sqrt(2.0)


def cosine_series(amplitude, offset, theta=0.0, omega=2.0, periods=4, per_period=32):
    """Series offset + amplitude*cos(omega*t + theta) tiling whole periods."""
    h = (2.0 * np.pi / omega) / per_period
    n = periods * per_period + 1
    t = np.arange(n) * h
    return TimeSeries(t, offset + amplitude * np.cos(omega * t + theta), None, None, 0, "Z")


def test_stats_of_constant_series():
    series = TimeSeries(np.arange(65) * 0.1, np.full(65, 0.7), None, None, 0, "Z")
    stats = oscillation_stats(series, 2.0)
    assert stats.mean_minmax == pytest.approx(0.7)
    assert stats.mean_arith == pytest.approx(0.7)
    assert stats.variance < 1e-30
    assert stats.peak_to_peak == 0.0


def test_stats_pure_cosine_on_commensurate_grid():
    # whole periods with an even number of samples per period: the minmax
    # midpoint is exactly zero and the variance exactly amplitude^2/2
    a = 0.35
    stats = oscillation_stats(cosine_series(a, 0.0, theta=0.0), 2.0)
    assert abs(stats.mean_minmax) < 1e-15
    assert abs(stats.mean_arith) < 1e-15
    assert stats.variance == pytest.approx(a * a / 2.0, abs=1e-15)
    assert stats.amplitude == pytest.approx(a, abs=1e-15)
    assert stats.peak_to_peak == pytest.approx(2.0 * a, abs=1e-15)
    assert stats.window_periods == 4
    assert stats.window_size == 128


def test_stats_offset_cosine_recovers_offset():
    stats = oscillation_stats(cosine_series(0.02, 0.71, theta=1.1), 2.0)
    assert stats.mean_minmax == pytest.approx(0.71, abs=1e-12)
    assert stats.mean_arith == pytest.approx(0.71, abs=1e-12)
    assert stats.variance == pytest.approx(0.02**2 / 2.0, abs=1e-12)


def test_stats_variance_identity_with_arbitrary_phase():
    # the phase shifts which points are sampled but not the whole-period sums
    for theta in (0.0, 0.3, 1.7, -2.2):
        stats = oscillation_stats(cosine_series(0.1, 0.5, theta=theta), 2.0)
        assert stats.variance == pytest.approx(0.005, abs=1e-14)
        assert stats.mean_arith == pytest.approx(0.5, abs=1e-14)


def test_stats_window_drops_partial_period():
    # 4.5 periods recorded: the window must keep exactly 4
    h = np.pi / 32.0
    n = 145  # 4.5 periods of 32 samples
    t = np.arange(n) * h
    series = TimeSeries(t, np.cos(2.0 * t), None, None, 0, "Z")
    stats = oscillation_stats(series, 2.0)
    assert stats.window_periods == 4
    assert stats.window_size == 128
    assert stats.variance == pytest.approx(0.5, abs=1e-14)


def test_stats_incommensurate_grid_is_close_but_not_exact():
    # 30.159... samples per period: identity holds only approximately
    h = 1.0 / 12.0
    n = 200
    t = np.arange(n) * h
    series = TimeSeries(t, np.cos(2.0 * t), None, None, 0, "Z")
    stats = oscillation_stats(series, 2.0)
    assert stats.variance == pytest.approx(0.5, rel=0.05)


def test_stats_rejects_short_windows_and_coarse_grids():
    series = cosine_series(0.1, 0.0)
    with pytest.raises(ValueError, match="at least one"):
        oscillation_stats(series, 0.4)  # period longer than the record
    h = 0.5  # about 6 samples per period at omega = 2
    t = np.arange(40) * h
    coarse = TimeSeries(t, np.cos(2.0 * t), None, None, 0, "Z")
    with pytest.raises(ValueError, match="samples per period"):
        oscillation_stats(coarse, 2.0)


def test_stats_channel_selection():
    t = np.arange(65) * (np.pi / 32.0)
    exact = np.cos(2.0 * t)
    sampled = exact + 0.01
    series = TimeSeries(t, exact, sampled, np.full(65, 0.01), 100, "Z")
    stats = oscillation_stats(series, 2.0, channel="sampled")
    assert stats.mean_arith == pytest.approx(0.01, abs=1e-14)
    with pytest.raises(ValueError, match="channel"):
        oscillation_stats(series, 2.0, channel="both")
    bare = TimeSeries(t, exact, None, None, 0, "Z")
    with pytest.raises(ValueError, match="no sampled channel"):
        oscillation_stats(bare, 2.0, channel="sampled")


def test_stats_rejects_nonpositive_frequency():
    with pytest.raises(ValueError, match="angular_frequency"):
        oscillation_stats(cosine_series(0.1, 0.0), 0.0)


def test_stats_dataclass_guards():
    stats = OscillationStats(0.0, 0.0, 0.005, 0.2, 0.1, 4, 128)
    assert stats.variance <= stats.amplitude**2
    with pytest.raises(ValueError, match="inconsistent"):
        OscillationStats(0.0, 0.0, 0.5, 0.2, 0.1, 4, 128)
    with pytest.raises(ValueError, match="nonnegative"):
        OscillationStats(0.0, 0.0, -0.1, 0.2, 0.1, 4, 128)


def test_anticommuting_worked_example():
    # variance 7.30e-4 -> 2*beta_sq ~ 7.303e-4, predicted conserved value
    # -1 + 2*beta_sq ~ -0.999270
    amplitude = np.sqrt(2.0 * 0.000730)
    stats = oscillation_stats(cosine_series(amplitude, 0.0, theta=0.4), 2.0)
    diag = diagnose_anticommuting(stats)
    assert 2.0 * diag.beta_sq_shortcut == pytest.approx(0.000730, abs=1e-12)
    assert 2.0 * diag.beta_sq == pytest.approx(0.0007302666446862283, abs=1e-9)
    assert diag.predicted_conserved == pytest.approx(-0.999270, abs=1e-6)
    assert diag.reference_value == 0.0
    assert diag.corrected_value == diag.raw_average
    assert diag.model_kind == "anticommuting"
    # root vs shortcut agree to relative error < 2*beta_sq
    rel = abs(diag.beta_sq - diag.beta_sq_shortcut) / diag.beta_sq
    assert rel < 2.0 * diag.beta_sq


def test_anticommuting_zero_variance_means_vacuum():
    series = TimeSeries(np.arange(65) * (np.pi / 32.0), np.zeros(65), None, None, 0, "Z")
    diag = diagnose_anticommuting(oscillation_stats(series, 2.0))
    assert diag.beta_sq == 0.0
    assert diag.predicted_conserved == pytest.approx(-1.0)


def test_anticommuting_rejects_equal_superposition():
    # amplitude 1 means |ab| = 1/2: no vacuum-dominated root exists
    stats = oscillation_stats(cosine_series(1.0, 0.0), 2.0)
    with pytest.raises(ValueError, match="not dominated"):
        diagnose_anticommuting(stats)


def test_anticommuting_noise_floor_subtraction():
    amplitude = np.sqrt(2.0 * 4e-4)
    stats = oscillation_stats(cosine_series(amplitude, 0.0), 2.0)
    diag = diagnose_anticommuting(stats, noise_floor=1e-4)
    assert diag.alpha_beta_sq == pytest.approx((4e-4 - 1e-4) / 2.0, abs=1e-12)
    assert diag.noise_floor == 1e-4
    # a floor larger than the variance clamps to zero excitation
    flat = diagnose_anticommuting(stats, noise_floor=1.0)
    assert flat.beta_sq == 0.0
    with pytest.raises(ValueError, match="noise_floor"):
        diagnose_anticommuting(stats, noise_floor=-1e-4)


def test_general_worked_example():
    # raw 0.706690 with variance 3.222e-4 -> beta_sq ~ 3.223e-4 and the
    # corrected average 0.707146, back at 1/sqrt(2) to within 4e-5
    c = 1.0 / SQRT2
    amplitude = np.sqrt(2.0 * 0.0003222)
    stats = oscillation_stats(cosine_series(amplitude, 0.706690, theta=0.25), 2.0)
    diag = diagnose_general(stats, c)
    assert diag.beta_sq_shortcut == pytest.approx(0.0003222, abs=1e-10)
    assert diag.beta_sq == pytest.approx(0.0003223, abs=5e-8)
    assert diag.raw_average == pytest.approx(0.706690, abs=1e-9)
    assert diag.corrected_value == pytest.approx(0.7071458316902636, abs=1e-9)
    assert diag.corrected_value == pytest.approx(0.707145, abs=2e-6)
    assert abs(diag.corrected_value - c) < abs(diag.raw_average - c) / 10.0
    assert diag.reference_value == pytest.approx(c)
    assert diag.model_kind == "general"


def test_general_zero_variance_leaves_average_unchanged():
    series = TimeSeries(np.arange(65) * (np.pi / 32.0), np.full(65, 0.7), None, None, 0, "Z")
    diag = diagnose_general(oscillation_stats(series, 2.0), 1.0 / SQRT2)
    assert diag.beta_sq == 0.0
    assert diag.corrected_value == diag.raw_average == pytest.approx(0.7)


def test_general_synthetic_recovery():
    # build the record straight from the closed form and recover beta_sq
    c = 1.0 / SQRT2
    b_sq = 0.01
    ab = np.sqrt((1.0 - b_sq) * b_sq)
    offset = c * (1.0 - 2.0 * b_sq)
    amplitude = 2.0 * c * ab
    stats = oscillation_stats(cosine_series(amplitude, offset, theta=-0.7), 2.0)
    diag = diagnose_general(stats, c)
    assert diag.beta_sq == pytest.approx(b_sq, rel=1e-9)
    assert diag.corrected_value == pytest.approx(c, abs=1e-12)


def test_general_rejects_zero_offset_scale():
    stats = oscillation_stats(cosine_series(0.1, 0.0), 2.0)
    with pytest.raises(ValueError, match="nonzero"):
        diagnose_general(stats, 0.0)


def test_general_negative_offset_scale():
    # a conserved observable with <g|O|g> = -1: flat record, no correction
    series = TimeSeries(np.arange(65) * (np.pi / 32.0), np.full(65, -0.9998), None, None, 0, "-X")
    diag = diagnose_general(oscillation_stats(series, 2.0), -1.0)
    assert diag.beta_sq == 0.0
    assert diag.corrected_value == pytest.approx(-0.9998)
    assert diag.reference_value == -1.0


def test_mean_estimator_selection():
    # put a spike into one point: minmax feels it, the window mean barely does
    t = np.arange(129) * (np.pi / 32.0)
    values = 0.5 + 0.01 * np.cos(2.0 * t)
    values[3] += 0.05
    series = TimeSeries(t, values, None, None, 0, "Z")
    stats = oscillation_stats(series, 2.0)
    minmax = diagnose_general(stats, 1.0 / SQRT2, mean_estimator="minmax")
    arith = diagnose_general(stats, 1.0 / SQRT2, mean_estimator="arith")
    assert minmax.raw_average != pytest.approx(arith.raw_average, abs=1e-4)
    with pytest.raises(ValueError, match="mean_estimator"):
        diagnose_general(stats, 1.0, mean_estimator="median")


@settings(max_examples=60, deadline=None)
@given(
    b_sq=st.floats(1e-6, 0.2),
    theta=st.floats(-3.1, 3.1),
    offset_scale=st.floats(0.2, 1.5),
)
def test_general_recovery_property(b_sq, theta, offset_scale):
    ab = np.sqrt((1.0 - b_sq) * b_sq)
    series = cosine_series(2.0 * offset_scale * ab, offset_scale * (1.0 - 2.0 * b_sq), theta=theta)
    diag = diagnose_general(oscillation_stats(series, 2.0), offset_scale)
    assert diag.beta_sq == pytest.approx(b_sq, rel=1e-6, abs=1e-12)
    assert diag.corrected_value == pytest.approx(offset_scale, rel=1e-9)


def test_predicted_series_flat_for_pure_ground_state():
    spec1 = model_one(1.0)
    spec2 = model_two(np.pi / 4.0)
    t = np.arange(65) * 0.125
    dec1 = decompose(spec1.reference_ground_state, spec1)
    assert np.max(np.abs(predicted_series(dec1, spec1, t, "Z").exact_values)) < 1e-15
    assert np.allclose(predicted_series(dec1, spec1, t, "-X").exact_values, -1.0)
    dec2 = decompose(spec2.reference_ground_state, spec2)
    assert np.allclose(predicted_series(dec2, spec2, t, "Z").exact_values, 1.0 / SQRT2)


def test_predicted_series_matches_hold_record():
    # closed form vs actual propagation of the same decomposition
    for spec, label in ((model_one(1.0), "Z"), (model_two(np.pi / 4.0), "Z")):
        psi = superposition_state(spec, 0.12, 0.9)
        series = hold_series(psi, spec, pauli("Z"), 8.0, 0.125, 0, ShotSampler(0))
        predicted = predicted_series(decompose(psi, spec), spec, series.times, label)
        assert np.max(np.abs(predicted.exact_values - series.exact_values)) < 1e-9


def test_predicted_series_rejections():
    spec1 = model_one(1.0)
    dec = decompose(spec1.reference_ground_state, spec1)
    t = np.arange(65) * 0.125
    with pytest.raises(ValueError, match="observable"):
        predicted_series(dec, spec1, t, "Y")
    custom = model_one(1.0)
    object.__setattr__(custom, "kind", None)
    with pytest.raises(ValueError, match="built-in"):
        predicted_series(dec, custom, t, "Z")
