"""Expectation values, projective shot sampling, and hold-phase records.

After the ramp ends the state evolves under the constant target; values are
recorded on a uniform time grid, exactly and (optionally) as averages of a
finite number of projective shots drawn from the observable's eigenbasis.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_state_vector, eig_hermitian, expm_minus_i
from .model import HermitianOperator, ModelSpec, pauli

__all__ = [
    "ShotSampler",
    "TimeSeries",
    "expectation",
    "heisenberg_z_closed_form",
    "hold_series",
    "sample_expectation",
    "shot_std",
]

_SEED_MASK = (1 << 64) - 1


@dataclass
class ShotSampler:
    """Deterministic pseudorandom source for measurement sampling.

    Each observable label gets its own child stream derived from
    (seed, crc32(label)), so adding an observable or reordering them does
    not disturb the shots drawn for the others.
    """

    seed: int
    _root: np.random.Generator | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def generator(self) -> np.random.Generator:
        if self._root is None:
            self._root = np.random.default_rng(np.random.SeedSequence([self.seed & _SEED_MASK]))
        return self._root

    def spawn(self, label: str) -> np.random.Generator:
        digest = zlib.crc32(label.encode("utf-8"))
        return np.random.default_rng(np.random.SeedSequence([self.seed & _SEED_MASK, digest]))


def _operator_matrix(o) -> np.ndarray:
    return o.matrix if isinstance(o, HermitianOperator) else np.asarray(o, dtype=np.complex128)


def expectation(v: np.ndarray, observable) -> float:
    """Exact <v|O|v>, guarding against a non-real result."""
    v = as_state_vector(v)
    m = _operator_matrix(observable)
    if m.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: operator {m.shape} vs state {v.shape}")
    value = complex(np.vdot(v, m @ v))
    if abs(value.imag) > 1e-12:
        raise ArithmeticError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real


def _born_distribution(v: np.ndarray, es) -> np.ndarray:
    p = np.abs(es.eigenvectors.conj().T @ v) ** 2
    return p / p.sum()


def shot_std(v: np.ndarray, observable) -> float:
    """Single-shot standard deviation sqrt(<O^2> - <O>^2) of a projective measurement."""
    v = as_state_vector(v)
    es = eig_hermitian(_operator_matrix(observable))
    p = _born_distribution(v, es)
    mean = float(p @ es.eigenvalues)
    second = float(p @ es.eigenvalues**2)
    return float(np.sqrt(max(second - mean * mean, 0.0)))


def sample_expectation(v: np.ndarray, observable, shots: int, sampler) -> float:
    """Average of `shots` projective measurements in the observable eigenbasis."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots!r}")
    v = as_state_vector(v)
    es = eig_hermitian(_operator_matrix(observable))
    p = _born_distribution(v, es)
    gen = sampler.generator if isinstance(sampler, ShotSampler) else sampler
    counts = gen.multinomial(int(shots), p)
    return float(counts @ es.eigenvalues) / float(shots)


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled expectation record over the hold window.

    Times are offsets from the end of preparation (0 is the instant the
    ramp stops). sampled_values/stderr_values are None for exact-only runs.
    """

    times: np.ndarray
    exact_values: np.ndarray
    sampled_values: np.ndarray | None
    stderr_values: np.ndarray | None
    shots_per_point: int
    observable_label: str

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=np.float64)
        y = np.asarray(self.exact_values, dtype=np.float64)
        if t.ndim != 1 or t.shape[0] < 2:
            raise ValueError("a time series needs at least two points")
        if y.shape != t.shape:
            raise ValueError("exact_values shape does not match times")
        gaps = np.diff(t)
        if np.any(gaps <= 0.0) or float(np.max(np.abs(gaps - gaps[0]))) > 1e-12:
            raise ValueError("times must be strictly increasing with uniform spacing")
        if self.shots_per_point < 0:
            raise ValueError("shots_per_point must be >= 0")
        for name in ("sampled_values", "stderr_values"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=np.float64)
                if arr.shape != t.shape:
                    raise ValueError(f"{name} shape does not match times")
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)
        t.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "exact_values", y)

    @property
    def n_points(self) -> int:
        return self.times.shape[0]

    @property
    def spacing(self) -> float:
        return float(self.times[1] - self.times[0])


def _split_diagonal(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = np.diag(np.diagonal(m))
    return d, m - d


def _hold_states(
    v: np.ndarray,
    spec: ModelSpec,
    times: np.ndarray,
    hold_integrator: str,
    substep_width: float | None,
) -> list[np.ndarray]:
    if hold_integrator == "exact":
        es = eig_hermitian(spec.target.matrix)
        coeff = es.eigenvectors.conj().T @ v
        return [es.eigenvectors @ (np.exp(-1j * es.eigenvalues * t) * coeff) for t in times]
    if hold_integrator != "trotter2":
        raise ValueError(f"hold_integrator must be 'exact' or 'trotter2', got {hold_integrator!r}")
    # split stepping under the constant target: diagonal part outside,
    # off-diagonal remainder inside; useful only for comparison studies
    sample_dt = float(times[1] - times[0])
    width = sample_dt if substep_width is None else float(substep_width)
    if not (np.isfinite(width) and width > 0.0):
        raise ValueError(f"substep_width must be positive, got {substep_width!r}")
    n_sub = max(1, int(round(sample_dt / width)))
    d, r = _split_diagonal(spec.target.matrix)
    w = sample_dt / n_sub
    half = expm_minus_i(d, 0.5 * w)
    middle = expm_minus_i(r, w)
    step = half @ middle @ half
    states = [v]
    current = v
    for _ in range(times.shape[0] - 1):
        for _ in range(n_sub):
            current = step @ current
        states.append(current)
    return states


def hold_series(
    v_end: np.ndarray,
    spec: ModelSpec,
    observable: HermitianOperator,
    duration: float,
    sample_dt: float,
    shots: int,
    sampler: ShotSampler,
    *,
    hold_integrator: str = "exact",
    substep_width: float | None = None,
) -> TimeSeries:
    """Hold v_end under the constant target and record the observable.

    shots = 0 records exact values only; otherwise each grid point also gets
    an average of `shots` projective measurements and its standard error,
    drawn from the sampler stream belonging to the observable's label.
    """
    if not (np.isfinite(duration) and duration > 0.0):
        raise ValueError(f"duration must be positive, got {duration!r}")
    if not (np.isfinite(sample_dt) and sample_dt > 0.0):
        raise ValueError(f"sample_dt must be positive, got {sample_dt!r}")
    if shots < 0:
        raise ValueError(f"shots must be >= 0, got {shots!r}")
    v = as_state_vector(v_end)
    if v.shape[0] != spec.dim or observable.dim != spec.dim:
        raise ValueError("state, model, and observable dimensions must agree")
    n = int(round(duration / sample_dt)) + 1
    if n < 2:
        raise ValueError("hold window shorter than one sample interval")
    times = np.arange(n, dtype=np.float64) * sample_dt
    states = _hold_states(v, spec, times, hold_integrator, substep_width)
    exact = np.array([expectation(w, observable) for w in states])

    sampled = stderr = None
    if shots > 0:
        o_es = eig_hermitian(observable.matrix)
        lam = o_es.eigenvalues
        gen = sampler.spawn(observable.label)
        sampled = np.empty(n)
        stderr = np.empty(n)
        for k, w in enumerate(states):
            p = _born_distribution(w, o_es)
            counts = gen.multinomial(int(shots), p)
            sampled[k] = float(counts @ lam) / float(shots)
            variance = float(p @ lam**2) - float(p @ lam) ** 2
            stderr[k] = np.sqrt(max(variance, 0.0) / float(shots))

    return TimeSeries(
        times=times,
        exact_values=exact,
        sampled_values=sampled,
        stderr_values=stderr,
        shots_per_point=int(shots),
        observable_label=observable.label,
    )


def heisenberg_z_closed_form(t: float, coupling: float) -> HermitianOperator:
    """Z carried to hold time t by the Hadamard-type target with coupling J.

    Closed form: (1/sqrt(2))*H - (1/sqrt(2))*Y*sin(2Jt) + (1/2)*(Z-X)*cos(2Jt),
    equal to exp(+i*H_T*t) Z exp(-i*H_T*t) for H_T = -J*H.
    """
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    if not (np.isfinite(coupling) and coupling > 0.0):
        raise ValueError(f"coupling must be positive, got {coupling!r}")
    sqrt2 = np.sqrt(2.0)
    angle = 2.0 * coupling * t
    m = (
        pauli("H").matrix / sqrt2
        - pauli("Y").matrix * (np.sin(angle) / sqrt2)
        + (pauli("Z").matrix - pauli("X").matrix) * (0.5 * np.cos(angle))
    )
    return HermitianOperator(m, f"Z(t={t:.12g})")
