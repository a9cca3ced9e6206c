"""Hamiltonians, observables, and the linear ramp between them.

The sweep Hamiltonian is H(s) = (1-s)*H_initial + s*H_target with s = t/T.
Two single-qubit benchmark models are built in: a bit-flip target (-J*X) and
a Hadamard-type target (-J*H) whose ground state is not a Pauli eigenstate.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import as_complex_matrix, as_state_vector, eig_hermitian

__all__ = [
    "AdiabaticSchedule",
    "HermitianOperator",
    "ModelSpec",
    "hamiltonian_at",
    "model_one",
    "model_two",
    "observable_from_label",
    "pauli",
    "spectral_gap_at",
]

_SQRT2 = float(np.sqrt(2.0))

_PAULI: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
}
_PAULI["H"] = (_PAULI["X"] + _PAULI["Z"]) / _SQRT2


@dataclass(frozen=True)
class HermitianOperator:
    """A labelled Hermitian matrix; serves as Hamiltonian or observable."""

    matrix: np.ndarray
    label: str

    def __post_init__(self) -> None:
        m = as_complex_matrix(self.matrix)
        d = np.abs(m - m.conj().T)
        worst = float(np.max(d))
        if worst > 1e-12:
            i, j = np.unravel_index(int(np.argmax(d)), d.shape)
            raise ValueError(
                f"operator {self.label!r} is not Hermitian: entry ({i}, {j}) "
                f"defect {worst:.3e}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def negated(self) -> "HermitianOperator":
        label = self.label[1:] if self.label.startswith("-") else "-" + self.label
        return HermitianOperator(-self.matrix, label)


def pauli(name: str) -> HermitianOperator:
    """One of I, X, Y, Z, or the Hadamard matrix H = (X+Z)/sqrt(2)."""
    try:
        return HermitianOperator(_PAULI[name], name)
    except KeyError:
        raise ValueError(f"unknown operator {name!r}; known: {', '.join(sorted(_PAULI))}") from None


def observable_from_label(label: str) -> HermitianOperator:
    """Resolve labels like "Z" or "-X" to operators, keeping the sign in the label."""
    bare = label[1:] if label.startswith("-") else label
    op = pauli(bare)
    if label.startswith("-"):
        return HermitianOperator(-op.matrix, label)
    return op


@dataclass(frozen=True)
class AdiabaticSchedule:
    """Linear ramp profile s(t) = t/T discretized into steps of fixed width."""

    total_time: float
    step_width: float
    profile: str = "linear"

    def __post_init__(self) -> None:
        if not (np.isfinite(self.total_time) and self.total_time > 0.0):
            raise ValueError(f"total_time must be positive and finite, got {self.total_time!r}")
        if not (np.isfinite(self.step_width) and self.step_width > 0.0):
            raise ValueError(f"step_width must be positive and finite, got {self.step_width!r}")
        if self.profile != "linear":
            raise ValueError(f"unsupported ramp profile {self.profile!r}; only 'linear' is implemented")
        ratio = self.total_time / self.step_width
        n = int(round(ratio))
        if n < 1:
            raise ValueError(
                f"step_width {self.step_width} exceeds twice the total time {self.total_time}"
            )
        if abs(ratio - n) > 1e-9:
            warnings.warn(
                f"total_time/step_width = {ratio!r} is not an integer; "
                f"running {n} steps covering {n * self.step_width!r}",
                stacklevel=2,
            )

    @property
    def num_steps(self) -> int:
        return int(round(self.total_time / self.step_width))

    @property
    def discrete_end(self) -> float:
        return self.num_steps * self.step_width

    def s(self, t: float) -> float:
        """Ramp parameter at time t, clipped to [0, 1]."""
        return min(max(t / self.total_time, 0.0), 1.0)


@dataclass(frozen=True)
class ModelSpec:
    """A preparation problem: initial and target Hamiltonians, observables,
    and the target's reference ground/excited pair used for diagnosis.

    kind is "model1"/"model2" for the built-ins and None for custom specs;
    built-ins use the closed-form oscillation frequency 2*J.
    """

    initial: HermitianOperator
    target: HermitianOperator
    coupling: float
    observables: tuple[HermitianOperator, ...]
    reference_ground_state: np.ndarray
    reference_excited_state: np.ndarray
    kind: str | None = None

    def __post_init__(self) -> None:
        if not (np.isfinite(self.coupling) and self.coupling > 0.0):
            raise ValueError(f"coupling must be positive, got {self.coupling!r}")
        dim = self.target.dim
        if dim < 2:
            raise ValueError("target must act on at least a two-level system")
        if self.initial.dim != dim:
            raise ValueError(
                f"initial Hamiltonian dimension {self.initial.dim} != target dimension {dim}"
            )
        obs = tuple(self.observables)
        for o in obs:
            if o.dim != dim:
                raise ValueError(f"observable {o.label!r} dimension {o.dim} != {dim}")
        object.__setattr__(self, "observables", obs)
        g = as_state_vector(self.reference_ground_state)
        e = as_state_vector(self.reference_excited_state)
        if g.shape[0] != dim or e.shape[0] != dim:
            raise ValueError("reference states must match the Hamiltonian dimension")
        overlap = abs(np.vdot(g, e))
        if overlap > 1e-10:
            raise ValueError(f"reference states are not orthogonal (|<g|e>| = {overlap:.3e})")
        for name, vec in (("ground", g), ("excited", e)):
            energy = np.vdot(vec, self.target.matrix @ vec).real
            residual = float(np.linalg.norm(self.target.matrix @ vec - energy * vec))
            if residual > 1e-10:
                raise ValueError(
                    f"reference {name} state is not a target eigenvector (residual {residual:.3e})"
                )
        if self.ground_energy >= self.excited_energy:
            raise ValueError(
                f"reference ground energy {self.ground_energy!r} is not below "
                f"the excited energy {self.excited_energy!r}"
            )
        g.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "reference_ground_state", g)
        object.__setattr__(self, "reference_excited_state", e)

    @property
    def dim(self) -> int:
        return self.target.dim

    @property
    def ground_energy(self) -> float:
        g = self.reference_ground_state
        return float(np.vdot(g, self.target.matrix @ g).real)

    @property
    def excited_energy(self) -> float:
        e = self.reference_excited_state
        return float(np.vdot(e, self.target.matrix @ e).real)

    def oscillation_angular_frequency(self) -> float:
        """Angular frequency of residual-excitation beats during the hold.

        Exactly 2*J for the built-in models; the reference level splitting
        otherwise.
        """
        if self.kind in ("model1", "model2"):
            return 2.0 * self.coupling
        return self.excited_energy - self.ground_energy

    def observable(self, label: str) -> HermitianOperator:
        for o in self.observables:
            if o.label == label:
                return o
        known = ", ".join(o.label for o in self.observables)
        raise KeyError(f"no observable {label!r}; have: {known}")


def model_one(coupling: float) -> ModelSpec:
    """Bit-flip benchmark: ramp -J*Z into -J*X.

    Z anti-commutes with the target, so any residual excitation makes <Z>
    oscillate around zero during the hold; -X commutes and is conserved.
    """
    if not (np.isfinite(coupling) and coupling > 0.0):
        raise ValueError(f"coupling must be positive, got {coupling!r}")
    j = float(coupling)
    h0 = HermitianOperator(-j * _PAULI["Z"], "-J*Z")
    ht = HermitianOperator(-j * _PAULI["X"], "-J*X")
    plus = np.array([1.0, 1.0], dtype=np.complex128) / _SQRT2
    minus = np.array([1.0, -1.0], dtype=np.complex128) / _SQRT2
    return ModelSpec(
        initial=h0,
        target=ht,
        coupling=j,
        observables=(pauli("Z"), observable_from_label("-X")),
        reference_ground_state=plus,
        reference_excited_state=minus,
        kind="model1",
    )


def model_two(coupling: float) -> ModelSpec:
    """Hadamard benchmark: ramp -J*Z into -J*H.

    The target ground state (1, sqrt(2)-1)/sqrt(4-2*sqrt(2)) has <Z> =
    1/sqrt(2), so the hold-phase <Z> record oscillates around an offset and
    its time average is biased by the excited-state weight.
    """
    if not (np.isfinite(coupling) and coupling > 0.0):
        raise ValueError(f"coupling must be positive, got {coupling!r}")
    j = float(coupling)
    h0 = HermitianOperator(-j * _PAULI["Z"], "-J*Z")
    ht = HermitianOperator(-j * _PAULI["H"], "-J*H")
    ground = np.array([1.0, _SQRT2 - 1.0], dtype=np.complex128) / np.sqrt(4.0 - 2.0 * _SQRT2)
    excited = np.array([1.0, -(_SQRT2 + 1.0)], dtype=np.complex128) / np.sqrt(4.0 + 2.0 * _SQRT2)
    return ModelSpec(
        initial=h0,
        target=ht,
        coupling=j,
        observables=(pauli("Z"),),
        reference_ground_state=ground,
        reference_excited_state=excited,
        kind="model2",
    )


def hamiltonian_at(spec: ModelSpec, schedule: AdiabaticSchedule, t: float) -> HermitianOperator:
    """Sweep Hamiltonian H(s(t)) = (1-s)*H_initial + s*H_target."""
    if not (-1e-12 <= t <= schedule.total_time + 1e-12):
        raise ValueError(f"time {t!r} outside the ramp interval [0, {schedule.total_time!r}]")
    s = schedule.s(t)
    m = (1.0 - s) * spec.initial.matrix + s * spec.target.matrix
    return HermitianOperator(m, f"H(s={s:.12g})")


def spectral_gap_at(spec: ModelSpec, schedule: AdiabaticSchedule, t: float) -> float:
    """Gap between the two lowest levels of the sweep Hamiltonian at time t."""
    es = eig_hermitian(hamiltonian_at(spec, schedule, t).matrix)
    return float(es.eigenvalues[1] - es.eigenvalues[0])
