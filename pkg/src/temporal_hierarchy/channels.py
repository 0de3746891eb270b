"""Qubit and multi-qubit dynamics.

Closed-form solutions for the amplitude-damping, phase-damping and
depolarizing channels, a fourth-order Runge-Kutta integrator for generic
Lindblad generators, and unitary evolution via spectral decomposition.

Basis convention for amplitude damping: index 0 is the excited state and
index 1 the ground state, so the lowering operator is ``|1><0|`` and
populations relax toward ``diag(0, 1)``. Rates are in units of inverse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import ID2, PAULI_X, PAULI_Y, PAULI_Z, dagger, herm_eig, is_hermitian

SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # excited -> ground
SIGMA_PLUS = SIGMA_MINUS.conj().T


@dataclass(frozen=True)
class AmplitudeDamping:
    gamma: float

    def __post_init__(self):
        _check_rate(self.gamma)


@dataclass(frozen=True)
class PhaseDamping:
    gamma: float

    def __post_init__(self):
        _check_rate(self.gamma)


@dataclass(frozen=True)
class Depolarizing:
    gamma: float

    def __post_init__(self):
        _check_rate(self.gamma)


@dataclass(frozen=True)
class Unitary:
    hamiltonian: np.ndarray

    def __post_init__(self):
        if not is_hermitian(self.hamiltonian):
            raise ValueError("Hamiltonian must be Hermitian")


@dataclass(frozen=True)
class GenericLindblad:
    """Generator ``-i[H, rho] + sum_k r_k (L rho L+ - {L+L, rho}/2)``."""

    hamiltonian: np.ndarray
    jumps: tuple = field(default_factory=tuple)  # pairs (operator, rate)

    def __post_init__(self):
        if not is_hermitian(self.hamiltonian):
            raise ValueError("Hamiltonian must be Hermitian")
        for _, rate in self.jumps:
            _check_rate(rate)


Channel = AmplitudeDamping | PhaseDamping | Depolarizing | Unitary | GenericLindblad


def _check_rate(rate: float) -> None:
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {rate}")


def channel_dim(ch: Channel) -> int:
    if isinstance(ch, (AmplitudeDamping, PhaseDamping, Depolarizing)):
        return 2
    return ch.hamiltonian.shape[0]


def apply_channel(ch: Channel, m: np.ndarray, t: float) -> np.ndarray:
    """Linear action of the channel on an arbitrary matrix.

    This is the linear extension of :func:`evolve`; it performs no density
    matrix validation and is what tomography-style reconstructions use.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    d = channel_dim(ch)
    if m.shape != (d, d):
        raise ValueError(f"state shape {m.shape} does not match channel dimension {d}")

    if isinstance(ch, AmplitudeDamping):
        e = np.exp(-ch.gamma * t)
        r = np.sqrt(e)
        out = np.empty((2, 2), dtype=complex)
        out[0, 0] = e * m[0, 0]
        out[0, 1] = r * m[0, 1]
        out[1, 0] = r * m[1, 0]
        out[1, 1] = m[1, 1] + (1.0 - e) * m[0, 0]
        return out
    if isinstance(ch, PhaseDamping):
        e = np.exp(-ch.gamma * t)
        out = m.astype(complex).copy()
        out[0, 1] *= e
        out[1, 0] *= e
        return out
    if isinstance(ch, Depolarizing):
        e = np.exp(-ch.gamma * t)
        return e * m + (1.0 - e) * np.trace(m) * ID2 / 2.0
    if isinstance(ch, Unitary):
        return unitary_evolve(ch.hamiltonian, m, t, _validate=False)
    return evolve_rk4(ch, m, t, _default_dt(ch), _validate=False)


def evolve(ch: Channel, rho: np.ndarray, t: float) -> np.ndarray:
    """Evolve a density matrix for time ``t``. Trace preserving and positive."""
    _check_state(rho)
    return apply_channel(ch, rho, t)


def _check_state(rho: np.ndarray) -> None:
    if not is_hermitian(rho):
        raise ValueError("state must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise ValueError("state must have unit trace")


def _default_dt(ch: GenericLindblad) -> float:
    rates = [r for _, r in ch.jumps]
    scale = max([1e-12] + rates + [float(np.max(np.abs(ch.hamiltonian)))])
    return 1e-3 / scale


def lindblad_rhs(ch: GenericLindblad, rho: np.ndarray) -> np.ndarray:
    h = ch.hamiltonian
    out = -1j * (h @ rho - rho @ h)
    for op, rate in ch.jumps:
        opd = dagger(op)
        anti = opd @ op
        out = out + rate * (op @ rho @ opd - 0.5 * (anti @ rho + rho @ anti))
    return out


def evolve_rk4(
    ch: GenericLindblad,
    rho: np.ndarray,
    t: float,
    dt: float,
    _validate: bool = True,
) -> np.ndarray:
    """Integrate the Lindblad equation with classic RK4 steps of size ``dt``."""
    if dt <= 0:
        raise ValueError(f"step size must be positive, got {dt}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if _validate:
        _check_state(rho)
    state = np.asarray(rho, dtype=complex).copy()
    remaining = float(t)
    while remaining > 1e-15:
        h = min(dt, remaining)
        k1 = lindblad_rhs(ch, state)
        k2 = lindblad_rhs(ch, state + 0.5 * h * k1)
        k3 = lindblad_rhs(ch, state + 0.5 * h * k2)
        k4 = lindblad_rhs(ch, state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        remaining -= h
    return state


def unitary_evolve(
    h: np.ndarray, rho: np.ndarray, t: float, _validate: bool = True
) -> np.ndarray:
    """Conjugate by ``exp(-i h t)`` computed from the spectral decomposition of ``h``."""
    if not is_hermitian(h):
        raise ValueError("Hamiltonian must be Hermitian")
    if h.shape != rho.shape:
        raise ValueError(f"dimension mismatch: H {h.shape}, state {rho.shape}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if _validate:
        _check_state(rho)
    spec = herm_eig(h)
    return _conjugate_propagator(spec, rho, t)


def _conjugate_propagator(spec, rho: np.ndarray, t: float) -> np.ndarray:
    v = spec.eigenvectors
    phases = np.exp(-1j * spec.eigenvalues * t)
    u = (v * phases) @ dagger(v)
    return u @ rho @ dagger(u)


def as_lindblad(ch: Channel) -> GenericLindblad:
    """Rewrite an analytic channel as an explicit Lindblad generator."""
    if isinstance(ch, AmplitudeDamping):
        return GenericLindblad(np.zeros((2, 2)), ((SIGMA_MINUS, ch.gamma),))
    if isinstance(ch, PhaseDamping):
        return GenericLindblad(np.zeros((2, 2)), ((PAULI_Z, ch.gamma / 2.0),))
    if isinstance(ch, Depolarizing):
        g = ch.gamma / 4.0
        return GenericLindblad(
            np.zeros((2, 2)), ((PAULI_X, g), (PAULI_Y, g), (PAULI_Z, g))
        )
    if isinstance(ch, Unitary):
        return GenericLindblad(ch.hamiltonian, ())
    return ch


def kraus_operators(ch: Channel, t: float) -> list[np.ndarray]:
    """Kraus representation of an analytic channel at time ``t``."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if isinstance(ch, AmplitudeDamping):
        e = np.exp(-ch.gamma * t)
        k0 = np.array([[np.sqrt(e), 0], [0, 1]], dtype=complex)
        k1 = np.sqrt(1 - e) * SIGMA_MINUS
        return [k0, k1]
    if isinstance(ch, PhaseDamping):
        e = np.exp(-ch.gamma * t)
        return [np.sqrt((1 + e) / 2) * ID2, np.sqrt((1 - e) / 2) * PAULI_Z]
    if isinstance(ch, Depolarizing):
        e = np.exp(-ch.gamma * t)
        p = (1 - e) / 4.0
        return [
            np.sqrt(1 - 3 * p) * ID2,
            np.sqrt(p) * PAULI_X,
            np.sqrt(p) * PAULI_Y,
            np.sqrt(p) * PAULI_Z,
        ]
    raise ValueError(f"no Kraus form implemented for {type(ch).__name__}")


def apply_kraus(ks: list[np.ndarray], rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ dagger(k) for k in ks)
