"""Three-qubit common-cause versus direct-cause scenarios.

Qubits 1, 2, 3 occupy tensor slots 0, 1, 2. In the common-cause scenario
qubits 1 and 2 start maximally entangled and never interact; in the
direct-cause scenario they start in a product state and are coupled by an
excitation-exchange Hamiltonian. An auxiliary qubit 3 is exchange-coupled to
qubit 1 in both cases and is measured at time zero; the steering it induces
on qubit 2 discriminates the two causal structures.

Computational basis: ``|0>`` ground, ``|1>`` excited.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ID2, herm_eig, kron, partial_trace, projector
from .steering import MUB_AXES, Assemblage, tsr

RAISE = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
LOWER = RAISE.conj().T

COMMON_CAUSE = "common_cause"
DIRECT_CAUSE = "direct_cause"

VERDICT_COMMON = "common-cause-consistent"
VERDICT_DIRECT = "direct-cause-detected"

DETECTION_THRESHOLD = 1e-6


@dataclass(frozen=True)
class CausalScenario:
    kind: str
    j: float
    j31: float
    initial_state: np.ndarray  # 8x8
    hamiltonian: np.ndarray  # 8x8


def exchange_hamiltonian(i: int, j: int, coupling: float, n_qubits: int = 3) -> np.ndarray:
    """``coupling * (raise_i lower_j + lower_i raise_j)`` on ``n_qubits`` qubits."""
    ops = [ID2] * n_qubits
    ops[i], ops[j] = RAISE, LOWER
    term = kron(*ops)
    return coupling * (term + term.conj().T)


def _basis_state(bits: str) -> np.ndarray:
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return np.outer(vec, vec.conj())


def build_scenario(
    kind: str,
    j: float = 1.0,
    j31: float | None = None,
    qubit3_state: np.ndarray | None = None,
    direct_initial: str = "00",
) -> CausalScenario:
    """Assemble initial state and Hamiltonian for either causal structure.

    Defaults follow the conventions used throughout: qubit 3 starts maximally
    mixed (this keeps every assemblage compatible with no-signaling in time),
    the 3-1 coupling equals the 1-2 coupling, and the direct-cause pair starts
    in ``|00>``.
    """
    if j <= 0:
        raise ValueError("coupling strength must be positive")
    j31 = j if j31 is None else j31
    if j31 <= 0:
        raise ValueError("3-1 coupling strength must be positive")
    q3 = ID2 / 2 if qubit3_state is None else np.asarray(qubit3_state, dtype=complex)

    h31 = exchange_hamiltonian(2, 0, j31)
    if kind == COMMON_CAUSE:
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1.0 / np.sqrt(2.0)
        rho12 = np.outer(phi, phi.conj())
        initial = kron(rho12, q3)
        hamiltonian = h31
    elif kind == DIRECT_CAUSE:
        if len(direct_initial) != 2 or any(b not in "01" for b in direct_initial):
            raise ValueError("direct_initial must be a two-bit string")
        initial = kron(_basis_state(direct_initial), q3)
        hamiltonian = exchange_hamiltonian(0, 1, j) + h31
    else:
        raise ValueError(f"unknown scenario kind {kind!r}")
    return CausalScenario(
        kind=kind, j=j, j31=j31, initial_state=initial, hamiltonian=hamiltonian
    )


def qubit2_assemblage(
    scenario: CausalScenario, t: float, axes=MUB_AXES, _spectrum=None
) -> Assemblage:
    """Measure qubit 3 at time zero, evolve unitarily to ``t``, reduce to qubit 2."""
    if t < 0:
        raise ValueError("time must be non-negative")
    spec = _spectrum if _spectrum is not None else herm_eig(scenario.hamiltonian)
    v = spec.eigenvectors
    u = (v * np.exp(-1j * spec.eigenvalues * t)) @ v.conj().T
    members = np.zeros((len(axes), 2, 2, 2), dtype=complex)
    for x, axis in enumerate(axes):
        for a, sign in enumerate((+1, -1)):
            e3 = kron(ID2, ID2, projector(axis, sign))
            post = e3 @ scenario.initial_state @ e3
            evolved = u @ post @ u.conj().T
            member = partial_trace(evolved, [2, 2, 2], keep=[1])
            members[x, a] = (member + member.conj().T) / 2.0
    return Assemblage(members=members)


def causal_tsr_series(scenario: CausalScenario, t_grid) -> list[tuple[float, float]]:
    """Steering robustness of qubit 2 at each grid time, in grid order."""
    spec = herm_eig(scenario.hamiltonian)
    series = []
    for t in t_grid:
        asm = qubit2_assemblage(scenario, float(t), _spectrum=spec)
        series.append((float(t), tsr(asm).value))
    return series


def causal_verdict(series) -> str:
    """Direct cause is declared as soon as any robustness value is resolvable."""
    peak = max((value for _, value in series), default=0.0)
    return VERDICT_DIRECT if peak > DETECTION_THRESHOLD else VERDICT_COMMON
