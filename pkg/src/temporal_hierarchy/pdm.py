"""Two-time pseudo density matrices for a single qubit.

The object ``R = (1/4) sum_ij C_ij sigma_i x sigma_j`` encodes the two-time
Pauli correlators of a qubit measured before and after a channel. It is
Hermitian with unit trace but need not be positive; the weight of its
negative eigenvalues (the f-function) quantifies time-like correlation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import Channel, apply_channel, channel_dim
from .linalg import (
    ID2,
    PAULIS,
    herm_eig,
    is_hermitian,
    kron,
    partial_trace,
    partial_transpose,
)
from .steering import Assemblage

NEGATIVITY_TOL = 1e-10  # eigenvalues above this magnitude count as genuinely negative


class NonProjectiveEffectError(ValueError):
    """Raised when assemblage extraction is attempted with non-projective effects.

    The extraction identity is established for rank-1 projective measurements
    only, so other POVMs are refused rather than silently mishandled.
    """


@dataclass(frozen=True)
class PseudoDensityMatrix:
    matrix: np.ndarray  # 4x4 Hermitian, unit trace
    correlations: np.ndarray  # 4x4 real table C_ij, C_00 = 1
    nsit_verified: bool = True  # False when built from an initial state != 1/2

    def __post_init__(self):
        if self.matrix.shape != (4, 4) or not is_hermitian(self.matrix):
            raise ValueError("pseudo density matrix must be 4x4 Hermitian")
        if abs(np.trace(self.matrix).real - 1.0) > 1e-10:
            raise ValueError("pseudo density matrix must have unit trace")
        if abs(self.correlations[0, 0] - 1.0) > 1e-12:
            raise ValueError("C_00 must equal 1")


def build_pdm(ch: Channel, rho0: np.ndarray, t: float) -> PseudoDensityMatrix:
    """Pseudo density matrix of one qubit measured at time zero and at ``t``.

    The correlators come from the channel's action on the Pauli operators:
    ``C_0k = tr[sigma_k E(rho0)]``, ``C_i0 = tr[sigma_i rho0]`` and, for the
    two-time block, the Lueders average ``C_ij = tr[sigma_j E({sigma_i, rho0}/2)]``
    which reduces to ``tr[sigma_j E(sigma_i)]/2`` for ``rho0 = 1/2``. No
    sequential-measurement sampling is involved.
    """
    if channel_dim(ch) != 2:
        raise ValueError("pseudo density matrices are built for qubit channels")
    if rho0.shape != (2, 2):
        raise ValueError("initial state must be a qubit state")
    c = np.zeros((4, 4))
    c[0, 0] = 1.0
    evolved0 = apply_channel(ch, rho0, t)
    for k in range(1, 4):
        c[0, k] = np.trace(PAULIS[k] @ evolved0).real
        c[k, 0] = np.trace(PAULIS[k] @ rho0).real
    for i in range(1, 4):
        lueders = 0.5 * (PAULIS[i] @ rho0 + rho0 @ PAULIS[i])
        image = apply_channel(ch, lueders, t)
        for j in range(1, 4):
            c[i, j] = np.trace(PAULIS[j] @ image).real
    r = sum(
        c[i, j] * kron(PAULIS[i], PAULIS[j]) for i in range(4) for j in range(4)
    ) / 4.0
    maximally_mixed = np.max(np.abs(rho0 - ID2 / 2)) < 1e-12
    return PseudoDensityMatrix(matrix=r, correlations=c, nsit_verified=maximally_mixed)


def f_function(r: PseudoDensityMatrix) -> float:
    """Sum of the absolute values of the genuinely negative eigenvalues."""
    vals = herm_eig(r.matrix).eigenvalues
    return float(-np.sum(vals[vals < -NEGATIVITY_TOL]))


def ppt_positive(r: PseudoDensityMatrix) -> tuple[bool, float]:
    """Whether the partial transpose is positive semidefinite, plus its lowest eigenvalue."""
    pt = partial_transpose(r.matrix, [2, 2], 0)
    lmin = float(np.min(herm_eig(pt).eigenvalues))
    return lmin >= -NEGATIVITY_TOL, lmin


def _require_rank1_projector(e: np.ndarray) -> None:
    if e.shape != (2, 2) or not is_hermitian(e):
        raise NonProjectiveEffectError("effects must be Hermitian 2x2 matrices")
    if np.max(np.abs(e @ e - e)) > 1e-10 or abs(np.trace(e).real - 1.0) > 1e-10:
        raise NonProjectiveEffectError(
            "assemblage extraction requires rank-1 projective effects"
        )


def extract_assemblage(r: PseudoDensityMatrix, povms) -> Assemblage:
    """Read the temporal assemblage out of ``R``: ``rho_{a|x} = tr_A(E_{a|x} x 1 . R)``.

    ``povms`` is a list of settings, each a list of rank-1 projective effects.
    """
    effect_sets = [[np.asarray(e, dtype=complex) for e in setting] for setting in povms]
    n_a = len(effect_sets[0])
    for setting in effect_sets:
        if len(setting) != n_a:
            raise ValueError("all settings must share the same outcome count")
        total = sum(setting)
        if np.max(np.abs(total - ID2)) > 1e-10:
            raise ValueError("effects of a setting must sum to the identity")
        for e in setting:
            _require_rank1_projector(e)
    members = np.zeros((len(effect_sets), n_a, 2, 2), dtype=complex)
    for x, setting in enumerate(effect_sets):
        for a, e in enumerate(setting):
            prod = kron(e, ID2) @ r.matrix
            member = partial_trace(prod, [2, 2], keep=[1])
            members[x, a] = (member + member.conj().T) / 2.0
    return Assemblage(members=members)
