"""Temporal assemblages, hidden-state models, NSIT checks and steering measures.

An assemblage collects the subnormalized post-measurement states
``rho_{a|x}(t)``: outcome ``a`` of setting ``x`` is obtained at time zero via
a square-root (Lueders) update, after which the channel acts for time ``t``.
The steering robustness and steerable weight are computed by semidefinite
programming over the hidden-state decompositions ``sum_l D_l(a|x) sigma_l``,
with ``l`` running over all deterministic outcome assignments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .channels import Channel, apply_channel
from .linalg import (
    ID2,
    PSD_TOL,
    dagger,
    herm_eig,
    is_hermitian,
    projector,
    trace_distance,
)
from .sdp import LinearMatrixInequality, SdpProblem, SdpSolution, solve

MUB_AXES = (
    np.array([1.0, 0.0, 0.0]),
    np.array([0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, 1.0]),
)


@dataclass(frozen=True)
class Assemblage:
    """Subnormalized members indexed ``members[x, a]``; shape (n_x, n_a, 2, 2)."""

    members: np.ndarray

    def __post_init__(self):
        m = self.members
        if m.ndim != 4 or m.shape[2:] != (2, 2):
            raise ValueError("members must have shape (n_x, n_a, 2, 2)")
        for x in range(self.n_x):
            total = 0.0
            for a in range(self.n_a):
                if not is_hermitian(m[x, a]):
                    raise ValueError(f"member ({x}, {a}) is not Hermitian")
                if float(np.min(herm_eig(m[x, a]).eigenvalues)) < -PSD_TOL:
                    raise ValueError(f"member ({x}, {a}) is not positive semidefinite")
                total += np.trace(m[x, a]).real
            if abs(total - 1.0) > 1e-10:
                raise ValueError(f"setting {x} members do not sum to unit trace")

    @property
    def n_x(self) -> int:
        return self.members.shape[0]

    @property
    def n_a(self) -> int:
        return self.members.shape[1]

    def probability(self, x: int, a: int) -> float:
        return float(np.trace(self.members[x, a]).real)

    def normalized(self, x: int, a: int) -> np.ndarray:
        p = self.probability(x, a)
        if p <= 0:
            raise ValueError(f"member ({x}, {a}) has zero probability")
        return self.members[x, a] / p

    def setting_sum(self, x: int) -> np.ndarray:
        return self.members[x].sum(axis=0)


def _setting_effects(setting) -> list[np.ndarray]:
    """A setting is a Bloch axis (two projectors) or an explicit effect list."""
    arr = np.asarray(setting)
    if arr.shape == (3,):
        return [projector(arr, +1), projector(arr, -1)]
    effects = [np.asarray(e, dtype=complex) for e in setting]
    total = sum(effects)
    if np.max(np.abs(total - ID2)) > 1e-10:
        raise ValueError("effects of a setting must sum to the identity")
    for e in effects:
        if not is_hermitian(e):
            raise ValueError("effects must be Hermitian")
        if float(np.min(herm_eig(e).eigenvalues)) < -PSD_TOL:
            raise ValueError("effects must be positive semidefinite")
    return effects


def _sqrt_psd(e: np.ndarray) -> np.ndarray:
    spec = herm_eig(e)
    root = np.sqrt(np.clip(spec.eigenvalues, 0.0, None))
    v = spec.eigenvectors
    return (v * root) @ dagger(v)


def make_assemblage(rho0: np.ndarray, settings, ch: Channel, t: float) -> Assemblage:
    """Lueders update of ``rho0`` for each setting, then channel evolution to ``t``."""
    if rho0.shape != (2, 2):
        raise ValueError("assemblages are built on a single qubit")
    effect_sets = [_setting_effects(s) for s in settings]
    n_a = len(effect_sets[0])
    if any(len(es) != n_a for es in effect_sets):
        raise ValueError("all settings must share the same outcome count")
    members = np.zeros((len(effect_sets), n_a, 2, 2), dtype=complex)
    for x, effects in enumerate(effect_sets):
        for a, e in enumerate(effects):
            root = e if np.max(np.abs(e @ e - e)) < 1e-12 else _sqrt_psd(e)
            members[x, a] = apply_channel(ch, root @ rho0 @ root, t)
    return Assemblage(members=members)


def nsit_check(asm: Assemblage) -> tuple[bool, float]:
    """No-signaling in time: outcome-summed states agree across settings.

    Returns the verdict and the largest trace distance over setting pairs.
    """
    worst = 0.0
    sums = [asm.setting_sum(x) for x in range(asm.n_x)]
    for i in range(len(sums)):
        for j in range(i + 1, len(sums)):
            worst = max(worst, trace_distance(sums[i], sums[j]))
    return worst <= 1e-10, worst


def deterministic_strategies(n_x: int, n_a: int) -> np.ndarray:
    """All outcome assignments x -> a, one row per strategy."""
    return np.array(list(itertools.product(range(n_a), repeat=n_x)), dtype=int)


def _steering_problem(asm: Assemblage, weight_sign: float, offset: float) -> SdpProblem:
    strategies = deterministic_strategies(asm.n_x, asm.n_a)
    n_l = len(strategies)
    constraints = []
    for x in range(asm.n_x):
        for a in range(asm.n_a):
            w = (strategies[:, x] == a).astype(float) * weight_sign
            constraints.append(
                LinearMatrixInequality(
                    weights=w, constant=weight_sign * asm.members[x, a]
                )
            )
    initial = tuple(ID2.copy() for _ in range(n_l)) if weight_sign > 0 else None
    return SdpProblem(
        dim=2,
        n_vars=n_l,
        objective=tuple(weight_sign * ID2 for _ in range(n_l)),
        constraints=tuple(constraints),
        objective_offset=offset,
        initial_vars=initial,
    )


def tsr_problem(asm: Assemblage) -> SdpProblem:
    """min tr(sum_l sigma_l) - 1  s.t.  sum_l D_l(a|x) sigma_l >= rho_{a|x}."""
    return _steering_problem(asm, weight_sign=+1.0, offset=-1.0)


def tsw_problem(asm: Assemblage) -> SdpProblem:
    """1 - max tr(sum_l sigma_l)  s.t.  sum_l D_l(a|x) sigma_l <= rho_{a|x}."""
    return _steering_problem(asm, weight_sign=-1.0, offset=+1.0)


def tsr(asm: Assemblage, **solver_kwargs) -> SdpSolution:
    """Temporal steering robustness of an assemblage."""
    return solve(tsr_problem(asm), **solver_kwargs)


def tsw(asm: Assemblage, **solver_kwargs) -> SdpSolution:
    """Temporal steerable weight of an assemblage."""
    return solve(tsw_problem(asm), **solver_kwargs)


def classical_assemblage(alpha: np.ndarray, beta: np.ndarray) -> Assemblage:
    """Diagonal members ``diag(alpha[x, a], beta[x, a])``.

    Requires ``sum_a (alpha[x, a] + beta[x, a]) = 1`` for every setting.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != beta.shape or alpha.ndim != 2:
        raise ValueError("alpha and beta must be (n_x, n_a) arrays of equal shape")
    if np.any(alpha < 0) or np.any(beta < 0):
        raise ValueError("classical populations must be non-negative")
    totals = alpha.sum(axis=1) + beta.sum(axis=1)
    if np.max(np.abs(totals - 1.0)) > 1e-10:
        raise ValueError("populations of each setting must sum to one")
    n_x, n_a = alpha.shape
    members = np.zeros((n_x, n_a, 2, 2), dtype=complex)
    for x in range(n_x):
        for a in range(n_a):
            members[x, a] = np.diag([alpha[x, a], beta[x, a]])
    return Assemblage(members=members)


def classical_two_setting(alpha: float, beta: float) -> Assemblage:
    """Two-setting instance with outcome-summed states diag(a, 1-a), diag(b, 1-b)."""
    if not (0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0):
        raise ValueError("alpha and beta must lie in [0, 1]")
    a = np.array([[alpha, 0.0], [beta, 0.0]])
    b = np.array([[0.0, 1.0 - alpha], [0.0, 1.0 - beta]])
    return classical_assemblage(a, b)


def classical_tsr_theorem_check(
    asm: Assemblage, dephasing: Channel | None = None, t: float = 0.0
) -> tuple[float, float]:
    """Steering robustness versus trace distance of the outcome-summed states.

    For diagonal two-setting assemblages the two quantities coincide; a
    dephasing channel may be applied first (diagonal members are its fixed
    points, so the identity holds at any time, not just asymptotically).
    """
    if asm.n_x != 2:
        raise ValueError("the comparison is defined for two settings")
    members = asm.members
    if np.max(np.abs(members - members * np.eye(2))) > 1e-12:
        raise ValueError("the comparison is defined for diagonal members")
    if dephasing is not None:
        evolved = np.array(
            [
                [apply_channel(dephasing, members[x, a], t) for a in range(asm.n_a)]
                for x in range(asm.n_x)
            ]
        )
        asm = Assemblage(members=evolved)
    robustness = tsr(asm).value
    dist = trace_distance(asm.setting_sum(0), asm.setting_sum(1))
    return robustness, dist


def lhs_assemblage(
    sigmas: list[np.ndarray], response: np.ndarray
) -> Assemblage:
    """Assemble ``rho_{a|x} = sum_l response[l, x, a] * sigma_l`` (a hidden-state model)."""
    n_l, n_x, n_a = response.shape
    members = np.zeros((n_x, n_a, 2, 2), dtype=complex)
    for l in range(n_l):
        for x in range(n_x):
            for a in range(n_a):
                members[x, a] += response[l, x, a] * sigmas[l]
    return Assemblage(members=members)


def spatio_temporal_tsr(scenario, t: float, **solver_kwargs) -> float:
    """Steering robustness of the qubit-2 assemblage created by measuring qubit 3.

    The scenario machinery lives in :mod:`temporal_hierarchy.causal`; qubit 3
    is measured in the three mutually unbiased bases at time zero and the
    post-measurement states evolve unitarily to ``t``.
    """
    from .causal import qubit2_assemblage

    return tsr(qubit2_assemblage(scenario, t), **solver_kwargs).value
