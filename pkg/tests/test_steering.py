"""Steering quantifiers checked against closed-form primal/dual certificates.

The benchmark values are pinned by explicit feasible points for both the
minimization and its dual, verified here with plain ``numpy.linalg.eigvalsh``
so the bounds are independent of the package's own solver and eigensolver.
A matching upper and lower bound pins the optimum exactly.
"""

import itertools

import numpy as np
import pytest

from temporal_hierarchy.channels import Depolarizing, PhaseDamping
from temporal_hierarchy.linalg import ID2, PAULI_X, PAULI_Y, PAULI_Z
from temporal_hierarchy.sdp import check_certificate
from temporal_hierarchy.steering import (
    MUB_AXES,
    Assemblage,
    classical_assemblage,
    classical_tsr_theorem_check,
    classical_two_setting,
    deterministic_strategies,
    lhs_assemblage,
    make_assemblage,
    nsit_check,
    tsr,
    tsr_problem,
    tsw,
    tsw_problem,
)

PAULI_BY_AXIS = {0: PAULI_X, 1: PAULI_Y, 2: PAULI_Z}
RHO0 = ID2 / 2

SQ2, SQ3 = np.sqrt(2.0), np.sqrt(3.0)


def mub_members(v, axes):
    members = np.zeros((len(axes), 2, 2, 2), dtype=complex)
    for x, ax in enumerate(axes):
        pauli = sum(c * p for c, p in zip(ax, (PAULI_X, PAULI_Y, PAULI_Z)))
        for a, sign in enumerate((+1, -1)):
            members[x, a] = (ID2 + sign * v * pauli) / 4
    return Assemblage(members=members)


def tsr3_expected(v):
    return max(0.0, (3 - SQ3) * (1 + v) / 2 - 1)


def tsr2_expected(v):
    return max(0.0, (2 - SQ2) * (1 + v) - 1)


def psd_floor(m):
    return float(np.min(np.linalg.eigvalsh(m)))


def certify_tsr(asm, sigmas, witnesses, tol=1e-12):
    """Exact sandwich: feasible hidden states above, feasible witness below."""
    strategies = deterministic_strategies(asm.n_x, asm.n_a)
    for sig in sigmas:
        assert psd_floor(sig) >= -tol
    for x in range(asm.n_x):
        for a in range(asm.n_a):
            total = sum(
                sigmas[i] for i, lam in enumerate(strategies) if lam[x] == a
            )
            assert psd_floor(total - asm.members[x, a]) >= -tol
    upper = sum(np.trace(s).real for s in sigmas) - 1.0

    for w in witnesses.values():
        assert psd_floor(w) >= -tol
    for lam in strategies:
        stack = sum(witnesses[(x, lam[x])] for x in range(asm.n_x))
        assert psd_floor(np.eye(2) - stack) >= -tol
    lower = (
        sum(
            np.trace(witnesses[(x, a)] @ asm.members[x, a]).real
            for x in range(asm.n_x)
            for a in range(asm.n_a)
        )
        - 1.0
    )
    assert upper - lower < 1e-10
    return upper


def mub_certificates(v, axes):
    """Optimal hidden states and witness for a visibility-v unbiased assemblage."""
    n_x = len(axes)
    factor = {3: (3 - SQ3) / 32, 2: (2 - SQ2) / 8}[n_x]
    a_coef = (1 + v) * factor
    strategies = deterministic_strategies(n_x, 2)
    paulis = [sum(c * p for c, p in zip(ax, (PAULI_X, PAULI_Y, PAULI_Z))) for ax in axes]
    sigmas = []
    for lam in strategies:
        direction = sum(
            (1 if lam[x] == 0 else -1) * paulis[x] for x in range(n_x)
        ) / np.sqrt(n_x)
        sigmas.append(a_coef * (ID2 + direction))
    u = {3: 2 / (3 + SQ3), 2: 2 / (2 + SQ2)}[n_x]
    witnesses = {
        (x, a): u * (ID2 + sign * paulis[x]) / 2
        for x in range(n_x)
        for a, sign in enumerate((+1, -1))
    }
    return sigmas, witnesses


class TestTsrBenchmarks:
    def test_three_mub_identity_channel(self):
        asm = mub_members(1.0, MUB_AXES)
        expected = certify_tsr(asm, *mub_certificates(1.0, MUB_AXES))
        assert abs(expected - (2 - SQ3)) < 1e-14
        sol = tsr(asm)
        assert sol.status == "optimal"
        assert sol.duality_gap <= 1e-8
        assert abs(sol.value - expected) < 1e-6

    def test_two_mub_identity_channel(self):
        axes = (MUB_AXES[0], MUB_AXES[2])
        asm = mub_members(1.0, axes)
        expected = certify_tsr(asm, *mub_certificates(1.0, axes))
        assert abs(expected - (3 - 2 * SQ2)) < 1e-14
        sol = tsr(asm)
        assert abs(sol.value - expected) < 1e-6

    @pytest.mark.parametrize("v", [0.99, 0.9, 0.75, 0.62])
    def test_three_mub_visibility_sweep(self, v):
        asm = mub_members(v, MUB_AXES)
        expected = certify_tsr(asm, *mub_certificates(v, MUB_AXES))
        assert abs(expected - tsr3_expected(v)) < 1e-12
        assert abs(tsr(asm).value - expected) < 1e-6

    def test_depolarizing_assemblage_matches_visibility(self):
        gamma, t = 1.0, 0.35
        asm = make_assemblage(RHO0, MUB_AXES, Depolarizing(gamma), t)
        ref = mub_members(np.exp(-gamma * t), MUB_AXES)
        assert np.max(np.abs(asm.members - ref.members)) < 1e-12
        assert abs(tsr(asm).value - tsr3_expected(np.exp(-gamma * t))) < 1e-6

    def test_vanishing_time(self):
        gamma = 1.0
        t_star = np.log(3.0) / (2 * gamma)
        before = tsr(make_assemblage(RHO0, MUB_AXES, Depolarizing(gamma), t_star - 0.01))
        after = tsr(make_assemblage(RHO0, MUB_AXES, Depolarizing(gamma), t_star + 0.01))
        assert before.value > 1e-4
        assert after.value < 1e-7

    def test_single_setting_unsteerable(self):
        asm = mub_members(1.0, (MUB_AXES[2],))
        assert tsr(asm).value < 1e-7
        assert tsw(asm).value < 1e-7

    def test_value_nonnegative(self):
        sol = tsr(mub_members(0.3, MUB_AXES))
        assert sol.value >= -1e-9

    def test_solution_reproducible_from_hidden_states(self):
        asm = mub_members(0.9, MUB_AXES)
        problem = tsr_problem(asm)
        sol = tsr(asm)
        report = check_certificate(problem, sol)
        assert report.ok
        assert report.worst_constraint_eigenvalue >= -1e-9

    def test_complex_blocks_satisfy_original_lmis(self):
        # the y-axis setting makes every block genuinely complex
        asm = mub_members(1.0, MUB_AXES)
        sol = tsr(asm)
        strategies = deterministic_strategies(3, 2)
        for x in range(3):
            for a in range(2):
                total = sum(
                    sol.hidden_states[i]
                    for i, lam in enumerate(strategies)
                    if lam[x] == a
                )
                assert psd_floor(total - asm.members[x, a]) >= -1e-9


def classical_envelope(asm):
    """Entrywise bounds: robustness and weight of a diagonal two-setting assemblage."""
    r = np.diag(asm.setting_sum(0)).real
    c = np.diag(asm.setting_sum(1)).real
    return float(np.maximum(r, c).sum() - 1.0), float(1.0 - np.minimum(r, c).sum())


class TestClassical:
    def test_population_splits(self):
        asm = classical_two_setting(0.8, 0.3)
        assert np.allclose(asm.setting_sum(0), np.diag([0.8, 0.2]))
        assert np.allclose(asm.setting_sum(1), np.diag([0.3, 0.7]))

    def test_reference_instance(self):
        asm = classical_two_setting(0.8, 0.3)
        assert abs(tsr(asm).value - 0.5) < 1e-6
        assert abs(tsw(asm).value - 0.5) < 1e-6

    def test_identical_settings_unsteerable(self):
        asm = classical_two_setting(0.6, 0.6)
        ok, _ = nsit_check(asm)
        assert ok
        assert tsr(asm).value < 1e-7

    def test_nsit_violation_deviation(self):
        asm = classical_two_setting(0.8, 0.3)
        ok, deviation = nsit_check(asm)
        assert not ok
        assert abs(deviation - 0.5) < 1e-12

    def test_theorem_robustness_equals_distance(self):
        for alpha, beta in [(0.8, 0.3), (0.25, 0.9), (0.51, 0.49)]:
            robustness, distance = classical_tsr_theorem_check(
                classical_two_setting(alpha, beta)
            )
            assert abs(robustness - distance) < 1e-6
            assert abs(distance - abs(alpha - beta)) < 1e-12

    def test_theorem_with_dephasing(self):
        robustness, distance = classical_tsr_theorem_check(
            classical_two_setting(0.7, 0.2), dephasing=PhaseDamping(1.0), t=30.0
        )
        assert abs(robustness - 0.5) < 1e-6
        assert abs(distance - 0.5) < 1e-12

    def test_equal_populations_vanish(self):
        robustness, distance = classical_tsr_theorem_check(classical_two_setting(0.4, 0.4))
        assert robustness < 1e-7 and distance < 1e-12

    def test_random_splits_match_envelope(self, rng):
        # members split across outcomes at random, not just the canonical split
        for _ in range(10):
            alpha = rng.uniform(0.05, 0.95, size=2)
            splits_a = rng.uniform(0.2, 0.8, size=2)
            splits_b = rng.uniform(0.2, 0.8, size=2)
            a_pop = np.array(
                [
                    [alpha[0] * splits_a[0], alpha[0] * (1 - splits_a[0])],
                    [alpha[1] * splits_b[0], alpha[1] * (1 - splits_b[0])],
                ]
            )
            b_pop = np.array(
                [
                    [(1 - alpha[0]) * splits_a[1], (1 - alpha[0]) * (1 - splits_a[1])],
                    [(1 - alpha[1]) * splits_b[1], (1 - alpha[1]) * (1 - splits_b[1])],
                ]
            )
            asm = classical_assemblage(a_pop, b_pop)
            expected_tsr, expected_tsw = classical_envelope(asm)
            assert abs(tsr(asm).value - expected_tsr) < 1e-6
            assert abs(tsw(asm).value - expected_tsw) < 1e-6

    def test_rejects_bad_normalization(self):
        with pytest.raises(ValueError):
            classical_assemblage(np.array([[0.5, 0.5]]), np.array([[0.5, 0.5]]))

    def test_rejects_negative_population(self):
        with pytest.raises(ValueError):
            classical_assemblage(np.array([[-0.1, 0.6]]), np.array([[0.3, 0.2]]))


class TestAssemblageConstruction:
    def test_identity_channel_members(self):
        asm = make_assemblage(RHO0, MUB_AXES, Depolarizing(1.0), 0.0)
        for x in range(3):
            for a, sign in enumerate((+1, -1)):
                expected = (ID2 + sign * PAULI_BY_AXIS[x]) / 4
                assert np.max(np.abs(asm.members[x, a] - expected)) < 1e-12

    def test_z_measurement_identity(self):
        asm = make_assemblage(RHO0, [np.array([0.0, 0.0, 1.0])], Depolarizing(1.0), 0.0)
        assert np.allclose(asm.members[0, 0], np.diag([0.5, 0.0]))
        assert np.allclose(asm.members[0, 1], np.diag([0.0, 0.5]))

    def test_nsit_from_maximally_mixed(self, rng):
        from conftest import random_axis

        axes = [random_axis(rng) for _ in range(3)]
        for ch in (Depolarizing(1.0), PhaseDamping(0.7)):
            asm = make_assemblage(RHO0, axes, ch, 0.45)
            ok, dev = nsit_check(asm)
            assert ok and dev <= 1e-10

    def test_single_setting_nsit_vacuous(self):
        asm = make_assemblage(RHO0, [MUB_AXES[0]], Depolarizing(1.0), 0.2)
        ok, dev = nsit_check(asm)
        assert ok and dev == 0.0

    def test_member_validation(self):
        bad = np.zeros((1, 2, 2, 2), dtype=complex)
        bad[0, 0] = np.diag([0.7, 0.0])
        bad[0, 1] = np.diag([0.0, 0.7])
        with pytest.raises(ValueError):
            Assemblage(members=bad)


class TestHiddenStateModels:
    def test_lhs_models_have_zero_robustness(self, rng):
        for _ in range(5):
            n_x, n_a = 2, 2
            strategies = deterministic_strategies(n_x, n_a)
            weights = rng.dirichlet(np.ones(len(strategies)))
            sigmas = []
            for w in weights:
                m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                s = m @ m.conj().T
                sigmas.append(w * s / np.trace(s).real)
            response = np.zeros((len(strategies), n_x, n_a))
            for i, lam in enumerate(strategies):
                for x in range(n_x):
                    response[i, x, lam[x]] = 1.0
            asm = lhs_assemblage(sigmas, response)
            assert tsr(asm).value < 1e-7

    def test_stochastic_response_still_unsteerable(self, rng):
        n_x, n_a, n_l = 3, 2, 4
        sigmas = []
        weights = rng.dirichlet(np.ones(n_l))
        for w in weights:
            m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            s = m @ m.conj().T
            sigmas.append(w * s / np.trace(s).real)
        response = rng.dirichlet(np.ones(n_a), size=(n_l, n_x))
        asm = lhs_assemblage(sigmas, response)
        assert tsr(asm).value < 1e-7

    def test_convexity(self, rng):
        a = mub_members(1.0, MUB_AXES)
        b = mub_members(0.4, MUB_AXES)
        for mu in (0.25, 0.5, 0.75):
            mixed = Assemblage(members=mu * a.members + (1 - mu) * b.members)
            bound = mu * tsr(a).value + (1 - mu) * tsr(b).value
            assert tsr(mixed).value <= bound + 1e-7

    def test_depolarizing_monotonicity(self):
        ch = Depolarizing(1.0)
        ts = np.linspace(0.0, 1.2, 9)
        vals = [tsr(make_assemblage(RHO0, MUB_AXES, ch, t)).value for t in ts]
        for earlier, later in itertools.pairwise(vals):
            assert later <= earlier + 1e-7


class TestTsw:
    def test_problem_shapes(self):
        asm = classical_two_setting(0.8, 0.3)
        p = tsw_problem(asm)
        assert p.n_vars == 4 and len(p.constraints) == 4

    def test_certificate_for_tsw(self):
        asm = classical_two_setting(0.8, 0.3)
        sol = tsw(asm)
        report = check_certificate(tsw_problem(asm), sol)
        assert report.ok

    def test_pure_members_fully_steerable(self):
        # rank-1 members leave no room for an unsteerable part
        sol = tsw(mub_members(1.0, MUB_AXES))
        assert sol.status == "optimal"
        assert abs(sol.value - 1.0) < 1e-6

    def test_unsteerable_below_threshold(self):
        assert tsw(mub_members(0.5, MUB_AXES)).value < 1e-7
