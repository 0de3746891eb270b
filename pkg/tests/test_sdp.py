import io

import numpy as np
import pytest

from temporal_hierarchy.sdp import (
    LinearMatrixInequality,
    SdpProblem,
    check_certificate,
    solve,
)
from temporal_hierarchy.steering import classical_two_setting, tsr_problem


def trivial_problem():
    from temporal_hierarchy.linalg import ID2

    con = LinearMatrixInequality(
        weights=np.array([1.0]), constant=np.diag([0.3, 0.7]).astype(complex)
    )
    return SdpProblem(dim=2, n_vars=1, objective=(ID2,), constraints=(con,))


class TestSolve:
    def test_trivial_bound(self):
        sol = solve(trivial_problem())
        assert sol.status == "optimal"
        assert abs(sol.value - 1.0) < 1e-8
        assert np.max(np.abs(sol.hidden_states[0] - np.diag([0.3, 0.7]))) < 1e-7
        assert sol.duality_gap <= 1e-8

    def test_optimal_meets_reported_tolerances(self):
        sol = solve(trivial_problem())
        assert sol.primal_residual <= 1e-9
        assert sol.dual_residual <= 1e-9

    def test_determinism(self):
        a = solve(trivial_problem())
        b = solve(trivial_problem())
        assert a.iterations == b.iterations
        assert a.value == b.value
        assert a.duality_gap == b.duality_gap

    def test_max_iterations_returns_best_iterate(self):
        sol = solve(trivial_problem(), max_iterations=3)
        assert sol.status == "max-iterations"
        assert np.isfinite(sol.value)

    def test_scale_invariance_on_classical_instance(self):
        alpha, beta, c = 0.8, 0.3, 2.5
        base = tsr_problem(classical_two_setting(alpha, beta))
        scaled_cons = tuple(
            LinearMatrixInequality(weights=con.weights, constant=c * con.constant)
            for con in base.constraints
        )
        scaled = SdpProblem(
            dim=base.dim,
            n_vars=base.n_vars,
            objective=base.objective,
            constraints=scaled_cons,
            objective_offset=base.objective_offset,
            initial_vars=base.initial_vars,
        )
        expected = c * (1.0 + (alpha - beta)) - 1.0
        sol = solve(scaled)
        assert sol.status == "optimal"
        assert abs(sol.value - expected) < 1e-7

    def test_iterate_dump(self):
        buf = io.StringIO()
        solve(trivial_problem(), trace_file=buf)
        lines = buf.getvalue().strip().splitlines()
        assert len(lines) >= 2
        assert all(len(line.split()) == 4 for line in lines)


class TestCertificate:
    def test_optimal_solution_passes(self):
        p = trivial_problem()
        sol = solve(p)
        report = check_certificate(p, sol)
        assert report.ok
        assert report.worst_variable_eigenvalue >= -1e-9
        assert report.worst_constraint_eigenvalue >= -1e-9
        assert report.objective_mismatch <= 1e-10

    def test_perturbed_solution_detected(self):
        import dataclasses

        p = trivial_problem()
        sol = solve(p)
        bad_states = tuple(s - 1e-3 * np.eye(2) for s in sol.hidden_states)
        bad = dataclasses.replace(sol, hidden_states=bad_states)
        report = check_certificate(p, bad)
        assert not report.ok
        assert report.worst_constraint_eigenvalue < -1e-4

    def test_objective_recomputation(self):
        p = trivial_problem()
        sol = solve(p)
        report = check_certificate(p, sol)
        assert abs(report.objective_recomputed - sol.value) < 1e-10


class TestValidation:
    def test_rejects_non_hermitian_constant(self):
        from temporal_hierarchy.linalg import ID2

        con = LinearMatrixInequality(
            weights=np.array([1.0]),
            constant=np.array([[0, 1], [0, 0]], dtype=complex),
        )
        with pytest.raises(ValueError):
            SdpProblem(dim=2, n_vars=1, objective=(ID2,), constraints=(con,))

    def test_rejects_wrong_weight_count(self):
        from temporal_hierarchy.linalg import ID2

        con = LinearMatrixInequality(
            weights=np.array([1.0, 2.0]), constant=np.eye(2, dtype=complex)
        )
        with pytest.raises(ValueError):
            SdpProblem(dim=2, n_vars=1, objective=(ID2,), constraints=(con,))
