"""Self-contained dense semidefinite-programming solver.

Solves problems with Hermitian variable blocks ``sigma_v >= 0`` (all of one
dimension ``d``), scalar-weighted linear matrix inequalities

    sum_v w[c, v] * sigma_v - C_c  >= 0,

and a linear objective ``min sum_v tr(W_v sigma_v)``. This covers every
steering-type program in this package (a handful of 2x2 blocks and
constraints), so no sparsity or large-scale machinery is attempted.

Complex Hermitian blocks are mapped to the 2d x 2d real symmetric embedding
``[[Re, -Im], [Im, Re]]`` and the solver runs an infeasible-start primal-dual
interior-point iteration (HKM search direction, Mehrotra predictor-corrector,
dense factorizations). Deterministic: identical inputs produce identical
iterates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import herm_eig, is_hermitian

GAP_TOL = 1e-9
FEAS_TOL = 1e-10
REPORT_GAP_TOL = 1e-8
REPORT_FEAS_TOL = 1e-9
REPORT_DUAL_TOL = 1e-8


class SolverError(RuntimeError):
    """A semidefinite program did not reach a certified optimal status."""


@dataclass(frozen=True)
class LinearMatrixInequality:
    """Constraint ``sum_v weights[v] * sigma_v - constant >= 0``."""

    weights: np.ndarray
    constant: np.ndarray


@dataclass(frozen=True)
class SdpProblem:
    dim: int
    n_vars: int
    objective: tuple  # Hermitian weight W_v per variable block
    constraints: tuple  # LinearMatrixInequality entries
    objective_offset: float = 0.0
    initial_vars: tuple | None = None  # optional Hermitian start per block

    def __post_init__(self):
        for w in self.objective:
            if w.shape != (self.dim, self.dim) or not is_hermitian(w):
                raise ValueError("objective weights must be Hermitian blocks")
        for con in self.constraints:
            if len(con.weights) != self.n_vars:
                raise ValueError("constraint weight count must match n_vars")
            if con.constant.shape != (self.dim, self.dim) or not is_hermitian(
                con.constant
            ):
                raise ValueError("constraint constants must be Hermitian blocks")


@dataclass(frozen=True)
class SdpSolution:
    value: float
    hidden_states: tuple
    duality_gap: float
    status: str  # "optimal" | "max-iterations" | "infeasible"
    iterations: int
    primal_residual: float
    dual_residual: float


@dataclass(frozen=True)
class CertificateReport:
    worst_variable_eigenvalue: float
    worst_constraint_eigenvalue: float
    objective_recomputed: float
    objective_mismatch: float
    ok: bool


def hermitian_basis(d: int) -> list[np.ndarray]:
    """Orthonormal basis of d x d Hermitian matrices under tr(A B)."""
    basis = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(e)
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = -1j / np.sqrt(2.0)
            e[j, i] = 1j / np.sqrt(2.0)
            basis.append(e)
    return basis


def embed(h: np.ndarray) -> np.ndarray:
    """Real symmetric embedding of a complex Hermitian matrix."""
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def unembed_coeffs(x: np.ndarray, basis, n_vars: int) -> tuple:
    """Recombine per-block basis coefficients into complex Hermitian blocks."""
    k = len(basis)
    blocks = []
    for v in range(n_vars):
        coeffs = x[v * k : (v + 1) * k]
        blocks.append(sum(c * b for c, b in zip(coeffs, basis)))
    return tuple(blocks)


def _build_arrays(p: SdpProblem):
    basis = hermitian_basis(p.dim)
    k = len(basis)
    m = p.n_vars * k
    n_cons = len(p.constraints)
    n_blocks = p.n_vars + n_cons
    dd = 2 * p.dim

    ebasis = np.stack([embed(b) for b in basis])
    f = np.zeros((m, n_blocks, dd, dd))
    f0 = np.zeros((n_blocks, dd, dd))
    c = np.zeros(m)
    for v in range(p.n_vars):
        for a in range(k):
            i = v * k + a
            f[i, v] = ebasis[a]
            c[i] = np.trace(p.objective[v] @ basis[a]).real
    for ci, con in enumerate(p.constraints):
        b = p.n_vars + ci
        f0[b] = embed(con.constant)
        for v in range(p.n_vars):
            w = float(con.weights[v])
            if w != 0.0:
                for a in range(k):
                    f[v * k + a, b] += w * ebasis[a]
    x0 = np.zeros(m)
    if p.initial_vars is not None:
        for v, s in enumerate(p.initial_vars):
            for a, b_mat in enumerate(basis):
                x0[v * k + a] = np.trace(b_mat @ s).real
    return basis, f, f0, c, x0


def _max_step(s: np.ndarray, ds: np.ndarray) -> float:
    """Largest alpha with s + alpha*ds still positive definite (blockwise)."""
    try:
        chol = np.linalg.cholesky(s)
    except np.linalg.LinAlgError:
        return 0.0
    inv = np.linalg.inv(chol)
    w = inv @ ds @ inv.transpose(0, 2, 1)
    lmin = float(np.min(np.linalg.eigvalsh(w)))
    if lmin >= -1e-14:
        return np.inf
    return -1.0 / lmin


def solve(
    p: SdpProblem,
    gap_tol: float = GAP_TOL,
    feas_tol: float = FEAS_TOL,
    max_iterations: int = 200,
    trace_file=None,
) -> SdpSolution:
    """Run the interior-point iteration and return the best iterate found."""
    basis, f, f0, c, x0 = _build_arrays(p)
    n_blocks, dd = f0.shape[0], f0.shape[1]
    total = n_blocks * dd
    eye = np.broadcast_to(np.eye(dd), (n_blocks, dd, dd)).copy()

    scale = max(1.0, float(np.max(np.abs(f0))))
    x = x0.copy()
    xmat = np.einsum("i,ibjk->bjk", x, f) - f0
    # shift blocks to a comfortably interior starting X
    floor = 0.5 * scale
    for b in range(n_blocks):
        lmin = float(np.min(np.linalg.eigvalsh(xmat[b])))
        if lmin < floor:
            xmat[b] += (floor - lmin) * np.eye(dd)
    ymat = eye.copy()

    step_frac = 0.98
    mu_floor = 1e-14 * scale  # complementarity below this is numerical noise
    stall_limit = 15
    best = None
    since_best = 0
    infeasible = False
    iterations = 0

    for it in range(max_iterations):
        iterations = it
        fx = np.einsum("i,ibjk->bjk", x, f) - f0
        rp = fx - xmat
        fdoty = np.einsum("ibjk,bkj->i", f, ymat)
        rd = c - fdoty
        pobj = float(c @ x)
        dobj = float(np.einsum("bjk,bkj->", f0, ymat))
        gap = pobj - dobj
        mu = float(np.einsum("bjk,bkj->", xmat, ymat)) / total
        max_rp = float(np.max(np.abs(rp)))
        max_rd = float(np.max(np.abs(rd)))
        merit = max(abs(gap), max_rp, max_rd)

        if trace_file is not None:
            trace_file.write(f"{it} {pobj:.15e} {dobj:.15e} {gap:.3e}\n")
        if best is None or merit < best[0]:
            best = (merit, x.copy(), abs(gap), max_rp, max_rd)
            since_best = 0
        else:
            since_best += 1
        if abs(gap) <= gap_tol and max_rp <= feas_tol and max_rd <= feas_tol:
            break
        if mu <= mu_floor or since_best >= stall_limit:
            break
        if float(np.max(np.abs(ymat))) > 1e12 * scale:
            infeasible = True
            break

        try:
            xinv = np.linalg.inv(xmat)
            g = np.einsum("bpq,ibqr,brs->ibps", xinv, f, ymat)
            schur = np.einsum("jbps,ibsp->ji", f, g)
            schur = (schur + schur.T) / 2.0
            schur[np.diag_indices_from(schur)] += 1e-13 * max(
                1.0, np.trace(schur) / len(schur)
            )

            t2 = np.einsum("bpq,bqr,brs->bps", xinv, rp, ymat)
            term2 = np.einsum("jbps,bsp->j", f, t2)

            # predictor (affine direction, sigma = 0)
            rhs_aff = -fdoty - term2 - rd
            dx_aff = np.linalg.solve(schur, rhs_aff)
            sdx_aff = np.einsum("i,ibjk->bjk", dx_aff, f)
            dxm_aff = sdx_aff + rp
            dym_aff = -ymat - xinv @ (sdx_aff + rp) @ ymat
            dym_aff = (dym_aff + dym_aff.transpose(0, 2, 1)) / 2.0

            ap_aff = min(1.0, _max_step(xmat, dxm_aff))
            ad_aff = min(1.0, _max_step(ymat, dym_aff))
            mu_aff = float(
                np.einsum(
                    "bjk,bkj->", xmat + ap_aff * dxm_aff, ymat + ad_aff * dym_aff
                )
            ) / total
            sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

            # corrector
            cross = dxm_aff @ dym_aff
            xinv_rc = sigma * mu * xinv - ymat - xinv @ cross
            term1 = np.einsum("jbps,bsp->j", f, xinv_rc)
            rhs = term1 - term2 - rd
            dx = np.linalg.solve(schur, rhs)
            sdx = np.einsum("i,ibjk->bjk", dx, f)
            dxm = sdx + rp
            dym = xinv_rc - xinv @ (sdx + rp) @ ymat
            dym = (dym + dym.transpose(0, 2, 1)) / 2.0

            ap = min(1.0, step_frac * _max_step(xmat, dxm))
            ad = min(1.0, step_frac * _max_step(ymat, dym))
        except np.linalg.LinAlgError:
            break
        if ap <= 1e-14 and ad <= 1e-14:
            break
        x = x + ap * dx
        xmat = xmat + ap * dxm
        ymat = ymat + ad * dym

    _, x, gap_abs, max_rp, max_rd = best
    if gap_abs <= REPORT_GAP_TOL and max_rp <= REPORT_FEAS_TOL and max_rd <= REPORT_DUAL_TOL:
        status = "optimal"
    elif infeasible:
        status = "infeasible"
    else:
        status = "max-iterations"

    sigmas = unembed_coeffs(x, basis, p.n_vars)
    raw = float(sum(np.trace(w @ s).real for w, s in zip(p.objective, sigmas)))
    return SdpSolution(
        value=raw + p.objective_offset,
        hidden_states=sigmas,
        duality_gap=gap_abs,
        status=status,
        iterations=iterations + 1,
        primal_residual=max_rp,
        dual_residual=max_rd,
    )


def check_certificate(p: SdpProblem, s: SdpSolution) -> CertificateReport:
    """Re-evaluate the solution against the original complex-valued problem.

    Uses the Jacobi eigensolver rather than anything from the solver loop, so
    it is an independent route to the constraint residuals.
    """
    worst_var = np.inf
    for sig in s.hidden_states:
        worst_var = min(worst_var, float(np.min(herm_eig(sig).eigenvalues)))
    worst_con = np.inf
    for con in p.constraints:
        mat = sum(
            float(w) * sig for w, sig in zip(con.weights, s.hidden_states)
        ) - con.constant
        worst_con = min(worst_con, float(np.min(herm_eig(mat).eigenvalues)))
    if not p.constraints:
        worst_con = 0.0
    recomputed = (
        float(sum(np.trace(w @ sig).real for w, sig in zip(p.objective, s.hidden_states)))
        + p.objective_offset
    )
    mismatch = abs(recomputed - s.value)
    ok = (
        worst_var >= -REPORT_FEAS_TOL
        and worst_con >= -REPORT_FEAS_TOL
        and mismatch <= 1e-10
    )
    return CertificateReport(
        worst_variable_eigenvalue=worst_var,
        worst_constraint_eigenvalue=worst_con,
        objective_recomputed=recomputed,
        objective_mismatch=mismatch,
        ok=ok,
    )
