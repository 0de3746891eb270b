"""Experiment runners producing deterministic CSV-ready tables.

Each runner maps a validated configuration to an :class:`ExperimentResult`
with ordered rows, a summary dictionary, and a full-precision CSV rendering
(17 significant digits, newline-terminated, summary entries as trailing
``#`` comment lines).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import lg_parameter, tchsh_max
from .causal import (
    COMMON_CAUSE,
    DIRECT_CAUSE,
    build_scenario,
    causal_tsr_series,
    causal_verdict,
)
from .channels import Depolarizing, PhaseDamping, Unitary
from .linalg import ID2, PAULI_X
from .pdm import build_pdm, f_function
from .schemas import (
    CausalConfig,
    ClassicalConfig,
    ExperimentConfig,
    HierarchyConfig,
    LgConfig,
)
from .sdp import SolverError
from .steering import (
    MUB_AXES,
    classical_tsr_theorem_check,
    classical_two_setting,
    make_assemblage,
    tsr,
    tsw,
)

AXIS_BY_NAME = {"x": MUB_AXES[0], "y": MUB_AXES[1], "z": MUB_AXES[2]}


@dataclass(frozen=True)
class ExperimentResult:
    columns: tuple
    rows: tuple
    summary: dict

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        for key, value in self.summary.items():
            lines.append(f"# {key}={_fmt(value)}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (bool, str)) or v is None:
        return str(v)
    return format(float(v), ".17g")


def _checked(solution, context: str):
    if solution.status != "optimal":
        raise SolverError(f"SDP for {context} ended with status {solution.status}")
    return solution


def _bisect_vanishing(fn, ts, values, threshold: float, tol: float):
    """First time the (decreasing) quantity drops to the threshold, or None."""
    above = values[0] > threshold
    if not above:
        return float(ts[0])
    for i in range(1, len(ts)):
        if values[i] <= threshold:
            lo, hi = float(ts[i - 1]), float(ts[i])
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if fn(mid) > threshold:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
    return None


def run_hierarchy(cfg: HierarchyConfig) -> ExperimentResult:
    ch = cfg.channel.build()
    axes = [AXIS_BY_NAME[s] for s in cfg.settings]
    rho0 = ID2 / 2

    def f_at(t: float) -> float:
        return f_function(build_pdm(ch, rho0, t))

    def tsr_at(t: float) -> float:
        return _checked(tsr(make_assemblage(rho0, axes, ch, t)), f"tsr at t={t}").value

    def chsh_at(t: float) -> float:
        return tchsh_max(ch, t)

    ts = cfg.grid.values()
    f_vals = np.array([f_at(t) for t in ts])
    tsr_vals = np.array([tsr_at(t) for t in ts])
    chsh_vals = np.array([chsh_at(t) for t in ts])

    rows = tuple(
        [float(t), float(fv), float(sv), float(bv)]
        for t, fv, sv, bv in zip(ts, f_vals, tsr_vals, chsh_vals)
    )
    thr, tol = cfg.zero_threshold, cfg.bisection_tol
    t_chsh = _bisect_vanishing(chsh_at, ts, chsh_vals, thr, tol)
    t_tsr = _bisect_vanishing(tsr_at, ts, tsr_vals, thr, tol)
    t_f = _bisect_vanishing(f_at, ts, f_vals, thr, tol)
    ordered = (
        t_chsh is not None
        and t_tsr is not None
        and t_f is not None
        and t_chsh < t_tsr < t_f
    )
    summary = {
        "vanishing_time_tchsh": t_chsh,
        "vanishing_time_tsr": t_tsr,
        "vanishing_time_f": t_f,
        "ordering_tchsh_tsr_f": ordered,
    }
    return ExperimentResult(
        columns=("t", "f", "tsr", "tchsh_max"), rows=rows, summary=summary
    )


def run_causal(cfg: CausalConfig) -> ExperimentResult:
    ts = cfg.grid.values()
    common = build_scenario(COMMON_CAUSE, j=cfg.j, j31=cfg.j31)
    direct = build_scenario(
        DIRECT_CAUSE, j=cfg.j, j31=cfg.j31, direct_initial=cfg.direct_initial
    )
    series_common = causal_tsr_series(common, ts)
    series_direct = causal_tsr_series(direct, ts)
    verdict_common = causal_verdict(series_common)
    verdict_direct = causal_verdict(series_direct)
    rows = tuple(
        [float(t), float(vc), float(vd), verdict_common, verdict_direct]
        for (t, vc), (_, vd) in zip(series_common, series_direct)
    )
    summary = {
        "verdict_common": verdict_common,
        "verdict_direct": verdict_direct,
        "peak_tsr_common": max(v for _, v in series_common),
        "peak_tsr_direct": max(v for _, v in series_direct),
    }
    return ExperimentResult(
        columns=("t", "tsr_common", "tsr_direct", "verdict_common", "verdict_direct"),
        rows=rows,
        summary=summary,
    )


def run_classical(cfg: ClassicalConfig) -> ExperimentResult:
    if cfg.pairs is not None:
        pairs = [(float(a), float(b)) for a, b in cfg.pairs]
    else:
        rng = np.random.default_rng(cfg.seed)
        pairs = [(float(a), float(b)) for a, b in rng.uniform(0.0, 1.0, (cfg.n_random, 2))]
    dephasing = PhaseDamping(cfg.dephasing_gamma) if cfg.dephasing_gamma > 0 else None

    rows = []
    worst_tsr = worst_tsw = 0.0
    for alpha, beta in pairs:
        asm = classical_two_setting(alpha, beta)
        robustness, distance = classical_tsr_theorem_check(
            asm, dephasing=dephasing, t=cfg.dephasing_time
        )
        weight = _checked(tsw(asm), f"tsw at ({alpha}, {beta})").value
        gap = abs(robustness - distance)
        if gap > cfg.tolerance:
            raise SolverError(
                f"robustness/trace-distance mismatch {gap:.3e} at ({alpha}, {beta})"
            )
        worst_tsr = max(worst_tsr, gap)
        worst_tsw = max(worst_tsw, abs(weight - abs(alpha - beta)))
        rows.append([alpha, beta, float(robustness), float(weight), float(distance)])
    summary = {
        "max_abs_tsr_minus_distance": worst_tsr,
        "max_abs_tsw_minus_population_gap": worst_tsw,
    }
    return ExperimentResult(
        columns=("alpha", "beta", "tsr", "tsw", "trace_distance"),
        rows=tuple(rows),
        summary=summary,
    )


def run_lg(cfg: LgConfig) -> ExperimentResult:
    if cfg.dynamics == "precession":
        ch = Unitary(cfg.omega * PAULI_X / 2.0)
    elif cfg.dynamics == "identity":
        ch = Unitary(np.zeros((2, 2)))
    else:
        ch = Depolarizing(cfg.gamma)
    axis = AXIS_BY_NAME[cfg.q_direction]
    rho0 = ID2 / 2

    rows = []
    best_k, best_tau = -np.inf, None
    for tau in cfg.grid.values():
        k = lg_parameter(ch, rho0, axis, float(tau), float(tau))
        flag = "K>1" if k > 1.0 + 1e-12 else ""
        rows.append([float(tau), float(k), flag])
        if k > best_k:
            best_k, best_tau = float(k), float(tau)
    summary = {"max_K": best_k, "argmax_tau": best_tau}
    return ExperimentResult(columns=("tau", "K", "flag"), rows=tuple(rows), summary=summary)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    runner = {
        "hierarchy": run_hierarchy,
        "causal": run_causal,
        "classical": run_classical,
        "lg": run_lg,
    }[cfg.experiment]
    return runner(cfg)
