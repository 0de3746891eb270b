"""Temporal quantum correlation quantifiers for qubit channels."""

__version__ = "0.1.0"

from .channels import (
    AmplitudeDamping,
    Depolarizing,
    GenericLindblad,
    PhaseDamping,
    Unitary,
    apply_channel,
    evolve,
    evolve_rk4,
    unitary_evolve,
)
from .bell import correlations, lg_parameter, tchsh_kernel, tchsh_max
from .causal import (
    CausalScenario,
    build_scenario,
    causal_tsr_series,
    causal_verdict,
)
from .linalg import (
    PAULIS,
    Spectrum,
    bloch_decompose,
    herm_eig,
    kron,
    partial_trace,
    partial_transpose,
    trace_distance,
)
from .pdm import PseudoDensityMatrix, build_pdm, extract_assemblage, f_function, ppt_positive
from .sdp import SdpProblem, SdpSolution, SolverError, check_certificate, solve
from .steering import (
    Assemblage,
    classical_assemblage,
    classical_tsr_theorem_check,
    classical_two_setting,
    make_assemblage,
    nsit_check,
    spatio_temporal_tsr,
    tsr,
    tsw,
)

__all__ = [
    "AmplitudeDamping",
    "Assemblage",
    "CausalScenario",
    "Depolarizing",
    "GenericLindblad",
    "PAULIS",
    "PhaseDamping",
    "PseudoDensityMatrix",
    "SdpProblem",
    "SdpSolution",
    "SolverError",
    "Spectrum",
    "Unitary",
    "apply_channel",
    "bloch_decompose",
    "build_pdm",
    "build_scenario",
    "causal_tsr_series",
    "causal_verdict",
    "check_certificate",
    "classical_assemblage",
    "classical_tsr_theorem_check",
    "classical_two_setting",
    "correlations",
    "evolve",
    "evolve_rk4",
    "extract_assemblage",
    "f_function",
    "herm_eig",
    "kron",
    "lg_parameter",
    "make_assemblage",
    "nsit_check",
    "partial_trace",
    "partial_transpose",
    "ppt_positive",
    "solve",
    "spatio_temporal_tsr",
    "tchsh_kernel",
    "tchsh_max",
    "trace_distance",
    "tsr",
    "tsw",
    "unitary_evolve",
]
