"""Two-time Bell-type correlations: the CHSH kernel and its normalized maximum,
plus the three-time Leggett-Garg combination.

Outcome index 0 stands for the +1 result and index 1 for -1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import Channel, apply_channel
from .linalg import PAULIS, herm_eig, projector

CHSH_CLASSICAL_BOUND = 2.0
CHSH_QUANTUM_BOUND = 2.0 * np.sqrt(2.0)


@dataclass(frozen=True)
class CorrelationTable:
    """Joint outcome distributions ``probs[x, y, a, b]`` for 2x2 settings."""

    probs: np.ndarray
    dirs_t1: tuple
    dirs_t2: tuple

    def correlator(self, x: int, y: int) -> float:
        p = self.probs[x, y]
        return float(p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0])


def _unit_axis(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError("measurement directions must be unit Bloch vectors")
    return v


def correlations(
    ch: Channel, rho0: np.ndarray, dirs_t1, dirs_t2, t: float
) -> CorrelationTable:
    """Sequential-measurement distributions ``p(a, b | x, y)`` at times 0 and ``t``."""
    axes1 = [_unit_axis(v) for v in dirs_t1]
    axes2 = [_unit_axis(v) for v in dirs_t2]
    if len(axes1) != 2 or len(axes2) != 2:
        raise ValueError("the CHSH table needs exactly two settings per time")
    probs = np.zeros((2, 2, 2, 2))
    for x, ax in enumerate(axes1):
        for a, sa in enumerate((+1, -1)):
            e1 = projector(ax, sa)
            branch = apply_channel(ch, e1 @ rho0 @ e1, t)
            for y, ay in enumerate(axes2):
                for b, sb in enumerate((+1, -1)):
                    e2 = projector(ay, sb)
                    probs[x, y, a, b] = np.trace(e2 @ branch).real
    return CorrelationTable(probs=probs, dirs_t1=tuple(axes1), dirs_t2=tuple(axes2))


def tchsh_kernel(tbl: CorrelationTable) -> float:
    """``C_xy + C_x'y + C_xy' - C_x'y'`` for the table's setting order."""
    return (
        tbl.correlator(0, 0)
        + tbl.correlator(1, 0)
        + tbl.correlator(0, 1)
        - tbl.correlator(1, 1)
    )


def correlation_matrix(ch: Channel, t: float) -> np.ndarray:
    """3x3 block ``M_ij = tr[sigma_j E(sigma_i)] / 2`` of the two-time correlators."""
    m = np.zeros((3, 3))
    for i in range(3):
        image = apply_channel(ch, PAULIS[i + 1], t)
        for j in range(3):
            m[i, j] = 0.5 * np.trace(PAULIS[j + 1] @ image).real
    return m


def _kernel_closed_form(m: np.ndarray) -> float:
    # two largest singular values via the spectrum of M M^T
    sq = np.clip(herm_eig((m @ m.T).astype(complex)).eigenvalues, 0.0, None)
    return 2.0 * float(np.sqrt(sq[-1] + sq[-2]))


def _fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * k
    z = 1.0 - 2.0 * (k + 0.5) / n
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 1e-15 else np.array([0.0, 0.0, 1.0])


def _kernel_grid_max(m: np.ndarray, seeds: int = 48, ascents: int = 80) -> float:
    """Direct maximization over the four Bloch vectors.

    The two time-zero directions are eliminated exactly (the kernel is
    ``|M(y + y')| + |M(y - y')|``), and the remaining pair is seeded on a
    sphere grid then improved by alternating closed-form updates.
    """
    pts = _fibonacci_sphere(seeds)
    my = pts @ m.T  # |M y| for each grid point
    sums = my[:, None, :] + my[None, :, :]
    diffs = my[:, None, :] - my[None, :, :]
    values = np.linalg.norm(sums, axis=2) + np.linalg.norm(diffs, axis=2)
    i, j = np.unravel_index(np.argmax(values), values.shape)
    y1, y2 = pts[i], pts[j]
    best = float(values[i, j])
    for _ in range(ascents):
        x1 = _unit(m @ (y1 + y2))
        x2 = _unit(m @ (y1 - y2))
        y1 = _unit(m.T @ (x1 + x2))
        y2 = _unit(m.T @ (x1 - x2))
        val = float(
            np.linalg.norm(m @ (y1 + y2)) + np.linalg.norm(m @ (y1 - y2))
        )
        if val <= best + 1e-15:
            best = max(best, val)
            break
        best = val
    return best


def tchsh_max(ch: Channel, t: float, method: str = "singular_values") -> float:
    """Normalized maximum of the two-time CHSH kernel, in [0, 1].

    ``method`` selects the evaluator: the singular-value closed form of the
    correlator block, or the direct grid-plus-ascent maximization. The two
    agree to much better than 1e-4 and exist precisely to cross-check each
    other.
    """
    m = correlation_matrix(ch, t)
    if method == "singular_values":
        kernel = _kernel_closed_form(m)
    elif method == "grid":
        kernel = _kernel_grid_max(m)
    else:
        raise ValueError(f"unknown method {method!r}")
    return max(0.0, (kernel - CHSH_CLASSICAL_BOUND) / (CHSH_QUANTUM_BOUND - CHSH_CLASSICAL_BOUND))


def lg_parameter(
    ch: Channel, rho0: np.ndarray, q_direction, t12: float, t23: float
) -> float:
    """Leggett-Garg combination ``C12 + C23 - C13`` for a dichotomic observable.

    Each correlator uses a projective Lueders measurement at the earlier time
    followed by channel evolution to the later one; ``C13`` involves no
    intermediate measurement.
    """
    axis = _unit_axis(q_direction)
    effects = [(projector(axis, s), s) for s in (+1, -1)]
    q_op = sum(s * e for e, s in effects)

    def corr(state: np.ndarray, dt: float) -> float:
        total = 0.0
        for e, s in effects:
            branch = apply_channel(ch, e @ state @ e, dt)
            total += s * np.trace(q_op @ branch).real
        return total

    c12 = corr(rho0, t12)
    c23 = corr(apply_channel(ch, rho0, t12), t23)
    c13 = corr(rho0, t12 + t23)
    return c12 + c23 - c13
