"""Baseline Lindblad simulator: repeated short-time dilated-Hamiltonian steps.

Each step adjoins a fresh ancilla in |0>, evolves the pair under the block
anti-diagonal dilation of the jump for sqrt(tau), and traces the ancilla out
again.  A single step is an exact CPTP channel; only the N-fold composition
approximates the Lindblad semigroup, with first-order accuracy in tau.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import ValidationError
from . import numkernel as nk
from .model import dilate

# Above this step count the N-fold composition is evaluated by binary powers
# of the step superoperator (mathematically the same composition).
_DIRECT_STEP_LIMIT = 512


@dataclass(frozen=True)
class CostReport:
    """Resource ledger: total Hamiltonian evolution time, steps, ancillas."""

    hamiltonian_time: float
    step_count: int
    ancilla_count: int

    def as_dict(self) -> dict:
        return {
            "hamiltonian_time": self.hamiltonian_time,
            "step_count": self.step_count,
            "ancilla_count": self.ancilla_count,
        }


def default_steps(t: float, eps: float) -> int:
    """First-order step count t^3 / eps^2 (rounded up)."""
    return max(1, math.ceil(t ** 3 / eps ** 2))


def _step_unitary(f: np.ndarray, tau: float) -> np.ndarray:
    ft = dilate(f)
    w, v = np.linalg.eigh(ft)
    return (v * np.exp(-1j * w * math.sqrt(tau))) @ v.conj().T


def _apply_step(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    joint = np.zeros((2 * d, 2 * d), dtype=complex)
    joint[:d, :d] = rho
    joint = u @ joint @ u.conj().T
    return joint[:d, :d] + joint[d:, d:]


def dilated_step(f: np.ndarray, rho: np.ndarray, tau: float) -> np.ndarray:
    """One exact ancilla-assisted step of duration tau (evolution sqrt(tau))."""
    if tau <= 0:
        raise ValidationError(f"step duration must be positive, got {tau}")
    f = nk.require_hermitian(f)
    rho = nk.require_square(rho)
    if rho.shape[0] != f.shape[0]:
        raise ValidationError(f"dimension mismatch: rho {rho.shape[0]} vs jump {f.shape[0]}")
    return _apply_step(_step_unitary(f, tau), rho)


def _step_superoperator(u: np.ndarray, d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            s[:, i * d + j] = _apply_step(u, unit).reshape(-1)
    return s


def dilated_evolve(f: np.ndarray, rho0: np.ndarray, t: float, steps: int) -> tuple[np.ndarray, CostReport]:
    """Compose ``steps`` dilated steps with tau = t / steps.

    Total evolution time is steps * sqrt(tau) = sqrt(steps * t); every step
    consumes one logical ancilla.
    """
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    if t <= 0:
        raise ValidationError(f"evolution time must be positive, got {t}")
    f = nk.require_hermitian(f)
    rho = nk.require_square(rho0).copy()
    tau = t / steps
    u = _step_unitary(f, tau)
    if steps <= _DIRECT_STEP_LIMIT:
        for _ in range(steps):
            rho = _apply_step(u, rho)
    else:
        d = rho.shape[0]
        s = _step_superoperator(u, d)
        rho = nk.unvec(np.linalg.matrix_power(s, steps) @ nk.vec(rho))
        rho = 0.5 * (rho + rho.conj().T)
    cost = CostReport(
        hamiltonian_time=steps * math.sqrt(tau),
        step_count=steps,
        ancilla_count=steps,
    )
    return rho, cost


def dilated_cost(t: float, steps: int) -> CostReport:
    """Cost ledger of a dilated run without executing it (same closed form)."""
    return CostReport(steps * math.sqrt(t / steps), steps, steps)
