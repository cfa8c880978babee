"""Phase estimation routes and the amplitude-estimation decision demo.

Three routes are implemented against one result contract:

* ``standard``: Fourier-basis phase estimation, exact outcome distribution
  from the Dirichlet kernel of the phase register.
* ``slow``: ancilla-counting statistics of the dephasing Lindbladian.  The
  joint register-system state is never materialized; outcome distributions
  are per-eigencomponent binomials, evaluated on their numerically relevant
  support, so the ancilla count N can reach 10^6 and beyond.
* ``fast``: the fast-forwarded ledger pushed through the symmetric-sector
  Hadamard (Kravchuk) transform.

The Kravchuk transform is built from the collective-spin representation: the
N-fold Hadamard restricted to the symmetric sector is a global phase times
the exponential of the tridiagonal operator (Jx + Jz), whose eigenvalues sit
exactly on the lattice sqrt(2) * {-N/2..N/2}.  Snapping the computed
eigenvalues to that lattice turns the exponential into an exact signed sum
over orthonormal eigenvectors, which is numerically stable where the
combinatorial polynomial sum suffers catastrophic cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import CapacityError, ValidationError
from .dilated import CostReport
from .fastforward import FFPlan, goal_ledger, residue_of
from .kernels import binom_pmf_window
from .model import (Hamiltonian, SpectralState, decompose_state,
                    normalize_spectrum, spectral_gap)
from .stateprep import binomial_amplitudes


@dataclass
class EstimationResult:
    """One eigenvalue-estimation outcome (estimate in original spectrum units)."""

    estimate: float
    estimate_normalized: float
    raw_outcome: int
    distribution: np.ndarray | None
    cost: CostReport
    saturated: bool = False
    success_target: tuple | None = None


@dataclass
class PreparationResult:
    """Post-selected eigenstate preparation summary."""

    postselect_probability: float
    overlap: float
    state: np.ndarray
    expected_repeats: float
    ideal_amplification_queries: float
    overlap_bound: float
    cost: CostReport | None = None


# ---------------------------------------------------------------------------
# Standard (Fourier) route
# ---------------------------------------------------------------------------

def _dirichlet_ratio(theta: np.ndarray, d: int) -> np.ndarray:
    """sin^2(pi theta 2^d) / sin^2(pi theta), with value 4^d at integer theta.

    The ratio is 1-periodic, so the argument is wrapped to [-1/2, 1/2] first;
    only an exactly integer theta needs the removable-singularity value.
    """
    tw = theta - np.round(theta)
    s = np.sin(np.pi * tw)
    big = np.sin(np.pi * tw * (1 << d))
    safe = np.where(tw == 0.0, 1.0, s)
    return np.where(tw == 0.0, float(4 ** d), (big / safe) ** 2)


def _circular_distance(theta: np.ndarray) -> np.ndarray:
    tw = np.mod(theta, 1.0)
    return np.minimum(tw, 1.0 - tw)


def standard_qpe(ham: Hamiltonian, state: SpectralState, d: int,
                 mode: str = "exact", seed=None,
                 success_target: tuple | None = None,
                 repeats: int = 1) -> EstimationResult:
    """Fourier phase estimation with d register bits, exact distribution."""
    if d < 1:
        raise ValidationError(f"need at least one register bit, got {d}")
    ys = np.arange(1 << d)
    theta = ham.eigenvalues[:, None] - ys[None, :] / (1 << d)
    dist = (state.weights[:, None] * _dirichlet_ratio(theta, d)).sum(axis=0) / 4 ** d
    y = _pick_outcome(dist, mode, seed, repeats)
    h_norm = y / (1 << d)
    cost = CostReport(float((1 << d) - 1), d, d)
    return EstimationResult(
        estimate=float(ham.spectrum_map.to_original(h_norm)),
        estimate_normalized=float(h_norm),
        raw_outcome=int(y),
        distribution=dist,
        cost=cost,
        success_target=success_target,
    )


def _require_target_at_zero(ham: Hamiltonian, beta: int):
    if not 0 <= beta < ham.n_levels:
        raise ValidationError(f"eigenspace index {beta} out of range")
    if abs(float(ham.eigenvalues[beta])) > 1e-12:
        raise ValidationError(
            "target eigenvalue must sit at 0; run model.shift_to_zero first"
        )


def standard_qpe_eigenstate(ham: Hamiltonian, state: SpectralState, beta: int,
                            d: int) -> PreparationResult:
    """Post-select outcome 0 to filter the zero-eigenvalue component.

    Phases enter mod 1 on this route, so a component at circular distance 0
    from the target (e.g. an eigenvalue at exactly 1 after a shift-rescale)
    aliases with it and cannot be filtered; the overlap bound uses the
    circular gap and becomes vacuous (0) in that case.
    """
    _require_target_at_zero(ham, beta)
    w = state.weights
    ratios = _dirichlet_ratio(ham.eigenvalues, d)
    p0 = float(np.sum(w * ratios) / 4 ** d)
    overlap = float(w[beta] / p0)

    # post-measurement state at outcome 0
    h = ham.eigenvalues
    denom = 1.0 - np.exp(-2j * np.pi * h)
    numer = 1.0 - np.exp(-2j * np.pi * h * (1 << d))
    singular = np.abs(denom) < 1e-14
    amp = np.where(singular, float(1 << d), numer / np.where(singular, 1.0, denom))
    vec = np.tensordot(state.coeffs * amp, state.components, axes=(0, 0))
    vec = vec / np.linalg.norm(vec)

    gap = float(np.min(_circular_distance(np.delete(h, beta)))) if ham.n_levels > 1 else 0.5
    if gap > 0:
        bound = w[beta] / (w[beta] + (1.0 - w[beta]) / (4.0 * ((1 << d) * gap) ** 2))
    else:
        bound = 0.0
    if overlap < bound - 1e-10:
        raise AssertionError(f"overlap {overlap} violates its lower bound {bound}")
    return PreparationResult(
        postselect_probability=p0,
        overlap=overlap,
        state=vec,
        expected_repeats=1.0 / p0,
        ideal_amplification_queries=1.0 / math.sqrt(w[beta]),
        overlap_bound=float(bound),
        cost=CostReport(float((1 << d) - 1), d, d),
    )


# ---------------------------------------------------------------------------
# Slow (Lindbladian counting) route
# ---------------------------------------------------------------------------

def _counting_params(ham: Hamiltonian, t: float, n: int) -> np.ndarray:
    root = math.sqrt(t / n)
    if root * float(np.max(np.abs(ham.eigenvalues))) > 0.5 * math.pi:
        raise ValidationError(
            f"sqrt(t/N) |h| = {root:.3f}|h| leaves the monotone estimator range; increase N"
        )
    return np.sin(root * ham.eigenvalues) ** 2


def _counting_distribution(weights: np.ndarray, qs: np.ndarray, n: int) -> np.ndarray:
    dist = np.zeros(n + 1)
    for w, q in zip(weights, qs):
        if w < 1e-300:
            continue
        lo, pm = binom_pmf_window(n, float(q))
        dist[lo: lo + pm.size] += w * pm
    return dist


def _pick_outcome(dist: np.ndarray, mode: str, seed, repeats: int = 1) -> int:
    """Single-shot outcome by default; repeats > 1 reports the sample median."""
    if mode == "exact":
        return int(np.argmax(dist))
    if mode == "sample":
        rng = np.random.default_rng(seed)
        draws = rng.choice(dist.size, p=dist / dist.sum(), size=max(1, repeats))
        return int(np.median(draws))
    raise ValidationError(f"unknown mode {mode!r}")


def counting_estimator(t: float, n: int, m) -> tuple[np.ndarray, np.ndarray]:
    """Normalized-eigenvalue estimate sqrt(N/t) arcsin(sqrt(m/N)) with clamp."""
    frac = np.clip(np.asarray(m, dtype=float) / n, 0.0, 1.0)
    saturated = frac >= 1.0
    return math.sqrt(n / t) * np.arcsin(np.sqrt(frac)), saturated


def slow_qpe(ham: Hamiltonian, state: SpectralState, t: float, n: int,
             mode: str = "exact", seed=None,
             success_target: tuple | None = None,
             repeats: int = 1) -> EstimationResult:
    """Counting statistics of N short dephasing steps (exact distribution)."""
    if t <= 0 or n < 1:
        raise ValidationError(f"need t > 0 and N >= 1, got t={t}, N={n}")
    qs = _counting_params(ham, t, n)
    dist = _counting_distribution(state.weights, qs, n)
    m = _pick_outcome(dist, mode, seed, repeats)
    est, sat = counting_estimator(t, n, m)
    cost = CostReport(math.sqrt(n * t), n, n)
    return EstimationResult(
        estimate=float(ham.spectrum_map.to_original(est)),
        estimate_normalized=float(est),
        raw_outcome=int(m),
        distribution=dist,
        cost=cost,
        saturated=bool(sat),
        success_target=success_target,
    )


def slow_qpe_eigenstate(ham: Hamiltonian, state: SpectralState, beta: int,
                        t: float, n: int) -> PreparationResult:
    """Post-select the all-zeros count to filter the zero-eigenvalue component."""
    _require_target_at_zero(ham, beta)
    if t <= 0 or n < 1:
        raise ValidationError(f"need t > 0 and N >= 1, got t={t}, N={n}")
    root = math.sqrt(t / n)
    if root * float(np.max(np.abs(ham.eigenvalues))) > 0.5 * math.pi:
        raise ValidationError("sqrt(t/N) |h| exceeds pi/2; increase N")
    w = state.weights
    cosines = np.cos(root * ham.eigenvalues)
    # survival amplitude per component: cos^N, evaluated in the log domain
    with np.errstate(divide="ignore"):
        log_surv = n * np.log(np.abs(cosines))
    surv = np.exp(log_surv)
    p0 = float(np.sum(w * surv ** 2))
    overlap = float(w[beta] / p0)

    gap = spectral_gap(ham, beta)
    bound = w[beta] / (w[beta] + (1.0 - w[beta]) * math.exp(-t * gap ** 2))
    if overlap < bound - 1.0 / n - 1e-10:
        raise AssertionError(f"overlap {overlap} violates its bound {bound} beyond 1/N slack")

    vec = np.tensordot(state.coeffs * surv, state.components, axes=(0, 0))
    vec = vec / np.linalg.norm(vec)
    return PreparationResult(
        postselect_probability=p0,
        overlap=overlap,
        state=vec,
        expected_repeats=1.0 / p0,
        ideal_amplification_queries=1.0 / math.sqrt(w[beta]),
        overlap_bound=float(bound),
        cost=CostReport(math.sqrt(n * t), n, n),
    )


# ---------------------------------------------------------------------------
# Kravchuk transform and the fast route
# ---------------------------------------------------------------------------

_kravchuk_cache: dict[int, np.ndarray] = {}


def kravchuk_unitary(n: int, cap: int | None = None) -> np.ndarray:
    """Symmetric-sector N-fold Hadamard in the excitation-count basis.

    Real, symmetric and orthogonal; entries match the Dicke-basis overlaps
    of the dense N-qubit Hadamard transform.
    """
    cap = TOL.kravchuk_cap if cap is None else cap
    if n > cap:
        raise CapacityError(f"Kravchuk transform capped at N = {cap}, got {n}")
    if n < 1:
        raise ValidationError(f"need N >= 1, got {n}")
    if n in _kravchuk_cache:
        return _kravchuk_cache[n]
    from scipy.linalg import eigh_tridiagonal

    m = np.arange(n + 1)
    diag = (n - 2 * m) / 2.0
    off = 0.5 * np.sqrt((m[:-1] + 1.0) * (n - m[:-1]))
    w, v = eigh_tridiagonal(diag, off)
    two_m = np.rint(2.0 * w / math.sqrt(2.0)).astype(np.int64)
    if np.max(np.abs(w - two_m * math.sqrt(2.0) / 2.0)) > 1e-6:
        raise AssertionError("collective-spin eigenvalues drifted off the exact lattice")
    signs = np.where(((n - two_m) // 2) % 2 == 0, 1.0, -1.0)
    u = (v * signs) @ v.T
    _kravchuk_cache.clear()  # hold at most one transform (134 MB at the cap)
    _kravchuk_cache[n] = u
    return u


def _transformed_rows(ham: Hamiltonian, state: SpectralState, p: FFPlan) -> np.ndarray:
    """Rows X[m] of the Kravchuk-transformed ledger state, shape (N+1, dim)."""
    psi = np.tensordot(state.coeffs, state.components, axes=(0, 0))
    ledger = goal_ledger(ham, psi, p)
    u = kravchuk_unitary(p.n)
    a = binomial_amplitudes(p.n)
    res = residue_of(p, np.arange(p.n + 1))
    b = np.zeros((p.n + 1, p.period))
    for r in range(p.period):
        idx = np.nonzero(res == r)[0]
        if idx.size:
            b[:, r] = u[:, idx] @ a[idx]
    return b @ ledger.states


def fast_qpe(ham: Hamiltonian, state: SpectralState, p: FFPlan,
             mode: str = "exact", seed=None,
             success_target: tuple | None = None,
             repeats: int = 1) -> EstimationResult:
    """Counting statistics read out of the fast-forwarded ledger."""
    if p.n > TOL.kravchuk_cap:
        raise CapacityError(
            f"plan N = {p.n} exceeds the Kravchuk cap {TOL.kravchuk_cap}; "
            f"use the slow route's exact distribution instead"
        )
    _counting_params(ham, p.t, p.n)  # range guard
    rows = _transformed_rows(ham, state, p)
    dist = np.einsum("ms,ms->m", rows, rows.conj()).real
    m = _pick_outcome(dist, mode, seed, repeats)
    est, sat = counting_estimator(p.t, p.n, m)
    cost = CostReport(float(p.period) * math.sqrt(p.tau), p.dprime + 1, p.d)
    return EstimationResult(
        estimate=float(ham.spectrum_map.to_original(est)),
        estimate_normalized=float(est),
        raw_outcome=int(m),
        distribution=dist,
        cost=cost,
        saturated=bool(sat),
        success_target=success_target,
    )


def fast_qpe_eigenstate(ham: Hamiltonian, state: SpectralState, beta: int,
                        p: FFPlan) -> PreparationResult:
    """Post-select count 0 on the transformed ledger."""
    _require_target_at_zero(ham, beta)
    if p.n > TOL.kravchuk_cap:
        raise CapacityError(f"plan N = {p.n} exceeds the Kravchuk cap {TOL.kravchuk_cap}")
    rows = _transformed_rows(ham, state, p)
    x0 = rows[0]
    p0 = float(np.vdot(x0, x0).real)
    vec = x0 / math.sqrt(p0)
    overlap = float(np.abs(np.vdot(state.components[beta], vec)) ** 2)

    c_beta = float(state.coeffs[beta])
    root_eps = math.sqrt(p.eps)
    if math.sqrt(p0) < c_beta - root_eps - 1e-9:
        raise AssertionError(
            f"postselect amplitude {math.sqrt(p0)} fell below c_beta - sqrt(eps)"
        )
    # inaccuracy chain: with sqrt(eps) = c_beta * zeta and the unwindowed
    # overlap already at 1 - zeta, the windowed overlap stays above 1 - 6 zeta
    zeta = root_eps / c_beta if c_beta > 0 else math.inf
    bound = -math.inf
    if zeta < 1.0 / 6.0:
        root = math.sqrt(p.t / p.n)
        surv = np.exp(p.n * np.log(np.abs(np.cos(root * ham.eigenvalues))))
        p0_plain = float(np.sum(state.weights * surv ** 2))
        if state.weights[beta] / p0_plain >= 1.0 - zeta:
            bound = 1.0 - 6.0 * zeta
            if overlap < bound - 1e-9:
                raise AssertionError(
                    f"windowed overlap {overlap} violates the 1 - 6 zeta chain ({bound})"
                )
    return PreparationResult(
        postselect_probability=p0,
        overlap=overlap,
        state=vec,
        expected_repeats=1.0 / p0,
        ideal_amplification_queries=1.0 / c_beta if c_beta > 0 else math.inf,
        overlap_bound=float(bound),
        cost=CostReport(float(p.period) * math.sqrt(p.tau), p.dprime + 1, p.d),
    )


# ---------------------------------------------------------------------------
# Amplitude-estimation decision demo
# ---------------------------------------------------------------------------

@dataclass
class AmplitudeDecision:
    decided_zero: bool
    correct: bool
    confidence: float
    amplitude: float
    witness_count: int
    threshold: float
    estimate_phase: float
    estimation: EstimationResult


def _grover_iterate(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reflection-based search iterate and its flagged uniform state.

    The raw product of the reflection about the flagged uniform state with
    the flag-Z differs from the rotation form by a global -1; that sign is
    absorbed here so a zero witness count sits at eigenphase 0, which is what
    the phase-threshold decision rule below assumes.
    """
    n = int(round(math.log2(bits.size)))
    dim = 1 << (n + 1)
    eta = np.zeros(dim)
    for x, fx in enumerate(bits):
        eta[2 * x + int(fx)] = 2.0 ** (-n / 2.0)
    signs = np.where(np.arange(dim) & 1, -1.0, 1.0)
    u = (2.0 * np.outer(eta, eta) - np.eye(dim)) * signs[None, :]
    return u, eta


def _orthogonal_log(u: np.ndarray) -> np.ndarray:
    """Hermitian H with exp(-i H) = U for real orthogonal U, principal branch.

    Real Schur form of a normal matrix is block diagonal: 1x1 blocks +-1 and
    2x2 rotation blocks.  Eigenphase pi is assigned to +pi.
    """
    from scipy.linalg import schur

    t, q = schur(u, output="real")
    dim = u.shape[0]
    h = np.zeros((dim, dim), dtype=complex)
    i = 0
    while i < dim:
        if i + 1 < dim and abs(t[i + 1, i]) > 1e-10:
            phi = math.atan2(t[i + 1, i], t[i, i])
            h[i, i + 1] = -1j * phi
            h[i + 1, i] = 1j * phi
            i += 2
        else:
            h[i, i] = math.pi if t[i, i] < 0 else 0.0
            i += 1
    return q @ h @ q.conj().T


def amplitude_decision_demo(bits, t: float = 250.0, register_n: int = 2048,
                            eps: float = 1e-5, mode: str = "sample",
                            seed=None) -> AmplitudeDecision:
    """Decide witness count W = 0 vs W >= 1 by phase-estimating the iterate.

    The estimated eigenphase is compared against half the minimal
    nonzero-witness rotation 2 arcsin(2^(-n/2)).
    """
    from .fastforward import plan as make_plan

    bits = np.asarray(bits).astype(int)
    n = int(round(math.log2(bits.size)))
    if bits.size != 1 << n:
        raise ValidationError(f"oracle length {bits.size} is not a power of two")
    if n > 6:
        raise ValidationError(f"demo capped at n = 6 address bits, got {n}")
    witness = int(bits.sum())

    u, eta = _grover_iterate(bits)
    h_ae = _orthogonal_log(u)
    ham = normalize_spectrum(h_ae)
    state = decompose_state(eta, ham)
    p = make_plan(t, eps, n_override=register_n)
    result = fast_qpe(ham, state, p, mode=mode, seed=seed)

    threshold = math.asin(2.0 ** (-n / 2.0))
    decided_zero = abs(result.estimate) <= threshold

    est_all, _ = counting_estimator(p.t, p.n, np.arange(p.n + 1))
    phases = ham.spectrum_map.to_original(est_all)
    side = np.abs(phases) <= threshold
    mass_zero = float(np.sum(result.distribution[side]))
    confidence = mass_zero if decided_zero else 1.0 - mass_zero

    return AmplitudeDecision(
        decided_zero=decided_zero,
        correct=(decided_zero == (witness == 0)),
        confidence=confidence,
        amplitude=2.0 ** (-n / 2.0) * math.sqrt(witness),
        witness_count=witness,
        threshold=threshold,
        estimate_phase=float(result.estimate),
        estimation=result,
    )
