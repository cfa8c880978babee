"""Hamiltonian and jump-operator models: parsing, spectral normalization,
dilations, and eigenspace bookkeeping.

A :class:`Hamiltonian` always carries a normalized spectrum together with the
affine map back to the caller's original energy units.  Degenerate eigenvalues
(gap below ``cluster_rtol * ||H||``) are merged into shared eigenspace
projectors; the ``clustered`` flag records when that tolerance was exercised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import ValidationError
from . import numkernel as nk

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class SpectrumMap:
    """Affine map from normalized eigenvalues back to the original spectrum."""

    scale: float
    shift: float

    def to_original(self, h):
        return self.scale * np.asarray(h) + self.shift

    def compose(self, inner_scale: float, inner_shift: float) -> "SpectrumMap":
        # original = scale * (inner_scale * h + inner_shift) + shift
        return SpectrumMap(self.scale * inner_scale, self.scale * inner_shift + self.shift)


@dataclass(frozen=True)
class Hamiltonian:
    """Hermitian operator with cached spectral decomposition.

    ``eigenvalues`` are distinct and ascending; ``projectors[k]`` projects on
    the eigenspace of ``eigenvalues[k]``.  ``matrix`` is rebuilt from the
    clustered decomposition, so ``sum_k h_k P_k`` reproduces it exactly.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    projectors: tuple[np.ndarray, ...]
    spectrum_map: SpectrumMap
    clustered: bool = False
    zero_width: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_levels(self) -> int:
        return len(self.eigenvalues)

    def components(self, v: np.ndarray) -> np.ndarray:
        """Stack of eigenspace components P_k v, shape (n_levels, dim)."""
        return np.stack([p @ v for p in self.projectors])

    def apply_phases(self, phases: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Apply sum_k phases[k] P_k to a vector."""
        return np.tensordot(phases, self.components(v), axes=(0, 0))

    def evolve(self, s: float, v: np.ndarray) -> np.ndarray:
        """exp(-i H s) v using the cached decomposition."""
        return self.apply_phases(np.exp(-1j * self.eigenvalues * s), v)


def _cluster(eigs: np.ndarray) -> tuple[np.ndarray, list[np.ndarray], bool]:
    """Group ascending eigenvalues whose gaps sit below the cluster tolerance."""
    norm = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    tol = TOL.cluster_rtol * (norm if norm > 0.0 else 1.0)
    reps, groups = [], []
    start = 0
    clustered = False
    for i in range(1, len(eigs) + 1):
        if i == len(eigs) or eigs[i] - eigs[i - 1] > tol:
            idx = np.arange(start, i)
            if len(idx) > 1:
                clustered = True
            reps.append(float(np.mean(eigs[idx])))
            groups.append(idx)
            start = i
    return np.array(reps), groups, clustered


def normalize_spectrum(h: np.ndarray) -> Hamiltonian:
    """Build a Hamiltonian with spectrum in [0, 1].

    When the input spectrum already sits inside [0, 1] it is kept as is with
    an identity map; otherwise the affine map h -> (h - h_min) / (h_max -
    h_min) is applied and its inverse recorded.  A constant operator (zero
    spectral width) normalizes to the all-zero spectrum with a flag.
    """
    w, v = nk.herm_eig(h)
    reps, groups, clustered = _cluster(w)
    projectors = tuple(v[:, idx] @ v[:, idx].conj().T for idx in groups)

    lo, hi = float(reps[0]), float(reps[-1])
    width = hi - lo
    zero_width = False
    if len(reps) == 1 or width == 0.0:
        if len(reps) > 1:
            raise ValidationError("distinct eigenvalues with zero spectral width")
        eigs_n = np.zeros(1)
        smap = SpectrumMap(1.0, lo)
        zero_width = True
    elif lo >= 0.0 and hi <= 1.0:
        eigs_n = reps
        smap = SpectrumMap(1.0, 0.0)
    else:
        eigs_n = (reps - lo) / width
        smap = SpectrumMap(width, lo)

    matrix = sum(e * p for e, p in zip(eigs_n, projectors))
    matrix = 0.5 * (matrix + matrix.conj().T)
    return Hamiltonian(matrix, eigs_n, projectors, smap, clustered, zero_width)


def spectral_gap(ham: Hamiltonian, beta: int) -> float:
    """Distance from eigenvalue ``beta`` to the rest of the spectrum."""
    if not 0 <= beta < ham.n_levels:
        raise ValidationError(f"eigenspace index {beta} out of range")
    if ham.n_levels < 2:
        raise ValidationError("spectral gap undefined for a single-eigenvalue spectrum")
    others = np.delete(ham.eigenvalues, beta)
    return float(np.min(np.abs(others - ham.eigenvalues[beta])))


def shift_to_zero(ham: Hamiltonian, beta: int) -> Hamiltonian:
    """Shift the spectrum so eigenvalue ``beta`` sits exactly at 0, rescaled
    to unit spectral radius.

    When ``beta`` is the smallest eigenvalue the result lies in [0, 1]; for an
    interior target the shifted spectrum spans [-1, 1] (an affine map cannot
    pin an interior value at the endpoint 0), which downstream consumers
    accept since the dephasing rates and measurement statistics depend on the
    eigenvalues only through even functions.
    """
    spectral_gap(ham, beta)  # validates index and non-degenerate spectrum
    h_beta = ham.eigenvalues[beta]
    shifted = ham.eigenvalues - h_beta
    scale = float(np.max(np.abs(shifted)))
    eigs_n = shifted / scale
    eigs_n[beta] = 0.0
    smap = ham.spectrum_map.compose(scale, float(h_beta))
    matrix = sum(e * p for e, p in zip(eigs_n, ham.projectors))
    matrix = 0.5 * (matrix + matrix.conj().T)
    return Hamiltonian(matrix, eigs_n, ham.projectors, smap, ham.clustered, ham.zero_width)


def dilate(f: np.ndarray) -> np.ndarray:
    """Block anti-diagonal dilation [[0, F^dag], [F, 0]] (ancilla high-order)."""
    f = nk.require_square(f)
    d = f.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    out[:d, d:] = f.conj().T
    out[d:, :d] = f
    return out


@dataclass(frozen=True)
class SpectralState:
    """Eigenspace decomposition of a pure state against a Hamiltonian.

    ``coeffs[k]`` is the (nonnegative) weight ||P_k v||, and ``components[k]``
    the normalized eigenspace component when the weight is nonzero.
    """

    coeffs: np.ndarray
    components: np.ndarray
    hamiltonian: Hamiltonian

    @property
    def weights(self) -> np.ndarray:
        return self.coeffs ** 2


def decompose_state(v: np.ndarray, ham: Hamiltonian) -> SpectralState:
    v = nk.require_state(v)
    if v.shape[0] != ham.dim:
        raise ValidationError(f"dimension mismatch: state {v.shape[0]} vs Hamiltonian {ham.dim}")
    comps = ham.components(v)
    coeffs = np.linalg.norm(comps, axis=1)
    safe = np.where(coeffs > 0, coeffs, 1.0)
    normalized = comps / safe[:, None]
    normalized[coeffs == 0] = 0.0
    if abs(float(np.sum(coeffs ** 2)) - 1.0) > TOL.unit_norm_atol:
        raise ValidationError("eigenspace weights do not sum to 1; projectors incomplete?")
    return SpectralState(coeffs, normalized, ham)


@dataclass(frozen=True)
class LindbladSpec:
    """Ordered jump operators of a purely dissipative Lindbladian."""

    jumps: tuple[np.ndarray, ...]
    dim: int


def lindblad_spec(jumps) -> LindbladSpec:
    mats = []
    dim = None
    for k, j in enumerate(jumps):
        m = nk.require_hermitian(j)
        if dim is None:
            dim = m.shape[0]
        elif m.shape[0] != dim:
            raise ValidationError(f"jump {k} has dim {m.shape[0]}, expected {dim}")
        nrm = float(np.max(np.abs(np.linalg.eigvalsh(m))))
        if nrm > 1.0 + TOL.jump_norm_atol:
            raise ValidationError(
                f"jump {k} has operator norm {nrm:.6f} > 1; rescale the jump by 1/{nrm:.4f} "
                f"and the evolution time by {nrm**2:.4f} (a c-scaled jump squares the rates)"
            )
        mats.append(m)
    if dim is None:
        raise ValidationError("empty jump list")
    return LindbladSpec(tuple(mats), dim)


def normalized_jump(f: np.ndarray) -> tuple[Hamiltonian, float]:
    """Normalize a Hermitian jump operator and return the time rescale.

    Evolving under the raw jump for time t equals evolving under the returned
    normalized Hamiltonian for ``time_scale * t``: additive identity shifts
    leave the dissipator invariant and a c-scaled jump squares the rates.
    """
    ham = normalize_spectrum(f)
    return ham, float(ham.spectrum_map.scale) ** 2


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def _strip(text: str) -> list[tuple[int, str]]:
    lines = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((i, line))
    return lines


def parse_pauli_sum(text: str) -> np.ndarray:
    """Parse "coefficient PauliString" lines into a dense Hermitian matrix."""
    terms = []
    width = None
    for lineno, line in _strip(text):
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"line {lineno}: expected 'coefficient PauliString', got {line!r}")
        try:
            coeff = float(parts[0])
        except ValueError:
            raise ValidationError(f"line {lineno}: non-real coefficient {parts[0]!r}") from None
        string = parts[1].upper()
        bad = set(string) - set("IXYZ")
        if bad:
            raise ValidationError(f"line {lineno}: invalid Pauli letter(s) {sorted(bad)}")
        if width is None:
            width = len(string)
        elif len(string) != width:
            raise ValidationError(
                f"line {lineno}: Pauli string length {len(string)} != {width} from earlier lines"
            )
        terms.append((coeff, string))
    if not terms:
        raise ValidationError("empty Pauli-sum file")
    dim = 2 ** width
    h = np.zeros((dim, dim), dtype=complex)
    for coeff, string in terms:
        op = np.array([[1.0 + 0j]])
        for ch in string:
            op = np.kron(op, _PAULI[ch])
        h += coeff * op
    return h


def from_pauli_sum(text: str) -> Hamiltonian:
    return normalize_spectrum(parse_pauli_sum(text))


def parse_dense_matrix(text: str) -> np.ndarray:
    """Parse the dense text format: one row per line, entries "re,im"."""
    rows = []
    for lineno, line in _strip(text):
        entries = []
        for tok in line.split():
            try:
                re_s, im_s = tok.split(",")
                entries.append(complex(float(re_s), float(im_s)))
            except ValueError:
                raise ValidationError(f"line {lineno}: malformed entry {tok!r}, expected 're,im'") from None
        rows.append(entries)
    if not rows:
        raise ValidationError("empty dense-matrix file")
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("rows have inconsistent lengths")
    return np.array(rows, dtype=complex)


def format_dense_matrix(a: np.ndarray) -> str:
    a = np.asarray(a, dtype=complex)
    lines = []
    for row in a:
        lines.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def from_dense_matrix(text: str) -> Hamiltonian:
    return normalize_spectrum(parse_dense_matrix(text))


def load_hamiltonian_text(text: str, fmt: str = "auto") -> np.ndarray:
    """Parse either supported Hamiltonian format, sniffing when fmt='auto'."""
    if fmt == "pauli":
        return parse_pauli_sum(text)
    if fmt == "dense":
        return parse_dense_matrix(text)
    stripped = _strip(text)
    if not stripped:
        raise ValidationError("empty Hamiltonian file")
    first = stripped[0][1]
    if "," in first.split()[0]:
        return parse_dense_matrix(text)
    return parse_pauli_sum(text)
