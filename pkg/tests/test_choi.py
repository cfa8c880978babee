import itertools
import math

import numpy as np
import pytest

from lindbladff import (ValidationError, choi_ff_evolve, choi_generator_term,
                        ff_evolve, is_choi_commuting, lindblad_exact_general,
                        lindblad_rk4, lindblad_spec, normalize_spectrum,
                        pauli_noise_spec, plan)
from lindbladff import numkernel as nk
from lindbladff.model import parse_pauli_sum

from conftest import PAULI_X, PAULI_Y, PAULI_Z, random_hermitian

ZERO_KET = np.zeros((2, 2), dtype=complex)
ZERO_KET[0, 0] = 1.0


class TestGeneratorTerm:
    def test_z_term_diagonal(self):
        term = choi_generator_term(PAULI_Z)
        assert np.allclose(term, np.diag([0.0, -2.0, -2.0, 0.0]))

    def test_identity_jump_vanishes(self):
        assert np.max(np.abs(choi_generator_term(np.eye(2)))) <= 1e-15

    def test_trace_identity(self, rng):
        for _ in range(10):
            h = random_hermitian(rng, 3)
            term = choi_generator_term(h)
            want = np.trace(h).real ** 2 - 3 * np.trace(h @ h).real
            assert np.isclose(np.trace(term).real, want, atol=1e-9)


class TestCommutationCheck:
    def test_anticommuting_pair_passes(self):
        ok, worst = is_choi_commuting(lindblad_spec([PAULI_X, PAULI_Z]))
        assert ok and worst <= 1e-12

    def test_tilted_pair_fails(self):
        tilted = (PAULI_X + PAULI_Z) / math.sqrt(2.0)
        ok, worst = is_choi_commuting(lindblad_spec([PAULI_X, tilted]))
        assert not ok and worst > 1e-3

    def test_commuting_pair_passes(self):
        z1 = np.kron(PAULI_Z, np.eye(2))
        z2 = np.kron(np.eye(2), PAULI_Z)
        ok, worst = is_choi_commuting(lindblad_spec([z1, z2]))
        assert ok and worst <= 1e-12

    def test_single_jump_vacuous(self):
        ok, worst = is_choi_commuting(lindblad_spec([PAULI_X]))
        assert ok and worst == 0.0

    def test_random_pauli_sets_always_pass(self, rng):
        labels = ["".join(p) for p in itertools.product("IXYZ", repeat=2)][1:]
        for _ in range(20):
            chosen = rng.choice(labels, size=3, replace=False)
            spec = pauli_noise_spec([(s, float(rng.uniform(0.1, 1.0))) for s in chosen])
            ok, worst = is_choi_commuting(spec)
            assert ok and worst <= 1e-12, chosen

    def test_commutator_expansion_matches_direct(self, rng):
        # expansion into jump-level commutators agrees with the direct bracket
        for _ in range(5):
            hi, hj = random_hermitian(rng, 2), random_hermitian(rng, 2)
            ti, tj = choi_generator_term(hi), choi_generator_term(hj)
            direct = ti @ tj - tj @ ti
            eye = np.eye(2)

            def comm(a, b):
                return a @ b - b @ a

            hi2, hj2 = hi @ hi, hj @ hj
            expansion = (
                comm(np.kron(hi, hi.conj()), np.kron(hj, hj.conj()))
                - 0.5 * np.kron(comm(hi, hj2), hi.conj())
                - 0.5 * np.kron(hi, comm(hi, hj2).conj())
                - 0.5 * np.kron(comm(hi2, hj), hj.conj())
                - 0.5 * np.kron(hj, comm(hi2, hj).conj())
                + 0.25 * np.kron(comm(hi2, hj2), eye)
                + 0.25 * np.kron(eye, comm(hi2, hj2).conj())
            )
            assert np.max(np.abs(direct - expansion)) <= 1e-10


class TestSequentialFastForward:
    def test_single_jump_matches_ff(self):
        spec = lindblad_spec([np.diag([0.0, 1.0])])
        psi = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)
        rho_seq, cost_seq = choi_ff_evolve(spec, psi, 2.0, 0.05)
        ham = normalize_spectrum(np.diag([0.0, 1.0]))
        rho_ff, _, cost_ff = ff_evolve(ham, psi, plan(2.0, 0.05))
        assert np.max(np.abs(rho_seq - rho_ff)) <= 1e-12
        assert cost_seq.hamiltonian_time == cost_ff.hamiltonian_time

    def test_xz_dephasing_to_maximally_mixed(self):
        spec = lindblad_spec([PAULI_X, PAULI_Z])
        rho, _ = choi_ff_evolve(spec, np.array([1.0, 0.0], dtype=complex), 8.0, 1e-2)
        exact = lindblad_exact_general(spec, ZERO_KET, 8.0)
        assert nk.trace_distance(rho, exact) <= 1e-2
        assert np.max(np.abs(exact - np.eye(2) / 2)) <= 1e-6  # e^{-2t} relaxation

    def test_order_permutation_within_budget(self):
        eps = 1e-2
        fwd = lindblad_spec([PAULI_X, PAULI_Z])
        rev = lindblad_spec([PAULI_Z, PAULI_X])
        psi = np.array([1.0, 0.0], dtype=complex)
        a, _ = choi_ff_evolve(fwd, psi, 1.0, eps)
        b, _ = choi_ff_evolve(rev, psi, 1.0, eps)
        assert nk.trace_distance(a, b) <= 2 * eps

    def test_noncommuting_requires_override(self):
        tilted = (PAULI_X + PAULI_Z) / math.sqrt(2.0)
        spec = lindblad_spec([PAULI_X, tilted])
        with pytest.raises(ValidationError, match="override"):
            choi_ff_evolve(spec, np.array([1.0, 0.0], dtype=complex), 1.0, 0.1)
        rho, _ = choi_ff_evolve(spec, np.array([1.0, 0.0], dtype=complex), 1.0, 0.1,
                                override=True)
        assert abs(np.trace(rho).real - 1.0) <= 1e-9

    def test_factorization_identity(self, rng):
        # commuting generators: exp of the sum equals the product of exps
        from scipy.linalg import expm

        spec = pauli_noise_spec([("XI", 0.7), ("ZI", 0.4), ("ZZ", 0.9)])
        terms = [choi_generator_term(j) for j in spec.jumps]
        t = 0.8
        joint = expm(sum(terms) * t)
        product = np.eye(16, dtype=complex)
        for term in terms:
            product = expm(term * t) @ product
        assert np.max(np.abs(joint - product)) <= 1e-9


class TestPauliNoise:
    def test_single_term(self):
        spec = pauli_noise_spec([("Z", 0.5)])
        assert np.allclose(spec.jumps[0], math.sqrt(0.5) * PAULI_Z)

    def test_rate_validation(self):
        with pytest.raises(ValidationError, match="rescale"):
            pauli_noise_spec([("Z", 1.5)])

    def test_depolarizing_offdiagonal_rate(self):
        # X+Y+Z noise at rate lam: off-diagonal decays as e^{-4 lam t},
        # cross-checked against the brute-force integrator
        lam, t = 0.25, 0.7
        spec = pauli_noise_spec([("X", lam), ("Y", lam), ("Z", lam)])
        plus = np.full((2, 2), 0.5, dtype=complex)
        out = lindblad_exact_general(spec, plus, t)
        assert np.isclose(out[0, 1].real, 0.5 * math.exp(-4 * lam * t), atol=1e-10)
        oracle = lindblad_rk4(list(spec.jumps), plus, t)
        assert np.max(np.abs(out - oracle)) <= 1e-8

    def test_two_qubit_noise_end_to_end(self, rng):
        spec = pauli_noise_spec([("XY", 0.8), ("ZI", 0.5), ("XY", 0.3)])
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1 / math.sqrt(2)
        rho, _ = choi_ff_evolve(spec, psi, 1.0, 1e-2)
        exact = lindblad_exact_general(spec, np.outer(psi, psi.conj()), 1.0)
        assert nk.trace_distance(rho, exact) <= 1e-2
