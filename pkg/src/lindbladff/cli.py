"""Command-line front end: experiment orchestration, deterministic seeding,
line-delimited records, and the benchmark suites.

Records are one JSON object per line with sorted keys and compact separators,
so identical invocations (same argv and seed) are byte-identical apart from
the ``wall_time_s`` field.  Bench cells derive their seeds from the master
seed through ``numpy.random.SeedSequence([master, cell_index])`` and are
emitted in cell order regardless of execution order.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import TOL
from .errors import ValidationError
from . import numkernel as nk
from . import model
from .model import lindblad_spec
from .choi import choi_ff_evolve, is_choi_commuting
from .concentration import bernstein_bound, binomial_tail, hoeffding_bound
from .dilated import CostReport, default_steps, dilated_evolve
from .exact_oracle import lindblad_exact_hermitian
from .fastforward import ff_evolve, plan as make_plan
from .gibbs import exact_gibbs, gibbs_prepare
from .qpe import (amplitude_decision_demo, counting_estimator, fast_qpe,
                  fast_qpe_eigenstate, slow_qpe, slow_qpe_eigenstate,
                  standard_qpe, standard_qpe_eigenstate)
from .stateprep import (GaussianParams, binomial_amplitudes,
                        binomial_gaussian_distance,
                        discrete_gaussian_amplitudes, kw_angle_schedule)
from . import kernels


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass
class ExperimentRecord:
    """Self-contained run record: the command plus everything it produced."""

    command: list
    outputs: dict
    ham_digest: str | None = None
    seed: int | None = None
    cost: dict | None = None
    wall_time_s: float = 0.0
    artifact_version: str = __version__

    def to_json(self) -> str:
        payload = {
            "artifact_version": self.artifact_version,
            "command": self.command,
            "cost": self.cost,
            "ham_digest": self.ham_digest,
            "outputs": self.outputs,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def parse_record(line: str) -> dict:
    return json.loads(line)


def _digest(mat: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(mat).tobytes()).hexdigest()


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class _Emitter:
    def __init__(self, out_path: str | None):
        self._lines: list[str] = []
        if out_path:
            base = os.environ.get("LINDBLADFF_OUT_DIR", "")
            if base and not os.path.isabs(out_path):
                out_path = os.path.join(base, out_path)
        self._path = out_path

    def record(self, rec: ExperimentRecord):
        self._lines.append(rec.to_json())

    def text(self, text: str):
        self._lines.append(text.rstrip("\n"))

    def flush(self):
        body = "\n".join(self._lines) + ("\n" if self._lines else "")
        if self._path:
            with open(self._path, "w") as fh:
                fh.write(body)
        else:
            sys.stdout.write(body)


# ---------------------------------------------------------------------------
# Shared input handling
# ---------------------------------------------------------------------------

def _load_ham(path: str, fmt: str) -> np.ndarray:
    with open(path) as fh:
        return model.load_hamiltonian_text(fh.read(), fmt)


def _initial_state(spec: str, dim: int) -> np.ndarray:
    if spec == "plus":
        return np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)
    if spec == "zero":
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return v
    if spec.startswith("basis:"):
        k = int(spec.split(":", 1)[1])
        if not 0 <= k < dim:
            raise ValidationError(f"basis index {k} outside [0, {dim})")
        v = np.zeros(dim, dtype=complex)
        v[k] = 1.0
        return v
    if spec.startswith("file:"):
        with open(spec.split(":", 1)[1]) as fh:
            rows = model.parse_dense_matrix(fh.read())
        v = rows.reshape(-1)
        if v.size != dim:
            raise ValidationError(f"state file has {v.size} amplitudes, expected {dim}")
        return v / np.linalg.norm(v)
    raise ValidationError(f"unknown state spec {spec!r}")


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _fit_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(np.asarray(xs, dtype=float)),
                            np.log(np.asarray(ys, dtype=float)), 1)[0])


def _cell_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([master, index]).generate_state(1)[0])


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_evolve(args, argv, emit: _Emitter):
    t0 = time.perf_counter()
    if args.method == "choi-ff":
        jumps, digest = _load_jump_list(args.jumps)
        spec = lindblad_spec(jumps)
        rho0_vec = _initial_state(args.state, spec.dim)
        rho, cost = choi_ff_evolve(spec, rho0_vec, args.t, args.eps)
        passes, worst = is_choi_commuting(spec)
        outputs = {
            "method": args.method,
            "rho_out": model.format_dense_matrix(rho),
            "choi_commuting": passes,
            "max_commutator": worst,
        }
        emit.record(ExperimentRecord(argv, _jsonable(outputs), digest, args.seed,
                                     cost.as_dict(), time.perf_counter() - t0))
        return

    mat = _load_ham(args.ham, args.format)
    digest = _digest(mat)
    ham = model.normalize_spectrum(mat)
    psi = _initial_state(args.state, ham.dim)
    outputs = {"method": args.method}
    if args.method == "ff":
        p = make_plan(args.t, args.eps, args.N)
        rho, _, cost = ff_evolve(ham, psi, p)
        outputs["plan"] = {
            "N": p.n, "c": p.c, "d": p.d, "dprime": p.dprime,
            "tau": p.tau, "window": list(p.window), "full_window": p.full_window,
            "mod_convention": "2^d", "note": p.note,
        }
    elif args.method == "dilated":
        steps = args.steps if args.steps else default_steps(args.t, args.eps)
        if steps > TOL.cli_step_override and not args.force:
            raise ValidationError(
                f"default step count {steps} exceeds {TOL.cli_step_override}; "
                f"pass --force to run anyway or --steps to reduce"
            )
        rho, cost = dilated_evolve(ham.matrix, np.outer(psi, psi.conj()), args.t, steps)
    elif args.method == "exact":
        rho = lindblad_exact_hermitian(ham, np.outer(psi, psi.conj()), args.t)
        cost = CostReport(0.0, 0, 0)
    else:
        raise ValidationError(f"unknown method {args.method!r}")
    outputs["rho_out"] = model.format_dense_matrix(rho)
    outputs["spectrum_map"] = {"scale": ham.spectrum_map.scale, "shift": ham.spectrum_map.shift}
    emit.record(ExperimentRecord(argv, _jsonable(outputs), digest, args.seed,
                                 cost.as_dict(), time.perf_counter() - t0))


def _load_jump_list(path: str) -> tuple[list[np.ndarray], str]:
    if not path:
        raise ValidationError("--jumps FILE is required for method choi-ff")
    base = os.path.dirname(os.path.abspath(path))
    jumps = []
    hasher = hashlib.sha256()
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            ref = parts[0]
            rate = float(parts[1]) if len(parts) > 1 else 1.0
            with open(os.path.join(base, ref)) as jf:
                mat = model.load_hamiltonian_text(jf.read(), "auto")
            jump = math.sqrt(rate) * mat
            hasher.update(np.ascontiguousarray(jump).tobytes())
            jumps.append(jump)
    return jumps, hasher.hexdigest()


def _cmd_qpe(args, argv, emit: _Emitter):
    t0 = time.perf_counter()
    mat = _load_ham(args.ham, args.format)
    digest = _digest(mat)
    ham = model.normalize_spectrum(mat)
    if args.mode == "prepare":
        ham = model.shift_to_zero(ham, args.eigen)
    psi = _initial_state(args.state, ham.dim)
    state = model.decompose_state(psi, ham)

    if args.mode == "estimate":
        target = (args.eps_target, args.delta) if args.eps_target else None
        if args.route == "standard":
            res = standard_qpe(ham, state, args.d, args.dist_mode, args.seed, target,
                               args.repeats)
        elif args.route == "slow":
            res = slow_qpe(ham, state, args.t, args.N, args.dist_mode, args.seed, target,
                           args.repeats)
        else:
            p = make_plan(args.t, args.eps, args.N)
            res = fast_qpe(ham, state, p, args.dist_mode, args.seed, target, args.repeats)
        outputs = {
            "route": args.route,
            "estimate": res.estimate,
            "estimate_normalized": res.estimate_normalized,
            "raw_outcome": res.raw_outcome,
            "saturated": res.saturated,
        }
        if res.distribution is not None and res.distribution.size <= 4097:
            outputs["distribution"] = res.distribution
        emit.record(ExperimentRecord(argv, _jsonable(outputs), digest, args.seed,
                                     res.cost.as_dict(), time.perf_counter() - t0))
        return

    if args.route == "standard":
        prep = standard_qpe_eigenstate(ham, state, args.eigen, args.d)
    elif args.route == "slow":
        prep = slow_qpe_eigenstate(ham, state, args.eigen, args.t, args.N)
    else:
        eps = args.eps
        if args.zeta is not None:
            eps = (float(state.coeffs[args.eigen]) * args.zeta) ** 2
        p = make_plan(args.t, eps, args.N)
        prep = fast_qpe_eigenstate(ham, state, args.eigen, p)
    outputs = {
        "route": args.route,
        "postselect_probability": prep.postselect_probability,
        "overlap": prep.overlap,
        "overlap_bound": prep.overlap_bound,
        "expected_repeats": prep.expected_repeats,
        "ideal_amplification_queries": prep.ideal_amplification_queries,
        "state": model.format_dense_matrix(prep.state.reshape(1, -1)),
    }
    cost = prep.cost.as_dict() if prep.cost else None
    emit.record(ExperimentRecord(argv, _jsonable(outputs), digest, args.seed,
                                 cost, time.perf_counter() - t0))


def _cmd_gibbs(args, argv, emit: _Emitter):
    mat = _load_ham(args.ham, args.format)
    digest = _digest(mat)
    csv_rows = ["beta,hamiltonian_time,fidelity,partition_estimate,partition_exact"]
    for beta in _parse_floats(args.beta):
        t0 = time.perf_counter()
        res = gibbs_prepare(mat, beta, args.eps)
        _, z_exact = exact_gibbs(mat, beta)
        outputs = {
            "beta": beta,
            "fidelity": res.fidelity,
            "partition_estimate": res.partition_estimate,
            "partition_exact": z_exact,
            "ideal_amplification_queries": res.ideal_amplification_queries,
            "reduced_state": model.format_dense_matrix(res.reduced_state),
        }
        emit.record(ExperimentRecord(argv, _jsonable(outputs), digest, args.seed,
                                     res.cost.as_dict(), time.perf_counter() - t0))
        csv_rows.append(f"{beta},{res.cost.hamiltonian_time},{res.fidelity},"
                        f"{res.partition_estimate},{z_exact}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("\n".join(csv_rows) + "\n")
    else:
        for row in csv_rows:
            emit.text(row)


def _cmd_ae_demo(args, argv, emit: _Emitter):
    t0 = time.perf_counter()
    if args.oracle:
        with open(args.oracle) as fh:
            bits = np.array([int(ch) for ch in fh.read().split()], dtype=int)
    else:
        bits = np.zeros(1 << args.n, dtype=int)
        bits[: args.witnesses] = 1
    runs = []
    correct = 0
    for k in range(args.runs):
        seed = _cell_seed(args.seed or 0, k)
        dec = amplitude_decision_demo(bits, t=args.t, register_n=args.N,
                                      eps=args.eps, mode="sample", seed=seed)
        runs.append({"decided_zero": dec.decided_zero, "correct": dec.correct,
                     "estimate_phase": dec.estimate_phase})
        correct += int(dec.correct)
    outputs = {
        "witness_count": int(bits.sum()),
        "amplitude": 2.0 ** (-math.log2(bits.size) / 2.0) * math.sqrt(bits.sum()),
        "threshold": math.asin(math.sqrt(1.0 / bits.size)),
        "runs": runs,
        "accuracy": correct / max(args.runs, 1),
    }
    emit.record(ExperimentRecord(argv, _jsonable(outputs), None, args.seed,
                                 None, time.perf_counter() - t0))


def _cmd_stateprep(args, argv, emit: _Emitter):
    if args.what == "binomial":
        amps = binomial_amplitudes(args.N)
        emit.text("m,amplitude")
        for m, a in enumerate(amps):
            emit.text(f"{m},{float(a)!r}")
    elif args.what == "gaussian":
        params = GaussianParams(args.mu, args.sigma, args.N)
        amps = discrete_gaussian_amplitudes(params)
        emit.text("m,amplitude")
        for m, a in enumerate(amps):
            emit.text(f"{m},{float(a)!r}")
    elif args.what == "angles":
        depth = args.depth or int(round(math.log2(args.N)))
        sched = kw_angle_schedule(GaussianParams(args.mu, args.sigma, 2 ** depth), depth)
        emit.text("level,path,angle")
        for level, angles in enumerate(sched):
            for path, angle in enumerate(angles):
                emit.text(f"{level},{path},{float(angle)!r}")
    elif args.what == "distance":
        emit.text("N,l2_distance")
        emit.text(f"{args.N},{binomial_gaussian_distance(args.N)!r}")
    else:
        raise ValidationError(f"unknown table {args.what!r}")


def _cmd_bounds(args, argv, emit: _Emitter):
    emit.text("N,p,c,exact_tail,bernstein,hoeffding,tail_le_bernstein,tail_le_hoeffding")
    violations = 0
    for n in _parse_ints(args.N_grid):
        for p in _parse_floats(args.p_grid):
            for c in _parse_floats(args.c_grid):
                tail = binomial_tail(n, p, c)
                bern = bernstein_bound(n, p, c)
                hoef = hoeffding_bound(n, c)
                ok_b = tail <= bern + 1e-15
                ok_h = tail <= hoef + 1e-15
                violations += (not ok_b) + (not ok_h and p == 0.5)
                emit.text(f"{n},{p},{c},{tail!r},{bern!r},{hoef!r},{ok_b},{ok_h}")
    emit.text(f"# violations={violations}")


# ---------------------------------------------------------------------------
# Bench suites
# ---------------------------------------------------------------------------

def _bench_ff_vs_dilated(args, argv, emit: _Emitter):
    mat = np.diag([0.0, 1.0]).astype(complex)
    ham = model.normalize_spectrum(mat)
    psi = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    rho0 = np.outer(psi, psi.conj())
    ts = _parse_floats(args.t or "1,2,4,8,16,32,64")
    emit.text("t,method,hamiltonian_time,steps,ancillas,trace_distance_to_exact")
    ff_costs, dil_costs = [], []
    for t in ts:
        exact = lindblad_exact_hermitian(ham, rho0, t)
        p = make_plan(t, args.eps)
        rho_ff, _, cost_ff = ff_evolve(ham, psi, p)
        ff_costs.append(cost_ff.hamiltonian_time)
        emit.text(f"{t},ff,{cost_ff.hamiltonian_time!r},{cost_ff.step_count},"
                  f"{cost_ff.ancilla_count},{nk.trace_distance(rho_ff, exact)!r}")
        steps = default_steps(t, args.eps)
        rho_d, cost_d = dilated_evolve(ham.matrix, rho0, t, steps)
        dil_costs.append(cost_d.hamiltonian_time)
        emit.text(f"{t},dilated,{cost_d.hamiltonian_time!r},{cost_d.step_count},"
                  f"{cost_d.ancilla_count},{nk.trace_distance(rho_d, exact)!r}")
    for name, costs, target, tol in (("ff", ff_costs, 0.5, 0.1),
                                     ("dilated", dil_costs, 2.0, 0.1)):
        slope = _fit_slope(ts, costs)
        verdict = abs(slope - target) <= tol + 1e-9
        emit.record(ExperimentRecord(
            argv, {"suite": "ff-vs-dilated", "series": name, "slope": slope,
                   "target": target, "tolerance": tol, "pass": bool(verdict)}))


def _bench_qpe_error(args, argv, emit: _Emitter):
    from .errors import CapacityError

    ham = model.normalize_spectrum(np.diag([0.0, 0.5, 1.0]).astype(complex))
    eigvec = np.array([0.0, 0.0, 1.0], dtype=complex)
    state = model.decompose_state(eigvec, ham)
    h_true = 1.0
    # default grid starts at t h^2 = 16, past the small-count Poisson regime
    ts = _parse_floats(args.t or "16,32,64,128")
    emit.text("t,route,cost,rms_error")
    slow_pts, fast_pts = [], []
    for t in ts:
        res = slow_qpe(ham, state, t, args.N_slow)
        rms = _dist_rms(res.distribution, t, args.N_slow, h_true)
        slow_pts.append((t, rms))
        emit.text(f"{t},slow,{t!r},{rms!r}")
        try:
            p = make_plan(t, args.eps, args.N_fast)
            resf = fast_qpe(ham, state, p)
        except (CapacityError, ValidationError) as exc:
            emit.text(f"{t},fast,skipped,{exc}")
            continue
        rmsf = _dist_rms(resf.distribution, t, p.n, h_true)
        fast_pts.append((resf.cost.hamiltonian_time, rmsf))
        emit.text(f"{t},fast,{resf.cost.hamiltonian_time!r},{rmsf!r}")
    slope_slow = _fit_slope([x for x, _ in slow_pts], [y for _, y in slow_pts])
    slope_fast = _fit_slope([x for x, _ in fast_pts], [y for _, y in fast_pts])
    emit.record(ExperimentRecord(argv, {
        "suite": "qpe-error", "series": "slow", "slope": slope_slow,
        "target": -0.5, "tolerance": 0.1,
        "pass": bool(abs(slope_slow + 0.5) <= 0.1 + 1e-9)}))
    emit.record(ExperimentRecord(argv, {
        "suite": "qpe-error", "series": "fast", "slope": slope_fast,
        "target": -1.0, "tolerance": 0.15,
        "pass": bool(abs(slope_fast + 1.0) <= 0.15 + 1e-9)}))


def _dist_rms(dist: np.ndarray, t: float, n: int, h_true: float) -> float:
    est, _ = counting_estimator(t, n, np.arange(dist.size))
    return float(math.sqrt(np.sum(dist * (est - h_true) ** 2)))


def _bench_gibbs_beta(args, argv, emit: _Emitter):
    mat = np.diag([0.0, 1.0]).astype(complex)
    betas = _parse_floats(args.beta)
    emit.text("beta,hamiltonian_time,fidelity")
    costs = []
    for beta in betas:
        res = gibbs_prepare(mat, beta, args.eps)
        costs.append(res.cost.hamiltonian_time)
        emit.text(f"{beta},{res.cost.hamiltonian_time!r},{res.fidelity!r}")
    slope = _fit_slope(betas, costs)
    emit.record(ExperimentRecord(argv, {
        "suite": "gibbs-beta", "slope": slope, "target": 0.5, "tolerance": 0.1,
        "pass": bool(abs(slope - 0.5) <= 0.1 + 1e-9)}))


def _bench_kernels(args, argv, emit: _Emitter):
    paths = kernels.both_paths()
    sizes = _parse_ints(args.N_grid)
    emit.text("kernel,N,path,seconds")
    for n in sizes:
        period = 1 << max(4, int(math.log2(max(math.sqrt(n), 2))))
        for name, fns in paths.items():
            fns["residue_weights"](n, period, -(n // 2 - period // 2))  # warm up / jit
            t0 = time.perf_counter()
            w = fns["residue_weights"](n, period, -(n // 2 - period // 2))
            emit.text(f"residue_weights,{n},{name},{time.perf_counter() - t0!r}")
            assert abs(float(np.sum(w)) - 1.0) < 1e-9
            fns["pmf_window"](n, 0.3)
            t0 = time.perf_counter()
            fns["pmf_window"](n, 0.3)
            emit.text(f"pmf_window,{n},{name},{time.perf_counter() - t0!r}")


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lindbladff",
        description="Fast-forwarded dephasing-Lindbladian simulation lab",
    )
    ap.add_argument("--out", help="write records to this file instead of stdout")
    sub = ap.add_subparsers(dest="cmd", required=True)

    ev = sub.add_parser("evolve", help="run one Lindblad evolution")
    ev.add_argument("--method", choices=["ff", "dilated", "exact", "choi-ff"], default="ff")
    ev.add_argument("--ham", help="Hamiltonian / jump file")
    ev.add_argument("--jumps", help="jump-list file (choi-ff)")
    ev.add_argument("--format", choices=["auto", "pauli", "dense"], default="auto")
    ev.add_argument("--t", type=float, required=True)
    ev.add_argument("--eps", type=float, default=0.1)
    ev.add_argument("--N", type=int, default=None, help="register-count override (ff)")
    ev.add_argument("--steps", type=int, default=None, help="step override (dilated)")
    ev.add_argument("--force", action="store_true",
                    help="allow dilated step counts above the safety cap")
    ev.add_argument("--state", default="plus")
    ev.add_argument("--seed", type=int, default=None)

    qp = sub.add_parser("qpe", help="phase estimation / eigenstate preparation")
    qp.add_argument("mode", nargs="?", choices=["estimate", "prepare"], default="estimate")
    qp.add_argument("--route", choices=["standard", "slow", "fast"], required=True)
    qp.add_argument("--ham", required=True)
    qp.add_argument("--format", choices=["auto", "pauli", "dense"], default="auto")
    qp.add_argument("--state", default="plus")
    qp.add_argument("--d", type=int, default=8, help="register bits (standard route)")
    qp.add_argument("--t", type=float, default=16.0)
    qp.add_argument("--N", type=int, default=None)
    qp.add_argument("--eps", type=float, default=1e-4, help="fast-plan window error")
    qp.add_argument("--eigen", type=int, default=0, help="target eigenspace (prepare)")
    qp.add_argument("--zeta", type=float, default=None,
                    help="preparation inaccuracy target; sets eps=(c_beta*zeta)^2")
    qp.add_argument("--eps-target", dest="eps_target", type=float, default=None)
    qp.add_argument("--delta", type=float, default=None)
    qp.add_argument("--mode", dest="dist_mode", choices=["exact", "sample"], default="exact")
    qp.add_argument("--repeats", type=int, default=1,
                    help="sample-mode repetitions, median outcome (default single-shot)")
    qp.add_argument("--seed", type=int, default=None)

    gb = sub.add_parser("gibbs", help="Gibbs-state preparation sweep")
    gb.add_argument("--ham", required=True, help="problem Hamiltonian (PSD, norm <= 1)")
    gb.add_argument("--format", choices=["auto", "pauli", "dense"], default="auto")
    gb.add_argument("--beta", default="1,2,4")
    gb.add_argument("--eps", type=float, default=0.05)
    gb.add_argument("--csv", help="write the beta-vs-cost CSV here")
    gb.add_argument("--seed", type=int, default=None)

    ae = sub.add_parser("ae-demo", help="amplitude-estimation decision demo")
    ae.add_argument("--n", type=int, default=4, help="oracle address bits")
    ae.add_argument("--witnesses", type=int, default=0)
    ae.add_argument("--oracle", help="file of 0/1 oracle values")
    ae.add_argument("--runs", type=int, default=1)
    ae.add_argument("--t", type=float, default=250.0)
    ae.add_argument("--N", type=int, default=2048)
    ae.add_argument("--eps", type=float, default=1e-5)
    ae.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("stateprep", help="amplitude tables and angle schedules")
    sp.add_argument("--what", choices=["binomial", "gaussian", "angles", "distance"],
                    required=True)
    sp.add_argument("--N", type=int, default=16)
    sp.add_argument("--mu", type=float, default=8.0)
    sp.add_argument("--sigma", type=float, default=2.0)
    sp.add_argument("--depth", type=int, default=None)

    bd = sub.add_parser("bounds", help="concentration-bound comparison grid")
    bd.add_argument("--N-grid", dest="N_grid", default="10,50,100,200")
    bd.add_argument("--p-grid", dest="p_grid", default="0.1,0.3,0.5,0.7,0.9")
    bd.add_argument("--c-grid", dest="c_grid", default="0.05,0.15,0.25,0.35,0.45")

    bn = sub.add_parser("bench", help="scaling benchmark suites")
    bn.add_argument("suite", choices=["ff-vs-dilated", "qpe-error", "gibbs-beta", "kernels"])
    bn.add_argument("--t", default=None,
                    help="time grid (default 1..64 for ff-vs-dilated, 16..128 for qpe-error)")
    bn.add_argument("--eps", type=float, default=0.1)
    bn.add_argument("--beta", default="1,2,4,8")
    bn.add_argument("--N-slow", dest="N_slow", type=int, default=1_000_000)
    bn.add_argument("--N-fast", dest="N_fast", type=int, default=4096)
    bn.add_argument("--N-grid", dest="N_grid", default="100000,1000000,10000000")
    bn.add_argument("--master-seed", dest="master_seed", type=int, default=0)
    return ap


_DISPATCH = {
    "evolve": _cmd_evolve,
    "qpe": _cmd_qpe,
    "gibbs": _cmd_gibbs,
    "ae-demo": _cmd_ae_demo,
    "stateprep": _cmd_stateprep,
    "bounds": _cmd_bounds,
}

_BENCH = {
    "ff-vs-dilated": _bench_ff_vs_dilated,
    "qpe-error": _bench_qpe_error,
    "gibbs-beta": _bench_gibbs_beta,
    "kernels": _bench_kernels,
}


def run(argv: list[str]) -> int:
    """Parse and execute one invocation; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    emit = _Emitter(args.out)
    try:
        if args.cmd == "bench":
            _BENCH[args.suite](args, argv, emit)
        else:
            if args.cmd == "evolve" and args.method != "choi-ff" and not args.ham:
                raise ValidationError("--ham FILE is required")
            _DISPATCH[args.cmd](args, argv, emit)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        import traceback

        traceback.print_exc()
        return 2
    emit.flush()
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
