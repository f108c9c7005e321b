"""Acceptance gate: one test per release criterion, run with -v for the
scorecard. Each test prints its measured numbers before asserting, so a red
criterion still documents what was observed.

The comparison criteria run at n_max=3. The built-in Fock guard (criterion
6d) rejects n_max=2 from its own 2->4 check, and reports that fail the guard
are excluded from acceptance evidence; n_max=3 passes its 3->5 check with
two orders of magnitude to spare and is the smallest admissible cutoff.
"""

import math

import numpy as np
import pytest

from cavity_ising.cluster import (PhaseGateSpec, ising_phases,
                                  local_correction_phases, phase_gate_phases)
from cavity_ising.dynamics import EvolutionSpec, propagator, sample_states
from cavity_ising.experiments import (reference_config, reference_params,
                                      run_cluster, run_comparison, run_sweep)
from cavity_ising.hilbert import (QuantumState, partial_trace,
                                  von_neumann_entropy)
from cavity_ising.model import (build_ising_hamiltonian,
                                build_rotating_hamiltonian,
                                calibrate_jz_report)


@pytest.fixture(scope="module")
def reference_report():
    """The benchmark comparison: Omega=50, g=0.1, Jc=0.02, detuning 1 GHz,
    N=2 ring, ground-vacuum start, one effective period, 400 samples,
    calibrated J_z."""
    return run_comparison(reference_config())


def scorecard(criterion: str, passed: bool, detail: str) -> None:
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")


def test_criterion_1_ground_population_within_2_percent(reference_report):
    cmp_ = reference_report.comparison
    passed = cmp_.max_rel_diff < 0.02
    scorecard("1", passed,
              f"max relative p_g1g2 discrepancy {cmp_.max_rel_diff:.4f} "
              f"(threshold 0.02, {cmp_.rel_points_used} points above the "
              f"0.02 relative floor); max absolute {cmp_.max_abs_diff:.5f}. "
              "The absolute discrepancy stays below 0.02 everywhere, but "
              "relative error peaks where p_g1g2 itself is small (~0.2 near "
              "the half period), so the relative form of the bound fails.")
    assert passed, (
        f"relative discrepancy {cmp_.max_rel_diff:.4f} exceeds 0.02; the "
        f"absolute discrepancy {cmp_.max_abs_diff:.5f} does satisfy 0.02")


def test_criterion_2_photon_occupation_below_0_01(reference_report):
    col = reference_report.full_series.channels["n_photon_1"]
    passed = bool(np.all(col < 0.01))
    scorecard("2", passed,
              f"max <n_1> = {np.max(col):.7f} over {col.size} samples, "
              "strict < 0.01 at every sample")
    assert col.size == 400
    assert passed


def test_criterion_3_entanglement_at_odd_quarter_periods(reference_report):
    jz = reference_report.jz_used
    h = build_ising_hamiltonian(2, jz, "open")
    psi0 = QuantumState.plus_product(2)
    worst = 0.0
    for k in range(3):
        t = (2 * k + 1) * math.pi / (4.0 * jz)
        _, vecs, _ = sample_states(psi0, EvolutionSpec(h, 0.0, t, 2))
        state = QuantumState(psi0.layout, vecs[-1])
        ent = von_neumann_entropy(partial_trace(state, [0]))
        worst = max(worst, abs(ent - 1.0))
    passed = worst < 1e-6
    scorecard("3", passed,
              f"E_vN(site 1) deviates from 1 by at most {worst:.2e} at "
              "t=(2n+1)pi/(4 J_z), n=0,1,2 (tolerance 1e-6)")
    assert passed


def test_criterion_4_pi_gate_projector_identity():
    sz = np.diag([1.0, -1.0]).astype(complex)
    p_up = np.diag([1.0, 0.0]).astype(complex)    # z=+1 eigenstate first
    p_down = np.diag([0.0, 1.0]).astype(complex)
    projector_form = np.kron(p_down, np.eye(2)) + np.kron(p_up, sz)
    gate = np.diag(phase_gate_phases(PhaseGateSpec.from_phase(2, math.pi)))
    err = float(np.max(np.abs(gate - projector_form)))
    plus = np.full(4, 0.5, dtype=complex)
    from cavity_ising.cluster import generate_cluster_state
    fid = float(abs(np.vdot(projector_form @ plus,
                            generate_cluster_state(2).amplitudes)) ** 2)
    passed = err < 1e-10 and fid > 1.0 - 1e-10
    scorecard("4", passed,
              f"matrix deviation {err:.2e} (tol 1e-10); action on |++> "
              f"fidelity 1-{1 - fid:.2e}")
    assert err < 1e-10
    assert fid > 1.0 - 1e-10


def test_criterion_5_ghz_and_four_site_verification():
    rep3 = run_cluster(3, "open")
    rep4 = run_cluster(4, "open")
    stab_dev = max(abs(e - 1.0)
                   for e in rep4.stabilizers_after_witness.expectations)
    passed = (rep3.ghz.passed
              and rep4.witness.fidelity > 1.0 - 1e-6
              and stab_dev < 1e-8)
    scorecard("5", passed,
              f"N=3 GHZ-equivalent: {rep3.ghz.passed} (fidelity "
              f"{rep3.ghz.fidelity:.9f}); N=4 witness fidelity "
              f"{rep4.witness.fidelity:.12f} (> 1-1e-6); stabilizers after "
              f"the found unitaries within {stab_dev:.2e} of +1 (tol 1e-8)")
    assert rep3.ghz.passed
    assert rep4.witness.fidelity > 1.0 - 1e-6
    assert stab_dev < 1e-8


def test_criterion_6a_dynamics_invariants():
    h = build_rotating_hamiltonian(reference_params(n_max=1))
    herm = float(np.max(np.abs(h.matrix - h.matrix.conj().T)))
    u1 = propagator(h, 0.3).matrix
    u2 = propagator(h, 0.7).matrix
    u12 = propagator(h, 1.0).matrix
    unit = float(np.max(np.abs(u1 @ u1.conj().T - np.eye(len(u1)))))
    comp = float(np.max(np.abs(u2 @ u1 - u12)))
    passed = herm < 1e-12 and unit < 1e-12 and comp < 1e-12
    scorecard("6a", passed,
              f"hermiticity {herm:.1e}, unitarity {unit:.1e}, "
              f"composition {comp:.1e} (tol 1e-12 each)")
    assert passed


def test_criterion_6b_local_corrections_identity():
    rng = np.random.default_rng(2)
    worst = 0.0
    for n in range(2, 7):
        for boundary in ("open", "periodic"):
            jz, t = rng.uniform(0.1, 2.0, 2)
            spec = PhaseGateSpec(N=n, jz=jz, t=t, boundary=boundary)
            quarter = PhaseGateSpec(N=n, jz=jz, t=t / 4.0, boundary=boundary)
            err = np.max(np.abs(phase_gate_phases(spec)
                                - local_correction_phases(spec)
                                * ising_phases(quarter)))
            worst = max(worst, float(err))
    passed = worst < 1e-10
    scorecard("6b", passed,
              f"U_p = C * quarter-phase Ising holds to {worst:.2e} for "
              "N=2..6, both boundaries (tol 1e-10)")
    assert passed


def test_criterion_6c_ring_correction_cancellation():
    worst = 0.0
    for n in range(2, 7):
        phi = 0.9 + 0.3 * n
        phases = local_correction_phases(
            PhaseGateSpec.from_phase(n, phi, "periodic"))
        worst = max(worst, float(np.max(np.abs(
            phases - np.exp(1j * n * phi / 4.0)))))
    passed = worst < 1e-12
    scorecard("6c", passed,
              "periodic-chain corrections reduce to the global phase "
              f"e^(i N phi/4) to {worst:.2e}")
    assert passed


def test_criterion_6d_fock_convergence_from_n_max_2():
    report = run_comparison(reference_config(n_max=2),
                            strict_convergence=False)
    changes = report.convergence.channel_changes
    worst = report.convergence.max_change()
    passed = worst < 1e-4
    scorecard("6d", passed,
              "n_max 2->4 pointwise channel changes: "
              + ", ".join(f"{k}={v:.2e}" for k, v in sorted(changes.items()))
              + " (threshold 1e-4). The 2->4 change is dominated by the "
              "photon and entropy channels; the same check at n_max=3 "
              "(3->5) passes with margin, which is why acceptance runs "
              "use n_max=3.")
    assert passed, (
        f"n_max=2 is not a converged cutoff: max change {worst:.2e} >= 1e-4 "
        "against n_max=4 (n_max=3 passes its own 3->5 check)")


def test_criterion_6e_discrepancy_shrinks_with_drive():
    points = run_sweep(reference_config(), "Omega", [5.0, 15.0, 50.0])
    by_omega = {pt.value: pt for pt in points}
    a, b, c = (by_omega[v].max_abs_diff for v in (5.0, 15.0, 50.0))
    passed = a > b > c
    scorecard("6e", passed,
              f"max |full - effective| on p_g1g2: {a:.5f} (Omega=5) > "
              f"{b:.5f} (Omega=15) > {c:.5f} (Omega=50); relative form "
              + ", ".join(f"{by_omega[v].max_rel_diff:.4f}" for v in (5.0, 15.0, 50.0)))
    assert passed
    assert all(by_omega[v].error is None for v in (5.0, 15.0, 50.0))


def test_criterion_7_jz_matches_an_analytic_convention(reference_report):
    cal = calibrate_jz_report(reference_params(n_max=2))
    rel_lit = abs(cal.jz / cal.jz_paper_literal - 1.0)
    rel_norm = abs(cal.jz / cal.jz_normalized - 1.0)
    passed = (min(rel_lit, rel_norm) < 0.10
              and cal.convention == "normalized")
    scorecard("7", passed,
              f"calibrated J_z {cal.jz:.9e} GHz sits {rel_norm:.2e} from "
              f"the normalized convention ({cal.jz_normalized:.9e}) and "
              f"{rel_lit:.2e} from the per-ring-total one "
              f"({cal.jz_paper_literal:.9e}); documented match: "
              f"{cal.convention}")
    assert passed
    # the comparison criteria above actually used the calibrated value
    assert reference_report.config.jz_convention == "calibrated"
    assert reference_report.jz_used == reference_report.calibration.jz
