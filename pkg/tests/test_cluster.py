import math

import numpy as np
import pytest

from cavity_ising.cluster import (PhaseGateSpec, apply_local_unitaries,
                                  canonical_cluster_state, find_local_unitaries,
                                  generate_cluster_state, ghz_equivalence_check,
                                  ghz_state, ising_phases,
                                  local_correction_phases, phase_gate_phases,
                                  phase_gate_unitary, stabilizer_expectations,
                                  stabilizer_report, su2_unitary)
from cavity_ising.errors import ConfigError
from cavity_ising.hilbert import QuantumState, SpaceLayout, fidelity

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def z_col(n, j):
    """sigma^z eigenvalue of qubit j per basis index, leftmost slowest."""
    bits = (np.arange(2 ** n) >> (n - 1 - j)) & 1
    return 1.0 - 2.0 * bits


# ------------------------------------------------------------- gate spec

def test_phase_gate_spec_validation():
    with pytest.raises(ConfigError):
        PhaseGateSpec(N=1, jz=1.0, t=1.0)
    with pytest.raises(ConfigError):
        PhaseGateSpec(N=3, jz=1.0, t=1.0, boundary="ring")
    spec = PhaseGateSpec(N=3, jz=0.25, t=2.0)
    assert spec.phi == 0.5
    via_phase = PhaseGateSpec.from_phase(4, math.pi, "periodic")
    assert via_phase.phi == pytest.approx(math.pi)
    assert via_phase.N == 4 and via_phase.boundary == "periodic"


def test_phase_gate_is_corrections_times_quarter_ising():
    # defining identity: U_p(phi) = C(phi) * exp(-i (phi/4) sum sz sz)
    rng = np.random.default_rng(11)
    for n in range(2, 7):
        for boundary in ("open", "periodic"):
            for _ in range(4):
                jz, t = rng.uniform(0.1, 2.0, 2)
                spec = PhaseGateSpec(N=n, jz=jz, t=t, boundary=boundary)
                quarter = PhaseGateSpec(N=n, jz=jz, t=t / 4.0, boundary=boundary)
                lhs = phase_gate_phases(spec)
                rhs = local_correction_phases(spec) * ising_phases(quarter)
                assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_ring_corrections_are_global_phase():
    # on a ring each site is left of one bond and right of another, so the
    # single-qubit factors cancel and only e^{i N phi / 4} survives
    rng = np.random.default_rng(5)
    for n in range(2, 7):
        phi = rng.uniform(0.2, 2.0 * math.pi)
        spec = PhaseGateSpec.from_phase(n, phi, "periodic")
        phases = local_correction_phases(spec)
        expected = np.exp(1j * n * phi / 4.0)
        assert np.max(np.abs(phases - expected)) < 1e-12


def test_open_corrections_act_on_chain_ends():
    # open chain: interior sites cancel, the z-rotations survive only at
    # the two ends (+phi/4 on the left end, -phi/4 on the right end)
    n, phi = 4, 1.3
    spec = PhaseGateSpec.from_phase(n, phi, "open")
    phases = local_correction_phases(spec)
    bonds = n - 1
    expected = np.exp(1j * 0.25 * phi * (bonds + z_col(n, 0) - z_col(n, n - 1)))
    assert np.max(np.abs(phases - expected)) < 1e-12


def test_pi_gate_two_qubit_matrix():
    # at phi = pi the two-qubit gate is diag(1, -1, 1, 1): the minus sign
    # sits on |01> (up at the left site, down at the right)
    spec = PhaseGateSpec.from_phase(2, math.pi, "open")
    op = phase_gate_unitary(spec)
    assert np.allclose(op.matrix, np.diag([1.0, -1.0, 1.0, 1.0]), atol=1e-10)


def test_pi_gate_matches_projector_form():
    # same gate written as prod_bonds [I + (e^{i phi} - 1) P_up P_down]
    rng = np.random.default_rng(23)
    for n, boundary in ((2, "open"), (3, "open"), (3, "periodic"), (4, "open")):
        phi = math.pi
        up = 0.5 * (np.eye(2) + SZ)
        down = 0.5 * (np.eye(2) - SZ)
        mat = np.eye(2 ** n, dtype=complex)
        for j, k in _bonds(n, boundary):
            proj = _two_site(n, j, up, k, down)
            mat = mat @ (np.eye(2 ** n) + (np.exp(1j * phi) - 1.0) * proj)
        spec = PhaseGateSpec.from_phase(n, phi, boundary)
        assert np.max(np.abs(np.diag(mat) - phase_gate_phases(spec))) < 1e-10
        psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        psi /= np.linalg.norm(psi)
        a = mat @ psi
        b = phase_gate_phases(spec) * psi
        assert abs(abs(np.vdot(a, b)) - 1.0) < 1e-10


def _bonds(n, boundary):
    pairs = [(j, j + 1) for j in range(n - 1)]
    if boundary == "periodic":
        pairs.append((n - 1, 0))
    return pairs


def _two_site(n, j, opj, k, opk):
    ops = [np.eye(2, dtype=complex)] * n
    ops[j] = opj
    ops[k] = opk
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


# --------------------------------------------------------- cluster states

def test_generated_state_is_z_flipped_canonical():
    # the pi gate output differs from the graph state by a sigma^z on the
    # right-hand site of every bond
    for n in (2, 3, 4, 5):
        for boundary in ("open", "periodic"):
            gen = generate_cluster_state(n, boundary)
            can = canonical_cluster_state(n, boundary)
            sign = np.ones(2 ** n)
            for _, k in _bonds(n, boundary):
                sign = sign * z_col(n, k)
            overlap = np.vdot(gen.amplitudes, sign * can.amplitudes)
            assert abs(overlap - 1.0) < 1e-12


def test_generated_state_needs_two_qubits():
    with pytest.raises(ConfigError):
        generate_cluster_state(1)
    with pytest.raises(ConfigError):
        canonical_cluster_state(1)


def test_canonical_state_stabilizers():
    for n in (2, 3, 4, 5):
        for boundary in ("open", "periodic"):
            state = canonical_cluster_state(n, boundary)
            expect = stabilizer_expectations(state, boundary)
            assert np.max(np.abs(expect - 1.0)) < 1e-12


def test_plus_product_stabilizers_vanish():
    expect = stabilizer_expectations(QuantumState.plus_product(3), "open")
    assert np.max(np.abs(expect)) < 1e-12


def test_stabilizers_reject_mode_layouts():
    lay = SpaceLayout.atoms_and_modes(1, 2)
    amps = np.zeros(lay.total_dim, dtype=complex)
    amps[0] = 1.0
    with pytest.raises(ConfigError):
        stabilizer_expectations(QuantumState(lay, amps))


def test_corrected_generated_state_report():
    # applying the z flips by hand must recover the canonical state exactly
    for n, boundary in ((2, "open"), (2, "periodic"), (4, "open"), (4, "periodic")):
        gen = generate_cluster_state(n, boundary)
        us = [np.eye(2, dtype=complex)] * n
        for _, k in _bonds(n, boundary):
            us[k] = us[k] @ SZ
        corrected = apply_local_unitaries(gen, us)
        report = stabilizer_report(corrected, boundary)
        assert report.all_plus_one(tol=1e-10)
        assert report.fidelity == pytest.approx(1.0, abs=1e-12)
        assert report.witness_params is None


def test_stabilizer_report_json():
    report = stabilizer_report(canonical_cluster_state(2), "open",
                               witness_params=(0.1, 0.2))
    doc = report.to_json_dict()
    assert set(doc) == {"boundary", "stabilizer_expectations", "fidelity",
                        "witness_params"}
    assert doc["witness_params"] == [0.1, 0.2]
    assert "fidelity" in report.to_json_string()


# ------------------------------------------------------------ local gates

def test_su2_unitary_is_unitary():
    rng = np.random.default_rng(3)
    for _ in range(20):
        u = su2_unitary(*rng.uniform(-4.0, 4.0, 3))
        assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-12)
    assert np.allclose(su2_unitary(0.0, 0.0, 0.0), np.eye(2), atol=1e-12)
    a = 0.7
    expected = math.cos(a) * np.eye(2) - 1j * math.sin(a) * SX
    assert np.allclose(su2_unitary(a, 0.0, 0.0), expected, atol=1e-12)


def test_apply_local_unitaries_matches_kron():
    rng = np.random.default_rng(17)
    n = 3
    us = [su2_unitary(*rng.uniform(-2.0, 2.0, 3)) for _ in range(n)]
    full = np.array([[1.0 + 0j]])
    for u in us:
        full = np.kron(full, u)
    psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    psi /= np.linalg.norm(psi)
    state = QuantumState(SpaceLayout.qubits(n), psi)
    out = apply_local_unitaries(state, us)
    assert np.allclose(out.amplitudes, full @ psi, atol=1e-12)
    with pytest.raises(ConfigError):
        apply_local_unitaries(state, us[:2])


def test_find_local_unitaries_identity_start():
    state = canonical_cluster_state(3)
    search = find_local_unitaries(state, state)
    assert search.fidelity > 1.0 - 1e-9
    assert search.restarts == 12 and search.seed == 7
    assert len(search.unitaries()) == 3


def test_find_local_unitaries_recovers_cluster():
    # generated pi-gate output is locally equivalent to the graph state;
    # the witness search must certify it without being told the z flips
    for n in (2, 3, 4):
        search = find_local_unitaries(generate_cluster_state(n),
                                      canonical_cluster_state(n))
        assert search.fidelity > 1.0 - 1e-6
        fixed = apply_local_unitaries(generate_cluster_state(n),
                                      search.unitaries())
        assert fidelity(fixed, canonical_cluster_state(n)) > 1.0 - 1e-6


def test_find_local_unitaries_layout_mismatch():
    with pytest.raises(ConfigError):
        find_local_unitaries(canonical_cluster_state(2),
                             canonical_cluster_state(3))


# -------------------------------------------------------------------- ghz

def test_ghz_state_amplitudes():
    state = ghz_state(3)
    amps = state.amplitudes
    assert amps[0] == pytest.approx(1.0 / math.sqrt(2.0))
    assert amps[-1] == pytest.approx(1.0 / math.sqrt(2.0))
    assert np.max(np.abs(amps[1:-1])) == 0.0


def test_ghz_check_accepts_ghz_and_cluster():
    res = ghz_equivalence_check(ghz_state(3))
    assert res.passed and res.fidelity > 1.0 - 1e-6
    assert max(abs(s - 1.0) for s in res.single_entropies) < 1e-9
    assert max(abs(s - 1.0) for s in res.pair_entropies) < 1e-9
    # the three-qubit chain cluster state is GHZ up to local unitaries
    res = ghz_equivalence_check(generate_cluster_state(3))
    assert res.passed and res.fidelity > 1.0 - 1e-6


def test_ghz_check_rejects_w_state():
    amps = np.zeros(8, dtype=complex)
    for idx in (1, 2, 4):
        amps[idx] = 1.0 / math.sqrt(3.0)
    res = ghz_equivalence_check(QuantumState(SpaceLayout.qubits(3), amps))
    assert not res.passed
    assert res.fidelity is None and res.witness is None


def test_ghz_check_needs_three_qubits():
    with pytest.raises(ConfigError):
        ghz_equivalence_check(canonical_cluster_state(2))
