import numpy as np
import pytest

from cavity_ising.hilbert import (CavityMode, DensityMatrix, LinearOp,
                                  QuantumState, Qubit, SpaceLayout, apply,
                                  destroy, embed_local, fidelity,
                                  partial_trace, von_neumann_entropy)


def qubit_layout(n):
    return SpaceLayout(tuple(Qubit() for _ in range(n)))


def test_destroy_matrix_elements():
    a = destroy(3)
    assert a.shape == (4, 4)
    expected = np.diag(np.sqrt([1.0, 2.0, 3.0]), k=1)
    np.testing.assert_allclose(a, expected)


def test_destroy_rejects_zero_cutoff():
    with pytest.raises(ValueError):
        destroy(0)


def test_layout_dims_and_total():
    lay = SpaceLayout((Qubit(), CavityMode(2), Qubit()))
    assert lay.dims == (2, 3, 2)
    assert lay.total_dim == 12


def test_layout_basis_index_round_trip():
    lay = SpaceLayout((Qubit(), CavityMode(3), CavityMode(2), Qubit()))
    rng = np.random.default_rng(11)
    for _ in range(25):
        occ = tuple(int(rng.integers(0, d)) for d in lay.dims)
        idx = lay.basis_index(occ)
        psi = lay.basis_state(occ)
        assert psi.amplitudes[idx] == 1.0
        assert np.count_nonzero(psi.amplitudes) == 1
    # leftmost factor is the slowest axis
    assert lay.basis_index((1, 0, 0, 0)) == lay.total_dim // 2
    with pytest.raises(ValueError):
        lay.basis_index((0, 0))
    with pytest.raises(ValueError):
        lay.basis_index((0, 4, 0, 0))


def test_layout_atoms_and_modes_ordering():
    lay = SpaceLayout.atoms_and_modes(2, 2)
    assert lay.dims == (2, 2, 3, 3)


def test_state_normalization_and_lock():
    lay = qubit_layout(2)
    raw = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex)
    psi = QuantumState(lay, raw)
    raw[0] = 99.0  # input array was copied
    assert psi.amplitudes[0] == 1.0
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 5.0
    np.testing.assert_allclose(psi.normalized().norm(), 1.0)


def test_plus_product_state():
    psi = QuantumState.plus_product(3)
    np.testing.assert_allclose(psi.amplitudes, np.full(8, 8 ** -0.5))
    np.testing.assert_allclose(psi.norm(), 1.0)


def test_linear_op_flag_validation():
    lay = qubit_layout(1)
    with pytest.raises(ValueError):
        LinearOp(lay, np.array([[0.0, 1.0], [0.0, 0.0]]), hermitian=True)
    with pytest.raises(ValueError):
        LinearOp(lay, np.array([[1.0, 1.0], [0.0, 1.0]]), unitary=True)


def test_linear_op_algebra_and_flags():
    lay = qubit_layout(1)
    x = LinearOp(lay, np.array([[0, 1], [1, 0]], dtype=complex),
                 hermitian=True, unitary=True)
    z = LinearOp(lay, np.diag([1.0, -1.0]).astype(complex),
                 hermitian=True, unitary=True, diagonal=True)
    prod = x @ z
    assert prod.unitary
    assert not prod.diagonal
    s = x + z
    assert s.hermitian
    assert (2.0 * z).diagonal
    np.testing.assert_allclose(x.dagger().matrix, x.matrix)
    ident = LinearOp.identity(lay)
    np.testing.assert_allclose((ident @ x).matrix, x.matrix)


def test_expectation_real_for_hermitian():
    lay = qubit_layout(1)
    z = LinearOp(lay, np.diag([1.0, -1.0]).astype(complex), hermitian=True)
    psi = QuantumState(lay, np.array([1.0, 0.0], dtype=complex))
    assert z.expectation(psi) == pytest.approx(1.0)


def test_embed_local_matches_kron():
    rng = np.random.default_rng(5)
    lay = SpaceLayout((Qubit(), CavityMode(2), Qubit()))
    local = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    op = embed_local(lay, 1, local)
    expected = np.kron(np.kron(np.eye(2), local), np.eye(2))
    np.testing.assert_allclose(op.matrix, expected)


def test_embed_local_infers_flags():
    lay = qubit_layout(2)
    z = np.diag([1.0, -1.0]).astype(complex)
    op = embed_local(lay, 0, z)
    assert op.hermitian and op.unitary and op.diagonal


def test_apply_does_not_normalize():
    lay = qubit_layout(1)
    sp = LinearOp(lay, np.array([[0, 0], [1, 0]], dtype=complex))
    psi = QuantumState(lay, np.array([0.6, 0.8], dtype=complex))
    out = apply(sp, psi)
    np.testing.assert_allclose(out.amplitudes, [0.0, 0.6])


def test_partial_trace_product_state_is_pure():
    rng = np.random.default_rng(7)
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    b = rng.normal(size=3) + 1j * rng.normal(size=3)
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    lay = SpaceLayout((Qubit(), CavityMode(2)))
    psi = QuantumState(lay, np.kron(a, b))
    rho = partial_trace(psi, [0])
    np.testing.assert_allclose(rho.matrix, np.outer(a, a.conj()), atol=1e-12)
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-10)


def test_partial_trace_bell_state_maximally_mixed():
    lay = qubit_layout(2)
    bell = QuantumState(lay, np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))
    rho = partial_trace(bell, [1])
    np.testing.assert_allclose(rho.matrix, np.eye(2) / 2, atol=1e-12)
    assert von_neumann_entropy(rho) == pytest.approx(1.0)


def test_partial_trace_state_and_density_paths_agree():
    """Tracing a pure state directly must match tracing its density matrix."""
    rng = np.random.default_rng(13)
    lay = SpaceLayout((Qubit(), CavityMode(2), Qubit()))
    for keep in ([0], [2], [0, 2], [1], [0, 1, 2]):
        amps = rng.normal(size=lay.total_dim) + 1j * rng.normal(size=lay.total_dim)
        psi = QuantumState(lay, amps / np.linalg.norm(amps))
        rho_full = DensityMatrix(lay.dims,
                                 np.outer(psi.amplitudes, psi.amplitudes.conj()))
        r1 = partial_trace(psi, keep)
        r2 = partial_trace(rho_full, keep)
        np.testing.assert_allclose(r1.matrix, r2.matrix, atol=1e-12)
        assert r1.dims == tuple(lay.dims[k] for k in keep)


def test_partial_trace_rejects_bad_sites():
    psi = QuantumState.plus_product(2)
    with pytest.raises(ValueError):
        partial_trace(psi, [2])
    with pytest.raises(ValueError):
        partial_trace(psi, [])
    # duplicates collapse to one kept site
    rho = partial_trace(psi, [0, 0])
    assert rho.dims == (2,)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix((2,), np.array([[0.7, 0.1], [0.3, 0.3]]))  # not hermitian
    with pytest.raises(ValueError):
        DensityMatrix((2,), np.eye(2))  # trace 2


def test_entropy_of_uniform_mixture():
    rho = DensityMatrix((2, 2), np.eye(4) / 4)
    assert von_neumann_entropy(rho) == pytest.approx(2.0)


def test_entropy_rejects_negative_eigenvalues():
    mat = np.diag([1.2, -0.2])
    with pytest.raises(ValueError):
        von_neumann_entropy(DensityMatrix((2,), mat))


def test_fidelity_overlap():
    lay = qubit_layout(1)
    a = QuantumState(lay, np.array([1.0, 0.0], dtype=complex))
    b = QuantumState(lay, np.array([1.0, 1.0], dtype=complex) / np.sqrt(2))
    assert fidelity(a, b) == pytest.approx(0.5)
    assert fidelity(a, a) == pytest.approx(1.0)
    assert fidelity(a, b) == pytest.approx(fidelity(b, a))
