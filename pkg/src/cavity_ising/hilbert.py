"""Composite Hilbert-space linear algebra for mixed qubit/bosonic registers.

Everything here is dense and explicit: the systems this package targets are
small (a handful of two-level atoms plus truncated cavity modes), where dense
matrices are both the simplest and the fastest thing to validate. Tensor
factor ordering is row-major with the leftmost factor slowest, fixed at
layout construction, so basis indices are reproducible across runs and in
the file formats.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Qubit",
    "CavityMode",
    "SpaceLayout",
    "QuantumState",
    "LinearOp",
    "DensityMatrix",
    "embed_local",
    "apply",
    "partial_trace",
    "von_neumann_entropy",
    "fidelity",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "destroy",
]

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-10
ENTROPY_FLOOR = 1e-12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def destroy(n_max: int) -> np.ndarray:
    """Annihilation operator on a mode truncated at Fock level n_max.

    Parameters
    ----------
    n_max : int
        Highest retained Fock state; the matrix is (n_max+1) x (n_max+1).

    Examples
    --------
    >>> destroy(2)[1, 2]
    (1.4142135623730951+0j)
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1).astype(complex)


@dataclass(frozen=True)
class Qubit:
    """Two-level factor."""

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class CavityMode:
    """Bosonic factor truncated at Fock occupation n_max (dimension n_max+1)."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("CavityMode requires n_max >= 1")

    @property
    def dim(self) -> int:
        return self.n_max + 1


class SpaceLayout:
    """Ordered tensor-product structure of a composite Hilbert space.

    Parameters
    ----------
    factors : iterable of Qubit or CavityMode
        Subsystems in fixed order; indexing is row-major, leftmost slowest.

    Examples
    --------
    >>> lay = SpaceLayout([Qubit(), CavityMode(2)])
    >>> lay.dims, lay.total_dim
    ((2, 3), 6)
    >>> lay.basis_index((1, 2))
    5
    """

    def __init__(self, factors: Iterable):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("layout needs at least one factor")
        for f in self.factors:
            if not isinstance(f, (Qubit, CavityMode)):
                raise ValueError(f"unsupported factor type: {type(f).__name__}")
        self.dims = tuple(f.dim for f in self.factors)
        self.total_dim = prod(self.dims)

    @classmethod
    def qubits(cls, n: int) -> "SpaceLayout":
        return cls([Qubit() for _ in range(n)])

    @classmethod
    def atoms_and_modes(cls, n_sites: int, n_max: int) -> "SpaceLayout":
        """N qubits followed by N cavity modes, the package-wide convention."""
        return cls([Qubit() for _ in range(n_sites)]
                   + [CavityMode(n_max) for _ in range(n_sites)])

    def __len__(self) -> int:
        return len(self.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpaceLayout) and self.dims == other.dims

    def __hash__(self):
        return hash(self.dims)

    def __repr__(self) -> str:
        return f"SpaceLayout(dims={self.dims})"

    def basis_index(self, occupations: Sequence[int]) -> int:
        """Flat index of a product basis state given per-factor occupation."""
        if len(occupations) != len(self.dims):
            raise ValueError("occupation list length does not match layout")
        for occ, d in zip(occupations, self.dims):
            if not 0 <= occ < d:
                raise ValueError(f"occupation {occ} out of range for dim {d}")
        return int(np.ravel_multi_index(tuple(occupations), self.dims))

    def basis_state(self, occupations: Sequence[int]) -> "QuantumState":
        amps = np.zeros(self.total_dim, dtype=complex)
        amps[self.basis_index(occupations)] = 1.0
        return QuantumState(self, amps)


class QuantumState:
    """State vector on a SpaceLayout.

    Amplitudes are stored as given; unitary construction and evolution paths
    keep the norm at 1 within 1e-10, while non-unitary maps (ladder
    operators, projections) legitimately produce unnormalized vectors.
    """

    def __init__(self, layout: SpaceLayout, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.shape != (layout.total_dim,):
            raise ValueError(
                f"amplitude vector of shape {amps.shape} does not fit "
                f"layout dimension {layout.total_dim}")
        self.layout = layout
        self.amplitudes = amps.copy()
        self.amplitudes.setflags(write=False)

    @classmethod
    def plus_product(cls, n_qubits: int) -> "QuantumState":
        """|+>^n on a qubit register, (|0>+|1>)/sqrt(2) per site."""
        lay = SpaceLayout.qubits(n_qubits)
        amps = np.full(lay.total_dim, 2.0 ** (-n_qubits / 2), dtype=complex)
        return cls(lay, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "QuantumState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return QuantumState(self.layout, self.amplitudes / n)

    def overlap(self, other: "QuantumState") -> complex:
        _check_same_layout(self.layout, other.layout)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"QuantumState(dim={self.layout.total_dim}, norm={self.norm():.6f})"


class LinearOp:
    """Dense operator on a SpaceLayout with optional structure flags.

    Flags are set when known by construction and verified eagerly:
    a hermitian flag requires max|M - M^dag| < 1e-12, a unitary flag
    requires max|M^dag M - I| < 1e-10. The diagonal flag enables fast
    propagator paths.
    """

    def __init__(self, layout: SpaceLayout, matrix, *, hermitian: bool = False,
                 unitary: bool = False, diagonal: bool = False):
        mat = np.asarray(matrix, dtype=complex)
        d = layout.total_dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not fit layout dim {d}")
        if hermitian and np.max(np.abs(mat - mat.conj().T)) >= HERMITIAN_TOL:
            raise ValueError("hermitian flag set but matrix is not Hermitian")
        if unitary:
            dev = np.max(np.abs(mat.conj().T @ mat - np.eye(d)))
            if dev >= UNITARY_TOL:
                raise ValueError("unitary flag set but matrix is not unitary")
        if diagonal and np.max(np.abs(mat - np.diag(np.diag(mat)))) != 0.0:
            raise ValueError("diagonal flag set but matrix has off-diagonal entries")
        self.layout = layout
        self.matrix = mat.copy()
        self.matrix.setflags(write=False)
        self.hermitian = bool(hermitian)
        self.unitary = bool(unitary)
        self.diagonal = bool(diagonal)

    @classmethod
    def identity(cls, layout: SpaceLayout) -> "LinearOp":
        return cls(layout, np.eye(layout.total_dim, dtype=complex),
                   hermitian=True, unitary=True, diagonal=True)

    def dagger(self) -> "LinearOp":
        return LinearOp(self.layout, self.matrix.conj().T,
                        hermitian=self.hermitian, unitary=self.unitary,
                        diagonal=self.diagonal)

    def __add__(self, other: "LinearOp") -> "LinearOp":
        _check_same_layout(self.layout, other.layout)
        return LinearOp(self.layout, self.matrix + other.matrix,
                        hermitian=self.hermitian and other.hermitian,
                        diagonal=self.diagonal and other.diagonal)

    def __sub__(self, other: "LinearOp") -> "LinearOp":
        _check_same_layout(self.layout, other.layout)
        return LinearOp(self.layout, self.matrix - other.matrix,
                        hermitian=self.hermitian and other.hermitian,
                        diagonal=self.diagonal and other.diagonal)

    def __mul__(self, scalar) -> "LinearOp":
        s = complex(scalar)
        herm = self.hermitian and s.imag == 0.0
        return LinearOp(self.layout, self.matrix * s, hermitian=herm,
                        diagonal=self.diagonal)

    __rmul__ = __mul__

    def __matmul__(self, other: "LinearOp") -> "LinearOp":
        _check_same_layout(self.layout, other.layout)
        return LinearOp(self.layout, self.matrix @ other.matrix,
                        unitary=self.unitary and other.unitary,
                        diagonal=self.diagonal and other.diagonal)

    def expectation(self, state: QuantumState) -> complex:
        _check_same_layout(self.layout, state.layout)
        return complex(np.vdot(state.amplitudes, self.matrix @ state.amplitudes))

    def __repr__(self) -> str:
        flags = [n for n in ("hermitian", "unitary", "diagonal") if getattr(self, n)]
        return f"LinearOp(dim={self.layout.total_dim}, flags={flags})"


class DensityMatrix:
    """Positive semidefinite, unit-trace operator on listed subsystem dims."""

    def __init__(self, dims: Sequence[int], matrix):
        mat = np.asarray(matrix, dtype=complex)
        d = prod(dims)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not fit dims {tuple(dims)}")
        tr = np.trace(mat)
        if abs(tr - 1.0) >= TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} deviates from 1 beyond tolerance")
        if np.max(np.abs(mat - mat.conj().T)) >= 1e-10:
            raise ValueError("density matrix is not Hermitian within tolerance")
        self.dims = tuple(int(x) for x in dims)
        self.matrix = mat.copy()
        self.matrix.setflags(write=False)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims})"


def _check_same_layout(a, b):
    if a != b:
        raise ValueError(f"layout mismatch: {a} vs {b}")


def embed_local(layout: SpaceLayout, site: int, local) -> LinearOp:
    """Embed a single-factor operator as I x ... x local x ... x I.

    Parameters
    ----------
    layout : SpaceLayout
    site : int
        Factor position receiving the operator.
    local : array_like
        Square matrix matching the factor dimension at `site`.
    """
    if not 0 <= site < len(layout.factors):
        raise ValueError(f"site {site} out of range for {len(layout.factors)} factors")
    loc = np.asarray(local, dtype=complex)
    d = layout.dims[site]
    if loc.shape != (d, d):
        raise ValueError(f"local operator shape {loc.shape} does not match factor dim {d}")
    mat = np.eye(1, dtype=complex)
    for i, dim in enumerate(layout.dims):
        mat = np.kron(mat, loc if i == site else np.eye(dim, dtype=complex))
    herm = bool(np.max(np.abs(loc - loc.conj().T)) < HERMITIAN_TOL)
    diag = bool(np.max(np.abs(loc - np.diag(np.diag(loc)))) == 0.0)
    unit = bool(np.max(np.abs(loc.conj().T @ loc - np.eye(d))) < UNITARY_TOL)
    return LinearOp(layout, mat, hermitian=herm, unitary=unit, diagonal=diag)


def apply(op: LinearOp, state: QuantumState) -> QuantumState:
    """Matrix-vector application; normalization is the caller's concern."""
    _check_same_layout(op.layout, state.layout)
    return QuantumState(state.layout, op.matrix @ state.amplitudes)


def partial_trace(state_or_rho, keep) -> DensityMatrix:
    """Reduced density matrix over the kept subsystem indices.

    Parameters
    ----------
    state_or_rho : QuantumState or DensityMatrix
    keep : iterable of int
        Subsystem indices to retain; duplicates collapse and the result
        is ordered by ascending index.
    """
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if isinstance(state_or_rho, QuantumState):
        dims = state_or_rho.layout.dims
        _check_indices(keep, len(dims))
        drop = [i for i in range(len(dims)) if i not in keep]
        tensor = state_or_rho.amplitudes.reshape(dims)
        moved = np.moveaxis(tensor, keep, range(len(keep)))
        dk = prod(dims[i] for i in keep)
        dd = prod(dims[i] for i in drop) if drop else 1
        mat = moved.reshape(dk, dd)
        rho = mat @ mat.conj().T
        norm = np.trace(rho).real
        if norm <= 0:
            raise ValueError("cannot reduce the zero vector")
        return DensityMatrix([dims[i] for i in keep], rho / norm)
    if isinstance(state_or_rho, DensityMatrix):
        _check_indices(keep, len(state_or_rho.dims))
        return _ptrace_rho(state_or_rho, keep)
    raise TypeError("partial_trace expects QuantumState or DensityMatrix")


def _ptrace_rho(rho: DensityMatrix, keep) -> DensityMatrix:
    dims = rho.dims
    n = len(dims)
    tensor = rho.matrix.reshape(dims + dims)
    row = list(range(n))
    col = list(range(n))
    next_free = n
    for i in range(n):
        if i in keep:
            col[i] = next_free
            next_free += 1
        # dropped subsystems keep col label == row label, which traces them
    out_axes = [row[i] for i in keep] + [col[i] for i in keep]
    reduced = np.einsum(tensor, row + col, out_axes)
    dk = prod(dims[i] for i in keep)
    return DensityMatrix([dims[i] for i in keep], reduced.reshape(dk, dk))


def _check_indices(keep, n):
    for k in keep:
        if not 0 <= k < n:
            raise ValueError(f"subsystem index {k} out of range")


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy -sum(lam * log2 lam) in bits, eigenvalues floored at 1e-12.

    Raises
    ------
    ValueError
        If an eigenvalue is more negative than -1e-10.
    """
    lams = rho.eigenvalues()
    if lams.min() < PSD_TOL:
        raise ValueError(f"density matrix not PSD: min eigenvalue {lams.min()}")
    lams = lams[lams > ENTROPY_FLOOR]
    return float(-(lams * np.log2(lams)).sum())


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """Squared overlap |<a|b>|^2 of two pure states on the same layout."""
    return float(abs(a.overlap(b)) ** 2)
