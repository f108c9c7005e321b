"""Time evolution: exact propagators, midpoint stepping, observable sampling.

Two evolution methods are provided. `exact_expm` diagonalizes a fixed
Hermitian Hamiltonian once and samples the trajectory analytically at every
grid time. `stepped` marches piecewise-constant segments whose generator is
evaluated at each segment midpoint, which is what time-dependent (lab or
partially rotated) frames need. Sample times are always landed on exactly;
substeps inside a sample interval are shrunk to fit rather than overshooting.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np
from scipy.linalg import expm as _expm

from .errors import ConfigError, EvolutionError
from .hilbert import LinearOp, QuantumState, _check_same_layout

__all__ = [
    "EvolutionSpec",
    "Observable",
    "TimeSeries",
    "ComparisonReport",
    "propagator",
    "expm_propagator",
    "sample_states",
    "evolve",
    "compare_runs",
    "REL_DIFF_FLOOR",
]

RENORM_THRESHOLD = 1e-9
ABORT_THRESHOLD = 1e-6
REL_DIFF_FLOOR = 0.02

HamiltonianSource = Union[LinearOp, Callable[[float], LinearOp]]


@dataclass(frozen=True)
class EvolutionSpec:
    """Trajectory description: generator, time window, grid, and method.

    `hamiltonian` is either a fixed LinearOp or a callable t_ns -> LinearOp.
    `exact_expm` requires a fixed operator; `stepped` accepts both and needs
    `step_dt`. Times are in ns, rates in GHz (hbar = 1).
    """

    hamiltonian: HamiltonianSource
    t_start: float
    t_end: float
    sample_count: int
    method: str = "exact_expm"
    step_dt: Optional[float] = None
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ConfigError("t_end must exceed t_start")
        if self.sample_count < 2:
            raise ConfigError("sample_count must be at least 2")
        if self.method not in ("exact_expm", "stepped"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.method == "stepped":
            if self.step_dt is None or self.step_dt <= 0:
                raise ConfigError("stepped method requires step_dt > 0")
            if self.step_dt > self.t_end - self.t_start:
                raise ConfigError("step_dt exceeds the evolution window")
        else:
            if not isinstance(self.hamiltonian, LinearOp):
                raise ConfigError(
                    "exact_expm requires a fixed (time-independent) Hamiltonian")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.sample_count)


@dataclass(frozen=True)
class Observable:
    """Named extractor mapping (t_ns, state) to a real number."""

    name: str
    func: Callable[[float, QuantumState], float]

    @classmethod
    def from_operator(cls, name: str, op: LinearOp) -> "Observable":
        """Expectation value of a Hermitian operator."""
        if not op.hermitian:
            raise ConfigError("from_operator expects a hermitian-flagged LinearOp")
        return cls(name, lambda t, psi: op.expectation(psi).real)


class TimeSeries:
    """Shared time grid plus named real-valued channels.

    Serializes to CSV (first column time_ns, then one column per channel in
    insertion order) and to a JSON document with the same content. Float
    formatting uses repr, so writes are byte-deterministic.
    """

    def __init__(self, times, channels: Dict[str, Sequence[float]],
                 meta: Optional[dict] = None):
        self.times = np.asarray(times, dtype=float)
        if self.times.ndim != 1 or self.times.size < 1:
            raise ConfigError("times must be a nonempty 1-d array")
        self.channels: Dict[str, np.ndarray] = {}
        for name, vals in channels.items():
            arr = np.asarray(vals, dtype=float)
            if arr.shape != self.times.shape:
                raise ConfigError(
                    f"channel {name!r} length {arr.shape} does not match grid")
            self.channels[name] = arr
        self.meta = dict(meta) if meta else {}

    def channel(self, name: str) -> np.ndarray:
        if name not in self.channels:
            raise KeyError(f"no channel named {name!r}; have {list(self.channels)}")
        return self.channels[name]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv_string())

    def to_csv_string(self) -> str:
        import io
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        names = list(self.channels)
        writer.writerow(["time_ns"] + names)
        cols = [self.channels[n] for n in names]
        for i, t in enumerate(self.times):
            writer.writerow([repr(float(t))] + [repr(float(c[i])) for c in cols])
        return buf.getvalue()

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json_string())

    def to_json_string(self) -> str:
        doc = {
            "time_ns": [float(t) for t in self.times],
            "channels": {n: [float(v) for v in arr]
                         for n, arr in self.channels.items()},
        }
        if self.meta:
            doc["meta"] = self.meta
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json_string(cls, text: str) -> "TimeSeries":
        doc = json.loads(text)
        return cls(doc["time_ns"], doc["channels"], meta=doc.get("meta"))

    def __repr__(self) -> str:
        return (f"TimeSeries(samples={self.times.size}, "
                f"channels={list(self.channels)})")


def propagator(h: LinearOp, t: float) -> LinearOp:
    """Unitary e^{-iHt} for Hermitian H.

    Diagonal-flagged inputs are exponentiated elementwise; other Hermitian
    inputs go through an eigendecomposition. The returned operator carries a
    validated unitary flag.
    """
    if not h.hermitian:
        raise ConfigError("propagator requires a hermitian-flagged Hamiltonian")
    if h.diagonal:
        phases = np.exp(-1j * np.diag(h.matrix).real * t)
        return LinearOp(h.layout, np.diag(phases), unitary=True, diagonal=True)
    lam, vecs = np.linalg.eigh(h.matrix)
    mat = (vecs * np.exp(-1j * lam * t)) @ vecs.conj().T
    return LinearOp(h.layout, mat, unitary=True)


def expm_propagator(h: LinearOp, t: float) -> LinearOp:
    """Scaling-and-squaring e^{-iHt}, kept as an independent cross-check path.

    Accepts any square generator; only claims unitarity when the input is
    Hermitian.
    """
    mat = _expm(-1j * h.matrix * t)
    return LinearOp(h.layout, mat, unitary=h.hermitian)


def sample_states(state: QuantumState, spec: EvolutionSpec):
    """Propagate and return (times, vectors, meta); rows are state vectors.

    This is the raw backend under evolve(); it is public because calibration
    and frame-change post-processing need complex amplitudes, not just real
    observables. Norm drift beyond 1e-9 is renormalized and counted in meta;
    drift beyond 1e-6 aborts with EvolutionError.
    """
    if abs(state.norm() - 1.0) > 1e-10:
        raise ConfigError(f"initial state norm {state.norm()} is not 1")
    times = spec.times()
    if spec.method == "exact_expm":
        return _states_exact(state, spec, times)
    return _states_stepped(state, spec, times)


def evolve(state: QuantumState, spec: EvolutionSpec,
           observables: Sequence[Observable]) -> TimeSeries:
    """Propagate `state` per `spec`, sampling every observable on the grid."""
    names = [obs.name for obs in observables]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate observable names in {names}")
    times, vecs, meta = sample_states(state, spec)
    samples = np.empty((len(times), len(observables)))
    for i, t in enumerate(times):
        psi = QuantumState(state.layout, vecs[i])
        samples[i] = [float(obs.func(t, psi)) for obs in observables]
    channels = {obs.name: samples[:, j] for j, obs in enumerate(observables)}
    return TimeSeries(times, channels, meta=meta)


def _states_exact(state, spec, times):
    h = spec.hamiltonian
    _check_same_layout(h.layout, state.layout)
    psi0 = state.amplitudes
    if h.diagonal:
        lam = np.diag(h.matrix).real
        coeff = psi0
        vecs = None
    else:
        lam, vecs = np.linalg.eigh(h.matrix)
        coeff = vecs.conj().T @ psi0
    out = np.empty((len(times), len(psi0)), dtype=complex)
    e_start = None
    for i, t in enumerate(times):
        phase = np.exp(-1j * lam * (t - spec.t_start))
        vec = phase * coeff if vecs is None else vecs @ (phase * coeff)
        out[i] = vec
        energy = float(np.real(np.vdot(vec, h.matrix @ vec)))
        if e_start is None:
            e_start = energy
        elif abs(energy - e_start) > spec.tolerance * max(1.0, abs(e_start)):
            raise EvolutionError(
                f"energy drifted from {e_start} to {energy} at t={t}")
    meta = {"method": "exact_expm", "renorm_count": 0}
    return times, out, meta


def _states_stepped(state, spec, times):
    source = spec.hamiltonian
    fixed = isinstance(source, LinearOp)
    if fixed:
        _check_same_layout(source.layout, state.layout)
    vec = state.amplitudes.copy()
    out = np.empty((len(times), len(vec)), dtype=complex)
    out[0] = vec
    renorms = 0
    for seg, (t0, t1) in enumerate(zip(times[:-1], times[1:])):
        n_sub = max(1, math.ceil((t1 - t0) / spec.step_dt - 1e-12))
        h_sub = (t1 - t0) / n_sub
        for k in range(n_sub):
            t_mid = t0 + (k + 0.5) * h_sub
            h_op = source if fixed else source(t_mid)
            u = propagator(h_op, h_sub)
            vec = u.matrix @ vec
            drift = abs(np.linalg.norm(vec) - 1.0)
            if drift > ABORT_THRESHOLD:
                raise EvolutionError(
                    f"norm drifted by {drift:.3e} at t={t0 + (k + 1) * h_sub}; "
                    "step size or truncation is inadequate")
            if drift > RENORM_THRESHOLD:
                vec = vec / np.linalg.norm(vec)
                renorms += 1
        out[seg + 1] = vec
    meta = {"method": "stepped", "renorm_count": renorms}
    return times, out, meta


@dataclass(frozen=True)
class ComparisonReport:
    """Discrepancy metrics between two sampled channels.

    The relative metric is measured against series b and skips grid points
    where |b| < 0.02; the absolute metric uses every point. time_of_max is
    where the absolute difference peaks.
    """

    channel: str
    max_abs_diff: float
    max_rel_diff: float
    time_of_max: float
    rel_points_used: int


def compare_runs(a: TimeSeries, b: TimeSeries, channel: str) -> ComparisonReport:
    """Compare one channel of two runs on identical grids; b is the reference."""
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise ConfigError("time grids differ; compare_runs needs identical grids")
    xa = a.channel(channel)
    xb = b.channel(channel)
    diff = np.abs(xa - xb)
    i_max = int(np.argmax(diff))
    mask = np.abs(xb) >= REL_DIFF_FLOOR
    if mask.any():
        max_rel = float(np.max(diff[mask] / np.abs(xb[mask])))
    else:
        max_rel = 0.0
    return ComparisonReport(
        channel=channel,
        max_abs_diff=float(diff[i_max]),
        max_rel_diff=max_rel,
        time_of_max=float(a.times[i_max]),
        rel_points_used=int(mask.sum()),
    )
