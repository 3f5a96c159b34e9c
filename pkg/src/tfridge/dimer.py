"""Excitonic dimer coupled to one vibrational mode, under pure exciton dephasing.

Basis ordering is ``{|e1>, |e2>} x {|0>, ..., |n_max>}``, so exciton ``e1``
owns the first ``n_max + 1`` rows. Units: hbar = 1, energies in units of J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy import sparse

from .core import TimeGrid
from .exceptions import (
    DimensionMismatch,
    InvalidParameter,
    StepUnstable,
    TruncationNotConverged,
)

DEFAULT_MAX_STEP = 0.01
CONVERGENCE_PAD = 4
CONVERGENCE_TOL = 1e-8
TRACE_DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class DimerParams:
    j: float = 1.0
    g: float = 0.015
    omega: float = 0.4
    gamma: float = 0.01
    n_max: int = 10
    grid: TimeGrid = field(default_factory=lambda: TimeGrid.from_span(0.0, 300.0, 0.01))

    def __post_init__(self):
        if not self.j > 0:
            raise InvalidParameter(f"j must be > 0, got {self.j!r}")
        if not self.gamma >= 0:
            raise InvalidParameter(f"gamma must be >= 0, got {self.gamma!r}")
        if not self.omega > 0:
            raise InvalidParameter(f"omega must be > 0, got {self.omega!r}")
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise InvalidParameter(f"n_max must be an integer >= 2, got {self.n_max!r}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix (Hermitian, unit trace, numerically positive)."""

    entries: np.ndarray
    validate: bool = True

    HERMITIAN_TOL = 1e-10
    TRACE_TOL = 1e-8
    POSITIVITY_TOL = 1e-8

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] % 2:
            raise DimensionMismatch(f"density matrix must be square of even size, got {rho.shape}")
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)
        if self.validate:
            problems = self.violations()
            if problems:
                raise InvalidParameter("; ".join(problems))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_max(self) -> int:
        return self.dim // 2 - 1

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def trace_error(self) -> float:
        return float(abs(np.trace(self.entries) - 1.0))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def purity(self) -> float:
        return float(np.real(np.vdot(self.entries.conj().T, self.entries)))

    def violations(self) -> list[str]:
        out = []
        if self.hermiticity_error() > self.HERMITIAN_TOL:
            out.append(f"not Hermitian (max |rho - rho^H| = {self.hermiticity_error():.3g})")
        if self.trace_error() > self.TRACE_TOL:
            out.append(f"trace off by {self.trace_error():.3g}")
        if self.min_eigenvalue() < -self.POSITIVITY_TOL:
            out.append(f"negative eigenvalue {self.min_eigenvalue():.3g}")
        return out

    def reduced_exciton(self) -> np.ndarray:
        """2x2 exciton state after tracing out the oscillator."""
        m = self.dim // 2
        r = self.entries.reshape(2, m, 2, m)
        return np.einsum("anbn->ab", r)

    def reduced_oscillator(self) -> np.ndarray:
        m = self.dim // 2
        r = self.entries.reshape(2, m, 2, m)
        return np.einsum("anam->nm", r)


@dataclass(frozen=True, eq=False)
class CoherenceTrace:
    """``Re Tr{rho(t) |e1><e2|}`` on a grid, with the final state and run diagnostics."""

    grid: TimeGrid
    values: np.ndarray
    final_state: DensityMatrix | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


def _ladder(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, n_max + 1)), 1)


def sigma_z(n_max: int) -> np.ndarray:
    """Exciton ``sigma^z`` tensored with the oscillator identity."""
    return np.kron(np.diag([1.0, -1.0]), np.eye(n_max + 1))


def build_hamiltonian(params: DimerParams) -> np.ndarray:
    """``J sz + g (a + a^dag) sx + omega a^dag a`` on the truncated product space."""
    m = params.n_max + 1
    a = _ladder(params.n_max)
    x = a + a.T
    sz = np.diag([1.0, -1.0])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    h = (params.j * np.kron(sz, np.eye(m))
         + params.g * np.kron(sx, x)
         + params.omega * np.kron(np.eye(2), a.T @ a))
    return h.astype(complex)


def initial_state(n_max: int) -> DensityMatrix:
    """``|u><u| x |0><0|`` with ``|u> = (|e1> - |e2>)/sqrt(2)``."""
    if int(n_max) != n_max or n_max < 2:
        raise InvalidParameter(f"n_max must be an integer >= 2, got {n_max!r}")
    m = n_max + 1
    v = np.zeros(2 * m, dtype=complex)
    v[0], v[m] = 1.0, -1.0
    # 0.5 * v v^H keeps the entries exactly +-1/2
    return DensityMatrix(0.5 * np.outer(v, v))


def coherence_amplitude(rho) -> float:
    """``Re sum_n <e2, n| rho |e1, n>``, i.e. ``Re Tr{rho |e1><e2| x 1}``."""
    r = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    m = r.shape[0] // 2
    return float(np.trace(r[m:, :m]).real)


def _dephasing_signs(dim: int) -> np.ndarray:
    s = np.ones(dim)
    s[dim // 2:] = -1.0
    return np.outer(s, s)


def lindblad_rhs(rho, h: np.ndarray, gamma: float) -> np.ndarray:
    """``-i[H, rho] + gamma (sz rho sz - rho)`` with ``sz`` acting on the exciton."""
    r = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    h = np.asarray(h)
    if r.shape != h.shape or r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] % 2:
        raise DimensionMismatch(f"rho {r.shape} and H {h.shape} must be equal, square, even-sized")
    # sz rho sz flips the sign of the exciton off-diagonal blocks only
    return -1j * (h @ r - r @ h) + gamma * (_dephasing_signs(r.shape[0]) - 1.0) * r


def eigen_gaps(params: DimerParams) -> np.ndarray:
    """Sorted positive differences between eigenvalues of the Hamiltonian."""
    ev = np.linalg.eigvalsh(build_hamiltonian(params))
    gaps = np.abs(ev[:, None] - ev[None, :])[np.triu_indices(ev.size, 1)]
    return np.unique(gaps[gaps > 1e-12])


@njit(cache=True)
def _apply_generator(r, out, data, indices, indptr, damp):
    # out = -i (H r - r H) + damp * r, with H given in CSR form
    d = r.shape[0]
    for a in range(d):
        for b in range(d):
            out[a, b] = damp[a, b] * r[a, b]
        for p in range(indptr[a], indptr[a + 1]):
            v = -1j * data[p]
            j = indices[p]
            for b in range(d):
                out[a, b] += v * r[j, b]
        for i in range(d):
            ri = r[a, i]
            for p in range(indptr[i], indptr[i + 1]):
                out[a, indices[p]] += 1j * data[p] * ri


@njit(cache=True)
def _axpy(out, x, c, y):
    d = x.shape[0]
    for a in range(d):
        for b in range(d):
            out[a, b] = x[a, b] + c * y[a, b]


@njit(cache=True)
def _rk4_run(rho, data, indices, indptr, damp, h, substeps, n_out, monitor):
    d = rho.shape[0]
    m = d // 2
    values = np.empty(n_out)
    # max trace error, max hermiticity error, min eigenvalue, max purity drift
    stats = np.array([0.0, 0.0, 1.0, 0.0])
    rho = rho.copy()
    k1 = np.empty_like(rho)
    k2 = np.empty_like(rho)
    k3 = np.empty_like(rho)
    k4 = np.empty_like(rho)
    tmp = np.empty_like(rho)
    purity0 = np.real(np.sum(rho * rho.T))
    half = 0.5 * h
    sixth = h / 6.0
    values[0] = np.real(np.trace(rho[m:, :m]))
    for i in range(1, n_out):
        for _ in range(substeps):
            _apply_generator(rho, k1, data, indices, indptr, damp)
            _axpy(tmp, rho, half, k1)
            _apply_generator(tmp, k2, data, indices, indptr, damp)
            _axpy(tmp, rho, half, k2)
            _apply_generator(tmp, k3, data, indices, indptr, damp)
            _axpy(tmp, rho, h, k3)
            _apply_generator(tmp, k4, data, indices, indptr, damp)
            for a in range(d):
                for b in range(d):
                    rho[a, b] += sixth * (k1[a, b] + 2.0 * (k2[a, b] + k3[a, b]) + k4[a, b])
        values[i] = np.real(np.trace(rho[m:, :m]))
        drift = np.abs(np.trace(rho) - 1.0)
        if not drift <= TRACE_DRIFT_TOL:
            return values[:i + 1], rho, stats, i
        if monitor:
            stats[0] = max(stats[0], drift)
            herm = np.max(np.abs(rho - rho.conj().T))
            stats[1] = max(stats[1], herm)
            ev = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
            stats[2] = min(stats[2], ev[0])
            stats[3] = max(stats[3], np.abs(np.real(np.sum(rho * rho.T)) - purity0))
    return values, rho, stats, -1


def _integrate(params: DimerParams, max_step: float, monitor: bool):
    grid = params.grid
    substeps = max(1, math.ceil(grid.dt / max_step - 1e-9))
    h = grid.dt / substeps
    ham = sparse.csr_matrix(build_hamiltonian(params))
    damp = np.ascontiguousarray(params.gamma * (_dephasing_signs(params.dim) - 1.0)).astype(complex)
    rho0 = np.ascontiguousarray(initial_state(params.n_max).entries)
    values, rho, raw, failed = _rk4_run(
        rho0, ham.data.astype(complex), ham.indices.astype(np.int64),
        ham.indptr.astype(np.int64), damp, h, substeps, grid.n, monitor)
    if failed >= 0:
        drift = abs(np.trace(rho) - 1.0)
        raise StepUnstable(f"trace drifted by {drift:.3g} at t={grid.time(failed):.6g}")
    stats = {"step": h}
    if monitor:
        stats.update(max_trace_error=float(raw[0]), max_hermiticity_error=float(raw[1]),
                     min_eigenvalue=float(raw[2]), max_purity_drift=float(raw[3]))
    return values, rho, stats


def evolve(params: DimerParams, *, check_convergence: bool = True, monitor: bool = False,
           max_step: float = DEFAULT_MAX_STEP) -> CoherenceTrace:
    """Integrate the master equation from :func:`initial_state` with fixed-step RK4.

    The grid step is split into equal substeps no longer than ``max_step``.
    With ``check_convergence`` the run is repeated at ``n_max + 4`` and must
    agree to ``1e-8`` in max norm. With ``monitor`` every stored state is
    checked for trace, Hermiticity, positivity and purity drift; the extremes
    land in ``diagnostics``.

    Raises
    ------
    TruncationNotConverged
        The oscillator truncation changes the coherence by more than ``1e-8``.
    StepUnstable
        The trace drifts by more than ``1e-6``.
    """
    values, rho, stats = _integrate(params, max_step, monitor)
    if check_convergence:
        wider = DimerParams(params.j, params.g, params.omega, params.gamma,
                            params.n_max + CONVERGENCE_PAD, params.grid)
        ref, _, _ = _integrate(wider, max_step, False)
        dev = float(np.max(np.abs(ref - values)))
        stats["truncation_deviation"] = dev
        if not dev < CONVERGENCE_TOL:
            raise TruncationNotConverged(
                f"n_max={params.n_max} differs from n_max={wider.n_max} by {dev:.3g} "
                f"(tolerance {CONVERGENCE_TOL:g})"
            )
    final = DensityMatrix(rho, validate=False)
    problems = final.violations()
    if problems:
        raise StepUnstable("final state invalid: " + "; ".join(problems))
    return CoherenceTrace(params.grid, values, final, stats)
