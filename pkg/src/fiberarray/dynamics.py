"""Collective thermal dissipation of a fiber-coupled qubit chain.

Fiber ``j`` couples sites ``j`` and ``j+1`` through the collective lowering
operator ``J_j = s-_j + s-_{j+1}``.  With damping rate ``gamma_j`` and thermal
occupation ``n_j`` the generator is

    L[rho] = sum_j gamma_j n_j     (2 J_j^+ rho J_j - J_j J_j^+ rho - rho J_j J_j^+)
           + gamma_j (n_j + 1) (2 J_j rho J_j^+ - J_j^+ J_j rho - rho J_j^+ J_j)

(no coherent part; interaction picture).  Time is measured in units of
``1/gamma`` and the factor of 2 is kept exactly as written above.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .hilbert import apply_ladder, check_n_sites, n_sites_of, site_bit

log = logging.getLogger(__name__)

DEFAULT_DT = 1e-3
DEFAULT_T_MAX = 50.0
DEFAULT_STEADY_TOL = 1e-9
DEFAULT_T_GUARD = 500.0
MAX_DT = 0.1
# evolve() aborts when a recorded state has an eigenvalue below this
ABORT_EIGENVALUE = -1e-6
# the sparse superoperator has O(fibers * 4^N) entries; above this use the matrix-free path
SPARSE_MAX_SITES = 8

Observer = Callable[[float, np.ndarray], None]


class IntegrationError(RuntimeError):
    """Raised when a trajectory leaves the set of physical states."""


class SteadyStateNotReached(RuntimeError):
    def __init__(self, last_norm: float, t_guard: float):
        super().__init__(f"no steady state within guard: ||L[rho]||_F = {last_norm:.3e} at t = {t_guard}")
        self.last_norm = last_norm
        self.t_guard = t_guard


@dataclass(frozen=True)
class BathSpec:
    """Per-fiber damping rates and thermal photon numbers (length N-1 each)."""

    gammas: tuple[float, ...]
    occupations: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in self.gammas)
        n = tuple(float(x) for x in self.occupations)
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "occupations", n)
        if len(g) != len(n):
            raise ValueError(f"gammas has {len(g)} entries but occupations has {len(n)}")
        for name, vals in (("gammas", g), ("occupations", n)):
            if any(not math.isfinite(v) or v < 0 for v in vals):
                raise ValueError(f"{name} must be finite and nonnegative, got {vals}")
        check_n_sites(len(g) + 1)

    @classmethod
    def uniform(cls, occupations: Sequence[float], gamma: float = 1.0) -> BathSpec:
        return cls(tuple(gamma for _ in occupations), tuple(occupations))

    @property
    def n_sites(self) -> int:
        return len(self.gammas) + 1


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float = DEFAULT_DT
    t_max: float = DEFAULT_T_MAX
    record_stride: int = 100
    steady_tol: float = DEFAULT_STEADY_TOL

    def __post_init__(self):
        if not 0 < self.dt <= MAX_DT:
            raise ValueError(f"dt must be in (0, {MAX_DT}], got {self.dt}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError(f"record_stride must be a positive integer, got {self.record_stride}")
        if not self.steady_tol >= 1e-12:
            raise ValueError(f"steady_tol must be >= 1e-12, got {self.steady_tol}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_max / self.dt)))


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[np.ndarray] = field(default_factory=list)
    # max |Tr(rho) - 1| over recorded samples
    max_trace_drift: float = 0.0


def _check_sizes(rho: np.ndarray, bath: BathSpec) -> int:
    n = n_sites_of(rho)
    if n != bath.n_sites:
        raise ValueError(f"state has {n} sites but bath describes {bath.n_sites}")
    return n


def dissipator_terms(bath: BathSpec) -> Iterator[tuple[float, tuple, tuple]]:
    """Expand the generator into ``coeff * X rho Y`` terms of ladder products.

    Yields ``(coeff, left_factors, right_factors)`` where each factor list is a
    left-to-right product of ``(op, site)`` pairs.
    """
    for j, (gamma, n) in enumerate(zip(bath.gammas, bath.occupations), start=1):
        pair = (j, j + 1)
        # (rate, lowering op of the jump) -- the thermal channel jumps with J^+
        for rate, lo, hi in ((gamma * (n + 1.0), "minus", "plus"), (gamma * n, "plus", "minus")):
            if rate == 0.0:
                continue
            for s in pair:
                for t in pair:
                    yield 2.0 * rate, ((lo, s),), ((hi, t),)
                    yield -rate, ((hi, s), (lo, t)), ()
                    yield -rate, (), ((hi, s), (lo, t))


def liouvillian_apply(rho: np.ndarray, bath: BathSpec) -> np.ndarray:
    """``L[rho]`` by direct ladder arithmetic (matrix-free)."""
    rho = np.asarray(rho, dtype=complex)
    _check_sizes(rho, bath)
    out = np.zeros_like(rho)
    for coeff, left, right in dissipator_terms(bath):
        y = rho
        for op, site in right:
            y = apply_ladder(op, site, "right", y)
        for op, site in reversed(left):
            y = apply_ladder(op, site, "left", y)
        out += coeff * y
    return out


def _ladder_map(factors, n: int):
    """Basis map of a ladder product: returns (domain indices, image indices)."""
    a = np.arange(1 << n)
    img = a.copy()
    ok = np.ones(a.shape, bool)
    for op, site in reversed(factors):
        bit = site_bit(site, n)
        excited = (img & bit) != 0
        if op == "minus":
            ok &= excited
        elif op == "plus":
            ok &= ~excited
        else:
            raise ValueError(f"generator terms use only plus/minus, got {op!r}")
        img = img ^ bit
    return a[ok], img[ok]


class Generator:
    """Compiled generator acting on row-major vectorized states.

    For registers up to ``SPARSE_MAX_SITES`` sites the terms are assembled into
    a sparse superoperator; larger registers fall back to ``liouvillian_apply``.
    """

    def __init__(self, bath: BathSpec):
        self.bath = bath
        self.n_sites = bath.n_sites
        self.dim = 1 << self.n_sites
        self.matrix = self._assemble() if self.n_sites <= SPARSE_MAX_SITES else None

    def _assemble(self) -> sp.csr_matrix:
        d, n = self.dim, self.n_sites
        rows, cols, vals = [], [], []
        for coeff, left, right in dissipator_terms(self.bath):
            # (X rho Y)[x(a), k] = rho[a, y(k)]
            a, xa = _ladder_map(left, n)
            k, yk = _ladder_map(right, n)
            rows.append(np.add.outer(xa * d, k).ravel())
            cols.append(np.add.outer(a * d, yk).ravel())
            vals.append(np.full(a.size * k.size, coeff))
        if not rows:
            return sp.csr_matrix((d * d, d * d), dtype=complex)
        coo = sp.coo_matrix(
            (np.concatenate(vals).astype(complex), (np.concatenate(rows), np.concatenate(cols))),
            shape=(d * d, d * d),
        )
        return coo.tocsr()

    def __call__(self, v: np.ndarray) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix @ v
        rho = v.reshape(self.dim, self.dim)
        return liouvillian_apply(rho, self.bath).ravel()


@functools.lru_cache(maxsize=32)
def compile_generator(bath: BathSpec) -> Generator:
    return Generator(bath)


def _hermitize(v: np.ndarray, d: int) -> np.ndarray:
    m = v.reshape(d, d)
    return (0.5 * (m + m.conj().T)).ravel()


def _rk4(gen: Generator, v: np.ndarray, dt: float, k1: np.ndarray | None = None) -> np.ndarray:
    if k1 is None:
        k1 = gen(v)
    k2 = gen(v + (0.5 * dt) * k1)
    k3 = gen(v + (0.5 * dt) * k2)
    k4 = gen(v + dt * k3)
    v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return _hermitize(v, gen.dim)


def rk4_step(rho: np.ndarray, dt: float, bath: BathSpec) -> np.ndarray:
    """One classical RK4 step of d(rho)/dt = L[rho], re-Hermitized."""
    if dt < 0:
        raise ValueError(f"dt must be nonnegative, got {dt}")
    rho = np.asarray(rho, dtype=complex)
    _check_sizes(rho, bath)
    if dt == 0:
        return rho.copy()
    gen = compile_generator(bath)
    return _rk4(gen, rho.ravel(), dt).reshape(rho.shape)


def _min_eig(rho: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(rho)[0])


def evolve(rho0: np.ndarray, bath: BathSpec, config: EvolutionConfig | None = None,
           observers: Sequence[Observer] = (), keep_states: bool = True) -> Trajectory:
    """Integrate from t=0 to ``config.t_max`` with a fixed RK4 step.

    A sample is recorded at t=0, every ``record_stride`` steps and at the final
    step.  Each observer is called as ``observer(t, rho)`` on every sample.
    """
    config = config or EvolutionConfig()
    rho0 = np.asarray(rho0, dtype=complex)
    d = rho0.shape[0]
    _check_sizes(rho0, bath)
    gen = compile_generator(bath)
    n_steps, stride, dt = config.n_steps, int(config.record_stride), config.dt

    times, states = [], []
    drift = 0.0
    v = rho0.ravel().copy()
    for step in range(n_steps + 1):
        if step % stride == 0 or step == n_steps:
            t = step * dt
            rho = v.reshape(d, d).copy()
            lam = _min_eig(rho)
            if lam < ABORT_EIGENVALUE:
                raise IntegrationError(
                    f"positivity lost at t={t:g}: minimum eigenvalue {lam:.3e} (dt={dt} too large?)"
                )
            drift = max(drift, abs(np.trace(rho).real - 1.0))
            times.append(t)
            if keep_states:
                states.append(rho)
            for obs in observers:
                obs(t, rho)
        if step < n_steps:
            v = _rk4(gen, v, dt)
    log.debug("evolve: %d steps, max trace drift %.2e", n_steps, drift)
    return Trajectory(np.array(times), states, drift)


@dataclass
class SteadyState:
    rho: np.ndarray
    time: float
    residual: float


def steady_state(rho0: np.ndarray, bath: BathSpec, steady_tol: float = DEFAULT_STEADY_TOL,
                 t_guard: float = DEFAULT_T_GUARD, dt: float = DEFAULT_DT) -> SteadyState:
    """Integrate until ``||L[rho]||_F < steady_tol``.

    The zero-temperature generator has a degenerate stationary manifold, so the
    result depends on ``rho0``; integration picks the state actually reached.
    """
    if not steady_tol > 0 or not t_guard > 0:
        raise ValueError("steady_tol and t_guard must be positive")
    if not 0 < dt <= MAX_DT:
        raise ValueError(f"dt must be in (0, {MAX_DT}], got {dt}")
    rho0 = np.asarray(rho0, dtype=complex)
    d = rho0.shape[0]
    _check_sizes(rho0, bath)
    gen = compile_generator(bath)
    v = rho0.ravel().copy()
    n_steps = int(math.ceil(t_guard / dt))
    norm = math.inf
    for step in range(n_steps + 1):
        k1 = gen(v)
        norm = float(np.linalg.norm(k1))
        if norm < steady_tol:
            return SteadyState(v.reshape(d, d), step * dt, norm)
        if step < n_steps:
            v = _rk4(gen, v, dt, k1)
    raise SteadyStateNotReached(norm, t_guard)
