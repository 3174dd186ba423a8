"""Slow reference implementations for cross-checking the fast paths.

Everything here is built from explicit Kronecker products and dense linear
algebra, sharing no code with the bit-arithmetic routines it checks.

Vectorization is column-major: ``vec(rho)[r + c*d] = rho[r, c]``, so that
``vec(A rho B) = (B^T kron A) vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .dynamics import BathSpec
from .measures import MIN_PROBABILITY

MAX_ORACLE_SITES = 5

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |G><E| in (G, E) order
_SZ = np.diag([-1.0, 1.0]).astype(complex)


@dataclass
class DenseLiouvillian:
    matrix: np.ndarray
    n_sites: int

    @property
    def dim(self) -> int:
        return 1 << self.n_sites


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


def embed(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Single-site operator on 1-based ``site`` as a dense 2^N matrix."""
    out = np.ones((1, 1), dtype=complex)
    for k in range(1, n_sites + 1):
        out = np.kron(out, op if k == site else np.eye(2))
    return out


def _dissipator(a: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> 2 a rho a^+ - a^+ a rho - rho a^+ a."""
    eye = np.eye(a.shape[0])
    ada = a.conj().T @ a
    return 2 * np.kron(a.conj(), a) - np.kron(eye, ada) - np.kron(ada.T, eye)


def dense_liouvillian(bath: BathSpec, n_sites: int | None = None) -> DenseLiouvillian:
    n = bath.n_sites if n_sites is None else n_sites
    if n != bath.n_sites:
        raise ValueError(f"bath describes {bath.n_sites} sites, asked for {n}")
    if n > MAX_ORACLE_SITES:
        raise ValueError(f"dense oracle limited to N <= {MAX_ORACLE_SITES}, got {n}")
    d = 1 << n
    mat = np.zeros((d * d, d * d), dtype=complex)
    for j, (gamma, occ) in enumerate(zip(bath.gammas, bath.occupations), start=1):
        jump = embed(_LOWER, j, n) + embed(_LOWER, j + 1, n)
        mat += gamma * (occ + 1) * _dissipator(jump)
        mat += gamma * occ * _dissipator(jump.conj().T)
    return DenseLiouvillian(mat, n)


def apply_dense(lv: DenseLiouvillian, rho: np.ndarray) -> np.ndarray:
    return unvec(lv.matrix @ vec(rho), lv.dim)


def expm_propagate(lv: DenseLiouvillian, rho0: np.ndarray, t: float) -> np.ndarray:
    """exp(t L) rho0 via Pade scaling-and-squaring (``scipy.linalg.expm``)."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    return unvec(la.expm(t * lv.matrix) @ vec(rho0), lv.dim)


def _kernel(mat: np.ndarray, tol: float) -> np.ndarray:
    _, s, vh = la.svd(mat)
    return vh[s < tol].conj()


def steady_nullspace(lv: DenseLiouvillian, tol: float = 1e-10) -> list[np.ndarray]:
    """Orthonormal basis of ker L, re-matrixed (elements need not be states)."""
    ker = _kernel(lv.matrix, tol)
    if len(ker) == 0:
        raise ValueError("generator has an empty kernel; it cannot be trace preserving")
    return [unvec(v, lv.dim) for v in ker]


def steady_projection(lv: DenseLiouvillian, rho0: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Long-time limit of exp(tL) rho0 from the right and left kernels of L.

    The limit is the spectral projector onto ker L applied to rho0, which
    exists when every nonzero eigenvalue has negative real part and the zero
    eigenvalue is semisimple (true for these generators).
    """
    right = _kernel(lv.matrix, tol).T  # columns span ker L
    left = _kernel(lv.matrix.conj().T, tol).conj()  # rows: w with w L = 0
    proj = right @ np.linalg.solve(left @ right, left)
    rho = unvec(proj @ vec(rho0), lv.dim)
    return 0.5 * (rho + rho.conj().T)


def _entropy_batch(m: np.ndarray) -> np.ndarray:
    lam = np.clip(np.linalg.eigvalsh(m), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -np.where(lam > 0, lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0).sum(axis=-1)


def conditional_entropy_grid(pair: np.ndarray, measured_side: str, thetas: np.ndarray,
                             phis: np.ndarray, chunk: int = 20000) -> np.ndarray:
    """sum_i p_i S(rho_i) for every (theta, phi) on a grid, from full 4x4 post-measurement states."""
    pair = np.asarray(pair, dtype=complex)
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    th, ph = th.ravel(), ph.ravel()
    out = np.empty(th.size)
    eye = np.eye(2)
    for lo in range(0, th.size, chunk):
        t, p = th[lo:lo + chunk], ph[lo:lo + chunk]
        b = np.stack([np.exp(1j * p) * np.sin(t / 2), np.cos(t / 2) + 0j], axis=-1)
        b1 = b[:, :, None] * b[:, None, :].conj()
        total = np.zeros(t.size)
        for proj in (b1, eye - b1):
            if measured_side == "B":
                k = np.einsum("ac,nbd->nabcd", eye, proj).reshape(-1, 4, 4)
            else:
                k = np.einsum("nac,bd->nabcd", proj, eye).reshape(-1, 4, 4)
            post = k @ pair @ k
            prob = np.trace(post, axis1=1, axis2=2).real
            safe = np.where(prob > MIN_PROBABILITY, prob, 1.0)
            total += np.where(prob > MIN_PROBABILITY, prob * _entropy_batch(post / safe[:, None, None]), 0.0)
        out[lo:lo + chunk] = total
    return out.reshape(len(thetas), len(phis))


def _entropy(m: np.ndarray) -> float:
    return float(_entropy_batch(np.asarray(m, dtype=complex)[None])[0])


def discord_grid(pair: np.ndarray, measured_side: str = "B", resolution_deg: float = 0.5) -> float:
    """Quantum discord with the measurement optimized by exhaustive grid search."""
    if resolution_deg > 1:
        raise ValueError(f"resolution_deg must be <= 1, got {resolution_deg}")
    if measured_side not in ("A", "B"):
        raise ValueError(f"measured_side must be 'A' or 'B', got {measured_side!r}")
    pair = np.asarray(pair, dtype=complex)
    n_theta = int(round(180 / resolution_deg)) + 1
    n_phi = 2 * int(round(180 / resolution_deg))
    thetas = np.linspace(0, np.pi, n_theta)
    # (theta, phi + pi) and (pi - theta, phi) are the same measurement with the
    # outcomes swapped; the theta grid is symmetric, so phi in [0, pi) covers
    # every point of the full [0, 2 pi) grid
    phis = np.arange(n_phi // 2) * (2 * np.pi / n_phi)
    h_min = conditional_entropy_grid(pair, measured_side, thetas, phis).min()
    t = pair.reshape(2, 2, 2, 2)
    rho_a = np.einsum("abcb->ac", t)
    rho_b = np.einsum("abad->bd", t)
    s_a, s_b, s_ab = _entropy(rho_a), _entropy(rho_b), _entropy(pair)
    info = s_a + s_b - s_ab
    classical = (s_a if measured_side == "B" else s_b) - h_min
    return float(info - classical)


def random_density(n_sites: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random full-rank (or given-rank) density matrix from a Ginibre matrix."""
    d = 1 << n_sites
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_bath(n_sites: int, rng: np.random.Generator) -> BathSpec:
    return BathSpec(tuple(rng.uniform(0.2, 2.0, n_sites - 1)), tuple(rng.uniform(0.0, 1.5, n_sites - 1)))


def collective_dense(n_sites: int) -> list[np.ndarray]:
    """Dense J_x, J_y, J_z."""
    sx = _LOWER + _LOWER.T
    sy = -1j * (_LOWER.T - _LOWER)
    return [0.5 * sum(embed(s, j, n_sites) for j in range(1, n_sites + 1)) for s in (sx, sy, _SZ)]


def squeezing_scan(rho: np.ndarray, resolution_deg: float = 0.1) -> float:
    """min over perpendicular directions of 4 Var(J_dir) / N by angular scan.

    The perpendicular plane comes from an SVD null space of the mean spin, so
    no particular frame convention is involved.  The coarse scan is followed by
    one finer scan around its best angle.
    """
    rho = np.asarray(rho, dtype=complex)
    n = int(np.log2(rho.shape[0]))
    js = collective_dense(n)
    mean = np.array([np.trace(rho @ j).real for j in js])
    if np.linalg.norm(mean) <= 1e-12 * n:
        raise ValueError("mean spin vanishes; squeezing undefined")
    plane = la.null_space(mean[None, :]).T  # two orthonormal rows

    def variance(alpha: np.ndarray) -> np.ndarray:
        out = np.empty(alpha.size)
        for k, a in enumerate(alpha):
            u = np.cos(a) * plane[0] + np.sin(a) * plane[1]
            op = sum(c * j for c, j in zip(u, js))
            out[k] = np.trace(rho @ op @ op).real - np.trace(rho @ op).real ** 2
        return out

    step = np.radians(resolution_deg)
    coarse = np.arange(0.0, np.pi, step)
    v = variance(coarse)
    best = coarse[np.argmin(v)]
    fine = best + np.linspace(-step, step, 201)
    return float(4.0 / n * min(v.min(), variance(fine).min()))
