"""Qubit-register states and operator algebra on computational-basis labels.

Site ``j`` (1-based) is encoded in bit ``N - j`` of the basis index, so site 1
is the most significant bit.  Bit value 0 is the ground state ``G`` and bit
value 1 the excited state ``E``::

    basis_state("GEG") -> index 0b010 == 2

Ladder operators are applied by flipping and masking bits; no 2^N x 2^N
operator matrix is ever built here.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

MAX_SITES = 12

# Eigenvalues in [-POSITIVITY_TOL, 0) are numerical noise; below that is an error.
POSITIVITY_TOL = 1e-8

LADDER_OPS = ("plus", "minus", "z")

# A factor is (op, site); a term is (coefficient, factors) meaning
# coefficient * factors[0] @ factors[1] @ ... ; an observable is a sum of terms.
Factor = tuple[str, int]
Term = tuple[complex, Sequence[Factor]]


def check_n_sites(n_sites: int) -> int:
    n = int(n_sites)
    if n != n_sites or not 1 <= n <= MAX_SITES:
        raise ValueError(f"n_sites must be an integer in [1, {MAX_SITES}], got {n_sites!r}")
    return n


def n_sites_of(m: np.ndarray) -> int:
    """Number of qubits for a state vector or square matrix of size 2^N."""
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim or (m.ndim == 2 and m.shape[1] != dim) or m.ndim > 2:
        raise ValueError(f"array of shape {m.shape} is not a qubit-register object")
    return check_n_sites(n)


def site_bit(site: int, n_sites: int) -> int:
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")
    return 1 << (n_sites - site)


def basis_index(label: str) -> int:
    index = 0
    for ch in label:
        if ch not in "GE":
            raise ValueError(f"unknown site symbol {ch!r} in label {label!r}")
        index = (index << 1) | (ch == "E")
    return index


def basis_state(label: str, n_sites: int | None = None) -> np.ndarray:
    """Computational basis vector for a label such as ``"GEG"``."""
    n = len(label) if n_sites is None else check_n_sites(n_sites)
    if len(label) != n:
        raise ValueError(f"label/register size mismatch: label {label!r} has {len(label)} sites, register {n}")
    check_n_sites(n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[basis_index(label)] = 1.0
    return psi


def density_from_pure(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    n_sites_of(psi)
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized (squared norm {norm2!r})")
    return np.outer(psi, psi.conj())


def check_density(rho: np.ndarray, *, hermitian_tol: float = 1e-10, trace_tol: float = 1e-9,
                  positivity_tol: float = POSITIVITY_TOL) -> np.ndarray:
    """Validate density-matrix invariants; returns ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2:
        raise ValueError(f"density matrix must be 2-D, got shape {rho.shape}")
    n_sites_of(rho)
    herm = np.abs(rho - rho.conj().T).max()
    if herm >= hermitian_tol:
        raise ValueError(f"density matrix is not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lam = np.linalg.eigvalsh(rho)[0]
    if lam < -positivity_tol:
        raise ValueError(f"state not positive (minimum eigenvalue {lam:.3e})")
    return rho


def apply_ladder(op: str, site: int, side: str, m: np.ndarray) -> np.ndarray:
    """Return ``sigma_site^op @ m`` (side="left") or ``m @ sigma_site^op`` (side="right").

    ``plus`` raises G to E, ``minus`` is its adjoint and ``z`` is +1 on E and
    -1 on G.  ``m`` may also be a state vector when side is "left".
    """
    m = np.asarray(m)
    n = n_sites_of(m)
    bit = site_bit(site, n)
    idx = np.arange(m.shape[0])
    excited = (idx & bit) != 0
    out = np.zeros(m.shape, dtype=np.result_type(m, complex))
    if side == "left":
        if op == "minus":
            # <i|s-|a> = 1 iff a = i | bit and i has the bit clear
            out[~excited] = m[idx[~excited] | bit]
        elif op == "plus":
            out[excited] = m[idx[excited] ^ bit]
        elif op == "z":
            sign = np.where(excited, 1.0, -1.0)
            out = sign.reshape((-1,) + (1,) * (m.ndim - 1)) * m
        else:
            raise ValueError(f"unknown ladder operator {op!r}")
    elif side == "right":
        if m.ndim != 2:
            raise ValueError("right action needs a matrix")
        if op == "minus":
            out[:, excited] = m[:, idx[excited] ^ bit]
        elif op == "plus":
            out[:, ~excited] = m[:, idx[~excited] | bit]
        elif op == "z":
            out = m * np.where(excited, 1.0, -1.0)
        else:
            raise ValueError(f"unknown ladder operator {op!r}")
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return out


def apply_observable(observable: Iterable[Term], m: np.ndarray) -> np.ndarray:
    """Left action ``O @ m`` of a sum of ladder products."""
    m = np.asarray(m, dtype=complex)
    out = np.zeros_like(m)
    for coeff, factors in observable:
        y = m
        for op, site in reversed(tuple(factors)):
            y = apply_ladder(op, site, "left", y)
        out += coeff * y
    return out


def expectation(rho: np.ndarray, observable: Iterable[Term]) -> complex:
    """``Tr(rho O)`` for an observable given as ``[(coeff, [(op, site), ...]), ...]``.

    An empty factor list stands for the identity.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2:
        raise ValueError(f"expectation needs a density matrix, got shape {rho.shape}")
    n = n_sites_of(rho)
    observable = list(observable)
    for _, factors in observable:
        for op, site in factors:
            if not 1 <= site <= n:
                raise ValueError(f"observable acts on site {site} but the register has {n} sites")
    return complex(np.trace(apply_observable(observable, rho)))


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced state over the 1-based sites in ``keep`` (strictly increasing)."""
    rho = np.asarray(rho)
    n = n_sites_of(rho)
    keep = [int(k) for k in keep]
    if not keep:
        raise ValueError("keep must name at least one site")
    if any(not 1 <= k <= n for k in keep):
        raise ValueError(f"sites {keep} out of range 1..{n}")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise ValueError(f"sites {keep} must be strictly increasing without duplicates")
    kept = [k - 1 for k in keep]
    traced = [k for k in range(n) if k not in kept]
    dk, dt = 1 << len(kept), 1 << len(traced)
    t = rho.reshape((2,) * (2 * n))
    t = t.transpose(kept + traced + [n + k for k in kept] + [n + k for k in traced])
    return np.einsum("aibi->ab", t.reshape(dk, dt, dk, dt))
