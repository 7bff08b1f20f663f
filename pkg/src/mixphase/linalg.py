"""Dense complex linear algebra for registers of at most three qubits.

Matrices are plain ``numpy`` complex128 arrays; nothing here is larger than
8x8, so everything is computed exactly (eigendecomposition, no series).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

MAX_DIM = 8

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    if max(m.shape) > MAX_DIM:
        raise ValueError(f"dimension {m.shape} exceeds {MAX_DIM}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``; the result may not exceed 8x8."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if rows > MAX_DIM or cols > MAX_DIM:
        raise ValueError(f"kron result {rows}x{cols} exceeds {MAX_DIM}x{MAX_DIM}")
    return np.kron(a, b)


def kron_all(*factors) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def pauli_vector(axis: Sequence[float]) -> np.ndarray:
    """``n . sigma`` for a real 3-vector ``n``."""
    nx, ny, nz = axis
    return nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z


def unit_axis(axis: Sequence[float], tol: float = 1e-12) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)):
        raise ValueError(f"axis must be a finite 3-vector, got {axis!r}")
    if abs(np.linalg.norm(n) - 1.0) > tol:
        raise ValueError(f"axis {axis!r} is not a unit vector (norm {np.linalg.norm(n)!r})")
    return n


def su2_exp(axis: Sequence[float], angle: float) -> np.ndarray:
    """Rotate by ``angle`` about ``axis``: cos(angle/2) I - i sin(angle/2) (n . sigma)."""
    n = unit_axis(axis)
    half = 0.5 * angle
    return np.cos(half) * IDENTITY2 - 1j * np.sin(half) * pauli_vector(n)


def is_hermitian(h, tol: float = 1e-10) -> bool:
    h = np.asarray(h)
    return h.shape[0] == h.shape[1] and bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= tol)


def expm_hermitian(h, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian ``h``, via eigendecomposition."""
    h = _as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"generator must be square, got {h.shape}")
    if not is_hermitian(h):
        raise ValueError("generator is not Hermitian within 1e-10")
    # symmetrise so eigh sees an exactly Hermitian matrix
    evals, evecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every factor of ``rho`` whose index is not in ``keep``.

    ``dims`` lists the factor dimensions in tensor order; kept factors stay in
    their original order.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("rho must be square")
    if any(d < 1 for d in dims) or int(np.prod(dims)) != rho.shape[0]:
        raise ValueError(f"dims {dims} inconsistent with rho of shape {rho.shape}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")

    n = len(dims)
    tensor = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace pairs from the highest index down so axis numbering stays valid
    for count, i in enumerate(sorted(traced, reverse=True)):
        remaining = n - count
        tensor = np.trace(tensor, axis1=i, axis2=i + remaining)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(d, d)


def unitarity_error(u) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
