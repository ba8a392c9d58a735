"""Fixture states and seeded random generators.

Randomness comes from ``numpy.random.Generator`` over the PCG64 bit
generator.  Every function accepts ``seed`` as an int (a fresh, reproducible
stream) or an existing ``Generator`` (draws continue that stream).
"""
from __future__ import annotations

import numpy as np

from .linalg import PureState, check_density, dagger, projector

_BELL = np.array(
    [
        [1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
    ],
    dtype=complex,
) / np.sqrt(2)

BELL_LABELS = ("Phi+", "Phi-", "Psi+", "Psi-")


def rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is not None and not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def bell_state(k: int = 0) -> PureState:
    """(|00>+|11>), (|00>-|11>), (|01>+|10>), (|01>-|10>), each over sqrt(2)."""
    if k not in range(4):
        raise ValueError(f"Bell index must be 0..3, got {k}")
    return PureState(_BELL[k], (2, 2))


def bell_basis() -> "MeasurementBasis":
    from .teleport import MeasurementBasis

    return MeasurementBasis([bell_state(k) for k in range(4)])


def werner(p: float) -> np.ndarray:
    """p |Phi+><Phi+| + (1 - p) 1/4."""
    if not 0 <= p <= 1:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {p}")
    return p * projector(_BELL[0]) + (1 - p) * np.eye(4) / 4


def haar_unitary(d: int, seed=None) -> np.ndarray:
    g = rng(seed)
    z = (g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_vector(d: int, seed=None) -> np.ndarray:
    g = rng(seed)
    v = g.standard_normal(d) + 1j * g.standard_normal(d)
    return v / np.linalg.norm(v)


def random_pure(dims, seed=None) -> PureState:
    dims = tuple(int(d) for d in dims)
    return PureState(random_vector(int(np.prod(dims)), seed), dims)


def random_density(d: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Random density operator of the requested rank (full rank by default)."""
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise ValueError(f"rank must be in 1..{d}, got {rank}")
    g = rng(seed)
    m = g.standard_normal((d, rank)) + 1j * g.standard_normal((d, rank))
    rho = m @ dagger(m)
    rho = (rho + dagger(rho)) / 2
    return check_density(rho / np.trace(rho).real)


def random_hermitian(d: int, seed=None) -> np.ndarray:
    g = rng(seed)
    m = g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))
    return (m + dagger(m)) / 2


def random_orthonormal_basis(d: int, seed=None) -> np.ndarray:
    """Columns of a Haar unitary."""
    return haar_unitary(d, seed)


def product_state(phi_a, phi_b) -> PureState:
    phi_a = np.asarray(phi_a, dtype=complex)
    phi_b = np.asarray(phi_b, dtype=complex)
    return PureState(np.kron(phi_a, phi_b), (phi_a.size, phi_b.size))


def basis_vector(d: int, k: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[k] = 1
    return e
