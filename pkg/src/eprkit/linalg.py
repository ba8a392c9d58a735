"""Dense complex linear algebra shared by the rest of the package.

Composite indices are row-major everywhere: the basis vector |a, b> of
C^dA (x) C^dB sits at position ``a * dB + b``, and |a, b, c> at
``a * dB * dC + b * dC + c``.  This is exactly what ``np.kron`` and
``ndarray.reshape`` produce, so no other convention appears anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

TOL_NORM = 1e-9
TOL_HERM = 1e-10
TOL_PSD = 1e-9
TOL_EQ = 1e-9
RANK_TOL = 1e-9


class DimensionError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


class InvariantError(ValueError):
    """A value violates a named invariant (the name is stored on ``.invariant``)."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionError(f"expected a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvariantError("matrix.finite", "entries must be finite")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def tensor(*factors) -> np.ndarray:
    """Kronecker product of any number of vectors or matrices.

    1-d inputs stay 1-d when every factor is 1-d, so ``tensor(ket0, ket1)``
    is again a ket.
    """
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    arrays = [np.asarray(f, dtype=complex) for f in factors]
    return reduce(np.kron, arrays)


def _check_dims(n: int, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"factor dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != n:
        raise DimensionError(f"dims {dims} do not multiply to {n}")
    return dims


def partial_trace(rho, keep, dims: Sequence[int]) -> np.ndarray:
    """Reduce an operator on a tensor product to the factors listed in ``keep``.

    ``keep`` is a factor index or a sequence of them.  Factor labels ``"A"``,
    ``"B"``, ``"C"`` are accepted as aliases for 0, 1, 2.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"partial trace needs a square operator, got {rho.shape}")
    dims = _check_dims(rho.shape[0], dims)
    if isinstance(keep, (int, np.integer, str)):
        keep = [keep]
    keep = sorted({_factor_index(k) for k in keep})
    if any(k >= len(dims) for k in keep):
        raise DimensionError(f"cannot keep factors {keep} of {len(dims)}")

    n = len(dims)
    t = rho.reshape(dims + dims)
    # trace out the highest factor first so earlier axis numbers stay valid
    for k in reversed(range(n)):
        if k in keep:
            continue
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def _factor_index(k) -> int:
    if isinstance(k, str):
        return "ABC".index(k.upper())
    return int(k)


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m)), initial=0.0) <= tol


def eigh_psd(p, tol: float = TOL_PSD) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian PSD matrix with tiny negatives clamped."""
    p = as_matrix(p)
    if not is_hermitian(p, max(tol, TOL_HERM)):
        raise NotPSDError("matrix is not Hermitian")
    w, v = np.linalg.eigh((p + dagger(p)) / 2)
    if w.size and w.min() < -tol:
        raise NotPSDError(f"eigenvalue {w.min():.3e} below -{tol:g}")
    return np.clip(w, 0.0, None), v


def _drop_noise(w: np.ndarray) -> np.ndarray:
    # eigenvalues this small are rounding noise; their square roots are not
    floor = w.size * np.finfo(float).eps * np.max(np.abs(w), initial=0.0)
    return np.where(w > floor, w, 0.0)


def matrix_sqrt(p, tol: float = TOL_PSD) -> np.ndarray:
    w, v = eigh_psd(p, tol)
    return (v * np.sqrt(_drop_noise(w))) @ dagger(v)


def pinv_psd(p, power: float = 1.0, cutoff: float = RANK_TOL) -> np.ndarray:
    """``p ** -power`` on the support of ``p``, zero on its kernel."""
    w, v = eigh_psd(p)
    inv = np.zeros_like(w)
    keep = w > cutoff
    inv[keep] = w[keep] ** (-power)
    return (v * inv) @ dagger(v)


def support_projector(p, cutoff: float = RANK_TOL) -> np.ndarray:
    w, v = eigh_psd(p)
    vs = v[:, w > cutoff]
    return vs @ dagger(vs)


def trace_norm(m) -> float:
    return float(np.sum(np.linalg.svd(as_matrix(m), compute_uv=False)))


def fidelity(rho1, rho2) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))**2``."""
    rho1, rho2 = as_matrix(rho1), as_matrix(rho2)
    if rho1.shape != rho2.shape:
        raise DimensionError(f"shape mismatch {rho1.shape} vs {rho2.shape}")
    s1 = matrix_sqrt(rho1)
    inner = s1 @ rho2 @ s1
    w, _ = eigh_psd((inner + dagger(inner)) / 2)
    return float(np.sum(np.sqrt(_drop_noise(w))) ** 2)


def check_density(rho, subnormalized: bool = False) -> np.ndarray:
    """Validate a density operator and return it as a complex matrix.

    Raises ``InvariantError`` naming the first violated invariant.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise InvariantError("density.square", f"shape {rho.shape}")
    if not is_hermitian(rho, TOL_HERM):
        raise InvariantError("density.hermitian", "operator is not Hermitian")
    w = np.linalg.eigvalsh((rho + dagger(rho)) / 2)
    if w.min() < -TOL_PSD:
        raise InvariantError("density.psd", f"eigenvalue {w.min():.3e}")
    tr = np.trace(rho).real
    if subnormalized:
        if tr > 1 + TOL_NORM:
            raise InvariantError("density.trace_at_most_one", f"trace {tr!r}")
    elif abs(tr - 1) > TOL_NORM:
        raise InvariantError("density.trace_one", f"trace {tr!r}")
    return rho


def projector(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex).ravel()
    return np.outer(phi, phi.conj())


def unit_vector(phi, name: str = "vector") -> np.ndarray:
    phi = np.asarray(phi, dtype=complex).ravel()
    nrm = np.linalg.norm(phi)
    if abs(nrm - 1) > TOL_NORM:
        raise InvariantError(f"{name}.unit_norm", f"norm {nrm!r}")
    return phi


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        dagger(u) @ u, np.eye(u.shape[0]), atol=tol, rtol=0
    )


def swap_factors(da: int, db: int) -> np.ndarray:
    """Permutation taking |a, b> in A(x)B to |b, a> in B(x)A."""
    p = np.zeros((da * db, da * db))
    for a in range(da):
        for b in range(db):
            p[b * da + a, a * db + b] = 1
    return p


@dataclass(frozen=True)
class PureState:
    """A vector on a product of two or three labelled factors.

    ``unnormalized`` marks post-measurement vectors that skip the unit-norm
    check.
    """

    vector: np.ndarray
    dims: tuple[int, ...]
    unnormalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).ravel()
        if not np.all(np.isfinite(v)):
            raise InvariantError("pure_state.finite", "amplitudes must be finite")
        dims = _check_dims(v.size, self.dims)
        if len(dims) not in (2, 3):
            raise DimensionError(f"a PureState has 2 or 3 factors, got {len(dims)}")
        if not self.unnormalized and abs(np.linalg.norm(v) - 1) > TOL_NORM:
            raise InvariantError("pure_state.unit_norm", f"norm {np.linalg.norm(v)!r}")
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_coefficients(cls, c, unnormalized: bool = False) -> "PureState":
        c = np.asarray(c, dtype=complex)
        return cls(c.ravel(), c.shape, unnormalized=unnormalized)

    @property
    def coefficients(self) -> np.ndarray:
        """Amplitudes reshaped to ``dims``; for two factors the matrix C[a, b]."""
        return self.vector.reshape(self.dims)

    def density(self) -> np.ndarray:
        return projector(self.vector)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.vector, dtype=dtype)


def as_state(psi, dims: Sequence[int] | None = None, unnormalized: bool = False) -> PureState:
    if isinstance(psi, PureState):
        return psi
    if dims is None:
        raise DimensionError("factor dims are required for a bare vector")
    return PureState(psi, tuple(dims), unnormalized=unnormalized)


def bipartite(psi, dims=None, unnormalized: bool = False) -> PureState:
    psi = as_state(psi, dims, unnormalized)
    if len(psi.dims) != 2:
        raise DimensionError(f"expected a bipartite state, got dims {psi.dims}")
    return psi
