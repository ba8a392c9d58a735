"""s-maps and j-maps of bipartite vectors.

For psi = sum_ab C[a, b] |a>|b> the map from A to B is
``phi -> sum_a <phi|a> C[a, :]``, i.e. ``kmatrix = C.T``; the map from B
to A has ``kmatrix = C``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .antilinear import (
    AntilinearMap,
    adjoint,
    apply,
    compose_anti_anti,
    compose_anti_linear,
    compose_linear_anti,
    sandwich,
)
from .linalg import (
    RANK_TOL,
    TOL_EQ,
    DimensionError,
    InvariantError,
    PureState,
    as_matrix,
    bipartite,
    dagger,
    is_unitary,
    matrix_sqrt,
    partial_trace,
    pinv_psd,
    support_projector,
    tensor,
    unit_vector,
)


def smap_from_vector(psi, direction: str = "BA", dims=None) -> AntilinearMap:
    """The antilinear map canonically attached to a bipartite vector.

    ``direction="BA"`` gives the map from the first factor to the second,
    ``"AB"`` the reverse.  ``psi`` need not be normalized.
    """
    psi = bipartite(psi, dims, unnormalized=True)
    c = psi.coefficients
    direction = direction.upper()
    if direction == "BA":
        return AntilinearMap(c.T)
    if direction == "AB":
        return AntilinearMap(c)
    raise ValueError(f"direction must be 'BA' or 'AB', got {direction!r}")


def vector_from_smap(s: AntilinearMap, direction: str = "BA") -> PureState:
    """Inverse of :func:`smap_from_vector`."""
    k = s.kmatrix
    c = k.T if direction.upper() == "BA" else k
    return PureState.from_coefficients(c, unnormalized=True)


def measure_update_vector(psi, phi_a, dims=None) -> tuple[float, PureState]:
    """Project factor A onto ``phi_a``; returns (probability, prepared vector)."""
    psi = bipartite(psi, dims)
    phi_a = unit_vector(phi_a, "phi_a")
    if phi_a.size != psi.dims[0]:
        raise DimensionError(f"phi_a has length {phi_a.size}, factor A is {psi.dims[0]}")
    s = smap_from_vector(psi, "BA")
    prepared = tensor(phi_a, apply(s, phi_a))
    prob = float(np.vdot(prepared, prepared).real)
    return prob, PureState(prepared, psi.dims, unnormalized=True)


def reconstruct_from_resolution(psi, basis, dims=None) -> PureState:
    """Rebuild psi as ``sum_k phi_k (x) s(phi_k)`` over a resolution of 1_A.

    ``basis`` holds the vectors ``phi_k`` as columns (or as a list).
    """
    psi = bipartite(psi, dims)
    vecs = _columns(basis)
    da = psi.dims[0]
    if vecs.shape[0] != da:
        raise DimensionError(f"basis vectors have length {vecs.shape[0]}, expected {da}")
    if not np.allclose(vecs @ dagger(vecs), np.eye(da), atol=1e-10, rtol=0):
        raise InvariantError("basis.resolution_of_identity", "sum |phi_k><phi_k| != 1")
    s = smap_from_vector(psi, "BA")
    out = sum(tensor(vecs[:, k], apply(s, vecs[:, k])) for k in range(vecs.shape[1]))
    return PureState(out, psi.dims, unnormalized=True)


def _columns(basis) -> np.ndarray:
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        return basis.astype(complex)
    return np.column_stack([np.asarray(v, dtype=complex).ravel() for v in basis])


def overlap_via_smaps(phi, psi, dims=None) -> tuple[complex, complex]:
    """<psi, phi> computed as Tr_A s_phi^AB s_psi^BA and Tr_B s_phi^BA s_psi^AB."""
    phi = bipartite(phi, dims, unnormalized=True)
    psi = bipartite(psi, dims, unnormalized=True)
    if phi.dims != psi.dims:
        raise DimensionError(f"dims differ: {phi.dims} vs {psi.dims}")
    tr_a = np.trace(compose_anti_anti(smap_from_vector(phi, "AB"), smap_from_vector(psi, "BA")))
    tr_b = np.trace(compose_anti_anti(smap_from_vector(phi, "BA"), smap_from_vector(psi, "AB")))
    return complex(tr_a), complex(tr_b)


def reduced_densities_via_smaps(psi, dims=None) -> tuple[np.ndarray, np.ndarray]:
    psi = bipartite(psi, dims, unnormalized=True)
    s_ba = smap_from_vector(psi, "BA")
    s_ab = adjoint(s_ba)
    return compose_anti_anti(s_ab, s_ba), compose_anti_anti(s_ba, s_ab)


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray  # weights p_j, descending
    left_vectors: np.ndarray  # columns in A
    right_vectors: np.ndarray  # columns in B

    def reconstruct(self) -> np.ndarray:
        amp = np.sqrt(self.coefficients)
        return sum(
            amp[j] * tensor(self.left_vectors[:, j], self.right_vectors[:, j])
            for j in range(amp.size)
        )

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > RANK_TOL))


def schmidt(psi, dims=None) -> SchmidtDecomposition:
    """Schmidt form via the SVD of the coefficient matrix.

    With ``C = U diag(sigma) V^H`` the pairs are ``(U[:, j], conj(V[:, j]))``,
    so that ``s(U[:, j]) = sigma_j conj(V[:, j])``.
    """
    psi = bipartite(psi, dims, unnormalized=True)
    u, sigma, vh = np.linalg.svd(psi.coefficients)
    r = sigma.size
    return SchmidtDecomposition(sigma**2, u[:, :r], vh[:r, :].T)


def schmidt_orthonormal_bases(psi, dims=None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt weights padded with zeros plus complete orthonormal bases of A and B.

    Column ``j`` of each basis is the j-th Schmidt partner; columns past the
    Schmidt rank complete the bases arbitrarily.
    """
    psi = bipartite(psi, dims, unnormalized=True)
    da, db = psi.dims
    u, sigma, vh = np.linalg.svd(psi.coefficients, full_matrices=True)
    p = np.zeros(max(da, db))
    p[: sigma.size] = sigma**2
    return p, u, vh.T


def smap_from_schmidt(dec: SchmidtDecomposition) -> AntilinearMap:
    """s^BA assembled term by term from a Schmidt form, phi -> sum sqrt(p_j) <phi|u_j> v_j."""
    amp = np.sqrt(dec.coefficients)
    k = sum(
        amp[j] * np.outer(dec.right_vectors[:, j], dec.left_vectors[:, j])
        for j in range(amp.size)
    )
    return AntilinearMap(k)


def polar_jmaps(psi, dims=None) -> tuple[AntilinearMap, AntilinearMap]:
    """Partial antiunitaries j^BA, j^AB with s^BA = j^BA sqrt(rho_A) = sqrt(rho_B) j^BA."""
    psi = bipartite(psi, dims, unnormalized=True)
    s_ba = smap_from_vector(psi, "BA")
    rho_a, _ = reduced_densities_via_smaps(psi)
    j_ba = compose_anti_linear(s_ba, pinv_psd(rho_a, power=0.5))
    return j_ba, adjoint(j_ba)


class EntanglementClass(str, Enum):
    PRODUCT = "product"
    PARTIAL = "partial"
    COMPLETELY_ENTANGLED = "completely_entangled"
    MAXIMALLY_ENTANGLED = "maximally_entangled"


def entanglement_class(psi, respect_to: str = "A", dims=None) -> EntanglementClass:
    psi = bipartite(psi, dims, unnormalized=True)
    d = psi.dims[0] if respect_to.upper() == "A" else psi.dims[1]
    p = schmidt(psi).coefficients
    nonzero = p[p > RANK_TOL]
    if nonzero.size == 1:
        return EntanglementClass.PRODUCT
    if nonzero.size < d:
        return EntanglementClass.PARTIAL
    if nonzero.max() - nonzero.min() < TOL_EQ:
        return EntanglementClass.MAXIMALLY_ENTANGLED
    return EntanglementClass.COMPLETELY_ENTANGLED


@dataclass
class LocalTransformReport:
    ba_error: float
    ab_error: float

    @property
    def ok(self) -> bool:
        return max(self.ba_error, self.ab_error) < TOL_EQ


def local_transform_smap(psi, x, y, dims=None) -> LocalTransformReport:
    """Compare s-maps of (X (x) Y) psi against Y s^BA X* and X s^AB Y*."""
    psi = bipartite(psi, dims, unnormalized=True)
    x, y = as_matrix(x), as_matrix(y)
    da, db = psi.dims
    if x.shape != (da, da) or y.shape != (db, db):
        raise DimensionError(f"local operators {x.shape}, {y.shape} do not fit {psi.dims}")
    phi = PureState(np.kron(x, y) @ psi.vector, psi.dims, unnormalized=True)
    s_ba, s_ab = smap_from_vector(psi, "BA"), smap_from_vector(psi, "AB")
    pred_ba = compose_linear_anti(y, compose_anti_linear(s_ba, dagger(x)))
    pred_ab = compose_linear_anti(x, compose_anti_linear(s_ab, dagger(y)))
    err_ba = np.max(np.abs(smap_from_vector(phi, "BA").kmatrix - pred_ba.kmatrix))
    err_ab = np.max(np.abs(smap_from_vector(phi, "AB").kmatrix - pred_ab.kmatrix))
    return LocalTransformReport(float(err_ba), float(err_ab))


def stabilizer_partner(psi, u_a, dims=None) -> np.ndarray:
    """U_B = j^BA o U_A o j^AB for a maximally entangled psi."""
    psi = bipartite(psi, dims)
    maximal = EntanglementClass.MAXIMALLY_ENTANGLED
    if entanglement_class(psi, "A") is not maximal or entanglement_class(psi, "B") is not maximal:
        raise InvariantError("state.maximally_entangled", "psi is not maximally entangled")
    u_a = as_matrix(u_a)
    if not is_unitary(u_a, 1e-10):
        raise InvariantError("u_a.unitary", "U_A is not unitary")
    j_ba, j_ab = polar_jmaps(psi)
    return sandwich(j_ba, u_a, j_ab)


def stabilizer_check(psi, u_a, dims=None) -> tuple[np.ndarray, bool]:
    psi = bipartite(psi, dims)
    u_b = stabilizer_partner(psi, u_a)
    moved = np.kron(u_a, u_b) @ psi.vector
    return u_b, bool(np.max(np.abs(moved - psi.vector)) < TOL_EQ)


def sqrt_reduced(psi, dims=None) -> tuple[np.ndarray, np.ndarray]:
    """(sqrt(rho_A), sqrt(rho_B)) from the partial traces of |psi><psi|."""
    psi = bipartite(psi, dims, unnormalized=True)
    rho = psi.density()
    return (
        matrix_sqrt(partial_trace(rho, 0, psi.dims)),
        matrix_sqrt(partial_trace(rho, 1, psi.dims)),
    )


def support_projectors(psi, dims=None) -> tuple[np.ndarray, np.ndarray]:
    rho_a, rho_b = reduced_densities_via_smaps(bipartite(psi, dims, unnormalized=True))
    return support_projector(rho_a), support_projector(rho_b)
