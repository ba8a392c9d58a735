"""Twisted doubles of antilinear maps and the modular objects J, Delta, S.

A pair of antilinear maps m_AB: B -> A and m_BA: A -> B defines an
antilinear operator on A (x) B through its action on product vectors,

    (m_AB ~ m_BA)(phi_A (x) phi_B) = m_AB(phi_B) (x) m_BA(phi_A).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antilinear import AntilinearMap, compose_anti_anti, compose_anti_linear
from .linalg import (
    RANK_TOL,
    DimensionError,
    bipartite,
    matrix_sqrt,
    partial_trace,
    pinv_psd,
    support_projector,
)
from .smap import polar_jmaps, schmidt_orthonormal_bases, smap_from_vector


class TwistedAntilinearOperator(AntilinearMap):
    """An antilinear operator on A (x) B that remembers the factor dims."""

    __slots__ = ("dims",)

    def __init__(self, kmatrix, dims):
        super().__init__(kmatrix)
        self.dims = tuple(int(d) for d in dims)
        n = self.dims[0] * self.dims[1]
        if self.kmatrix.shape != (n, n):
            raise DimensionError(f"kmatrix {self.kmatrix.shape} does not fit dims {self.dims}")

    def __repr__(self):
        return f"TwistedAntilinearOperator(dims={self.dims}, kmatrix={self.kmatrix!r})"


def twisted_tensor(m_ab: AntilinearMap, m_ba: AntilinearMap) -> TwistedAntilinearOperator:
    da, db = m_ab.dst_dim, m_ab.src_dim
    if (m_ba.src_dim, m_ba.dst_dim) != (da, db):
        raise DimensionError(
            f"maps {db}->{da} and {m_ba.src_dim}->{m_ba.dst_dim} do not pair up"
        )
    # K[(x, y), (a, b)] = m_ab[x, b] * m_ba[y, a]
    k = np.einsum("xb,ya->xyab", m_ab.kmatrix, m_ba.kmatrix).reshape(da * db, da * db)
    return TwistedAntilinearOperator(k, (da, db))


def modular_conjugation(psi, dims=None) -> TwistedAntilinearOperator:
    psi = bipartite(psi, dims)
    j_ba, j_ab = polar_jmaps(psi)
    return twisted_tensor(j_ab, j_ba)


def modular_conjugation_schmidt(psi, dims=None) -> TwistedAntilinearOperator:
    """J assembled from its action on Schmidt product vectors.

    phi_j (x) phi_k goes to phi_k (x) phi_j when both weights are nonzero,
    to 0 otherwise.  Independent of the polar-decomposition route.
    """
    psi = bipartite(psi, dims)
    da, db = psi.dims
    p, u, v = schmidt_orthonormal_bases(psi)
    k = np.zeros((da * db, da * db), dtype=complex)
    for j in range(da):
        for kk in range(db):
            if p[j] > RANK_TOL and p[kk] > RANK_TOL:
                src = np.kron(u[:, j], v[:, kk])
                dst = np.kron(u[:, kk], v[:, j])
                k += np.outer(dst, src)
    return TwistedAntilinearOperator(k, (da, db))


def reduced_pair(psi) -> tuple[np.ndarray, np.ndarray]:
    rho = psi.density()
    return partial_trace(rho, 0, psi.dims), partial_trace(rho, 1, psi.dims)


def modular_operator(psi, dims=None) -> np.ndarray:
    """rho_A (x) rho_B^{-1}, the inverse taken on the support of rho_B."""
    psi = bipartite(psi, dims)
    rho_a, rho_b = reduced_pair(psi)
    return np.kron(rho_a, pinv_psd(rho_b))


def s_operator(psi, dims=None) -> TwistedAntilinearOperator:
    """S = J o sqrt(Delta)."""
    psi = bipartite(psi, dims)
    j = modular_conjugation(psi)
    s = compose_anti_linear(j, matrix_sqrt(modular_operator(psi)))
    return TwistedAntilinearOperator(s.kmatrix, psi.dims)


def support_of(psi, dims=None) -> np.ndarray:
    """Projector supp(rho_A) (x) supp(rho_B) on A (x) B."""
    psi = bipartite(psi, dims)
    rho_a, rho_b = reduced_pair(psi)
    return np.kron(support_projector(rho_a), support_projector(rho_b))


def twisted_products(psi, dims=None) -> dict[str, TwistedAntilinearOperator]:
    """The four doubles j~j, j~s, s~j, s~s built from psi."""
    psi = bipartite(psi, dims)
    s_ba, s_ab = smap_from_vector(psi, "BA"), smap_from_vector(psi, "AB")
    j_ba, j_ab = polar_jmaps(psi)
    return {
        "jj": twisted_tensor(j_ab, j_ba),
        "js": twisted_tensor(j_ab, s_ba),
        "sj": twisted_tensor(s_ab, j_ba),
        "ss": twisted_tensor(s_ab, s_ba),
    }


@dataclass
class DSReport:
    """Max entrywise residuals of the Delta/S relations.

    ``delta_js``: sqrt(Delta) (j~s) vs s~j.
    ``s_sqrt_rho_b``: S (1 (x) sqrt(rho_B)) vs s~j, the form usually quoted.
    ``s_sqrt_rho_b_js``: the same left side vs j~s, which is what it equals
    for any psi; the two right sides coincide only when rho_A and rho_B
    are both multiples of the identity.
    The ``*_support`` fields restrict both sides to supp(rho_A) (x) supp(rho_B).
    """

    delta_js: float
    s_sqrt_rho_b: float
    s_sqrt_rho_b_js: float
    delta_js_support: float
    s_sqrt_rho_b_support: float
    s_sqrt_rho_b_js_support: float


def _residual(left: np.ndarray, right: np.ndarray, proj: np.ndarray | None = None) -> float:
    diff = left - right
    if proj is not None:
        # antilinear K restricted: P K conj(P)
        diff = proj @ diff @ np.conj(proj)
    return float(np.max(np.abs(diff)))


def verify_ds_relations(psi, dims=None) -> DSReport:
    psi = bipartite(psi, dims)
    _, db = psi.dims
    tw = twisted_products(psi)
    _, rho_b = reduced_pair(psi)
    sqrt_delta = matrix_sqrt(modular_operator(psi))
    lhs1 = sqrt_delta @ tw["js"].kmatrix
    lhs2 = compose_anti_linear(s_operator(psi), np.kron(np.eye(psi.dims[0]), matrix_sqrt(rho_b)))
    lhs2 = lhs2.kmatrix
    proj = support_of(psi)
    return DSReport(
        _residual(lhs1, tw["sj"].kmatrix),
        _residual(lhs2, tw["sj"].kmatrix),
        _residual(lhs2, tw["js"].kmatrix),
        _residual(lhs1, tw["sj"].kmatrix, proj),
        _residual(lhs2, tw["sj"].kmatrix, proj),
        _residual(lhs2, tw["js"].kmatrix, proj),
    )


def square(op: AntilinearMap) -> np.ndarray:
    """op o op, a linear operator."""
    return compose_anti_anti(op, op)
