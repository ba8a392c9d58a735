"""EPR channel maps of bipartite density operators.

A decomposition rho = sum_i |psi_i><psi_i| yields antilinear maps s_i and
the channel ``omega -> sum_i s_i omega s_i*``.  In matrix form this is
``sum_i K_i conj(omega) K_i^H``: not completely positive itself, but
completely positive after a complex conjugation of the input.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .antilinear import AntilinearMap, adjoint, apply, sandwich
from .linalg import (
    RANK_TOL,
    TOL_EQ,
    DimensionError,
    InvariantError,
    as_matrix,
    check_density,
    dagger,
    projector,
    swap_factors,
    unit_vector,
)
from .smap import smap_from_vector


@dataclass(frozen=True)
class ChannelMap:
    src_dim: int
    dst_dim: int
    kraus: tuple[AntilinearMap, ...]
    origin: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for s in self.kraus:
            if (s.src_dim, s.dst_dim) != (self.src_dim, self.dst_dim):
                raise DimensionError(
                    f"Kraus map {s.src_dim}->{s.dst_dim} in a {self.src_dim}->{self.dst_dim} channel"
                )

    def __call__(self, omega):
        return apply_channel(self, omega)

    def dual(self, y):
        return dual_channel(self, y)


def _eigen_vectors(rho: np.ndarray) -> list[np.ndarray]:
    w, v = np.linalg.eigh((rho + dagger(rho)) / 2)
    return [np.sqrt(w[i]) * v[:, i] for i in range(w.size) if w[i] > RANK_TOL]


def channel_from_vectors(vectors: Sequence, dims, direction: str = "BA") -> ChannelMap:
    """Channel built from an explicit decomposition rho = sum |psi_i><psi_i|."""
    da, db = (int(d) for d in dims)
    kraus = tuple(smap_from_vector(np.asarray(v).ravel(), direction, (da, db)) for v in vectors)
    src, dst = (da, db) if direction.upper() == "BA" else (db, da)
    return ChannelMap(src, dst, kraus)


def channel_from_density(rho_ab, dims, direction: str = "BA") -> ChannelMap:
    """Channel of ``rho_ab`` from its eigendecomposition.

    ``direction="BA"`` maps operators on the first factor to the second;
    ``"AB"`` maps the other way.  Eigenvalues at or below ``RANK_TOL`` are
    dropped.
    """
    try:
        rho = check_density(rho_ab)
    except InvariantError as exc:
        raise InvariantError(exc.invariant, f"not a density operator ({exc})") from None
    da, db = (int(d) for d in dims)
    if rho.shape[0] != da * db:
        raise DimensionError(f"dims {dims} do not fit a {rho.shape[0]}-dim operator")
    ch = channel_from_vectors(_eigen_vectors(rho), (da, db), direction)
    return ChannelMap(ch.src_dim, ch.dst_dim, ch.kraus, origin=rho)


def apply_channel(ch: ChannelMap, omega) -> np.ndarray:
    omega = as_matrix(omega)
    if omega.shape != (ch.src_dim, ch.src_dim):
        raise DimensionError(f"input {omega.shape} does not fit source dim {ch.src_dim}")
    out = np.zeros((ch.dst_dim, ch.dst_dim), dtype=complex)
    w = np.conj(omega)
    for s in ch.kraus:
        out += s.kmatrix @ w @ dagger(s.kmatrix)
    return out


def dual_channel(ch: ChannelMap, y) -> np.ndarray:
    """Operator X on the source with Tr(pi X) = Tr(Phi(pi) Y) for every pure pi.

    Realized as ``sum_i s_i* o Y^H o s_i``; for Hermitian Y the adjoint
    drops out.
    """
    y = as_matrix(y)
    if y.shape != (ch.dst_dim, ch.dst_dim):
        raise DimensionError(f"observable {y.shape} does not fit target dim {ch.dst_dim}")
    x = np.zeros((ch.src_dim, ch.src_dim), dtype=complex)
    for s in ch.kraus:
        x += sandwich(adjoint(s), dagger(y), s)
    return x


def lueders_update(rho_ab, phi_a, dims) -> tuple[float, np.ndarray]:
    """Post-measurement (pi (x) 1) rho (pi (x) 1) and its trace."""
    rho = check_density(rho_ab)
    da, db = (int(d) for d in dims)
    phi_a = unit_vector(phi_a, "phi_a")
    if phi_a.size != da:
        raise DimensionError(f"phi_a has length {phi_a.size}, factor A is {da}")
    p = np.kron(projector(phi_a), np.eye(db))
    post = p @ rho @ p
    return float(np.trace(post).real), post


def lueders_factorization_error(rho_ab, phi_a, dims, ch: ChannelMap | None = None) -> float:
    """max |(pi (x) 1) rho (pi (x) 1) - pi (x) Phi(pi)|."""
    if ch is None:
        ch = channel_from_density(rho_ab, dims)
    _, post = lueders_update(rho_ab, phi_a, dims)
    pi = projector(phi_a)
    return float(np.max(np.abs(post - np.kron(pi, apply_channel(ch, pi)))))


def spanning_inputs(d: int) -> list[np.ndarray]:
    """Matrix units E_ij, a basis of all d x d operators."""
    units = []
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            units.append(e)
    return units


def channel_distance(ch1: ChannelMap, ch2: ChannelMap) -> float:
    """Largest entrywise output difference over the matrix-unit basis."""
    if (ch1.src_dim, ch1.dst_dim) != (ch2.src_dim, ch2.dst_dim):
        raise DimensionError("channels have different shapes")
    return max(
        float(np.max(np.abs(apply_channel(ch1, e) - apply_channel(ch2, e))))
        for e in spanning_inputs(ch1.src_dim)
    )


@dataclass
class IndependenceReport:
    decomposition_error: float
    channel_error: float

    @property
    def ok(self) -> bool:
        return self.channel_error < TOL_EQ


def channel_decomposition_independence(rho_ab, alt_vectors: Sequence, dims) -> IndependenceReport:
    rho = check_density(rho_ab)
    alt = [np.asarray(v, dtype=complex).ravel() for v in alt_vectors]
    resum = sum(np.outer(v, v.conj()) for v in alt)
    dec_err = float(np.max(np.abs(resum - rho)))
    if dec_err > TOL_EQ:
        raise InvariantError("decomposition.sums_to_rho", f"max deviation {dec_err:.3e}")
    canonical = channel_from_density(rho, dims)
    other = channel_from_vectors(alt, dims)
    return IndependenceReport(dec_err, channel_distance(canonical, other))


def star_choi(ch: ChannelMap) -> np.ndarray:
    """Choi matrix of omega -> Phi(conj(omega)), i.e. sum_ij E_ij (x) Phi(E_ij)."""
    d = ch.src_dim
    out = np.zeros((d * ch.dst_dim, d * ch.dst_dim), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            out += np.kron(e, apply_channel(ch, np.conj(e)))
    return out


def outcome_probability(ch: ChannelMap, phi) -> float:
    """Tr Phi(|phi><phi|)."""
    return float(np.trace(apply_channel(ch, projector(phi))).real)


def swap_density(rho_ab, dims) -> np.ndarray:
    """The same state written on B (x) A."""
    da, db = (int(d) for d in dims)
    p = swap_factors(da, db)
    return p @ as_matrix(rho_ab) @ p.T


def reduced_source(ch: ChannelMap) -> np.ndarray:
    """rho on the source factor, recovered as the dual of the identity."""
    return dual_channel(ch, np.eye(ch.dst_dim))


def kraus_images(ch: ChannelMap, phi) -> list[np.ndarray]:
    return [apply(s, phi) for s in ch.kraus]

