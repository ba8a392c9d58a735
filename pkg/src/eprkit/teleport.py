"""Quantum part of teleportation as a composition of two EPR maps.

The input phi on A and an ancilla on B (x) C are measured jointly on A (x) B
in an orthonormal basis {psi_i}.  Outcome i carries phi to ``t_i phi`` on C,
where ``t_i = s^CB o s_i^BA`` is linear.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .antilinear import adjoint, compose_anti_anti, sandwich
from .channel import apply_channel, channel_from_density
from .linalg import (
    TOL_NORM,
    DimensionError,
    InvariantError,
    PureState,
    as_matrix,
    bipartite,
    check_density,
    dagger,
    fidelity,
    is_unitary,
    matrix_sqrt,
    partial_trace,
    projector,
    trace_norm,
    unit_vector,
)
from .smap import smap_from_vector
from .states import bell_basis, bell_state, rng, werner


class MeasurementBasis:
    """Orthonormal basis of A (x) B, one ``PureState`` per outcome."""

    def __init__(self, vectors: Sequence):
        states = [v if isinstance(v, PureState) else None for v in vectors]
        if any(s is None for s in states):
            raise TypeError("basis members must be PureState instances")
        if not states:
            raise ValueError("empty basis")
        dims = states[0].dims
        if any(s.dims != dims for s in states) or len(dims) != 2:
            raise DimensionError("basis members must share bipartite dims")
        mat = np.column_stack([s.vector for s in states])
        n = mat.shape[0]
        if mat.shape[1] != n:
            raise InvariantError("basis.complete", f"{mat.shape[1]} vectors for dimension {n}")
        if not np.allclose(dagger(mat) @ mat, np.eye(n), atol=1e-10, rtol=0):
            raise InvariantError("basis.orthonormal", "vectors are not orthonormal")
        if not np.allclose(mat @ dagger(mat), np.eye(n), atol=1e-9, rtol=0):
            raise InvariantError("basis.complete", "sum of projectors is not the identity")
        self.vectors = tuple(states)
        self.dims = dims

    @classmethod
    def from_columns(cls, mat, dims) -> "MeasurementBasis":
        mat = as_matrix(mat)
        return cls([PureState(mat[:, k], tuple(dims)) for k in range(mat.shape[1])])

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i) -> PureState:
        return self.vectors[i]


@dataclass
class TeleportOutcome:
    index: int
    probability: float
    map: np.ndarray
    output: np.ndarray
    projection_error: float = 0.0


def teleport_map(psi_bc, psi_i_ab) -> np.ndarray:
    """t_i = s^CB o s_i^BA, the linear map A -> C for outcome psi_i."""
    psi_bc = bipartite(psi_bc, unnormalized=True)
    psi_i_ab = bipartite(psi_i_ab, unnormalized=True)
    if psi_bc.dims[0] != psi_i_ab.dims[1]:
        raise DimensionError(
            f"ancilla B has dim {psi_bc.dims[0]}, basis B has dim {psi_i_ab.dims[1]}"
        )
    return compose_anti_anti(smap_from_vector(psi_bc, "BA"), smap_from_vector(psi_i_ab, "BA"))


def tripartite_projection(phi_a, psi_bc, psi_i_ab) -> np.ndarray:
    """(|psi_i><psi_i| (x) 1_C)(phi (x) psi_BC), by direct projection in A (x) B (x) C."""
    psi_bc = bipartite(psi_bc)
    psi_i_ab = bipartite(psi_i_ab)
    phi_a = np.asarray(phi_a, dtype=complex).ravel()
    dc = psi_bc.dims[1]
    full = np.kron(phi_a, psi_bc.vector)
    p = np.kron(projector(psi_i_ab.vector), np.eye(dc))
    return p @ full


def teleport_outcome(phi_a, psi_bc, basis: MeasurementBasis, i: int) -> TeleportOutcome:
    if not 0 <= i < len(basis):
        raise IndexError(f"outcome {i} out of range 0..{len(basis) - 1}")
    phi_a = unit_vector(phi_a, "phi_a")
    psi_bc = bipartite(psi_bc)
    t = teleport_map(psi_bc, basis[i])
    out = t @ phi_a
    direct = tripartite_projection(phi_a, psi_bc, basis[i])
    err = float(np.max(np.abs(direct - np.kron(basis[i].vector, out))))
    if err > 1e-10:
        raise InvariantError("teleport.projection_consistency", f"max deviation {err:.3e}")
    return TeleportOutcome(i, float(np.vdot(out, out).real), t, out, err)


def teleport_quality(t, rho_i_b, rho_b) -> tuple[float, float]:
    """(trace norm of t, sqrt of the fidelity between the two B marginals)."""
    return trace_norm(t), float(np.sqrt(fidelity(rho_i_b, rho_b)))


def basis_marginal_b(psi_i_ab) -> np.ndarray:
    psi = bipartite(psi_i_ab)
    return partial_trace(psi.density(), 1, psi.dims)


def ancilla_marginal_b(ancilla, dims=None) -> np.ndarray:
    if isinstance(ancilla, PureState):
        return partial_trace(ancilla.density(), 0, ancilla.dims)
    return partial_trace(as_matrix(ancilla), 0, dims)


def teleport_density(omega_a, t) -> np.ndarray:
    """omega -> t omega t^H (subnormalized)."""
    omega_a, t = as_matrix(omega_a), as_matrix(t)
    if omega_a.shape != (t.shape[1], t.shape[1]):
        raise DimensionError(f"input {omega_a.shape} does not fit map {t.shape}")
    return t @ omega_a @ dagger(t)


def teleport_mixed_ancilla(omega_a, rho_bc, psi_i_ab, dims_bc) -> np.ndarray:
    """Outcome-i output for a mixed ancilla: Phi_rho^CB(s_i omega s_i*)."""
    omega_a = as_matrix(omega_a)
    psi_i_ab = bipartite(psi_i_ab)
    db, dc = (int(d) for d in dims_bc)
    if psi_i_ab.dims[1] != db:
        raise DimensionError(f"basis B dim {psi_i_ab.dims[1]} != ancilla B dim {db}")
    if omega_a.shape != (psi_i_ab.dims[0],) * 2:
        raise DimensionError(f"input {omega_a.shape} does not fit A dim {psi_i_ab.dims[0]}")
    s_i = smap_from_vector(psi_i_ab, "BA")
    on_b = sandwich(s_i, omega_a, adjoint(s_i))
    return apply_channel(channel_from_density(rho_bc, (db, dc)), on_b)


def outcome_trace_norm(ancilla, psi_i_ab, dims_bc=None) -> float:
    """Tr sqrt(sum_k t_k^H t_k) over any decomposition of the ancilla.

    For a pure ancilla this is the trace norm of t_i; for a mixed one the
    sum is independent of the decomposition chosen.
    """
    if isinstance(ancilla, PureState):
        return trace_norm(teleport_map(ancilla, psi_i_ab))
    ch = channel_from_density(ancilla, dims_bc)
    s_i = smap_from_vector(psi_i_ab, "BA")
    gram = sum(
        dagger(m) @ m for m in (compose_anti_anti(s, s_i) for s in ch.kraus)
    )
    return float(np.trace(matrix_sqrt(gram)).real)


def derive_corrections(psi_bc, basis: MeasurementBasis, tol: float = 1e-10) -> list[np.ndarray]:
    """Unitaries U_i with U_i t_i proportional to 1, when every t_i is a scaled unitary."""
    corrections = []
    for psi_i in basis:
        t = teleport_map(psi_bc, psi_i)
        if t.shape[0] != t.shape[1]:
            raise InvariantError("teleport.square_map", f"t has shape {t.shape}")
        scale = np.linalg.norm(t) / np.sqrt(t.shape[0])
        if scale < tol or not is_unitary(t / scale, 1e-9):
            raise InvariantError("teleport.map_proportional_to_unitary", "no unitary correction")
        corrections.append(dagger(t / scale))
    return corrections


def bell_corrections() -> list[np.ndarray]:
    """Corrections for a |Phi+> ancilla measured in the Bell basis (Pauli matrices)."""
    return derive_corrections(bell_state(0), bell_basis())


@dataclass
class OutcomeRecord:
    index: int
    probability: float
    raw_output: np.ndarray  # t_i phi (pure route) or subnormalized operator on C
    state: np.ndarray | None  # normalized, corrected density on C
    fidelity: float | None
    trace_norm: float
    sqrt_fidelity: float


@dataclass
class ProtocolReport:
    outcomes: list[OutcomeRecord]
    counts: list[int] | None = field(default=None)

    @property
    def total_probability(self) -> float:
        return float(sum(o.probability for o in self.outcomes))

    @property
    def average_fidelity(self) -> float:
        return float(
            sum(o.probability * o.fidelity for o in self.outcomes if o.fidelity is not None)
        )


def run_protocol(
    source,
    ancilla,
    basis: MeasurementBasis | None = None,
    corrections: Sequence | None = None,
    ancilla_dims=None,
    samples: int = 0,
    seed=None,
) -> ProtocolReport:
    """Enumerate every outcome of one teleportation round.

    ``source`` is a unit vector or a density operator on A; ``ancilla`` a
    ``PureState`` on B (x) C or a density matrix with ``ancilla_dims``.
    With ``samples > 0`` a seeded multinomial draw of outcome counts is
    attached to the report.
    """
    basis = bell_basis() if basis is None else basis
    pure_ancilla = isinstance(ancilla, PureState)
    if pure_ancilla:
        dims_bc = ancilla.dims
    else:
        if ancilla_dims is None:
            raise DimensionError("a mixed ancilla needs ancilla_dims")
        dims_bc = tuple(int(d) for d in ancilla_dims)
        ancilla = check_density(ancilla)
    da, db = basis.dims
    if db != dims_bc[0]:
        raise DimensionError(f"basis B dim {db} != ancilla B dim {dims_bc[0]}")

    src = np.asarray(source, dtype=complex)
    pure_source = src.ndim == 1
    if pure_source:
        src = unit_vector(src, "input")
        omega = projector(src)
    else:
        omega = check_density(src)
    if omega.shape[0] != da:
        raise DimensionError(f"input dim {omega.shape[0]} != basis A dim {da}")

    if corrections is not None:
        corrections = [as_matrix(u) for u in corrections]
        if len(corrections) != len(basis):
            raise ValueError(f"{len(corrections)} corrections for {len(basis)} outcomes")
        for u in corrections:
            if not is_unitary(u, 1e-9):
                raise InvariantError("correction.unitary", "correction is not unitary")

    rho_b = ancilla_marginal_b(ancilla, dims_bc)
    records = []
    for i, psi_i in enumerate(basis):
        if pure_ancilla:
            t = teleport_map(ancilla, psi_i)
            if pure_source:
                raw = t @ src
                out = projector(raw)
            else:
                out = raw = teleport_density(omega, t)
        else:
            out = raw = teleport_mixed_ancilla(omega, ancilla, psi_i, dims_bc)
        prob = float(np.trace(out).real)
        state = fid = None
        if prob > TOL_NORM:
            state = out / prob
            if corrections is not None:
                state = corrections[i] @ state @ dagger(corrections[i])
            if state.shape == omega.shape:
                fid = fidelity(omega, state) if not pure_source else float(
                    np.vdot(src, state @ src).real
                )
        records.append(
            OutcomeRecord(
                i,
                prob,
                raw,
                state,
                fid,
                outcome_trace_norm(ancilla, psi_i, dims_bc),
                float(np.sqrt(fidelity(basis_marginal_b(psi_i), rho_b))),
            )
        )
    report = ProtocolReport(records)
    if samples:
        probs = np.clip([r.probability for r in records], 0, None)
        report.counts = rng(seed).multinomial(samples, probs / probs.sum()).tolist()
    return report


SWEEP_COLUMNS = ("p", "outcome", "probability", "trace_norm", "sqrt_fidelity", "corrected_fidelity")


def werner_sweep(ps: Sequence[float], source=None, seed=None) -> list[dict]:
    """Teleport a qubit through Werner ancillas, Bell basis, Pauli corrections.

    One row per (p, outcome).  ``source`` defaults to a seeded random qubit.
    """
    from .states import random_vector

    source = random_vector(2, seed) if source is None else source
    corr = bell_corrections()
    rows = []
    for p in ps:
        rep = run_protocol(source, werner(float(p)), bell_basis(), corr, ancilla_dims=(2, 2))
        for o in rep.outcomes:
            rows.append(
                dict(
                    p=float(p),
                    outcome=o.index,
                    probability=o.probability,
                    trace_norm=o.trace_norm,
                    sqrt_fidelity=o.sqrt_fidelity,
                    corrected_fidelity=o.fidelity,
                )
            )
    return rows
