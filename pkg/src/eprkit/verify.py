"""Seeded invariant suites, one per module, run by ``eprkit verify all``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import antilinear as al
from . import channel as chm
from . import modular as md
from . import smap as sm
from . import states as st
from . import teleport as tp
from .linalg import (
    PureState,
    dagger,
    fidelity,
    matrix_sqrt,
    partial_trace,
    projector,
    support_projector,
    tensor,
    trace_norm,
)


@dataclass
class CheckResult:
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.error) and self.error < self.tol)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name:<44s} max_err={self.error:.3e}  tol={self.tol:.0e}"


def _max(errors) -> float:
    return float(max(errors, default=0.0))


def suite_core(dims, trials, g) -> list[CheckResult]:
    da, db = dims
    n = da * db
    tr_err, sym_err, tri_err = [], [], []
    for _ in range(trials):
        rho = st.random_density(n, seed=g)
        tr_err.append(abs(np.trace(partial_trace(rho, 0, dims)) - np.trace(rho)))
        r1, r2 = st.random_density(n, seed=g), st.random_density(n, seed=g)
        sym_err.append(abs(fidelity(r1, r2) - fidelity(r2, r1)))
        a, b = (g.standard_normal((n, n)) + 1j * g.standard_normal((n, n)) for _ in range(2))
        tri_err.append(max(0.0, trace_norm(a + b) - trace_norm(a) - trace_norm(b)))
    return [
        CheckResult("core: partial trace preserves trace", _max(tr_err), 1e-10),
        CheckResult("core: fidelity symmetric", _max(sym_err), 1e-9),
        CheckResult("core: trace norm triangle inequality", _max(tri_err), 1e-10),
    ]


def suite_antilinear(dims, trials, g) -> list[CheckResult]:
    da, db = dims
    adj_err, lin_err = [], []
    for _ in range(trials):
        s = al.AntilinearMap(g.standard_normal((db, da)) + 1j * g.standard_normal((db, da)))
        phi, chi = st.random_vector(da, g), st.random_vector(db, g)
        adj_err.append(abs(np.vdot(chi, s(phi)) - np.vdot(phi, s.adjoint()(chi))))
        lam = complex(*g.standard_normal(2))
        lin_err.append(np.max(np.abs(s(lam * phi) - np.conj(lam) * s(phi))))
    return [
        CheckResult("antilinear: adjoint inner-product relation", _max(adj_err), 1e-12),
        CheckResult("antilinear: antilinearity", _max(lin_err), 1e-12),
    ]


def suite_smap(dims, trials, g) -> list[CheckResult]:
    da, db = dims
    proj_err, indep_err, tr_err, red_err, polar_err, supp_err = [], [], [], [], [], []
    for _ in range(trials):
        psi = st.random_pure(dims, g)
        phi = st.random_vector(da, g)
        s = sm.smap_from_vector(psi)
        lhs = np.kron(projector(phi), np.eye(db)) @ psi.vector
        proj_err.append(np.max(np.abs(lhs - tensor(phi, s(phi)))))

        indep_err.append(np.max(np.abs(sm.smap_from_schmidt(sm.schmidt(psi)).kmatrix - s.kmatrix)))

        other = st.random_pure(dims, g)
        ov = np.vdot(psi.vector, other.vector)
        tr_err.append(max(abs(x - ov) for x in sm.overlap_via_smaps(other, psi)))

        rho_a, rho_b = sm.reduced_densities_via_smaps(psi)
        full = psi.density()
        red_err.append(max(
            np.max(np.abs(rho_a - partial_trace(full, 0, dims))),
            np.max(np.abs(rho_b - partial_trace(full, 1, dims))),
        ))
        j_ba, j_ab = sm.polar_jmaps(psi)
        polar_err.append(max(
            np.max(np.abs((j_ba @ matrix_sqrt(rho_a)).kmatrix - s.kmatrix)),
            np.max(np.abs((matrix_sqrt(rho_b) @ j_ba).kmatrix - s.kmatrix)),
        ))
        supp_err.append(max(
            np.max(np.abs(j_ab @ j_ba - support_projector(rho_a))),
            np.max(np.abs(j_ba @ j_ab - support_projector(rho_b))),
        ))
    return [
        CheckResult("smap: projection = phi (x) s(phi)", _max(proj_err), 1e-10),
        CheckResult("smap: amplitude vs Schmidt construction", _max(indep_err), 1e-12),
        CheckResult("smap: trace formulas give overlap", _max(tr_err), 1e-10),
        CheckResult("smap: s s* reproduces partial traces", _max(red_err), 1e-10),
        CheckResult("smap: polar factorizations", _max(polar_err), 1e-9),
        CheckResult("smap: j j* = support projectors", _max(supp_err), 1e-9),
    ]


def suite_local(dims, trials, g) -> list[CheckResult]:
    da, db = dims
    s_err, j_err = [], []
    for _ in range(trials):
        psi = st.random_pure(dims, g)
        ua, ub = st.haar_unitary(da, g), st.haar_unitary(db, g)
        rep = sm.local_transform_smap(psi, ua, ub)
        s_err.append(max(rep.ba_error, rep.ab_error))
        phi = PureState(np.kron(ua, ub) @ psi.vector, dims)
        j_psi, _ = sm.polar_jmaps(psi)
        j_phi, _ = sm.polar_jmaps(phi)
        pred = ub @ (j_psi @ dagger(ua))
        j_err.append(np.max(np.abs(j_phi.kmatrix - pred.kmatrix)))
    return [
        CheckResult("smap: s-maps under local operators", _max(s_err), 1e-10),
        CheckResult("smap: j-maps under local unitaries", _max(j_err), 1e-9),
    ]


def suite_stabilizer(trials, g) -> list[CheckResult]:
    err = []
    for k in range(4):
        psi = st.bell_state(k)
        for _ in range(trials):
            ua = st.haar_unitary(2, g)
            ub = sm.stabilizer_partner(psi, ua)
            err.append(np.max(np.abs(np.kron(ua, ub) @ psi.vector - psi.vector)))
    return [CheckResult("smap: local stabilizer fixes Bell states", _max(err), 1e-9)]


def _remixed(vectors, g):
    """Decomposition vectors mixed by a random isometry (one extra vector)."""
    m = len(vectors)
    iso = st.haar_unitary(m + 1, g)[:, :m]
    stack = np.column_stack(vectors)
    return [stack @ iso[r, :] for r in range(m + 1)]


def suite_channel(dims, trials, g) -> list[CheckResult]:
    da, db = dims
    n = da * db
    indep, luders, dual, prob, choi = [], [], [], [], []
    for t in range(trials):
        rank = 1 + t % n
        rho = st.random_density(n, rank=rank, seed=g)
        ch = chm.channel_from_density(rho, dims)
        vecs = chm._eigen_vectors(rho)
        indep.append(chm.channel_decomposition_independence(rho, _remixed(vecs, g), dims).channel_error)

        phi = st.random_vector(da, g)
        luders.append(chm.lueders_factorization_error(rho, phi, dims, ch))

        y = st.random_hermitian(db, g)
        x = chm.dual_channel(ch, y)
        pi = projector(phi)
        dual.append(abs(np.trace(pi @ x) - np.trace(chm.apply_channel(ch, pi) @ y)))
        rho_a = partial_trace(rho, 0, dims)
        prob.append(abs(chm.outcome_probability(ch, phi) - np.vdot(phi, rho_a @ phi).real))
        choi.append(max(0.0, -np.linalg.eigvalsh(chm.star_choi(ch)).min()))
    return [
        CheckResult("channel: decomposition independence", _max(indep), 1e-9),
        CheckResult("channel: Lueders factorization", _max(luders), 1e-10),
        CheckResult("channel: duality with observables", _max(dual), 1e-10),
        CheckResult("channel: outcome probability", _max(prob), 1e-10),
        CheckResult("channel: Choi of conjugated map is PSD", _max(choi), 1e-9),
    ]


def suite_teleport(dims, trials, g) -> list[CheckResult]:
    da, db = dims
    proj, norm_fid = [], []
    for _ in range(trials):
        phi = st.random_vector(da, g)
        psi_bc = st.random_pure((db, db), g)
        basis = tp.MeasurementBasis.from_columns(st.haar_unitary(da * db, g), dims)
        for i, psi_i in enumerate(basis):
            t = tp.teleport_map(psi_bc, psi_i)
            direct = tp.tripartite_projection(phi, psi_bc, psi_i)
            proj.append(np.max(np.abs(direct - np.kron(psi_i.vector, t @ phi))))
        psi_i = basis[int(g.integers(len(basis)))]
        tn, fs = tp.teleport_quality(
            tp.teleport_map(psi_bc, psi_i),
            tp.basis_marginal_b(psi_i),
            tp.ancilla_marginal_b(psi_bc),
        )
        norm_fid.append(abs(tn - fs))

    corr = tp.bell_corrections()
    bell_fid, bell_prob, bell_unit = [], [], []
    for _ in range(trials):
        rep = tp.run_protocol(st.random_vector(2, g), st.bell_state(0), st.bell_basis(), corr)
        bell_fid.extend(abs(o.fidelity - 1) for o in rep.outcomes)
        bell_prob.extend(abs(o.probability - 0.25) for o in rep.outcomes)
    for psi_i in st.bell_basis():
        t2 = 2 * tp.teleport_map(st.bell_state(0), psi_i)
        bell_unit.append(np.max(np.abs(dagger(t2) @ t2 - np.eye(2))))
    return [
        CheckResult("teleport: tripartite projection = psi_i (x) t_i phi", _max(proj), 1e-10),
        CheckResult("teleport: trace norm = sqrt fidelity", _max(norm_fid), 1e-8),
        CheckResult("teleport: Bell maps are unitary / 2", _max(bell_unit), 1e-10),
        CheckResult("teleport: corrected Bell fidelity = 1", _max(bell_fid), 1e-9),
        CheckResult("teleport: Bell outcome probabilities = 1/4", _max(bell_prob), 1e-10),
    ]


def suite_modular(dims, trials, g) -> list[CheckResult]:
    da, db = dims
    sq, anti, modcon, ds1, ds2, ss = [], [], [], [], [], []
    for t in range(trials):
        psi = st.random_pure(dims, g)
        if t % 3 == 2 and min(dims) > 1:
            # rank-deficient: drop the weakest Schmidt term
            dec = sm.schmidt(psi)
            p = dec.coefficients.copy()
            p[-1] = 0
            p /= p.sum()
            psi = PureState(
                sum(np.sqrt(p[j]) * np.kron(dec.left_vectors[:, j], dec.right_vectors[:, j])
                    for j in range(p.size)),
                dims,
            )
        j = md.modular_conjugation(psi)
        supp = md.support_of(psi)
        sq.append(np.max(np.abs(md.square(j) - supp)))
        u, v = supp @ st.random_vector(da * db, g), supp @ st.random_vector(da * db, g)
        anti.append(abs(np.vdot(j(u), j(v)) - np.vdot(v, u)))
        modcon.append(np.max(np.abs(j.kmatrix - md.modular_conjugation_schmidt(psi).kmatrix)))
        rep = md.verify_ds_relations(psi)
        ds1.append(rep.delta_js_support)
        ds2.append(rep.s_sqrt_rho_b_js_support)
        tw = md.twisted_products(psi)
        rho_a, rho_b = md.reduced_pair(psi)
        lifted = np.kron(matrix_sqrt(rho_a), matrix_sqrt(rho_b)) @ tw["jj"].kmatrix
        ss.append(np.max(np.abs(lifted - tw["ss"].kmatrix)))
    return [
        CheckResult("modular: J^2 = support projector", _max(sq), 1e-9),
        CheckResult("modular: J antiunitary on support", _max(anti), 1e-9),
        CheckResult("modular: J matches Schmidt-basis form", _max(modcon), 1e-9),
        CheckResult("modular: sqrt(Delta)(j~s) = s~j", _max(ds1), 1e-9),
        CheckResult("modular: S(1 (x) sqrt(rho_B)) = j~s", _max(ds2), 1e-9),
        CheckResult("modular: s~s = (sqrt rho_A (x) sqrt rho_B) J", _max(ss), 1e-9),
    ]


SUITES: dict[str, Callable] = {
    "core": suite_core,
    "antilinear": suite_antilinear,
    "smap": suite_smap,
    "local": suite_local,
    "channel": suite_channel,
    "teleport": suite_teleport,
    "modular": suite_modular,
}


def run_all(dims=(2, 2), trials: int = 100, seed=7) -> list[CheckResult]:
    """Every suite in a fixed order from one seeded stream."""
    g = st.rng(seed)
    results = []
    for fn in SUITES.values():
        results.extend(fn(tuple(dims), trials, g))
    results.extend(suite_stabilizer(max(1, trials // 2), g))
    return results
