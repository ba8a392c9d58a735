"""Acceptance criteria, one line per check.

Every check records ``<id> PASS|FAIL max_err=<e> tol=<t> <label>``; the
lines are printed at the end of the pytest run (see conftest.py) and when
this file is executed directly.
"""
import csv
import io as stdio
import subprocess
import sys

import numpy as np
import pytest

from eprkit import states as st
from eprkit.antilinear import compose_anti_anti
from eprkit.channel import (
    apply_channel,
    channel_distance,
    channel_from_density,
    channel_from_vectors,
    dual_channel,
    lueders_factorization_error,
    star_choi,
)
from eprkit.linalg import (
    PureState,
    fidelity,
    matrix_sqrt,
    partial_trace,
    projector,
    support_projector,
    trace_norm,
)
from eprkit.modular import (
    modular_conjugation,
    modular_conjugation_schmidt,
    square,
    support_of,
    verify_ds_relations,
)
from eprkit.smap import (
    measure_update_vector,
    overlap_via_smaps,
    polar_jmaps,
    reduced_densities_via_smaps,
    schmidt,
    smap_from_schmidt,
    smap_from_vector,
    stabilizer_partner,
)
from eprkit.teleport import (
    MeasurementBasis,
    bell_corrections,
    run_protocol,
    teleport_map,
    tripartite_projection,
)

# tolerances, one per criterion (sub-checks share the criterion id)
TOL = {
    "C1": 1e-10,
    "C2_smap": 1e-12,
    "C2_channel": 1e-9,
    "C3": 1e-10,
    "C4_partial_trace": 1e-10,
    "C4_polar": 1e-9,
    "C4_support": 1e-9,
    "C5": 1e-10,
    "C6": 1e-10,
    "C7": 1e-10,
    "C8": 1e-8,
    "C9_map": 1e-10,
    "C9_fidelity": 1e-9,
    "C9_probability": 1e-10,
    "C10": 1e-9,
    "C11_involution": 1e-9,
    "C11_antiunitary": 1e-9,
    "C11_schmidt": 1e-9,
    "C11_ds_first": 1e-9,
    "C11_ds_second": 1e-9,
    "C12": 1e-9,
    "C13_final": 1e-9,
}

RESULTS: list[str] = []
BELL = st.bell_state(0)


def check(key, err, label):
    tol = TOL[key]
    ok = bool(err < tol)
    RESULTS.append(f"{key:18s} {'PASS' if ok else 'FAIL'} max_err={err:.3e} tol={tol:.0e} {label}")
    return ok


def truncated(psi, rank):
    u, s, vh = np.linalg.svd(psi.coefficients, full_matrices=False)
    s[rank:] = 0
    return PureState.from_coefficients((u * s) @ vh / np.linalg.norm(s))


def test_c01_measurement_prepares_product():
    g = st.rng(101)
    err = 0.0
    for dims in [(2, 2), (2, 3), (3, 3)]:
        for _ in range(100):
            psi = st.random_pure(dims, g)
            phi = st.random_vector(dims[0], g)
            direct = np.kron(projector(phi), np.eye(dims[1])) @ psi.vector
            s = smap_from_vector(psi, "BA")
            err = max(err, np.max(np.abs(direct - np.kron(phi, s(phi)))))
            _, prepared = measure_update_vector(psi, phi)
            err = max(err, np.max(np.abs(direct - prepared.vector)))
    assert check("C1", err, "(pi (x) 1) psi = phi (x) s(phi), dims 2x2 2x3 3x3, 100 each")


def test_c02_decomposition_independence():
    g = st.rng(102)
    err_s = 0.0
    for dims in [(2, 2), (2, 3), (3, 3), (4, 2)]:
        for _ in range(25):
            psi = st.random_pure(dims, g)
            err_s = max(err_s, np.max(np.abs(smap_from_schmidt(schmidt(psi)).kmatrix - smap_from_vector(psi).kmatrix)))
    ok_s = check("C2_smap", err_s, "s-map from amplitudes vs Schmidt form")

    err_c = 0.0
    for dims, rank in [((2, 2), 2), ((2, 2), 4), ((2, 3), 3), ((3, 2), 1)]:
        for _ in range(10):
            n = dims[0] * dims[1]
            rho = st.random_density(n, rank=rank, seed=g)
            w, v = np.linalg.eigh(rho)
            vecs = [np.sqrt(w[i]) * v[:, i] for i in range(n) if w[i] > 1e-9]
            iso = st.haar_unitary(len(vecs) + 2, g)[:, : len(vecs)]
            alt = [sum(iso[i, k] * vecs[k] for k in range(len(vecs))) for i in range(len(vecs) + 2)]
            err_c = max(err_c, channel_distance(channel_from_density(rho, dims), channel_from_vectors(alt, dims)))
    ok_c = check("C2_channel", err_c, "channel from eigenvectors vs remixed vectors, matrix-unit inputs")
    assert ok_s and ok_c


def test_c03_trace_formulas():
    g = st.rng(103)
    err = 0.0
    for _ in range(100):
        dims = [(2, 2), (2, 3), (3, 2)][int(g.integers(3))]
        phi, psi = st.random_pure(dims, g), st.random_pure(dims, g)
        direct = np.vdot(psi.vector, phi.vector)
        tr_a, tr_b = overlap_via_smaps(phi, psi)
        err = max(err, abs(tr_a - direct), abs(tr_b - direct))
    assert check("C3", err, "Tr_A and Tr_B of s-map products equal <psi, phi>, 100 pairs")


def test_c04_reduced_polar_support():
    g = st.rng(104)
    e_pt = e_pol = e_sup = 0.0
    for dims in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        for k in range(25):
            psi = st.random_pure(dims, g)
            if k % 3 == 0:
                psi = truncated(psi, 1 if k % 2 else min(dims) - 1)
            rho = psi.density()
            ra_pt, rb_pt = partial_trace(rho, 0, dims), partial_trace(rho, 1, dims)
            ra, rb = reduced_densities_via_smaps(psi)
            e_pt = max(e_pt, np.max(np.abs(ra - ra_pt)), np.max(np.abs(rb - rb_pt)))

            s = smap_from_vector(psi, "BA").kmatrix
            j_ba, j_ab = polar_jmaps(psi)
            # s = j sqrt(rho_A) (kmatrix J conj(sqrt rho_A)) and s = sqrt(rho_B) j
            e_pol = max(
                e_pol,
                np.max(np.abs(j_ba.kmatrix @ np.conj(matrix_sqrt(ra_pt)) - s)),
                np.max(np.abs(matrix_sqrt(rb_pt) @ j_ba.kmatrix - s)),
            )
            e_sup = max(
                e_sup,
                np.max(np.abs(compose_anti_anti(j_ab, j_ba) - support_projector(ra_pt))),
                np.max(np.abs(compose_anti_anti(j_ba, j_ab) - support_projector(rb_pt))),
            )
    ok = [
        check("C4_partial_trace", e_pt, "s o s* reproduces rho_A, rho_B"),
        check("C4_polar", e_pol, "s = j sqrt(rho_A) = sqrt(rho_B) j"),
        check("C4_support", e_sup, "j* j and j j* are the support projectors"),
    ]
    assert all(ok)


def test_c05_lueders_factorization():
    g = st.rng(105)
    err = 0.0
    for k in range(100):
        dims = [(2, 2), (2, 3), (3, 2)][k % 3]
        n = dims[0] * dims[1]
        rank = [1, 2, n][k % 3] if k % 2 else None
        rho = st.random_density(n, rank=rank, seed=g)
        err = max(err, lueders_factorization_error(rho, st.random_vector(dims[0], g), dims))
    assert check("C5", err, "(pi (x) 1) rho (pi (x) 1) = pi (x) Phi(pi), 100 cases incl. rank-deficient")


def test_c06_duality():
    g = st.rng(106)
    err = 0.0
    for k in range(200):
        dims = [(2, 2), (2, 3), (3, 2)][k % 3]
        ch = channel_from_density(st.random_density(dims[0] * dims[1], seed=g), dims)
        y = st.random_hermitian(dims[1], g)
        pi = projector(st.random_vector(dims[0], g))
        err = max(err, abs(np.trace(pi @ dual_channel(ch, y)) - np.trace(apply_channel(ch, pi) @ y)))
    assert check("C6", err, "Tr(pi X) = Tr(Phi(pi) Y), 200 random (Y, pi)")


def test_c07_tripartite_projection():
    g = st.rng(107)
    err = 0.0
    for da, db, dc in [(2, 2, 2), (2, 3, 3)]:
        for _ in range(50):
            phi = st.random_vector(da, g)
            anc = st.random_pure((db, dc), g)
            basis = MeasurementBasis.from_columns(st.haar_unitary(da * db, g), (da, db))
            for psi_i in basis:
                direct = tripartite_projection(phi, anc, psi_i)
                err = max(err, np.max(np.abs(direct - np.kron(psi_i.vector, teleport_map(anc, psi_i) @ phi))))
    assert check("C7", err, "(P_i (x) 1)(phi (x) psi_BC) = psi_i (x) t_i phi, dims 2,2,2 and 2,3,3")


def test_c08_trace_norm_fidelity():
    g = st.rng(108)
    err = 0.0
    for _ in range(100):
        da, db, dc = (int(x) for x in g.integers(2, 4, size=3))
        psi_i = st.random_pure((da, db), g)
        anc = st.random_pure((db, dc), g)
        if g.random() < 0.3:
            anc = truncated(anc, 1)
        rho_i_b = partial_trace(psi_i.density(), 1, (da, db))
        rho_b = partial_trace(anc.density(), 0, (db, dc))
        err = max(err, abs(trace_norm(teleport_map(anc, psi_i)) - np.sqrt(fidelity(rho_i_b, rho_b))))
    assert check("C8", err, "||t_i||_1 = sqrt F(rho_i^B, rho^B), 100 instances dims 2-3")


def test_c09_bell_oracle():
    g = st.rng(109)
    basis = st.bell_basis()
    e_map = max(
        np.max(np.abs(4 * teleport_map(BELL, psi_i) @ teleport_map(BELL, psi_i).conj().T - np.eye(2)))
        for psi_i in basis
    )
    e_fid = e_prob = 0.0
    for _ in range(50):
        rep = run_protocol(st.random_vector(2, g), BELL, basis, bell_corrections())
        for o in rep.outcomes:
            e_fid = max(e_fid, abs(o.fidelity - 1))
            e_prob = max(e_prob, abs(o.probability - 0.25))
    ok = [
        check("C9_map", e_map, "Bell/Bell t_i = (1/2) unitary"),
        check("C9_fidelity", e_fid, "corrected fidelity 1 per outcome, 50 random qubits"),
        check("C9_probability", e_prob, "outcome probabilities 1/4"),
    ]
    assert all(ok)


def test_c10_stabilizer():
    g = st.rng(110)
    err = 0.0
    for k in range(4):
        psi = st.bell_state(k)
        for _ in range(50):
            u_a = st.haar_unitary(2, g)
            u_b = stabilizer_partner(psi, u_a)
            err = max(err, np.max(np.abs(np.kron(u_a, u_b) @ psi.vector - psi.vector)))
    assert check("C10", err, "(U (x) jUj) psi = psi, 50 Haar U per Bell state")


def test_c11_modular_conjugation():
    g = st.rng(111)
    e_inv = e_anti = e_sch = 0.0
    for dims in [(2, 2), (3, 3), (2, 3)]:
        for k in range(20):
            psi = st.random_pure(dims, g)
            if k % 4 == 0:
                psi = truncated(psi, min(dims) - 1)
            j = modular_conjugation(psi)
            p = support_of(psi)
            e_inv = max(e_inv, np.max(np.abs(square(j) - p)))
            a, b = p @ st.random_vector(p.shape[0], g), p @ st.random_vector(p.shape[0], g)
            e_anti = max(e_anti, abs(np.vdot(j(a), j(b)) - np.vdot(b, a)))
            e_sch = max(e_sch, np.max(np.abs(j.kmatrix - modular_conjugation_schmidt(psi).kmatrix)))
    ok = [
        check("C11_involution", e_inv, "J^2 = support projector"),
        check("C11_antiunitary", e_anti, "<J a, J b> = <b, a> on the support"),
        check("C11_schmidt", e_sch, "J entrywise in Schmidt product bases, incl. rank-deficient"),
    ]
    assert all(ok)


def _ds_reports():
    g = st.rng(112)
    return [verify_ds_relations(st.random_pure(dims, g)) for dims in [(2, 2), (3, 3)] for _ in range(20)]


def test_c11_ds_first_identity():
    err = max(r.delta_js for r in _ds_reports())
    assert check("C11_ds_first", err, "sqrt(Delta)(j~s) = s~j, full rank 2x2 and 3x3")


def test_c11_ds_identities_as_printed():
    err = max(r.s_sqrt_rho_b for r in _ds_reports())
    assert check("C11_ds_second", err, "S(1 (x) sqrt rho_B) = s~j, full rank 2x2 and 3x3")


def test_c12_star_copositivity():
    g = st.rng(113)
    worst = np.inf
    for dims in [(2, 2), (2, 3)]:
        for k in range(50):
            n = dims[0] * dims[1]
            rho = st.random_density(n, rank=1 + k % n, seed=g)
            worst = min(worst, np.linalg.eigvalsh(star_choi(channel_from_density(rho, dims))).min())
    # the check is min eigenvalue > -tol, recorded as the amount below zero
    assert check("C12", max(-worst, 0.0), f"Choi of omega -> Phi(conj omega) is PSD (min eig {worst:.3e})")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "eprkit", *argv], capture_output=True, text=True)


def test_c13_cli():
    proc = _cli("verify", "all", "--seed", "7")
    RESULTS.append(f"{'C13_verify':18s} {'PASS' if proc.returncode == 0 else 'FAIL'} exit={proc.returncode} verify all --seed 7")

    sweep = _cli("teleport", "sweep", "--werner-p", "0,0.25,0.5,0.75,1")
    rows = list(csv.DictReader(stdio.StringIO(sweep.stdout)))
    avg = {}
    for r in rows:
        p = float(r["p"])
        avg[p] = avg.get(p, 0.0) + float(r["probability"]) * float(r["corrected_fidelity"])
    series = [avg[p] for p in sorted(avg)]
    monotone = sweep.returncode == 0 and len(series) == 5 and all(b >= a - 1e-12 for a, b in zip(series, series[1:]))
    RESULTS.append(
        f"{'C13_monotone':18s} {'PASS' if monotone else 'FAIL'} corrected_fidelity "
        + " ".join(f"{v:.6f}" for v in series)
    )
    final = [float(r["corrected_fidelity"]) for r in rows if float(r["p"]) == 1.0]
    ok_final = check("C13_final", max(abs(f - 1) for f in final) if final else np.inf, "corrected_fidelity 1 at p=1")
    assert proc.returncode == 0 and monotone and ok_final


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
