import math

import numpy as np
import pytest

from rqit.channel import FockCutoff, entangled_state
from rqit.teleportation import (
    SchmidtDecomposition,
    apply_protocol,
    average_fidelity_exact,
    average_fidelity_mc,
    build_protocol,
    fidelity_bound,
    haar_qubit_unitaries,
    run_protocol,
    schmidt_decompose,
    shared_state_vector,
)

SQRT2 = math.sqrt(2.0)


def overlap_formula(xi):
    return (math.sqrt((1 - xi) / 2) - math.sqrt((1 + xi) / 2)) / SQRT2


def exact_closed_form(xi):
    """Zero-acceleration Haar average: (2 + 2 lambda0 lambda1)/3."""
    sd = schmidt_decompose(xi)
    return (2 + 2 * sd.lambda0 * sd.lambda1) / 3


def test_schmidt_bell_case():
    sd = schmidt_decompose(0.0)
    assert sd.lambda0 == pytest.approx(1 / SQRT2, abs=1e-14)
    assert sd.lambda1 == pytest.approx(1 / SQRT2, abs=1e-14)


def test_schmidt_coefficients_closed_form():
    for xi in (0.0, 0.25, 0.5, 0.75, 0.9):
        sd = schmidt_decompose(xi)
        s = abs(overlap_formula(xi))
        assert sd.lambda0 == pytest.approx(math.sqrt((1 + s) / 2), abs=1e-13)
        assert sd.lambda1 == pytest.approx(math.sqrt((1 - s) / 2), abs=1e-13)
        assert sd.lambda0**2 + sd.lambda1**2 == pytest.approx(1.0, abs=1e-12)


def test_schmidt_reconstruction_and_orthonormality():
    for xi in (0.0, 0.3, 0.8):
        sd = schmidt_decompose(xi)
        np.testing.assert_allclose(sd.state_vector(), shared_state_vector(xi), atol=1e-10)
        for basis in (sd.alice_basis, sd.rob_basis):
            np.testing.assert_allclose(basis.conj().T @ basis, np.eye(2), atol=1e-12)


def test_schmidt_matches_reduced_state_spectrum():
    # independent oracle: eigenvalues of the sender's reduced density matrix
    xi = 0.5
    psi = shared_state_vector(xi).reshape(2, 2)
    rho_a = psi @ psi.conj().T
    w = np.linalg.eigvalsh(rho_a)[::-1]
    sd = schmidt_decompose(xi)
    np.testing.assert_allclose([sd.lambda0, sd.lambda1], np.sqrt(w), atol=1e-12)


def test_fidelity_bound_endpoints():
    assert fidelity_bound(0.0) == pytest.approx(1.0, abs=1e-14)
    assert fidelity_bound(0.999) < 1.0
    assert fidelity_bound(0.5) == pytest.approx(0.9914448614, abs=1e-9)


def test_bound_is_upper_bound_but_not_attained_for_nonzero_xi():
    # the protocol attains the optimum (2 + 2 l0 l1)/3 for its shared state,
    # which sits strictly below (l0 + l1)/sqrt2 whenever the Schmidt spectrum
    # is non-degenerate; the gap at xi = 0.5 is 2.8e-3
    for xi in (0.0, 0.25, 0.5, 0.75):
        f = average_fidelity_exact(xi, 0.0)
        assert f <= fidelity_bound(xi) + 1e-12
    gap = fidelity_bound(0.5) - average_fidelity_exact(0.5, 0.0)
    assert gap == pytest.approx(2.8029e-3, abs=1e-6)


def test_protocol_completeness():
    for xi in (0.0, 0.3, 0.7):
        kit = build_protocol(schmidt_decompose(xi), FockCutoff(16))
        total = sum(kit.povms)
        np.testing.assert_allclose(total, np.eye(4), atol=1e-12)


def test_protocol_bell_case_projectors():
    kit = build_protocol(schmidt_decompose(0.0), FockCutoff(16))
    # orthogonal rank-one projectors forming a complete Bell-type measurement
    for i, p in enumerate(kit.povms):
        np.testing.assert_allclose(p @ p, p, atol=1e-12)
        assert np.trace(p).real == pytest.approx(1.0, abs=1e-12)
        for q in kit.povms[i + 1:]:
            assert abs(np.trace(p @ q)) < 1e-12


def test_local_op_maps_schmidt_basis():
    sd = schmidt_decompose(0.3)
    kit = build_protocol(sd, FockCutoff(16))
    b1 = kit.local_ops[0][:2, :2]
    np.testing.assert_allclose(b1 @ sd.rob_basis[:, 0], [1, 0], atol=1e-12)
    np.testing.assert_allclose(b1 @ sd.rob_basis[:, 1], [0, 1], atol=1e-12)
    # identity on levels >= 2
    np.testing.assert_array_equal(kit.local_ops[0][2:, 2:], np.eye(kit.levels - 2))
    assert np.max(np.abs(kit.local_ops[0][2:, :2])) == 0.0


def test_ideal_teleportation():
    rng = np.random.default_rng(2)
    for _ in range(3):
        amps = rng.normal(size=2) + 1j * rng.normal(size=2)
        amps = amps / np.linalg.norm(amps)
        out = run_protocol(amps, 0.0, 0.0)
        emb = np.zeros(out.dim, dtype=complex)
        emb[:2] = amps
        assert (emb.conj() @ out.entries @ emb).real == pytest.approx(1.0, abs=1e-10)


def _brute_force_sigma(amps, xi, r, n_max):
    """Straight-line joint-space evolution with explicit kron matrices.

    Independent of the library's protocol plumbing: Schmidt data from an
    eigendecomposition of the sender's reduced state, POVMs and receiver
    operations assembled by hand on the full space.
    """
    psi_ar = shared_state_vector(xi).reshape(2, 2)
    w, v = np.linalg.eigh(psi_ar @ psi_ar.conj().T)
    lam = np.sqrt(w[::-1])
    phi = v[:, ::-1]
    # |theta_i> = (<phi_i| x 1)|Psi> / lam_i
    theta = np.stack([(phi[:, i].conj() @ psi_ar) / lam[i] for i in range(2)], axis=1)
    nlev = n_max + 2
    shared = entangled_state(xi, r, FockCutoff(n_max)).entries
    e = np.eye(2, dtype=complex)
    joint = np.kron(np.outer(amps, np.conj(amps)), shared)
    vecs = [
        np.kron(e[0], phi[:, 0]) + np.kron(e[1], phi[:, 1]),
        np.kron(e[0], phi[:, 0]) - np.kron(e[1], phi[:, 1]),
        np.kron(e[0], phi[:, 1]) + np.kron(e[1], phi[:, 0]),
        np.kron(e[0], phi[:, 1]) - np.kron(e[1], phi[:, 0]),
    ]
    bs = [
        np.outer(e[0], theta[:, 0].conj()) + np.outer(e[1], theta[:, 1].conj()),
        np.outer(e[0], theta[:, 0].conj()) - np.outer(e[1], theta[:, 1].conj()),
        np.outer(e[1], theta[:, 0].conj()) + np.outer(e[0], theta[:, 1].conj()),
        np.outer(e[1], theta[:, 0].conj()) - np.outer(e[0], theta[:, 1].conj()),
    ]
    sigma = np.zeros((nlev, nlev), dtype=complex)
    for vec, b in zip(vecs, bs):
        proj = np.outer(vec, vec.conj()) / 2.0
        m = np.kron(proj, np.eye(nlev)) @ joint
        cond = np.einsum("akal->kl", m.reshape(4, nlev, 4, nlev))
        b_full = np.eye(nlev, dtype=complex)
        b_full[:2, :2] = b
        sigma += b_full @ cond @ b_full.conj().T
    return sigma


def test_run_protocol_against_brute_force_oracle():
    amps = np.array([1.0, 1.0]) / SQRT2
    for xi, r in ((0.5, 0.0), (0.3, 0.4)):
        n_max = FockCutoff.for_acceleration(r).n_max
        lib = run_protocol(amps, xi, r, FockCutoff(n_max)).entries
        brute = _brute_force_sigma(amps, xi, r, n_max)
        np.testing.assert_allclose(lib, brute, atol=1e-12)
        emb = np.zeros(len(lib), dtype=complex)
        emb[:2] = amps
        got = (emb.conj() @ lib @ emb).real
        want = (emb.conj() @ brute @ emb).real
        assert got == pytest.approx(want, abs=1e-12)


def test_run_protocol_overlap_closed_form():
    # at r = 0 with |+>: overlap = (l0 + l1)^2 / 2
    sd = schmidt_decompose(0.5)
    out = run_protocol((1 / SQRT2, 1 / SQRT2), 0.5, 0.0)
    emb = np.zeros(out.dim, dtype=complex)
    emb[:2] = 1 / SQRT2
    got = (emb.conj() @ out.entries @ emb).real
    assert got == pytest.approx((sd.lambda0 + sd.lambda1) ** 2 / 2, abs=1e-12)


def test_protocol_output_is_density():
    rng = np.random.default_rng(3)
    for _ in range(6):
        amps = rng.normal(size=2) + 1j * rng.normal(size=2)
        amps = amps / np.linalg.norm(amps)
        xi, r = rng.uniform(0, 0.9), rng.uniform(0, 0.8)
        out = run_protocol(amps, xi, r)
        assert abs(out.trace().real - 1.0) < 1e-10
        assert out.is_hermitian()
        assert out.min_eigenvalue() > -1e-10


def test_run_protocol_rejects_unnormalized():
    with pytest.raises(ValueError):
        run_protocol((1.0, 1.0), 0.0, 0.0)


def test_haar_sampler_mean_projector():
    n = 40_000
    us = haar_qubit_unitaries(n, seed=11)
    psi = us @ (np.array([1, 1]) / SQRT2)
    mean_proj = np.einsum("si,sj->ij", psi, psi.conj()) / n
    assert np.max(np.abs(mean_proj - np.eye(2) / 2)) < 5 / math.sqrt(n)


def test_haar_sampler_unitarity_and_counter_offsets():
    us = haar_qubit_unitaries(64, seed=5)
    prods = np.einsum("sij,sik->sjk", us.conj(), us)
    np.testing.assert_allclose(prods, np.broadcast_to(np.eye(2), (64, 2, 2)), atol=1e-12)
    # stream offsets: samples [k, k+m) reproduce the tail of a larger batch
    tail = haar_qubit_unitaries(24, seed=5, start=40)
    np.testing.assert_array_equal(us[40:], tail)


def test_mc_zero_variance_at_ideal_point():
    est = average_fidelity_mc(0.0, 0.0, samples=2000, seed=1)
    assert est.mean == pytest.approx(1.0, abs=1e-9)
    assert est.std_error < 1e-9


def test_mc_deterministic_and_chunk_invariant():
    a = average_fidelity_mc(0.4, 0.3, samples=5000, seed=9)
    b = average_fidelity_mc(0.4, 0.3, samples=5000, seed=9)
    c = average_fidelity_mc(0.4, 0.3, samples=5000, seed=9, chunk=137)
    assert a.mean == b.mean == c.mean
    assert a.std_error == b.std_error == c.std_error
    d = average_fidelity_mc(0.4, 0.3, samples=5000, seed=10)
    assert d.mean != a.mean


def test_mc_agrees_with_exact():
    rng = np.random.default_rng(4)
    for _ in range(4):
        xi, r = rng.uniform(0, 0.9), rng.uniform(0, 0.7)
        exact = average_fidelity_exact(xi, r)
        est = average_fidelity_mc(xi, r, samples=20_000, seed=int(rng.integers(1 << 30)))
        assert abs(est.mean - exact) <= 4 * max(est.std_error, 1e-12)


def test_exact_closed_form_at_zero_acceleration():
    for xi in (0.0, 0.25, 0.5, 0.75):
        assert average_fidelity_exact(xi, 0.0) == pytest.approx(exact_closed_form(xi), abs=1e-12)


def test_exact_gauge_invariance():
    # rephasing |phi_i> -> e^{ia_i}|phi_i>, |theta_i> -> e^{-ia_i}|theta_i>
    # leaves the decomposed state, hence the protocol average, unchanged
    xi, r = 0.4, 0.5
    cut = FockCutoff.for_acceleration(r)
    shared = entangled_state(xi, r, cut)
    base = average_fidelity_exact(xi, r, cut)
    rng = np.random.default_rng(8)
    sd = schmidt_decompose(xi)
    for _ in range(3):
        ph = np.exp(1j * rng.uniform(0, 2 * math.pi, size=2))
        gauged = SchmidtDecomposition(sd.lambdas, sd.alice_basis * ph, sd.rob_basis * ph.conj())
        np.testing.assert_allclose(gauged.state_vector(), sd.state_vector(), atol=1e-12)
        kit = build_protocol(gauged, cut)
        blocks = np.zeros((2, 2, 2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[i, j] = 1.0
                blocks[i, j] = apply_protocol(kit, shared, unit)[:2, :2]
        t1 = sum(np.trace(blocks[i, i]).real for i in range(2))
        t2 = sum(blocks[i, j][i, j].real for i in range(2) for j in range(2))
        assert (t1 + t2) / 6 == pytest.approx(base, abs=1e-12)


def test_fidelity_monotone_in_acceleration():
    for xi in (0.0, 0.5):
        vals = [average_fidelity_exact(xi, r) for r in (0.0, 0.2, 0.4, 0.6)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_trace_preserved_over_random_inputs():
    rng = np.random.default_rng(12)
    for _ in range(20):
        amps = rng.normal(size=2) + 1j * rng.normal(size=2)
        amps = amps / np.linalg.norm(amps)
        out = run_protocol(amps, rng.uniform(0, 0.9), rng.uniform(0, 0.6))
        assert abs(out.trace().real - 1.0) < 1e-10
