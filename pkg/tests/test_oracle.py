import itertools

import numpy as np
import pytest

from kitaevlab import analysis, oracle
from kitaevlab.chains import Chain, boundary, cowalk_cochain, cowalk_through, face_boundary, homology, walk_chain, walk_through
from kitaevlab.complex import build_sphere_cube, build_torus
from kitaevlab.pauli import PauliString, matrix_of, projector, x_string, z_string


@pytest.fixture(scope="module", params=[2, 3], ids=["d2", "d3"])
def torus2(request):
    cx = build_torus(2, request.param)
    basis = oracle.ground_basis(cx)
    return cx, oracle.ground_state_psi0(cx), basis, oracle.basis_matrix(list(basis.values()))


def test_shift_on_single_edge():
    psi = oracle.StateVector.basis(2, 1, [0])
    out = oracle.apply(PauliString([1], [0], 0, 2), psi)
    assert np.allclose(out.amplitudes, [0, 1])


def test_clock_phase_on_basis_state():
    psi = oracle.StateVector.basis(3, 2, [0, 2])
    out = oracle.apply(PauliString([0, 0], [0, 1], 0, 3), psi)
    assert oracle.phase_exponent(psi, out, 3) == 2


def test_identity_and_products():
    rng = np.random.default_rng(0)
    for d in (2, 3):
        psi = oracle.StateVector.random(d, 4, rng)
        assert np.allclose(oracle.apply(PauliString.identity(4, d), psi).amplitudes, psi.amplitudes)
        for _ in range(10):
            a, b = (PauliString(rng.integers(0, d, 4), rng.integers(0, d, 4), int(rng.integers(d)), d) for _ in range(2))
            assert np.allclose(oracle.apply(a * b, psi).amplitudes, oracle.apply(a, oracle.apply(b, psi)).amplitudes)


def test_apply_projector_sum():
    cx = build_torus(2, 3)
    rng = np.random.default_rng(1)
    psi = oracle.StateVector.random(3, cx.n_edges, rng)
    P = [oracle.apply(projector(cx, "face", 0, j), psi) for j in range(cx.d)]
    total = sum((p.amplitudes for p in P), np.zeros_like(psi.amplitudes))
    assert np.allclose(total, psi.amplitudes)


def test_guards_and_mismatch():
    with pytest.raises(oracle.OracleSizeError):
        oracle.StateVector(np.zeros(1), 2, 23)
    with pytest.raises(ValueError):
        oracle.apply(PauliString.identity(3, 2), oracle.StateVector.basis(2, 4))
    with pytest.raises(ValueError):
        oracle.StateVector(np.zeros(5), 2, 2)


def test_enumerate_K():
    cx = build_torus(2, 2)
    assert oracle.enumerate_K(cx, cx.vertices).order == 8 == analysis.group_order(cx, cx.vertices)
    assert oracle.enumerate_K(cx, []).order == 1
    assert oracle.enumerate_K(build_torus(2, 3), [0]).order == 3
    cube = build_sphere_cube(3)
    assert oracle.enumerate_K(cube, [0, 1, 2]).order == analysis.group_order(cube, [0, 1, 2])
    with pytest.raises(oracle.OracleSizeError):
        oracle.enumerate_K(build_torus(6, 2), range(36))


def test_psi0_amplitudes():
    psi = oracle.ground_state_psi0(build_torus(2, 2))
    nz = psi.amplitudes[np.abs(psi.amplitudes) > 1e-12]
    assert len(nz) == 8 and np.allclose(nz, 1 / np.sqrt(8))
    assert abs(psi.inner(psi) - 1) < 1e-12


def test_cube_has_one_ground_state():
    cx = build_sphere_cube(3)
    assert len(oracle.ground_basis(cx)) == 1


def test_reduced_density_basics(torus2):
    cx, psi0, _, _ = torus2
    assert np.allclose(oracle.reduced_density(psi0, []), [[1]])
    full = oracle.reduced_density(psi0, range(cx.n_edges)) if cx.d**cx.n_edges <= oracle.MAX_DENSITY_DIM else None
    if full is not None:
        assert np.allclose(full, np.outer(psi0.amplitudes, psi0.amplitudes.conj()))
    rho = oracle.reduced_density(psi0, [0, 1, 5])
    assert np.allclose(rho, rho.conj().T)
    assert abs(np.trace(rho) - 1) < 1e-12
    lam = np.linalg.eigvalsh(rho)
    assert lam.min() > -1e-12
    nz = lam[lam > 1e-12]
    assert np.allclose(nz, nz[0])


def test_product_state_has_no_entropy():
    omega = oracle.StateVector.basis(2, 8)
    for region in ([0], [0, 3, 4], list(range(8))):
        assert abs(oracle.entropy_numeric(omega, region)) < 1e-12


def test_ground_space_algebra(torus2):
    """Non-cycles vanish between ground states; cycle/cocycle strings preserve the ground space."""
    cx, _, _, B = torus2
    P = B @ B.conj().T
    hom = homology(cx)
    open_walk = Chain({0: 1}, d=cx.d)
    M = np.column_stack([oracle.apply(z_string(cx, open_walk), oracle.StateVector(b, cx.d, cx.n_edges)).amplitudes for b in B.T])
    assert np.linalg.norm(B.conj().T @ M) < 1e-9
    for c, co in itertools.product(hom.chain_generators, hom.cochain_generators):
        op = x_string(cx, co) * z_string(cx, c)
        M = np.column_stack([oracle.apply(op, oracle.StateVector(b, cx.d, cx.n_edges)).amplitudes for b in B.T])
        assert np.linalg.norm(P @ M - M) < 1e-9


def test_homologous_loops_agree_on_ground_space(torus2):
    cx, _, basis, _ = torus2
    hom = homology(cx)
    gamma = hom.lambdas[0]
    other = gamma + boundary(cx, Chain({0: 1, 3: 2}, d=cx.d, dim=2))
    for psi in basis.values():
        diff = oracle.apply(z_string(cx, gamma), psi).amplitudes - oracle.apply(z_string(cx, other), psi).amplitudes
        assert np.linalg.norm(diff) < 1e-9


def _span_rank(states):
    return oracle.numerical_rank(oracle.basis_matrix(states))


def test_every_ground_state_is_cyclic(torus2):
    cx, _, basis, B = torus2
    hom = homology(cx)
    ops = [x_string(cx, hom.cocycle(*a)) * z_string(cx, hom.cycle(*b)) for a in hom.classes() for b in hom.classes()]
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=B.shape[1]) + 1j * rng.normal(size=B.shape[1])
    random_state = oracle.StateVector(B @ (coeffs / np.linalg.norm(coeffs)), cx.d, cx.n_edges)
    for psi in list(basis.values()) + [random_state]:
        assert _span_rank([oracle.apply(op, psi) for op in ops]) == hom.order


def test_excited_space_is_image_of_ground_space(torus2):
    cx, psi0, _, B = torus2
    hom = homology(cx)
    pair = x_string(cx, _cowalk(cx)) * z_string(cx, walk_chain(cx, walk_through(cx, [0, 1])))
    excited = [oracle.apply(pair * x_string(cx, hom.cocycle(*a)) * z_string(cx, hom.cycle(*b)), psi0) for a in hom.classes() for b in hom.classes()]
    image = [oracle.apply(pair, oracle.StateVector(b, cx.d, cx.n_edges)) for b in B.T]
    assert _span_rank(excited) == hom.order
    assert _span_rank(excited + image) == hom.order


def _cowalk(cx):
    return cowalk_cochain(cx, cowalk_through(cx, [0, 1]))


def test_loops_commute_with_hamiltonian():
    cx = build_torus(2, 3)
    rng = np.random.default_rng(5)
    hom = homology(cx)
    psi = oracle.StateVector.random(3, cx.n_edges, rng)
    for _ in range(5):
        gamma = hom.cycle(tuple(rng.integers(0, 3, 1)), tuple(rng.integers(0, 3, 1))) + face_boundary(cx, int(rng.integers(4)))
        Z = z_string(cx, gamma)
        lhs = oracle.apply(Z, oracle.apply_hamiltonian(cx, psi))
        rhs = oracle.apply_hamiltonian(cx, oracle.apply(Z, psi))
        assert np.linalg.norm(lhs.amplitudes - rhs.amplitudes) < 1e-12


def test_excitation_charges_and_transport():
    d = 3
    cx = build_torus(2, d)
    psi0 = oracle.ground_state_psi0(cx)
    for k in (1, 2):
        zeta = oracle.excitation_pair(cx, psi0, walk_through(cx, [0, 1]), k)
        assert oracle.vertex_charge(cx, zeta, 0) == k
        assert oracle.vertex_charge(cx, zeta, 1) == (-k) % d
        assert oracle.vertex_charge(cx, zeta, 3) == 0
        moved = oracle.apply(z_string(cx, walk_chain(cx, walk_through(cx, [1, 3])), k), zeta)
        assert oracle.vertex_charge(cx, moved, 1) == 0
        assert oracle.vertex_charge(cx, moved, 3) == (-k) % d
        xi = oracle.excitation_pair(cx, psi0, cowalk_through(cx, [0, 1]), k, kind="X")
        assert oracle.face_charge(cx, xi, 0) == (-k) % d
        assert oracle.face_charge(cx, xi, 1) == k


def test_excitation_errors():
    cx = build_torus(2, 3)
    psi0 = oracle.ground_state_psi0(cx)
    with pytest.raises(ValueError):
        oracle.excitation_pair(cx, psi0, walk_through(cx, [0, 1, 0]), 1)
    with pytest.raises(ValueError):
        oracle.excitation_pair(cx, psi0, walk_through(cx, [0, 1]), 3)


def test_apply_local_matches_string():
    cx = build_torus(2, 3)
    rng = np.random.default_rng(7)
    psi = oracle.StateVector.random(3, cx.n_edges, rng)
    op = z_string(cx, Chain({2: 1, 5: 2}, d=3))
    local = oracle.apply_local(matrix_of(op, [2, 5]), [2, 5], psi)
    assert np.allclose(local.amplitudes, oracle.apply(op, psi).amplitudes)
    swapped = oracle.apply_local(matrix_of(op, [5, 2]), [5, 2], psi)
    assert np.allclose(swapped.amplitudes, local.amplitudes)


def test_sequence_phase():
    d = 5
    a = PauliString([1, 0], [0, 0], 0, d)
    b = PauliString([0, 0], [1, 0], 0, d)
    # applied left to right: Z^-1 X^-1 Z X = w
    assert oracle.sequence_phase([a, b, a.adjoint(), b.adjoint()]) == 1
    assert oracle.sequence_phase([a, b]) is None


def test_dump():
    text = oracle.StateVector.basis(2, 2, [1, 0]).dump()
    assert text == "10: +1.000000000000 +0.000000000000"
