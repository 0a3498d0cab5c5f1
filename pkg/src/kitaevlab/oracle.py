"""Dense state-vector oracle over ⊗_e C^d.

Amplitudes are indexed by mixed-radix digits, one Z_d digit per edge, edge 0
most significant. Everything here is brute force on purpose; it exists to
check the exact results in :mod:`kitaevlab.analysis`.
"""
import itertools
from collections import deque

import numpy as np

from .chains import covertex_coboundary, homology
from .pauli import PauliString, ProjectorSum, cyclotomic_value, face_op, omega, projector, vertex_op

MAX_AMPLITUDES = 2**22
MAX_DENSITY_DIM = 4096
MAX_GROUP_ORDER = 2**20
RANK_TOL = 1e-9


class OracleSizeError(ValueError):
    pass


def _guard(d, n, limit=MAX_AMPLITUDES):
    if d**n > limit:
        raise OracleSizeError(f"state space {d}^{n} exceeds the oracle guard of {limit}")


class StateVector:
    __slots__ = ("amplitudes", "d", "n")

    def __init__(self, amplitudes, d, n):
        _guard(d, n)
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.size != d**n:
            raise ValueError(f"expected {d}^{n} amplitudes, got {amps.size}")
        self.amplitudes = amps
        self.d = d
        self.n = n

    @classmethod
    def basis(cls, d, n, digits=None):
        amps = np.zeros(d**n, dtype=complex)
        amps[index_of(digits or [0] * n, d)] = 1
        return cls(amps, d, n)

    @classmethod
    def random(cls, d, n, rng):
        amps = rng.normal(size=d**n) + 1j * rng.normal(size=d**n)
        return cls(amps / np.linalg.norm(amps), d, n)

    def tensor(self):
        return self.amplitudes.reshape((self.d,) * self.n)

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other):
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __add__(self, other):
        return StateVector(self.amplitudes + other.amplitudes, self.d, self.n)

    def __sub__(self, other):
        return StateVector(self.amplitudes - other.amplitudes, self.d, self.n)

    def __rmul__(self, c):
        return StateVector(c * self.amplitudes, self.d, self.n)

    def dump(self, tol=1e-12):
        """Nonzero amplitudes as text lines ``digits: re im``."""
        lines = []
        for i in np.flatnonzero(np.abs(self.amplitudes) > tol):
            digits = "".join(str(x) for x in np.unravel_index(i, (self.d,) * self.n))
            a = self.amplitudes[i]
            lines.append(f"{digits}: {a.real:+.12f} {a.imag:+.12f}")
        return "\n".join(lines)


def index_of(digits, d):
    idx = 0
    for x in digits:
        idx = idx * d + int(x) % d
    return idx


def _clock_phases(d, n, z):
    """Exponent array Σ_e z_e · digit_e mod d over the full tensor."""
    expo = np.zeros((d,) * n, dtype=np.int64)
    ramp = np.arange(d)
    for e in np.flatnonzero(z):
        shape = [1] * n
        shape[e] = d
        expo = expo + int(z[e]) * ramp.reshape(shape)
    return expo % d


def apply(op, psi):
    """Apply a PauliString or ProjectorSum to a state vector."""
    if isinstance(op, ProjectorSum):
        out = np.zeros_like(psi.amplitudes)
        for coeff, s in op.strings():
            out += cyclotomic_value(coeff, op.d) * apply(s, psi).amplitudes
        return StateVector(out, psi.d, psi.n)
    if (op.d, op.n) != (psi.d, psi.n):
        raise ValueError(f"operator on {op.d}^{op.n} applied to state on {psi.d}^{psi.n}")
    d, n = psi.d, psi.n
    t = psi.tensor()
    w = omega(d)
    if op.z.any():
        t = t * (w ** _clock_phases(d, n, op.z))
    for e in np.flatnonzero(op.x):
        t = np.roll(t, int(op.x[e]), axis=int(e))
    return StateVector(w**op.phase * t.reshape(-1), d, n)


def apply_sequence(ops, psi):
    """Apply ``ops[0]`` first, then ``ops[1]``, …"""
    for op in ops:
        psi = apply(op, psi)
    return psi


def apply_local(matrix, edges, psi):
    """Apply a dense matrix acting on ``edges`` (first edge most significant)."""
    d, n = psi.d, psi.n
    edges = list(edges)
    k = len(edges)
    rest = [e for e in range(n) if e not in edges]
    t = np.transpose(psi.tensor(), edges + rest).reshape(d**k, -1)
    t = (np.asarray(matrix) @ t).reshape((d,) * n)
    inv = np.argsort(edges + rest)
    return StateVector(np.transpose(t, inv).reshape(-1), d, n)


def apply_hamiltonian(cx, psi):
    """H_G ψ = -Σ_v A_v ψ - Σ_f B_f ψ."""
    out = np.zeros_like(psi.amplitudes)
    for v in cx.vertices:
        out -= apply(projector(cx, "vertex", v), psi).amplitudes
    for f in range(cx.n_faces):
        out -= apply(projector(cx, "face", f), psi).amplitudes
    return StateVector(out, psi.d, psi.n)


# ---------------------------------------------------------------- the group K


class GroupK:
    """Group generated by a_v for v in a vertex set, as X-exponent cochains."""

    def __init__(self, cx, vertices, elements):
        self.complex = cx
        self.vertices = frozenset(vertices)
        self.elements = elements

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, item):
        return tuple(int(v) % self.complex.d for v in item) in self._set

    @property
    def _set(self):
        return set(self.elements)


def enumerate_K(cx, vertices, limit=MAX_GROUP_ORDER):
    """Closure of {0} under adding the a_v exponent cochains, by breadth-first search."""
    from .analysis import group_order

    vertices = sorted(set(vertices))
    expected = group_order(cx, vertices)
    if expected > limit:
        raise OracleSizeError(f"|K| = {expected} exceeds enumeration guard {limit}")
    d, n = cx.d, cx.n_edges
    gens = [tuple(int(c) for c in covertex_coboundary(cx, v).dense(n) % d) for v in vertices]
    zero = (0,) * n
    seen = {zero}
    order = [zero]
    queue = deque([zero])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = tuple((a + b) % d for a, b in zip(cur, g))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return GroupK(cx, vertices, order)


# ---------------------------------------------------------------- ground states


def ground_state_psi0(cx):
    """Ψ₀ = |K|^{-1/2} Σ_{h∈K} hΩ, with Ω the all-zero product state."""
    _guard(cx.d, cx.n_edges)
    K = enumerate_K(cx, cx.vertices)
    amps = np.zeros(cx.d**cx.n_edges, dtype=complex)
    for h in K.elements:
        amps[index_of(h, cx.d)] += 1
    return StateVector(amps / np.sqrt(K.order), cx.d, cx.n_edges)


def ground_basis(cx):
    """{(α, β): X_{α,β} Ψ₀}, with X_{α,β} built from the homology cocycle generators."""
    from .pauli import x_string

    hom = homology(cx)
    psi0 = ground_state_psi0(cx)
    return {label: apply(x_string(cx, hom.cocycle(*label)), psi0) for label in hom.classes()}


def basis_matrix(states):
    """Columns are the given state vectors."""
    return np.column_stack([s.amplitudes for s in states])


def numerical_rank(M, tol=RANK_TOL):
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * max(s[0], 1e-300)))


def hermitian_rank(M, tol=RANK_TOL):
    if M.size == 0:
        return 0
    lam = np.abs(np.linalg.eigvalsh(M))
    return int(np.sum(lam > tol * max(lam.max(), 1e-300)))


def ground_projector_rank(cx):
    """Numerical rank of Π_v A_v Π_f B_f.

    Π_f B_f is diagonal, so it is read off by applying it to the all-ones
    vector. On its range the vertex part is Π_v (1/d Σ_j a_v^j) = d^{-|V|} Σ over
    all vertex exponent vectors of X^{Σ j_v δv*}, a sum of permutations that is
    assembled as an explicit symmetric matrix and ranked from its eigenvalues.
    """
    d, n = cx.d, cx.n_edges
    _guard(d, n)
    ones = StateVector(np.ones(d**n), d, n)
    diag = ones
    for f in range(cx.n_faces):
        diag = apply(projector(cx, "face", f), diag)
    support = np.flatnonzero(np.abs(diag.amplitudes - 1) < 1e-9)
    if not np.allclose(np.delete(diag.amplitudes, support), 0, atol=1e-9):
        raise ArithmeticError("face projector product is not a 0/1 diagonal")
    position = -np.ones(d**n, dtype=np.int64)
    position[support] = np.arange(len(support))

    stars = np.array([covertex_coboundary(cx, v).dense(n) for v in cx.vertices])
    combos = np.array(list(itertools.product(range(d), repeat=cx.n_vertices)), dtype=np.int64)
    shifts = (combos @ stars) % d
    digits = np.array(np.unravel_index(support, (d,) * n)).T
    radix = d ** np.arange(n - 1, -1, -1)
    M = np.zeros((len(support), len(support)))
    for col, dig in enumerate(digits):
        targets = ((dig[None, :] + shifts) % d) @ radix
        rows = position[targets]
        if (rows < 0).any():
            raise ArithmeticError("vertex operators left the flux-free subspace")
        np.add.at(M[:, col], rows, 1.0)
    M /= d**cx.n_vertices
    return hermitian_rank(M)


# ---------------------------------------------------------------- reduced states


def _split(psi, edges):
    d, n = psi.d, psi.n
    edges = sorted(edges)
    rest = [e for e in range(n) if e not in set(edges)]
    return np.transpose(psi.tensor(), edges + rest).reshape(d ** len(edges), d ** len(rest))


def reduced_density(psi, region_edges):
    """ρ(Λ) = Tr_{Λᶜ} |ψ⟩⟨ψ| on the edges of Λ, ascending."""
    edges = sorted(getattr(region_edges, "edges", region_edges))
    if psi.d ** len(edges) > MAX_DENSITY_DIM:
        raise OracleSizeError(f"reduced density of dimension {psi.d}^{len(edges)} exceeds guard")
    M = _split(psi, edges)
    return M @ M.conj().T


def entropy_numeric(psi, region_edges, cutoff=1e-12):
    """Von Neumann entropy (natural log) of ψ restricted to Λ."""
    edges = sorted(getattr(region_edges, "edges", region_edges))
    M = _split(psi, edges)
    small = M @ M.conj().T if M.shape[0] <= M.shape[1] else M.conj().T @ M
    if small.shape[0] > MAX_DENSITY_DIM:
        raise OracleSizeError("both sides of the cut exceed the density guard")
    lam = np.linalg.eigvalsh(small)
    lam = lam[lam > cutoff]
    return float(-np.sum(lam * np.log(lam)))


def density_spectrum(psi, region_edges, cutoff=1e-12):
    lam = np.linalg.eigvalsh(reduced_density(psi, region_edges))
    return lam[lam > cutoff]


# ---------------------------------------------------------------- excitations


def excitation_pair(cx, psi, walk, k=1, kind="Z"):
    """ζ^k_γ = Z_γ^k ψ for a walk, or ξ^k_{γ*} = X_{γ*}^k ψ for a cowalk (``kind='X'``)."""
    from .pauli import string_for_cowalk, string_for_walk

    if k % cx.d == 0:
        raise ValueError("excitation exponent k must be nonzero mod d")
    if walk[0] == walk[-1]:
        raise ValueError("excitation walk must have distinct endpoints")
    op = string_for_walk(cx, walk, k) if kind == "Z" else string_for_cowalk(cx, walk, k)
    return apply(op, psi)


def eigen_residual(op, psi, value):
    """‖op ψ - value ψ‖."""
    out = apply(op, psi) if not callable(op) else op(psi)
    return float(np.linalg.norm(out.amplitudes - value * psi.amplitudes))


def phase_exponent(psi, phi, d, tol=1e-9):
    """Z_d exponent m with phi = ω^m psi, or None if phi is not such a multiple."""
    ratio = psi.inner(phi) / max(psi.inner(psi).real, 1e-300)
    m = int(round(np.angle(ratio) * d / (2 * np.pi))) % d
    if np.linalg.norm(phi.amplitudes - omega(d) ** m * psi.amplitudes) > tol * max(psi.norm, 1):
        return None
    return m


def restrict(op, edges):
    """The same string acting on a register holding only ``edges`` (ascending)."""
    edges = sorted(edges)
    return PauliString(op.x[edges], op.z[edges], op.phase, op.d, len(edges))


def sequence_phase(ops, seed=0):
    """Phase exponent m with ops[-1]···ops[0] ψ = ω^m ψ on a random register state.

    The register only holds edges touched by some string; the product must be
    a multiple of the identity for the result to exist.
    """
    edges = sorted(set().union(*(op.support for op in ops)))
    d = ops[0].d
    rng = np.random.default_rng(seed)
    psi = StateVector.random(d, len(edges), rng)
    out = apply_sequence([restrict(op, edges) for op in ops], psi)
    return phase_exponent(psi, out, d)


def vertex_charge(cx, psi, v):
    """m with a_v ψ = ω^m ψ, or None."""
    return phase_exponent(psi, apply(vertex_op(cx, v), psi), cx.d)


def face_charge(cx, psi, f):
    return phase_exponent(psi, apply(face_op(cx, f), psi), cx.d)
