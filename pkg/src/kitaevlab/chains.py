"""Z_d chains and cochains, (co)boundaries, and first (co)homology.

Cochains live on dual edges, which share ids with the primal edges they cross,
so a cochain coefficient ``co[e]`` is attached to ``e*``.
"""
import itertools
from dataclasses import dataclass

import numpy as np
import sympy

from . import snf


class Chain:
    """Sparse Z_d-linear combination of cells of a single dimension."""

    kind = "chain"
    __slots__ = ("d", "dim", "_coeffs")

    def __init__(self, coeffs=None, d=2, dim=1):
        if d < 2:
            raise ValueError("modulus must be >= 2")
        self.d = d
        self.dim = dim
        items = coeffs.items() if isinstance(coeffs, dict) else (coeffs or ())
        acc = {}
        for cell, c in items:
            acc[int(cell)] = (acc.get(int(cell), 0) + int(c)) % d
        self._coeffs = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def from_dense(cls, vec, d, dim=1):
        return cls({i: int(c) for i, c in enumerate(vec) if int(c) % d}, d=d, dim=dim)

    @property
    def coeffs(self):
        return dict(self._coeffs)

    @property
    def support(self):
        return frozenset(self._coeffs)

    def __getitem__(self, cell):
        return self._coeffs.get(cell, 0)

    def dense(self, size):
        out = np.zeros(size, dtype=np.int64)
        for k, v in self._coeffs.items():
            out[k] = v
        return out

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {self.kind} with {getattr(other, 'kind', type(other).__name__)}")
        if other.d != self.d:
            raise ValueError(f"modulus mismatch: {self.d} vs {other.d}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        merged = dict(self._coeffs)
        for k, v in other._coeffs.items():
            merged[k] = merged.get(k, 0) + v
        return type(self)(merged, self.d, self.dim)

    def __neg__(self):
        return type(self)({k: -v for k, v in self._coeffs.items()}, self.d, self.dim)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return type(self)({c: k * v for c, v in self._coeffs.items()}, self.d, self.dim)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and (self.d, self.dim, self._coeffs) == (other.d, other.dim, other._coeffs)
        )

    def __hash__(self):
        return hash((self.kind, self.d, self.dim, tuple(self._coeffs.items())))

    def __bool__(self):
        return bool(self._coeffs)

    def __repr__(self):
        return f"{type(self).__name__}({self._coeffs!r}, d={self.d}, dim={self.dim})"

    def __str__(self):
        body = " ".join(f"{k}^{v}" for k, v in self._coeffs.items())
        return f"{self.kind} d={self.d}: {body}".rstrip()

    @classmethod
    def parse(cls, text, dim=1):
        head, sep, body = text.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] != cls.kind or not parts[1].startswith("d="):
            raise ValueError(f"not a {cls.kind} text form: {text!r}")
        d = int(parts[1][2:])
        coeffs = []
        for tok in body.split():
            cell, _, c = tok.partition("^")
            coeffs.append((int(cell), int(c)))
        return cls(coeffs, d=d, dim=dim)


class Cochain(Chain):
    """Z_d-linear combination of dual cells (dim 1 means dual edges)."""

    kind = "cochain"
    __slots__ = ()


def boundary(cx, chain):
    """Boundary of a 1- or 2-chain as a chain one dimension down."""
    if chain.d != cx.d:
        raise ValueError(f"modulus mismatch: chain d={chain.d}, complex d={cx.d}")
    if isinstance(chain, Cochain):
        return coboundary_dual(cx, chain)
    if chain.dim not in (1, 2):
        raise ValueError("boundary is defined on 1- and 2-chains")
    size = cx.n_edges if chain.dim == 1 else cx.n_faces
    vec = cx.boundary_matrix(chain.dim) @ chain.dense(size)
    return Chain.from_dense(vec, cx.d, dim=chain.dim - 1)


def coboundary_dual(cx, cochain):
    """Boundary of a cochain taken in the dual complex (dual vertices are faces)."""
    dual = cx.dual.complex
    size = dual.n_edges if cochain.dim == 1 else dual.n_faces
    vec = dual.boundary_matrix(cochain.dim) @ cochain.dense(size)
    return Cochain.from_dense(vec, cx.d, dim=cochain.dim - 1)


def face_boundary(cx, f):
    if not 0 <= f < cx.n_faces:
        raise KeyError(f"unknown face {f}")
    return Chain(cx.faces[f], d=cx.d)


def covertex_coboundary(cx, v):
    """Signed dual-edge star of ``v``: +1 on edges entering v, -1 on edges leaving."""
    if not 0 <= v < cx.n_vertices:
        raise KeyError(f"unknown vertex {v}")
    return Cochain({e: cx.vertex_sign(v, e) for e in cx.incident_edges[v]}, d=cx.d)


def is_cycle(cx, chain):
    return not boundary(cx, chain)


def is_cocycle(cx, cochain):
    return not coboundary_dual(cx, cochain)


def _smith(cx, which):
    cache = cx.__dict__.setdefault("_smith_cache", {})
    if which not in cache:
        if which == "d2":
            M = cx.boundary_matrix(2)
        elif which == "d1":
            M = cx.boundary_matrix(1)
        elif which == "dual_d2":
            M = cx.dual.complex.boundary_matrix(2)
        else:
            M = cx.dual.complex.boundary_matrix(1)
        sf = snf.smith_normal_form(M, shape=M.shape)
        if not sf.verify(M):
            raise ArithmeticError(f"Smith form of {which} failed verification")
        cache[which] = sf
    return cache[which]


def _min_support_witness(sf, x, d, size):
    kernel = snf.kernel_generators_mod(sf, d)
    if not kernel or d ** len(kernel) > 4096:
        return x
    best = x
    for combo in itertools.product(range(d), repeat=len(kernel)):
        cand = list(x)
        for c, g in zip(combo, kernel):
            if c:
                cand = [(a + c * b) % d for a, b in zip(cand, g)]
        if sum(1 for v in cand if v) < sum(1 for v in best if v):
            best = cand
    return best


def is_boundary(cx, chain):
    """Solve ∂₂ w = chain over Z_d; returns ``(True, w)`` or ``(False, None)``."""
    if chain.dim != 1:
        raise ValueError("is_boundary expects a 1-chain")
    dual = isinstance(chain, Cochain)
    sf = _smith(cx, "dual_d2" if dual else "d2")
    b = [int(v) for v in chain.dense(cx.n_edges)]
    x = snf.solve_mod(sf, b, cx.d)
    if x is None:
        return False, None
    x = _min_support_witness(sf, x, cx.d, sf.shape[1])
    cls = Cochain if dual else Chain
    return True, cls.from_dense(x, cx.d, dim=2)


def is_coboundary(cx, cochain):
    return is_boundary(cx, cochain)


def count_cycles(cx, dual=False):
    return snf.kernel_order(_smith(cx, "dual_d1" if dual else "d1"), cx.d)


def count_boundaries(cx, dual=False):
    return snf.subgroup_order(_smith(cx, "dual_d2" if dual else "d2"), cx.d)


def intersection(chain, cochain):
    """Oriented crossing count Σ_e chain(e)·cochain(e*) mod d."""
    if not isinstance(cochain, Cochain) or isinstance(chain, Cochain):
        raise TypeError("intersection pairs a chain with a cochain")
    if chain.d != cochain.d:
        raise ValueError(f"modulus mismatch: {chain.d} vs {cochain.d}")
    return sum(v * cochain[e] for e, v in chain.coeffs.items()) % chain.d


# ---------------------------------------------------------------- homology


def _integer_cycle_basis(cx, dual):
    """Free generators of integer H₁ (columns) plus the torsion divisors."""
    target = cx.dual.complex if dual else cx
    d1 = target.boundary_matrix(1)
    d2 = target.boundary_matrix(2)
    sf1 = snf.smith_normal_form(d1, shape=d1.shape)
    r1 = sf1.rank
    V = np.array(sf1.V, dtype=object).reshape(d1.shape[1], d1.shape[1])
    V_inv = np.array(sf1.V_inv, dtype=object).reshape(V.shape)
    K = V[:, r1:]
    M = (V_inv @ d2.astype(object))[r1:, :]
    sf2 = snf.smith_normal_form(M, shape=M.shape)
    if not sf2.verify(M):
        raise ArithmeticError("Smith form of cycle-relative boundaries failed verification")
    P_inv = np.array(sf2.U_inv, dtype=object).reshape(M.shape[0], M.shape[0])
    divisors = sf2.divisors
    torsion = [s for s in divisors if s > 1]
    free_cols = list(range(len(divisors), M.shape[0]))
    gens = (K @ P_inv)[:, free_cols] if free_cols else np.zeros((K.shape[0], 0), dtype=object)
    return gens, torsion, sf1.divisors, divisors


@dataclass
class HomologyDescriptor:
    """First homology over Z_d with paired chain / cochain generators.

    ``lambdas[i]``, ``taus[i]`` are cycles in classes ``v_i ⊕ 0`` and ``0 ⊕ v_i``;
    ``x_alpha[i]``, ``x_beta[i]`` are cocycles in the matching cohomology classes,
    normalised so that ⟨λ_i, x_beta_j⟩ = ⟨τ_i, x_alpha_j⟩ = δ_ij and all other
    pairings vanish.
    """

    d: int
    betti: int
    lambdas: list
    taus: list
    x_alpha: list
    x_beta: list
    divisors_d1: list
    divisors_d2: list
    torsion: list
    source: str

    @property
    def genus(self):
        return len(self.lambdas)

    @property
    def order(self):
        return self.d ** self.betti

    @property
    def chain_generators(self):
        return self.lambdas + self.taus

    @property
    def cochain_generators(self):
        return self.x_alpha + self.x_beta

    def class_of(self, chain, cx=None):
        """(α, β) coordinates of a cycle."""
        if isinstance(chain, Cochain):
            raise TypeError("use coclass_of for cochains")
        if cx is not None and not is_cycle(cx, chain):
            raise ValueError("class_of needs a cycle")
        alpha = tuple(intersection(chain, c) for c in self.x_beta)
        beta = tuple(intersection(chain, c) for c in self.x_alpha)
        return alpha, beta

    def coclass_of(self, cochain, cx=None):
        if cx is not None and not is_cocycle(cx, cochain):
            raise ValueError("coclass_of needs a cocycle")
        alpha = tuple(intersection(t, cochain) for t in self.taus)
        beta = tuple(intersection(l, cochain) for l in self.lambdas)
        return alpha, beta

    def cycle(self, alpha, beta):
        """Representative cycle of class (α, β)."""
        out = Chain({}, d=self.d)
        for a, l in zip(alpha, self.lambdas):
            out = out + a * l
        for b, t in zip(beta, self.taus):
            out = out + b * t
        return out

    def cocycle(self, alpha, beta):
        out = Cochain({}, d=self.d)
        for a, c in zip(alpha, self.x_alpha):
            out = out + a * c
        for b, c in zip(beta, self.x_beta):
            out = out + b * c
        return out

    def classes(self):
        g = self.genus
        for flat in itertools.product(range(self.d), repeat=2 * g):
            yield flat[:g], flat[g:]


def _from_hint(cx):
    hint = cx.generator_hint
    d = cx.d
    return (
        [Chain(c, d=d) for c in hint["lambda"]],
        [Chain(c, d=d) for c in hint["tau"]],
        [Cochain(c, d=d) for c in hint["x_alpha"]],
        [Cochain(c, d=d) for c in hint["x_beta"]],
    )


def _from_smith(cx):
    chains, torsion_c, _, _ = _integer_cycle_basis(cx, dual=False)
    cochains, torsion_co, _, _ = _integer_cycle_basis(cx, dual=True)
    if torsion_c or torsion_co:
        raise ArithmeticError("integer homology has torsion; not a closed orientable surface")
    n = chains.shape[1]
    pairing = sympy.Matrix(chains.T @ cochains)
    if n and abs(pairing.det()) != 1:
        raise ArithmeticError(f"intersection pairing is not unimodular (det {pairing.det()})")
    inv = pairing.inv() if n else sympy.Matrix([])
    dual_basis = cochains @ np.array(inv.tolist(), dtype=object).reshape(n, n) if n else cochains
    d = cx.d
    cols = [[int(v) for v in chains[:, j]] for j in range(n)]
    cocols = [[int(v) for v in dual_basis[:, j]] for j in range(n)]
    lambdas = [Chain(dict(enumerate(cols[2 * i])), d=d) for i in range(n // 2)]
    taus = [Chain(dict(enumerate(cols[2 * i + 1])), d=d) for i in range(n // 2)]
    x_beta = [Cochain(dict(enumerate(cocols[2 * i])), d=d) for i in range(n // 2)]
    x_alpha = [Cochain(dict(enumerate(cocols[2 * i + 1])), d=d) for i in range(n // 2)]
    return lambdas, taus, x_alpha, x_beta


def homology(cx):
    """Homology descriptor; generators come from the builder when known, else from SNF."""
    key = "_homology"
    if key in cx.__dict__:
        return cx.__dict__[key]
    _, torsion, div1, div2 = _integer_cycle_basis(cx, dual=False)
    n_cycles = count_cycles(cx)
    n_bound = count_boundaries(cx)
    h_order = n_cycles // n_bound
    betti = 0
    while cx.d ** betti < h_order:
        betti += 1
    if cx.d ** betti != h_order:
        raise ArithmeticError(f"|H₁| = {h_order} is not a power of d = {cx.d}")
    if cx.generator_hint is not None:
        parts, source = _from_hint(cx), "builder"
    else:
        parts, source = _from_smith(cx), "smith"
    lambdas, taus, x_alpha, x_beta = parts
    desc = HomologyDescriptor(
        d=cx.d,
        betti=betti,
        lambdas=lambdas,
        taus=taus,
        x_alpha=x_alpha,
        x_beta=x_beta,
        divisors_d1=[int(s) for s in div1],
        divisors_d2=[int(s) for s in div2],
        torsion=[int(s) for s in torsion],
        source=source,
    )
    cx.__dict__[key] = desc
    return desc


def class_of(cx, chain):
    return homology(cx).class_of(chain, cx)


def pairing_matrix(desc):
    """Intersection numbers ⟨chain generator, cochain generator⟩ in (λ..., τ...) x (x_α..., x_β...) order."""
    return [[intersection(c, co) for co in desc.cochain_generators] for c in desc.chain_generators]


def expected_pairing(g):
    """λ_i pairs with x_β_i, τ_i with x_α_i."""
    n = 2 * g
    out = [[0] * n for _ in range(n)]
    for i in range(g):
        out[i][g + i] = 1
        out[g + i][i] = 1
    return out


def walk_chain(cx, walk):
    """Chain of an alternating vertex/edge walk ``[v0, e1, v1, ..., eN, vN]``."""
    if len(walk) % 2 == 0 or len(walk) < 1:
        raise ValueError("walk must alternate vertex, edge, ..., vertex")
    coeffs = {}
    for i in range(1, len(walk), 2):
        a, e, b = walk[i - 1], walk[i], walk[i + 1]
        t, h = cx.edges[e]
        if (t, h) == (a, b):
            s = 1
        elif (h, t) == (a, b):
            s = -1
        else:
            raise ValueError(f"edge {e} does not join {a} and {b}")
        coeffs[e] = coeffs.get(e, 0) + s
    return Chain(coeffs, d=cx.d)


def cowalk_cochain(cx, cowalk):
    """Cochain of an alternating face/dual-edge cowalk ``[f0, e1, f1, ..., fN]``."""
    if len(cowalk) % 2 == 0 or len(cowalk) < 1:
        raise ValueError("cowalk must alternate face, edge, ..., face")
    coeffs = {}
    for i in range(1, len(cowalk), 2):
        a, e, b = cowalk[i - 1], cowalk[i], cowalk[i + 1]
        left, right = cx.edge_faces[e]
        if (right, left) == (a, b):
            s = 1
        elif (left, right) == (a, b):
            s = -1
        else:
            raise ValueError(f"dual edge {e}* does not join faces {a} and {b}")
        coeffs[e] = coeffs.get(e, 0) + s
    return Cochain(coeffs, d=cx.d)


def walk_through(cx, vertices):
    """Alternating walk visiting ``vertices`` in order, using the lowest joining edge."""
    walk = [vertices[0]]
    for a, b in zip(vertices, vertices[1:]):
        edge = next((e for e in cx.incident_edges[a] if set(cx.edges[e]) == {a, b}), None)
        if edge is None:
            raise ValueError(f"vertices {a} and {b} are not adjacent")
        walk += [edge, b]
    return walk


def cowalk_through(cx, faces):
    walk = [faces[0]]
    for a, b in zip(faces, faces[1:]):
        edge = next((e for e, (l, r) in enumerate(cx.edge_faces) if {l, r} == {a, b}), None)
        if edge is None:
            raise ValueError(f"faces {a} and {b} share no edge")
        walk += [edge, b]
    return walk
