"""Generalised Pauli strings ω^p X^x Z^z over Z_d and exact sums of them.

Strings are kept in the fixed normal order "phase, then all X, then all Z".
Reordering Z^a past X^b on one spin costs ω^{ab}, so every phase stays an
integer exponent mod d.
"""
import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .chains import Chain, Cochain, covertex_coboundary, face_boundary

MAX_DENSE_DIM = 4096


class OperatorSizeError(ValueError):
    pass


def omega(d):
    return np.exp(2j * np.pi / d)


def _vec(v, n, d):
    if isinstance(v, Chain):
        v = v.dense(n)
    arr = np.zeros(n, dtype=np.int64) if v is None else np.asarray(v, dtype=np.int64) % d
    if arr.shape != (n,):
        raise ValueError(f"exponent vector must have length {n}")
    arr.flags.writeable = False
    return arr


class PauliString:
    """The operator ω^phase · Π_e X_e^{x_e} · Π_e Z_e^{z_e}."""

    __slots__ = ("x", "z", "phase", "d")

    def __init__(self, x=None, z=None, phase=0, d=2, n=None):
        if n is None:
            for v in (x, z):
                if v is not None and not isinstance(v, Chain):
                    n = len(v)
            if n is None:
                raise ValueError("number of edges n is required")
        if isinstance(x, Chain) and not isinstance(x, Cochain):
            raise TypeError("X exponents are a cochain")
        if isinstance(z, Cochain):
            raise TypeError("Z exponents are a chain")
        self.d = d
        self.x = _vec(x, n, d)
        self.z = _vec(z, n, d)
        self.phase = int(phase) % d

    @classmethod
    def identity(cls, n, d):
        return cls(None, None, 0, d, n)

    @property
    def n(self):
        return len(self.x)

    @property
    def x_cochain(self):
        return Cochain.from_dense(self.x, self.d)

    @property
    def z_chain(self):
        return Chain.from_dense(self.z, self.d)

    @property
    def support(self):
        return frozenset(np.flatnonzero((self.x != 0) | (self.z != 0)).tolist())

    def is_identity(self):
        return not self.x.any() and not self.z.any() and self.phase == 0

    def _check(self, other):
        if not isinstance(other, PauliString):
            raise TypeError(f"expected PauliString, got {type(other).__name__}")
        if (self.d, self.n) != (other.d, other.n):
            raise ValueError(f"mismatched strings: d={self.d},n={self.n} vs d={other.d},n={other.n}")

    def __mul__(self, other):
        if isinstance(other, ProjectorSum):
            return ProjectorSum.from_string(self) * other
        self._check(other)
        phase = self.phase + other.phase + int(self.z @ other.x)
        return PauliString(self.x + other.x, self.z + other.z, phase, self.d, self.n)

    def adjoint(self):
        return PauliString(-self.x, -self.z, -self.phase + int(self.z @ self.x), self.d, self.n)

    def __pow__(self, k):
        base = self if k >= 0 else self.adjoint()
        out = PauliString.identity(self.n, self.d)
        for _ in range(abs(k)):
            out = out * base
        return out

    def scaled(self, p):
        """Multiply by ω^p."""
        return PauliString(self.x, self.z, self.phase + p, self.d, self.n)

    def __eq__(self, other):
        return (
            isinstance(other, PauliString)
            and (self.d, self.phase) == (other.d, other.phase)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self):
        return hash((self.d, self.phase, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self):
        return f"PauliString({self})"

    def __str__(self):
        return f"w^{self.phase} X[{self.x_cochain}] Z[{self.z_chain}]"


def commutation_phase(a, b):
    """k with a·b = ω^k b·a; equivalently [[a, b]] = a b a⁻¹ b⁻¹ = ω^k."""
    a._check(b)
    return int(a.z @ b.x - b.z @ a.x) % a.d


def group_commutator(a, b):
    return a * b * a.adjoint() * b.adjoint()


def z_string(cx, chain, k=1):
    return PauliString(None, chain * k, 0, cx.d, cx.n_edges)


def x_string(cx, cochain, k=1):
    return PauliString(cochain * k, None, 0, cx.d, cx.n_edges)


def vertex_op(cx, v):
    """a_v = X^{δ v*}: X on edges entering v, X⁻¹ on edges leaving."""
    return x_string(cx, covertex_coboundary(cx, v))


def face_op(cx, f):
    """b_f = Z^{∂f}."""
    return z_string(cx, face_boundary(cx, f))


def string_for_walk(cx, walk, k=1):
    from .chains import walk_chain

    return z_string(cx, walk_chain(cx, walk), k)


def string_for_cowalk(cx, cowalk, k=1):
    from .chains import cowalk_cochain

    return x_string(cx, cowalk_cochain(cx, cowalk), k)


# ---------------------------------------------------------------- cyclotomic field


@lru_cache(maxsize=None)
def _cyclotomic(d):
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(d, x), x).all_coeffs()))


def _reduce(poly, d):
    """Canonical coefficients of Σ poly[j] ω^j in the basis 1, ω, …, ω^{φ(d)-1}."""
    phi = _cyclotomic(d)
    deg = len(phi) - 1
    poly = list(poly)
    for top in range(len(poly) - 1, deg - 1, -1):
        c = poly[top]
        if c:
            for i, pc in enumerate(phi):
                poly[top - deg + i] -= c * pc
    poly = poly[:deg] + [Fraction(0)] * max(0, deg - len(poly))
    return tuple(Fraction(c) for c in poly)


def _shift(coeff, p, d):
    poly = [Fraction(0)] * (len(coeff) + p)
    for i, c in enumerate(coeff):
        poly[i + p] += c
    return _reduce(poly, d)


def _times(a, b, d):
    poly = [Fraction(0)] * (len(a) + len(b))
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                poly[i + j] += ca * cb
    return _reduce(poly, d)


def cyclotomic_value(coeff, d):
    w = omega(d)
    return complex(sum(float(c) * w**j for j, c in enumerate(coeff)))


class ProjectorSum:
    """Finite sum Σ c_s · s of normal-form strings with exact coefficients in Q(ω)."""

    __slots__ = ("d", "n", "terms")

    def __init__(self, d, n, terms=None):
        self.d = d
        self.n = n
        self.terms = {}
        for key, coeff in (terms or {}).items():
            self._accumulate(key, coeff)

    def _accumulate(self, key, coeff):
        if key in self.terms:
            coeff = tuple(a + b for a, b in zip(self.terms[key], coeff))
        if any(coeff):
            self.terms[key] = coeff
        else:
            self.terms.pop(key, None)

    @classmethod
    def from_string(cls, s, scale=Fraction(1)):
        out = cls(s.d, s.n)
        unit = _reduce([Fraction(scale)], s.d)
        out._accumulate((s.x.tobytes(), s.z.tobytes()), _shift(unit, s.phase, s.d))
        return out

    @classmethod
    def identity(cls, n, d):
        return cls.from_string(PauliString.identity(n, d))

    def strings(self):
        """Pairs (coefficient, phase-free string)."""
        for (xb, zb), coeff in self.terms.items():
            x = np.frombuffer(xb, dtype=np.int64)
            z = np.frombuffer(zb, dtype=np.int64)
            yield coeff, PauliString(x, z, 0, self.d, self.n)

    def __add__(self, other):
        other = _as_sum(other)
        out = ProjectorSum(self.d, self.n, self.terms)
        for key, coeff in other.terms.items():
            out._accumulate(key, coeff)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-_as_sum(other))

    def scale(self, r, phase=0):
        out = ProjectorSum(self.d, self.n)
        for key, coeff in self.terms.items():
            out._accumulate(key, _shift(tuple(c * Fraction(r) for c in coeff), phase % self.d, self.d))
        return out

    def __mul__(self, other):
        other = _as_sum(other)
        out = ProjectorSum(self.d, self.n)
        for ca, a in self.strings():
            for cb, b in other.strings():
                s = a * b
                out._accumulate((s.x.tobytes(), s.z.tobytes()), _shift(_times(ca, cb, self.d), s.phase, self.d))
        return out

    def __rmul__(self, other):
        return _as_sum(other) * self

    def __eq__(self, other):
        try:
            other = _as_sum(other)
        except TypeError:
            return NotImplemented
        return (self.d, self.n, self.terms) == (other.d, other.n, other.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"ProjectorSum(d={self.d}, terms={len(self.terms)})"


def _as_sum(op):
    if isinstance(op, ProjectorSum):
        return op
    if isinstance(op, PauliString):
        return ProjectorSum.from_string(op)
    raise TypeError(f"cannot treat {type(op).__name__} as an operator sum")


def character_projector(op, j):
    """(1/d) Σ_k ω^{kj} op^k: projector onto the op-eigenspace ω^{-j}."""
    d = op.d
    out = ProjectorSum(d, op.n)
    power = PauliString.identity(op.n, d)
    for k in range(d):
        out = out + ProjectorSum.from_string(power, Fraction(1, d)).scale(1, k * j)
        power = power * op
    return out


def projector(cx, kind, ident, j=0):
    """A_v(j) = (1/d) Σ_k ω^{kj} a_v^k, or B_f(j) = (1/d) Σ_k ω^{-kj} b_f^k.

    B_f(j) is the projector onto face configurations with Σ_e ε(e) k_e = j;
    A_v(j) projects onto the a_v eigenvalue ω^{-j}. j = 0 gives A_v and B_f.
    """
    if kind == "vertex":
        return character_projector(vertex_op(cx, ident), j)
    if kind == "face":
        return character_projector(face_op(cx, ident), -j)
    raise ValueError(f"kind must be 'vertex' or 'face', got {kind!r}")


# ---------------------------------------------------------------- dense matrices


def clock_shift(d):
    """Single-spin X (shift l_i -> l_{i+1}) and Z (clock l_i -> ω^i l_i)."""
    X = np.roll(np.eye(d), 1, axis=0)
    Z = np.diag(omega(d) ** np.arange(d))
    return X, Z


def _one_edge(d, x, z):
    X, Z = clock_shift(d)
    return np.linalg.matrix_power(X, x) @ np.linalg.matrix_power(Z, z)


def matrix_of(op, edges=None):
    """Dense matrix on the given edges (default: the support), first edge most significant."""
    if isinstance(op, ProjectorSum):
        pairs = list(op.strings())
        if edges is None:
            edges = sorted(set().union(*(s.support for _, s in pairs))) if pairs else []
        dim = op.d ** len(edges)
        out = np.zeros((dim, dim), dtype=complex)
        for coeff, s in pairs:
            out += cyclotomic_value(coeff, op.d) * matrix_of(s, edges)
        return out
    if edges is None:
        edges = sorted(op.support)
    edges = list(edges)
    missing = op.support - set(edges)
    if missing:
        raise ValueError(f"operator acts outside the requested edges: {sorted(missing)}")
    if op.d ** len(edges) > MAX_DENSE_DIM:
        raise OperatorSizeError(f"dense matrix of dimension {op.d}^{len(edges)} exceeds guard")
    m = np.array([[omega(op.d) ** op.phase]], dtype=complex)
    for e in edges:
        m = np.kron(m, _one_edge(op.d, int(op.x[e]), int(op.z[e])))
    return m


def t_projector(d, k):
    """T_k = (1/d) Σ_j (ω^{-k} Z)^j, the projector onto l_k."""
    _, Z = clock_shift(d)
    return sum(np.linalg.matrix_power(omega(d) ** (-k) * Z, j) for j in range(d)) / d


def face_projector_t_rep(cx, f):
    """B_f as Σ over edge labels with Σ ε k = 0 of ⊗ T_{k_e}, on the face's edges in ascending order."""
    d = cx.d
    face = sorted(cx.faces[f])
    out = 0
    for ks in itertools.product(range(d), repeat=len(face)):
        if sum(s * k for (_, s), k in zip(face, ks)) % d == 0:
            m = np.array([[1.0 + 0j]])
            for k in ks:
                m = np.kron(m, t_projector(d, k))
            out = out + m
    return out


def vertex_projector_l_rep(cx, v):
    """A_v as (1/d) Σ_j ⊗_e L_{ε(e) j}, on the star's edges in ascending order."""
    d = cx.d
    X, _ = clock_shift(d)
    star = cx.incident_edges[v]
    out = 0
    for j in range(d):
        m = np.array([[1.0 + 0j]])
        for e in star:
            m = np.kron(m, np.linalg.matrix_power(X, (cx.vertex_sign(v, e) * j) % d))
        out = out + m
    return out / d
