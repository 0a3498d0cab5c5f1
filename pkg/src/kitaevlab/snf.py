"""Integer Smith normal form with unimodular transforms, and Z_d solving on top of it.

Everything here works on plain Python ints so entries never overflow.
"""
from dataclasses import dataclass
from math import gcd


def _as_rows(matrix, shape=None):
    rows = [[int(v) for v in row] for row in matrix]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise ValueError("ragged matrix or shape mismatch")
    return rows, shape


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b, ncols=None):
    """Integer product of two list-of-rows matrices."""
    if ncols is None:
        ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * ncols
        for k, aik in enumerate(row):
            if aik:
                bk = b[k]
                for j in range(ncols):
                    if bk[j]:
                        acc[j] += aik * bk[j]
        out.append(acc)
    return out


@dataclass
class SmithForm:
    """``U @ A @ V == S`` with U, V unimodular; inverses are tracked alongside."""

    S: list
    U: list
    V: list
    U_inv: list
    V_inv: list
    shape: tuple

    @property
    def divisors(self):
        """Nonzero diagonal entries, each dividing the next."""
        out = []
        for i in range(min(self.shape)):
            if self.S[i][i] == 0:
                break
            out.append(self.S[i][i])
        return out

    @property
    def rank(self):
        return len(self.divisors)

    def verify(self, A):
        """Recompute U·A·V and the inverse products; True if all identities hold."""
        A, _ = _as_rows(A, self.shape)
        m, n = self.shape
        if matmul(matmul(self.U, A, n), self.V, n) != self.S:
            return False
        if matmul(self.U, self.U_inv, m) != identity(m):
            return False
        if matmul(self.V, self.V_inv, n) != identity(n):
            return False
        S = self.S
        for i in range(m):
            for j in range(n):
                if i != j and S[i][j]:
                    return False
        div = self.divisors
        if any(s <= 0 for s in div):
            return False
        if any(div[i + 1] % div[i] for i in range(len(div) - 1)):
            return False
        return all(S[i][i] == 0 for i in range(len(div), min(m, n)))


class _Reducer:
    def __init__(self, A, shape):
        m, n = shape
        self.A = A
        self.m, self.n = m, n
        self.U, self.U_inv = identity(m), identity(m)
        self.V, self.V_inv = identity(n), identity(n)

    # row ops act on A and U from the left; U_inv picks up the inverse on the right
    def swap_rows(self, i, j):
        if i == j:
            return
        for M in (self.A, self.U):
            M[i], M[j] = M[j], M[i]
        for row in self.U_inv:
            row[i], row[j] = row[j], row[i]

    def add_row(self, i, j, c):
        """row_i += c * row_j"""
        for M in (self.A, self.U):
            ri, rj = M[i], M[j]
            for k in range(len(ri)):
                if rj[k]:
                    ri[k] += c * rj[k]
        for row in self.U_inv:
            row[j] -= c * row[i]

    def negate_row(self, i):
        for M in (self.A, self.U):
            M[i] = [-v for v in M[i]]
        for row in self.U_inv:
            row[i] = -row[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for M in (self.A, self.V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        self.V_inv[i], self.V_inv[j] = self.V_inv[j], self.V_inv[i]

    def add_col(self, i, j, c):
        """col_i += c * col_j"""
        for M in (self.A, self.V):
            for row in M:
                if row[j]:
                    row[i] += c * row[j]
        ri, rj = self.V_inv[i], self.V_inv[j]
        for k in range(len(rj)):
            if ri[k]:
                rj[k] -= c * ri[k]

    def _min_pivot(self, t, cells):
        best = None
        for i, j in cells:
            v = self.A[i][j]
            if v and (best is None or abs(v) < abs(self.A[best[0]][best[1]])):
                best = (i, j)
        return best

    def run(self):
        A, m, n = self.A, self.m, self.n
        for t in range(min(m, n)):
            pos = self._min_pivot(t, ((i, j) for i in range(t, m) for j in range(t, n)))
            if pos is None:
                break
            self.swap_rows(t, pos[0])
            self.swap_cols(t, pos[1])
            while True:
                p = A[t][t]
                for i in range(t + 1, m):
                    if A[i][t]:
                        self.add_row(i, t, -(A[i][t] // p))
                for j in range(t + 1, n):
                    if A[t][j]:
                        self.add_col(j, t, -(A[t][j] // p))
                line = [(i, t) for i in range(t, m)] + [(t, j) for j in range(t + 1, n)]
                if any(A[i][j] for i, j in line if (i, j) != (t, t)):
                    pos = self._min_pivot(t, line)
                    self.swap_rows(t, pos[0])
                    self.swap_cols(t, pos[1])
                    continue
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if A[t][t] < 0:
                self.negate_row(t)


def smith_normal_form(matrix, shape=None):
    """Smith normal form of an integer matrix.

    ``matrix`` may be a numpy array or nested sequence; pass ``shape`` for
    matrices with zero rows.
    """
    if shape is None and hasattr(matrix, "shape"):
        shape = tuple(matrix.shape)
    A, shape = _as_rows(matrix, shape)
    red = _Reducer(A, shape)
    red.run()
    return SmithForm(red.A, red.U, red.V, red.U_inv, red.V_inv, shape)


def subgroup_order(sf, d):
    """Order of the image of Z^n -> Z_d^m under the factored matrix."""
    order = 1
    for s in sf.divisors:
        order *= d // gcd(s, d)
    return order


def kernel_order(sf, d):
    """Number of solutions of A x = 0 over Z_d."""
    m, n = sf.shape
    order = d ** (n - sf.rank)
    for s in sf.divisors:
        order *= gcd(s, d)
    return order


def solve_mod(sf, b, d):
    """One solution x of A x = b (mod d), or None if the system is inconsistent."""
    m, n = sf.shape
    rhs = [sum(u * v for u, v in zip(row, b)) % d for row in sf.U]
    y = [0] * n
    for i in range(m):
        s = sf.S[i][i] if i < n else 0
        if s == 0:
            if rhs[i]:
                return None
            continue
        g = gcd(s, d)
        if rhs[i] % g:
            return None
        dg = d // g
        y[i] = (rhs[i] // g) * pow(s // g, -1, dg) % dg if dg > 1 else 0
    return [sum(v * yk for v, yk in zip(row, y)) % d for row in sf.V]


def kernel_generators_mod(sf, d):
    """Generators of {x : A x = 0 mod d} as integer vectors."""
    m, n = sf.shape
    gens = []
    for i in range(n):
        s = sf.S[i][i] if i < min(m, n) else 0
        step = 1 if s == 0 else d // gcd(s, d)
        if step % d == 0:
            continue
        gens.append([(row[i] * step) % d for row in sf.V])
    return gens
