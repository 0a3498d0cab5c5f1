"""Polygon decompositions of closed orientable surfaces, their duals, and edge regions.

A face is a cyclically ordered tuple of ``(edge, sign)`` pairs; sign +1 means the
edge is traversed along its own orientation when walking the face boundary in
the face's (surface-inherited) orientation. The face with sign +1 on ``e`` lies
to the left of ``e``; the dual edge ``e*`` runs from the right face to the left
face, which makes ``(e, e*, n)`` right-handed for the outward normal ``n``.
"""
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np


class ComplexValidationError(ValueError):
    def __init__(self, report):
        self.report = list(report)
        super().__init__("invalid complex: " + "; ".join(self.report))


class ComplexParseError(ValueError):
    def __init__(self, message, line, column=1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class CellComplex:
    n_vertices: int
    edges: tuple
    faces: tuple
    d: int = 2
    declared_genus: int = field(default=None, compare=False)
    # generator loops known to a builder; see chains.homology
    generator_hint: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"modulus d must be >= 2, got {self.d}")
        object.__setattr__(self, "edges", tuple((int(t), int(h)) for t, h in self.edges))
        object.__setattr__(
            self,
            "faces",
            tuple(tuple((int(e), 1 if s > 0 else -1) for e, s in f) for f in self.faces),
        )

    @property
    def vertices(self):
        return range(self.n_vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def genus(self):
        return (2 - self.euler_characteristic) // 2

    def with_modulus(self, d):
        return replace(self, d=d)

    def tail(self, e):
        return self.edges[e][0]

    def head(self, e):
        return self.edges[e][1]

    @cached_property
    def incident_edges(self):
        """Edges meeting each vertex, ascending."""
        out = [[] for _ in range(self.n_vertices)]
        for e, (t, h) in enumerate(self.edges):
            out[t].append(e)
            if h != t:
                out[h].append(e)
        return tuple(tuple(x) for x in out)

    @cached_property
    def edge_faces(self):
        """``(left_face, right_face)`` per edge, i.e. the faces holding it with sign +1 / -1."""
        left = [None] * self.n_edges
        right = [None] * self.n_edges
        for f, face in enumerate(self.faces):
            for e, s in face:
                if s > 0:
                    left[e] = f
                else:
                    right[e] = f
        return tuple(zip(left, right))

    def vertex_sign(self, v, e):
        """+1 if edge ``e`` points into ``v``, -1 if it leaves ``v``, else 0."""
        t, h = self.edges[e]
        return int(h == v) - int(t == v)

    @cached_property
    def rotation(self):
        """Cyclic order of edges around each vertex, following face corners."""
        nxt = {}
        for face in self.faces:
            k = len(face)
            for i in range(k):
                e, s = face[i]
                v = self.edges[e][1] if s > 0 else self.edges[e][0]
                nxt[(v, e)] = face[(i + 1) % k][0]
        cycles = []
        for v in self.vertices:
            star = self.incident_edges[v]
            if not star:
                cycles.append(())
                continue
            order = [star[0]]
            while True:
                e = nxt.get((v, order[-1]))
                if e is None or e == order[0] or len(order) > len(star):
                    break
                order.append(e)
            cycles.append(tuple(order))
        return tuple(cycles)

    def boundary_matrix(self, n):
        """Integer matrix of the cellular boundary map out of dimension ``n`` (1 or 2)."""
        if n == 1:
            M = np.zeros((self.n_vertices, self.n_edges), dtype=np.int64)
            for e, (t, h) in enumerate(self.edges):
                M[h, e] += 1
                M[t, e] -= 1
            return M
        if n == 2:
            M = np.zeros((self.n_edges, self.n_faces), dtype=np.int64)
            for f, face in enumerate(self.faces):
                for e, s in face:
                    M[e, f] += s
            return M
        raise ValueError("boundary dimension must be 1 or 2")

    @cached_property
    def dual(self):
        return dualize(self)


@dataclass(frozen=True)
class DualComplex:
    """The dual decomposition; dual edge ``i`` crosses primal edge ``i``."""

    primal: CellComplex
    complex: CellComplex

    def edge_map(self, e):
        return e

    @property
    def n_vertices(self):
        return self.complex.n_vertices

    @property
    def n_edges(self):
        return self.complex.n_edges

    @property
    def n_faces(self):
        return self.complex.n_faces


def _traverse(edges, e, s):
    t, h = edges[e]
    return (t, h) if s > 0 else (h, t)


def validate(cx):
    """List every violated invariant; an empty list means the complex is valid."""
    report = []
    V, E = cx.n_vertices, cx.n_edges
    for e, (t, h) in enumerate(cx.edges):
        if not (0 <= t < V and 0 <= h < V):
            report.append(f"edge {e} references unknown vertex")
        elif t == h:
            report.append(f"edge {e}: edge endpoints equal")
    if report:
        return report

    counts = Counter()
    signs = {}
    for f, face in enumerate(cx.faces):
        if len(face) < 2:
            report.append(f"face {f} has fewer than two edges")
            continue
        seen = set()
        for e, s in face:
            if not 0 <= e < E:
                report.append(f"face {f} references unknown edge {e}")
                continue
            if e in seen:
                report.append(f"face {f}: edge {e} repeated")
            seen.add(e)
            counts[e] += 1
            signs.setdefault(e, []).append(s)
        if all(0 <= e < E for e, _ in face):
            for i in range(len(face)):
                end = _traverse(cx.edges, *face[i])[1]
                start = _traverse(cx.edges, *face[(i + 1) % len(face)])[0]
                if end != start:
                    report.append(f"face {f}: boundary is not a closed walk at position {i}")
                    break
    for e in range(E):
        if counts[e] != 2:
            report.append(f"edge {e}: edge face-count ≠ 2 (found {counts[e]})")
        elif sorted(signs[e]) != [-1, 1]:
            report.append(f"edge {e}: incident faces do not carry opposite signs")
    if report:
        return report

    for v in cx.vertices:
        star = cx.incident_edges[v]
        if not star:
            report.append(f"vertex {v} is isolated")
        elif len(cx.rotation[v]) != len(star):
            report.append(f"vertex {v}: link is not a single cycle")

    if V:
        parent = list(range(V))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for t, h in cx.edges:
            parent[find(t)] = find(h)
        if len({find(v) for v in cx.vertices}) != 1:
            report.append("complex is not connected")
    else:
        report.append("complex has no vertices")

    chi = cx.euler_characteristic
    if chi > 2 or chi % 2:
        report.append(f"Euler characteristic {chi} is not 2 - 2g for any genus g")
    elif cx.declared_genus is not None and cx.declared_genus != cx.genus:
        report.append(f"declared genus {cx.declared_genus} but Euler count gives {cx.genus}")
    return report


def check(cx):
    report = validate(cx)
    if report:
        raise ComplexValidationError(report)
    return cx


def dualize(cx):
    """Dual complex: one vertex per face, one edge per edge, one face per vertex."""
    check(cx)
    dual_edges = [(right, left) for left, right in cx.edge_faces]
    dual_faces = [
        tuple((e, cx.vertex_sign(v, e)) for e in cx.rotation[v]) for v in cx.vertices
    ]
    dual = CellComplex(cx.n_faces, tuple(dual_edges), tuple(dual_faces), d=cx.d)
    return DualComplex(cx, check(dual))


def incidence_isomorphic(a, b):
    """True if ``a`` and ``b`` share edges exactly and faces up to cyclic rotation/order."""
    if (a.n_vertices, a.edges) != (b.n_vertices, b.edges) or a.n_faces != b.n_faces:
        return False

    def canon(face):
        k = len(face)
        rots = [face[i:] + face[:i] for i in range(k)]
        return min(rots)

    return sorted(map(canon, a.faces)) == sorted(map(canon, b.faces))


# ---------------------------------------------------------------- builders


def _torus_indices(L):
    def vid(x, y):
        return (y % L) * L + (x % L)

    def h(x, y):
        return 2 * vid(x, y)

    def u(x, y):
        return 2 * vid(x, y) + 1

    return vid, h, u


def _torus_cells(L):
    vid, h, u = _torus_indices(L)
    edges = [None] * (2 * L * L)
    faces = []
    for y in range(L):
        for x in range(L):
            edges[h(x, y)] = (vid(x, y), vid(x + 1, y))
            edges[u(x, y)] = (vid(x, y), vid(x, y + 1))
    for y in range(L):
        for x in range(L):
            faces.append(((h(x, y), 1), (u(x + 1, y), 1), (h(x, y + 1), -1), (u(x, y), -1)))
    return edges, faces


def torus_loops(L, row=0, col=0):
    """Straight winding loops on the L x L torus as {edge: coeff} dicts.

    ``lambda`` runs along the row, ``tau`` up the column; ``x_alpha`` is the dual
    loop parallel to ``lambda`` (crossing ``tau`` once) and ``x_beta`` the dual
    loop parallel to ``tau`` (crossing ``lambda`` once).
    """
    _, h, u = _torus_indices(L)
    return {
        "lambda": {h(x, row): 1 for x in range(L)},
        "tau": {u(col, y): 1 for y in range(L)},
        "x_alpha": {u(x, row): 1 for x in range(L)},
        "x_beta": {h(col, y): 1 for y in range(L)},
    }


def build_torus(L, d=2):
    """Square-lattice L x L torus: L^2 vertices, 2L^2 edges, L^2 faces."""
    if L < 2:
        raise ValueError(f"torus side L must be >= 2 (got {L}): edges would be self-loops")
    edges, faces = _torus_cells(L)
    loops = torus_loops(L)
    hint = {k: [v] for k, v in loops.items()}
    return check(CellComplex(L * L, tuple(edges), tuple(faces), d=d, generator_hint=hint))


def build_sphere_cube(d=2):
    """Surface of the cube as a decomposition of the 2-sphere."""
    # vertex i has coordinates (i & 1, i >> 1 & 1, i >> 2 & 1); edges point along +axis
    edges = []
    index = {}
    for v in range(8):
        for bit in (1, 2, 4):
            if not v & bit:
                index[(v, v | bit)] = len(edges)
                edges.append((v, v | bit))

    def signed(a, b):
        return (index[(a, b)], 1) if (a, b) in index else (index[(b, a)], -1)

    # outward-oriented (counterclockwise seen from outside) corner cycles
    cycles = [
        (0, 2, 3, 1),  # z = 0, normal -z
        (4, 5, 7, 6),  # z = 1
        (0, 1, 5, 4),  # y = 0, normal -y
        (2, 6, 7, 3),  # y = 1
        (0, 4, 6, 2),  # x = 0, normal -x
        (1, 3, 7, 5),  # x = 1
    ]
    faces = [tuple(signed(c[i], c[(i + 1) % 4]) for i in range(4)) for c in cycles]
    return check(CellComplex(8, tuple(edges), tuple(faces), d=d))


def build_genus2(d=2):
    """Connected sum of two 3 x 3 tori glued along the boundary of a removed face."""
    L = 3
    vid, h, u = _torus_indices(L)
    edges, faces = _torus_cells(L)
    hole = 1 * L + 1
    rim_edges = {e for e, _ in faces[hole]}
    rim_vertices = {x for e in rim_edges for x in edges[e]}

    # second block: mirrored copy, relabelled so the rim is shared with the first
    vmap = {}
    nv = L * L
    for v in range(L * L):
        if v in rim_vertices:
            vmap[v] = v
        else:
            vmap[v] = nv
            nv += 1
    emap = {}
    all_edges = list(edges)
    for e, (t, hd) in enumerate(edges):
        if e in rim_edges:
            emap[e] = e
        else:
            emap[e] = len(all_edges)
            all_edges.append((vmap[t], vmap[hd]))
    all_faces = [f for i, f in enumerate(faces) if i != hole]
    for i, f in enumerate(faces):
        if i != hole:
            all_faces.append(tuple((emap[e], -s) for e, s in reversed(f)))

    hint = {k: [] for k in ("lambda", "tau", "x_alpha", "x_beta")}
    for key, loop in torus_loops(L).items():
        hint[key].append(loop)
        hint[key].append({emap[e]: c for e, c in loop.items()})
    cx = CellComplex(nv, tuple(all_edges), tuple(all_faces), d=d, generator_hint=hint)
    return check(cx)


BUILDERS = {
    "torus": build_torus,
    "sphere": build_sphere_cube,
    "genus2": build_genus2,
}


# ---------------------------------------------------------------- regions


@dataclass(frozen=True)
class Region:
    """A set of edges with its interior and boundary vertex sets."""

    complex: CellComplex = field(repr=False)
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(int(e) for e in self.edges)
        bad = [e for e in edges if not 0 <= e < self.complex.n_edges]
        if bad:
            raise ValueError(f"unknown edges in region: {sorted(bad)}")
        object.__setattr__(self, "edges", edges)

    @cached_property
    def interior(self):
        return frozenset(
            v for v in self.complex.vertices
            if all(e in self.edges for e in self.complex.incident_edges[v])
        )

    @cached_property
    def boundary(self):
        return frozenset(
            v for v in self.complex.vertices
            if any(e in self.edges for e in self.complex.incident_edges[v])
            and any(e not in self.edges for e in self.complex.incident_edges[v])
        )

    def complement(self):
        return Region(self.complex, frozenset(range(self.complex.n_edges)) - self.edges)


# ---------------------------------------------------------------- text format


def save_complex(cx):
    lines = [f"complex d={cx.d} genus={cx.genus}"]
    lines += [f"v {v}" for v in cx.vertices]
    lines += [f"e {e} {t} {h}" for e, (t, h) in enumerate(cx.edges)]
    for f, face in enumerate(cx.faces):
        lines.append(f"f {f} " + " ".join(f"{'+' if s > 0 else '-'}{e}" for e, s in face))
    return "\n".join(lines) + "\n"


def _int(tok, lineno, col, what):
    try:
        return int(tok)
    except ValueError:
        raise ComplexParseError(f"expected integer {what}, got {tok!r}", lineno, col) from None


def _tokens(line):
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield tok, col + 1
        col += len(tok)


def load_complex(text, validate_result=True):
    """Parse the text format produced by :func:`save_complex`."""
    d = None
    genus = None
    vertices, edges, faces = {}, {}, {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        kind, _ = toks[0]
        if kind == "complex":
            if header_seen:
                raise ComplexParseError("duplicate complex header", lineno)
            header_seen = True
            for tok, col in toks[1:]:
                key, sep, val = tok.partition("=")
                if not sep:
                    raise ComplexParseError(f"expected key=value, got {tok!r}", lineno, col)
                if key == "d":
                    d = _int(val, lineno, col + 2, "modulus")
                elif key == "genus":
                    genus = _int(val, lineno, col + 6, "genus") if val else None
                else:
                    raise ComplexParseError(f"unknown header key {key!r}", lineno, col)
            continue
        if not header_seen:
            raise ComplexParseError("missing 'complex d=<int>' header", lineno)
        if kind == "v":
            if len(toks) != 2:
                raise ComplexParseError("vertex line needs exactly one id", lineno)
            vertices[_int(toks[1][0], lineno, toks[1][1], "vertex id")] = lineno
        elif kind == "e":
            if len(toks) != 4:
                raise ComplexParseError("edge line needs: e <id> <tail> <head>", lineno)
            eid, t, h = (_int(tok, lineno, col, "edge field") for tok, col in toks[1:])
            if eid in edges:
                raise ComplexParseError(f"duplicate edge id {eid}", lineno, toks[1][1])
            edges[eid] = (t, h)
        elif kind == "f":
            if len(toks) < 3:
                raise ComplexParseError("face line needs an id and signed edges", lineno)
            fid = _int(toks[1][0], lineno, toks[1][1], "face id")
            signed = []
            for tok, col in toks[2:]:
                if tok[0] not in "+-" or not tok[1:].isdigit():
                    raise ComplexParseError(f"expected signed edge like +3 or -3, got {tok!r}", lineno, col)
                signed.append((int(tok[1:]), 1 if tok[0] == "+" else -1))
            if fid in faces:
                raise ComplexParseError(f"duplicate face id {fid}", lineno, toks[1][1])
            faces[fid] = tuple(signed)
        else:
            raise ComplexParseError(f"unknown record type {kind!r}", lineno, 1)
    if not header_seen:
        raise ComplexParseError("empty input: missing complex header", 1)
    if d is None:
        raise ComplexParseError("header is missing d=<int>", 1)
    for name, table in (("vertex", vertices), ("edge", edges), ("face", faces)):
        if sorted(table) != list(range(len(table))):
            raise ComplexParseError(f"{name} ids must be dense from 0", 1)
    cx = CellComplex(
        len(vertices),
        tuple(edges[i] for i in range(len(edges))),
        tuple(faces[i] for i in range(len(faces))),
        d=d,
        declared_genus=genus,
    )
    return check(cx) if validate_result else cx


def load_region(text, cx):
    toks = text.split("#", 1)[0].split()
    if not toks or toks[0] != "region":
        raise ComplexParseError("region file must start with 'region'", 1)
    return Region(cx, frozenset(_int(t, 1, 0, "edge id") for t in toks[1:]))


def save_region(region):
    return "region " + " ".join(str(e) for e in sorted(region.edges)) + "\n"


def bfs_tree(cx, root=0):
    """Parent edge of each vertex in a BFS spanning tree (root maps to None)."""
    parent = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in cx.incident_edges[v]:
            t, h = cx.edges[e]
            w = h if t == v else t
            if w not in parent:
                parent[w] = e
                queue.append(w)
    return parent
