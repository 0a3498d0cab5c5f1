"""Invariant suite behind ``kitaevlab verify``."""
import logging
from dataclasses import dataclass

import numpy as np

from . import analysis, oracle
from .chains import expected_pairing, face_boundary, homology, pairing_matrix
from .complex import Region, validate
from .pauli import PauliString, face_op, vertex_op

log = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _star_signs(cx, flip_dual=False):
    """Integer vertex-operator exponents, one row per vertex.

    ``flip_dual`` reverses the dual orientation of edge 0 at its head only,
    a deliberately inconsistent convention used as a negative control.
    """
    rows = np.zeros((cx.n_vertices, cx.n_edges), dtype=np.int64)
    for e, (t, h) in enumerate(cx.edges):
        rows[h, e] += 1
        rows[t, e] -= 1
    if flip_dual:
        rows[cx.edges[0][1], 0] *= -1
    return rows


def _face_signs(cx):
    rows = np.zeros((cx.n_faces, cx.n_edges), dtype=np.int64)
    for f, face in enumerate(cx.faces):
        for e, s in face:
            rows[f, e] += s
    return rows


def check_commutation(cx, flip_dual=False):
    """[b_f, a_v] = 1 for all pairs, mod d and for the integer lift (so for every d)."""
    stars = _star_signs(cx, flip_dual)
    faces = _face_signs(cx)
    pairing = faces @ stars.T
    bad_mod = int(np.count_nonzero(pairing % cx.d))
    bad_int = int(np.count_nonzero(pairing))
    return [
        CheckResult("face/vertex operators commute mod d", bad_mod == 0, f"{bad_mod} non-commuting pairs"),
        CheckResult("face/vertex operators commute for every d", bad_int == 0, f"{bad_int} pairs with nonzero integer pairing"),
    ]


def _symbolic(cx, flip_dual):
    out = []
    problems = validate(cx)
    out.append(CheckResult("complex is a valid closed surface", not problems, "; ".join(problems)))
    out += check_commutation(cx, flip_dual)

    hom = homology(cx)
    g = hom.genus
    out.append(CheckResult("b1 = 2g", hom.betti == 2 * g == 2 - cx.euler_characteristic, f"b1={hom.betti}, chi={cx.euler_characteristic}"))
    out.append(CheckResult("generator pairing is the standard one", pairing_matrix(hom) == expected_pairing(g)))

    alg = analysis.logical_algebra_check(cx)
    out.append(CheckResult("logical generator relation table", alg.ok, f"{len(alg.table)} ordered pairs"))
    dim = analysis.ground_dim(cx)
    out.append(CheckResult("ground dimension = d^(2g)", dim == cx.d ** (2 * g), f"dim={dim}"))

    b = analysis.braid(cx, 1, 1)
    out.append(CheckResult("braid phase exponent is -1", b.ok and b.exponent == (-1) % cx.d, f"exponent={b.exponent}"))

    v = 0
    star = Region(cx, frozenset(cx.incident_edges[v]))
    rep = analysis.entropy(cx, star)
    if rep.area_law is not None:
        out.append(CheckResult("vertex star obeys the area law", rep.area_law, f"ratio={rep.ratio}, |boundary|={rep.boundary_size}"))
    return out


def _oracle(cx, seed):
    out = []
    d = cx.d
    psi0 = oracle.ground_state_psi0(cx)
    worst = max(
        [oracle.eigen_residual(vertex_op(cx, v), psi0, 1) for v in cx.vertices]
        + [oracle.eigen_residual(face_op(cx, f), psi0, 1) for f in range(cx.n_faces)]
    )
    out.append(CheckResult("a_v and b_f fix the ground state", worst < 1e-12, f"max residual {worst:.2e}"))

    basis = oracle.ground_basis(cx)
    M = oracle.basis_matrix(basis.values())
    gram = float(np.abs(M.conj().T @ M - np.eye(M.shape[1])).max())
    out.append(CheckResult("ground basis is orthonormal", gram < 1e-12, f"max |G - I| = {gram:.2e}"))

    rank = oracle.ground_projector_rank(cx)
    out.append(CheckResult("projector rank = ground dimension", rank == analysis.ground_dim(cx), f"rank={rank}"))

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        size = int(rng.integers(0, cx.n_edges + 1))
        region = frozenset(rng.choice(cx.n_edges, size=size, replace=False).tolist())
        worst = max(worst, abs(analysis.entropy(cx, region).value - oracle.entropy_numeric(psi0, region)))
    out.append(CheckResult("entropy counting formula matches reduced density", worst < 1e-9, f"max error {worst:.2e}"))

    b = analysis.braid(cx, 1, 1, oracle=True)
    out.append(CheckResult("braid phase matches the oracle", b.oracle_exponent == b.exponent, f"oracle={b.oracle_exponent}"))

    loop = face_boundary(cx, 0)
    z = PauliString(None, loop, 0, d, cx.n_edges)
    out.append(CheckResult("face loop fixes ground states", oracle.eigen_residual(z, psi0, 1) < 1e-12))
    return out


def run_suite(cx, quick=False, seed=0, flip_dual=False):
    """Run the checks; oracle checks are skipped when ``quick`` or when the complex is too big."""
    results = _symbolic(cx, flip_dual)
    if quick:
        log.info("quick run: oracle checks skipped")
        return results
    if cx.d**cx.n_edges > oracle.MAX_AMPLITUDES:
        log.warning("complex exceeds the oracle guard (%d^%d amplitudes); oracle checks skipped", cx.d, cx.n_edges)
        return results
    return results + _oracle(cx, seed)
