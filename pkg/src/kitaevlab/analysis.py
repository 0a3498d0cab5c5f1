"""Exact results computed without state vectors.

Group orders come from integer Smith normal forms, so composite d is handled
correctly. Phases are reported as exponents in Z_d.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

from . import snf
from .chains import Chain, boundary, cowalk_cochain, face_boundary, homology, is_boundary, walk_chain
from .complex import Region, build_torus
from .pauli import PauliString, commutation_phase, group_commutator, x_string, z_string


def group_order(cx, vertices):
    """|⟨a_v : v ∈ vertices⟩| as an exact integer."""
    vertices = sorted(set(vertices))
    if not vertices:
        return 1
    n = cx.n_edges
    matrix = [[_signed(cx, v, e) for v in vertices] for e in range(n)]
    return snf.subgroup_order(snf.smith_normal_form(matrix, (n, len(vertices))), cx.d)


def supported_order(cx, edges):
    """|{h ∈ K : supp h ⊆ edges}| = |K| / |K restricted to the other edges|."""
    edges = set(edges)
    rest = [e for e in range(cx.n_edges) if e not in edges]
    total = group_order(cx, cx.vertices)
    if not rest:
        return total
    vertices = list(cx.vertices)
    matrix = [[_signed(cx, v, e) for v in vertices] for e in rest]
    image = snf.subgroup_order(snf.smith_normal_form(matrix, (len(rest), len(vertices))), cx.d)
    return total // image


def _signed(cx, v, e):
    """Integer coefficient of edge e in the covertex cochain of v (+1 in, -1 out)."""
    t, h = cx.edges[e]
    return int(h == v) - int(t == v)


def is_simple(region):
    """The part of K acting inside Λ is free on the interior vertices Λ₀."""
    cx = region.complex
    return supported_order(cx, region.edges) == cx.d ** len(region.interior)


def ground_dim(cx):
    return cx.d ** homology(cx).betti


# ---------------------------------------------------------------- entropy


@dataclass
class EntropyReport:
    region: frozenset
    d: int
    order_inside: int
    order_outside: int
    order_total: int
    ratio: Fraction
    simple_inside: bool
    simple_outside: bool
    boundary_size: int
    interior_size: int
    generated_inside: int
    generated_outside: int
    area_law: bool | None = None

    @property
    def generated_ratio(self):
        """The same ratio with K_Y generated by the a_v interior to Y only."""
        return Fraction(self.generated_inside * self.generated_outside, self.order_total)

    @property
    def value(self):
        return -math.log(self.ratio.numerator) + math.log(self.ratio.denominator)

    @property
    def in_log_d(self):
        """S / log d as an exact rational when the ratio is a power of d, else a float."""
        k = _log_exact(self.ratio, self.d)
        return k if k is not None else self.value / math.log(self.d)

    def to_dict(self):
        return {
            "region": sorted(self.region),
            "d": self.d,
            "order_K_region": str(self.order_inside),
            "order_K_complement": str(self.order_outside),
            "order_K": str(self.order_total),
            "generated_order_K_region": str(self.generated_inside),
            "generated_order_K_complement": str(self.generated_outside),
            "ratio": str(self.ratio),
            "entropy": self.value,
            "entropy_over_log_d": str(self.in_log_d) if isinstance(self.in_log_d, int) else self.in_log_d,
            "simple": self.simple_inside,
            "complement_simple": self.simple_outside,
            "boundary_vertices": self.boundary_size,
            "interior_vertices": self.interior_size,
            "area_law_exact": self.area_law,
        }


def _log_exact(ratio, d):
    """k with ratio = d^{-k}, or None."""
    if ratio.numerator != 1:
        return None
    k, den = 0, ratio.denominator
    while den % d == 0:
        den //= d
        k += 1
    return k if den == 1 else None


def entropy(cx, region):
    """S(Λ) = -log(|K_Λ| |K_{Λᶜ}| / |K|) from exact group orders.

    K_Y is the subgroup of K acting only on Y. It contains the group generated
    by the a_v interior to Y, and is strictly larger when Y supports a
    coboundary of a non-contractible cut.
    """
    if not isinstance(region, Region):
        region = Region(cx, frozenset(region))
    outside = region.complement()
    k_in = supported_order(cx, region.edges)
    k_out = supported_order(cx, outside.edges)
    k_all = group_order(cx, cx.vertices)
    ratio = Fraction(k_in * k_out, k_all)
    if ratio > 1:
        raise ArithmeticError(f"entropy ratio {ratio} exceeds 1")
    simple_in = k_in == cx.d ** len(region.interior)
    simple_out = k_out == cx.d ** len(outside.interior)
    report = EntropyReport(
        region=region.edges,
        d=cx.d,
        order_inside=k_in,
        order_outside=k_out,
        order_total=k_all,
        ratio=ratio,
        simple_inside=simple_in,
        simple_outside=simple_out,
        boundary_size=len(region.boundary),
        interior_size=len(region.interior),
        generated_inside=group_order(cx, region.interior),
        generated_outside=group_order(cx, outside.interior),
    )
    if simple_in and simple_out:
        report.area_law = ratio == Fraction(1, cx.d ** (len(region.boundary) - 1))
    return report


# ---------------------------------------------------------------- logical algebra


def logical_generators(cx):
    """Homology-class strings keyed by (kind, handle, slot).

    Slot 0 is the class v_i ⊕ 0 and slot 1 is 0 ⊕ v_i, so ("Z", i, 0) is
    Z_{v_i,0} = Z_{λ_i} and ("X", i, 1) is X_{0,v_i}.
    """
    hom = homology(cx)
    gens = {}
    for i in range(hom.genus):
        gens[("Z", i, 0)] = z_string(cx, hom.lambdas[i])
        gens[("Z", i, 1)] = z_string(cx, hom.taus[i])
        gens[("X", i, 0)] = x_string(cx, hom.x_alpha[i])
        gens[("X", i, 1)] = x_string(cx, hom.x_beta[i])
    return gens


def generator_name(key):
    kind, i, slot = key
    return f"{kind}(v{i + 1},0)" if slot == 0 else f"{kind}(0,v{i + 1})"


def expected_exponent(a, b, d):
    """[[Z_{v_i,0}, X_{0,v_i}]] = [[Z_{0,v_i}, X_{v_i,0}]] = ω; every other pair commutes."""
    (ka, ia, sa), (kb, ib, sb) = a, b
    if ia != ib or ka == kb or sa == sb:
        return 0
    return 1 if ka == "Z" else d - 1


@dataclass
class AlgebraReport:
    d: int
    genus: int
    table: dict
    powers_ok: bool

    @property
    def ok(self):
        return self.powers_ok and all(got == want for got, want in self.table.values())

    def to_dict(self):
        return {
            "d": self.d,
            "genus": self.genus,
            "powers_trivial": self.powers_ok,
            "ok": self.ok,
            "table": [
                {"a": generator_name(a), "b": generator_name(b), "exponent": got, "expected": want}
                for (a, b), (got, want) in self.table.items()
            ],
        }


def logical_algebra_check(cx):
    """Every ordered pair of logical generators against the expected commutator exponents."""
    d = cx.d
    gens = logical_generators(cx)
    table = {}
    for a, ga in gens.items():
        for b, gb in gens.items():
            got = commutation_phase(ga, gb)
            if group_commutator(ga, gb) != PauliString.identity(cx.n_edges, d).scaled(got):
                raise ArithmeticError(f"commutator of {generator_name(a)}, {generator_name(b)} is not a scalar")
            table[(a, b)] = (got, expected_exponent(a, b, d))
    powers_ok = all((g**d).is_identity() for g in gens.values())
    return AlgebraReport(d, homology(cx).genus, table, powers_ok)


# ---------------------------------------------------------------- anyons


@dataclass
class BraidReport:
    d: int
    k: int
    l: int
    walk: list
    cowalk: list
    loop: dict
    loop_witness: dict
    crossings: int
    exponent: int
    equivalence_exponent: int | None
    oracle_exponent: int | None = None

    @property
    def ok(self):
        return (
            self.equivalence_exponent in (None, self.exponent)
            and self.exponent == (-self.k * self.l) % self.d
            and self.oracle_exponent in (None, self.exponent)
        )

    def to_dict(self):
        return {
            "d": self.d,
            "k": self.k,
            "l": self.l,
            "walk": self.walk,
            "cowalk": self.cowalk,
            "loop": {str(e): c for e, c in sorted(self.loop.items())},
            "loop_witness": {str(f): c for f, c in sorted(self.loop_witness.items())},
            "crossings": self.crossings,
            "exponent": self.exponent,
            "equivalence_exponent": self.equivalence_exponent,
            "oracle_exponent": self.oracle_exponent,
            "ok": self.ok,
        }


def canonical_placement(cx):
    """Adjacent particle pair and a face loop that the X string crosses once.

    Returns (walk v→ṽ, cowalk f→f̃, face f). The loop is ∂f, which passes
    through v and crosses the dual edge leaving f exactly once.
    """
    f = cx.n_faces // 2
    e_cross, _ = cx.faces[f][0]
    left, right = cx.edge_faces[e_cross]
    f_tilde = right if left == f else left
    cowalk = [f, e_cross, f_tilde]
    v = cx.edges[e_cross][0]
    e_walk = next(e for e in cx.incident_edges[v] if e != e_cross)
    t, h = cx.edges[e_walk]
    walk = [v, e_walk, h if t == v else t]
    return walk, cowalk, f


def braid(cx, k=1, l=1, placement=None, oracle=False):
    """Phase picked up when the Z^k particle is carried around the loop ∂f.

    The pair state is X^l_{γ*} Z^k_γ Ψ; transport around τ applies Z_τ^k,
    which is a product of b_f and so fixes ground states. The phase is therefore
    the commutation exponent of Z_τ^k past the pair-creation string.
    """
    d = cx.d
    walk, cowalk, f = placement or canonical_placement(cx)
    gamma = walk_chain(cx, walk)
    gamma_star = cowalk_cochain(cx, cowalk)
    tau = face_boundary(cx, f)
    bounded, witness = is_boundary(cx, tau)
    if not bounded:
        raise ValueError("braid loop is not a boundary")
    crossings = len(tau.support & gamma_star.support)
    if crossings != 1:
        raise ValueError(f"braid loop crosses the X string {crossings} times, expected 1")
    pair = x_string(cx, gamma_star, l) * z_string(cx, gamma, k)
    loop_op = z_string(cx, tau, k)
    comm = group_commutator(loop_op, pair)
    if comm.x.any() or comm.z.any():
        raise ArithmeticError("braid commutator is not a scalar")
    exponent = comm.phase
    eq = equivalence_exponent(cx, k, l)
    report = BraidReport(d, k, l, walk, cowalk, dict(tau.coeffs), dict(witness.coeffs), crossings, exponent, eq)
    if oracle:
        report.oracle_exponent = braid_oracle(cx, k, l, (walk, cowalk, f))
    return report


def equivalence_exponent(cx, k=1, l=1):
    """Exponent of [[X_{1,0}^l, Z_{0,1}^k]] on the first handle, or None on a sphere."""
    hom = homology(cx)
    if hom.genus == 0:
        return None
    X10 = x_string(cx, hom.x_alpha[0], l)
    Z01 = z_string(cx, hom.taus[0], k)
    return commutation_phase(X10, Z01)


def braid_oracle(cx, k, l, placement):
    """Transport the Z particle on an explicit pair state and read the phase off."""
    from . import oracle

    walk, cowalk, f = placement
    psi0 = oracle.ground_state_psi0(cx)
    pair = oracle.apply(x_string(cx, cowalk_cochain(cx, cowalk), l), oracle.apply(z_string(cx, walk_chain(cx, walk), k), psi0))
    moved = oracle.apply(z_string(cx, face_boundary(cx, f), k), pair)
    return oracle.phase_exponent(pair, moved, cx.d)


def cowalk_charges(cx, cowalk, l=1):
    """b_f eigen-exponents of X^l_{γ*}Ψ: -l at the start face, +l at the end face."""
    charges = {}
    for face, q in ((cowalk[0], -l), (cowalk[-1], l)):
        charges[face] = (charges.get(face, 0) + q) % cx.d
    return {f: q for f, q in charges.items() if q}


def charge_detect(cx, loop, charges):
    """Exponent of Z_τ on a state with face charges ``charges`` (b_f = ω^{q_f}).

    τ = ∂(Σ n_f f) gives Z_τ = Π b_f^{n_f}, so the exponent is Σ n_f q_f.
    """
    bounded, witness = is_boundary(cx, loop)
    if not bounded:
        raise ValueError("charge detection needs a loop that bounds")
    return sum(witness.coeffs.get(f, 0) * q for f, q in charges.items()) % cx.d


def face_loop(cx, faces):
    """τ = ∂(Σ f) around a set of faces."""
    return boundary(cx, Chain({f: 1 for f in faces}, d=cx.d, dim=2))


# ---------------------------------------------------------------- exchange


def exchange_legs(L=4, d=2, k=1, l=1):
    """Three composite-particle hops into a common centre site on a torus.

    A site (x, y) carries vertex v(x,y) and the face north-east of it, which
    shares its index. Leg i is the string X^l Z^k hopping a particle from its
    end site into the centre (1, 1) across one edge and one dual edge.
    """
    cx = build_torus(L, d)
    site = lambda x, y: (y % L) * L + (x % L)
    h = lambda x, y: 2 * site(x, y)
    u = lambda x, y: 2 * site(x, y) + 1
    c = site(1, 1)
    legs = {
        "east": ([site(2, 1), h(1, 1), c], [site(2, 1), u(2, 1), c]),
        "north": ([site(1, 2), u(1, 1), c], [site(1, 2), h(1, 2), c]),
        "west": ([site(0, 1), h(0, 1), c], [site(0, 1), u(1, 1), c]),
    }
    strings = {
        name: x_string(cx, cowalk_cochain(cx, cowalk), l) * z_string(cx, walk_chain(cx, walk), k)
        for name, (walk, cowalk) in legs.items()
    }
    return cx, strings


def exchange_sequence(strings):
    """Hops in application order for one exchange of two particles.

    m1, m2, m3 hop a particle into the centre from the east, north and west.
    Starting with particles at east and north, m1, m3†, m2, m1†, m3, m2† swaps
    them while their relative position turns clockwise in the east/north plane.
    Every hop appears once with its adjoint, so the product is gauge invariant.
    """
    m1, m2, m3 = strings["east"], strings["north"], strings["west"]
    return [m1, m3.adjoint(), m2, m1.adjoint(), m3, m2.adjoint()]


@dataclass
class ExchangeReport:
    """Exchange phase exponents for the clockwise move and its reverse.

    ``exponent`` is the clockwise exchange, the orientation in which the
    k = l = 1 phase is ω^{-1}; ``reverse_exponent`` is its inverse.
    """

    d: int
    k: int
    l: int
    exponent: int
    oracle_exponent: int | None

    @property
    def reverse_exponent(self):
        return (-self.exponent) % self.d

    @property
    def candidates(self):
        return {"-(k+l)": (-(self.k + self.l)) % self.d, "-kl": (-self.k * self.l) % self.d}

    @property
    def matches(self):
        return [name for name, value in self.candidates.items() if value == self.exponent]

    def to_dict(self):
        return {
            "d": self.d,
            "k": self.k,
            "l": self.l,
            "exponent": self.exponent,
            "reverse_exponent": self.reverse_exponent,
            "oracle_exponent": self.oracle_exponent,
            "candidates": self.candidates,
            "matches": self.matches,
        }


def exchange_phase(k, l, d, oracle=True, seed=0):
    """Exchange phase of two Z^k X^l composites as a Z_d exponent."""
    if d < 2 or not (0 <= k < d and 0 <= l < d) or (k, l) == (0, 0):
        raise ValueError(f"need 0 <= k, l < d with (k, l) != (0, 0); got k={k}, l={l}, d={d}")
    cx, strings = exchange_legs(4, d, k, l)
    seq = exchange_sequence(strings)
    total = PauliString.identity(cx.n_edges, d)
    for s in seq:
        total = s * total
    if total.x.any() or total.z.any():
        raise ArithmeticError("exchange sequence does not close to a scalar")
    oracle_exp = None
    if oracle:
        from .oracle import sequence_phase

        oracle_exp = sequence_phase(seq, seed)
    return ExchangeReport(d, k, l, total.phase, oracle_exp)
