"""Concrete geometry constructions: the Petersen edge-vertex geometry, GF(2)
projective geometries, symplectic polar spaces, the generic subgroup-pattern
geometry over an elementary abelian 2-group, the rank-2 tilde geometry inside
GammaL3(4), and the optional Golay/M24/M22 pipeline.

Subspaces of GF(2)^m are identified by the sorted tuple of their nonzero
vectors, written as integer bit masks (or as 0-based point indices when a
permutation group supplies the vector action).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .geom import (
    CapacityError,
    Geometry,
    element_action,
    is_flag_transitive,
    is_geometry,
    isomorphic,
    quotient_by_action,
    is_s_covering,
)
from .perm import (
    GroupAction,
    Permutation,
    PermutationGroup,
    SubgroupPredicate,
    induced_action,
    subgroup_search,
)

__all__ = [
    "ConstructionMetadata",
    "ConstructionError",
    "SubgroupPatternInput",
    "petersen_geometry",
    "projective_geometry_2",
    "symplectic_polar_space",
    "subgroup_pattern_geometry",
    "tilde_geometry",
    "gaussian_binomial_n2",
    "m22_pipeline",
]

SYMPLECTIC_RANK_BOUND = 4


class ConstructionError(RuntimeError):
    """A construction failed one of its build-time verification checks."""


@dataclass
class ConstructionMetadata:
    """A verified geometry together with its group, the action on elements,
    an optional generator of O3(G), and the provenance of any search."""

    geometry: Geometry
    group: PermutationGroup
    action: GroupAction
    o3_generator: Optional[Permutation] = None
    provenance: dict = field(default_factory=dict)
    natural_vectors: Optional[dict] = None


# ---------------------------------------------------------------------------
# Petersen geometry P0


def petersen_geometry() -> ConstructionMetadata:
    """Edges (type 1) and vertices (type 2) of the Petersen graph in the
    Kneser model: vertices are 2-subsets of {0..4}, disjoint pairs adjacent;
    the group is S5 permuting the five underlying points."""
    vertices = [tuple(sorted(c)) for c in combinations(range(5), 2)]
    edges = [
        tuple(sorted((a, b)))
        for i, a in enumerate(vertices)
        for b in vertices[i + 1 :]
        if not set(a) & set(b)
    ]
    elements = [(e, 1) for e in edges] + [(v, 2) for v in vertices]
    incidences = [(e, v) for e in edges for v in e]
    geometry = Geometry(2, elements, incidences)
    group = PermutationGroup.symmetric(5)

    def apply(g: Permutation, eid):
        if isinstance(eid[0], int):  # vertex: a 2-subset
            return tuple(sorted(g.images[x] for x in eid))
        return tuple(
            sorted(tuple(sorted(g.images[x] for x in pair)) for pair in eid)
        )

    action = element_action(geometry, group, apply)
    return ConstructionMetadata(
        geometry, group, action, provenance={"name": "petersen"}
    )


# ---------------------------------------------------------------------------
# GF(2) subspace machinery


def _span(vectors: Sequence[int]) -> tuple[int, ...]:
    """All nonzero vectors of the GF(2)-span, as a sorted tuple of masks."""
    basis: list[int] = []
    for v in vectors:
        w = v
        for b in basis:
            w = min(w, w ^ b)
        if w:
            basis.append(w)
            basis.sort(reverse=True)
    out = {0}
    for b in basis:
        out |= {x ^ b for x in out}
    out.discard(0)
    return tuple(sorted(out))


def _subspace_dim(subspace: Sequence[int]) -> int:
    return (len(subspace) + 1).bit_length() - 1


def _all_subspaces(ambient: Sequence[int], max_dim: int) -> list[tuple[int, ...]]:
    """All nonzero subspaces of the span of ``ambient`` up to max_dim."""
    ambient_set = set(ambient)
    current = {(v,) for v in ambient}
    out = sorted(current)
    for _ in range(max_dim - 1):
        nxt = set()
        for sub in current:
            sub_set = set(sub)
            for v in ambient_set - sub_set:
                nxt.add(_span(list(sub) + [v]))
        current = nxt
        out.extend(sorted(current))
    return out


def _basis_of(subspace: Sequence[int]) -> list[int]:
    basis: list[int] = []
    for v in subspace:
        w = v
        for b in basis:
            w = min(w, w ^ b)
        if w:
            basis.append(w)
            basis.sort(reverse=True)
    return basis


def _containment_incidences(
    subspaces: Sequence[tuple[int, ...]], shift: int = 0
) -> list[tuple]:
    """Containment pairs among the given subspaces, found by enumerating the
    proper nonzero subspaces of each member instead of scanning all pairs.
    Entry e of a tuple encodes the vector e + shift (shift 1 for 0-based
    permutation points, 0 for plain masks)."""
    present = set(subspaces)
    out = []
    for big in subspaces:
        dim = _subspace_dim(big)
        if dim < 2:
            continue
        vectors = [e + shift for e in big]
        for small_vec in _all_subspaces(vectors, dim - 1):
            small = tuple(v - shift for v in small_vec)
            if small in present:
                out.append((small, big))
    return out


def projective_geometry_2(n: int) -> ConstructionMetadata:
    """Proper nonzero subspaces of GF(2)^n typed by dimension, incidence by
    containment, with GL_n(2) acting.  For n = 1 the single point stands
    alone (there are no proper subspaces to take)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        geometry = Geometry(1, [((1,), 1)], [])
        group = PermutationGroup.trivial(1)
        action = element_action(geometry, group, lambda g, e: e)
        return ConstructionMetadata(geometry, group, action, provenance={"name": "pg", "n": 1})
    ambient = list(range(1, 1 << n))
    subspaces = _all_subspaces(ambient, n - 1)
    elements = [(s, _subspace_dim(s)) for s in subspaces]
    geometry = Geometry(n - 1, elements, _containment_incidences(subspaces))
    group = _general_linear_group(n)

    def apply(g: Permutation, sub):
        return tuple(sorted(g.images[v - 1] + 1 for v in sub))

    action = element_action(geometry, group, apply)
    return ConstructionMetadata(
        geometry, group, action, provenance={"name": "pg", "n": n}
    )


def _general_linear_group(n: int) -> PermutationGroup:
    """GL_n(2) as permutations of the nonzero vectors (degree 2^n - 1),
    generated by a transvection and a basis cycle."""
    if n == 1:
        return PermutationGroup.trivial(1)

    def linear_perm(matrix_rows: list[int]) -> Permutation:
        def image(v: int) -> int:
            out = 0
            for i in range(n):
                if (v >> i) & 1:
                    out ^= matrix_rows[i]
            return out

        return Permutation([image(v) - 1 for v in range(1, 1 << n)])

    transvection = [1 << i for i in range(n)]
    transvection[0] = (1 << 0) | (1 << 1)  # e1 -> e1 + e2
    cycle = [1 << ((i + 1) % n) for i in range(n)]
    return PermutationGroup(
        [linear_perm(transvection), linear_perm(cycle)], name=f"GL{n}(2)"
    )


# ---------------------------------------------------------------------------
# symplectic polar spaces C_n(2)


_PAIR_MASK = 0x5555555555555555  # even bit positions


def _swap_bit_pairs(y: int) -> int:
    return ((y & _PAIR_MASK) << 1) | ((y >> 1) & _PAIR_MASK)


def _symplectic_form(x: int, y: int, n: int) -> int:
    # hyperbolic pairs on adjacent bit positions; n only bounds the width
    return bin(x & _swap_bit_pairs(y)).count("1") & 1


def symplectic_transvections(n: int) -> list[Permutation]:
    """All transvections x -> x + <x,v>v of the standard symplectic GF(2)^2n,
    as permutations of the nonzero vectors."""
    dim = 2 * n
    size = 1 << dim
    out = []
    for v in range(1, size):
        images = [0] * (size - 1)
        for x in range(1, size):
            images[x - 1] = (x ^ (v if _symplectic_form(x, v, n) else 0)) - 1
        out.append(Permutation(images))
    return out


def symplectic_polar_space(n: int, rank_bound: int = SYMPLECTIC_RANK_BOUND) -> ConstructionMetadata:
    """Nonzero totally isotropic subspaces of GF(2)^2n typed by dimension,
    with Sp_2n(2) generated by all transvections.  Flag-transitivity is
    verified at build time for n <= 3."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > rank_bound:
        raise CapacityError(f"symplectic rank {n} above bound {rank_bound}")
    dim = 2 * n
    size = 1 << dim
    # grow isotropic subspaces dimension by dimension; orthogonality only
    # needs checking against a basis, via one masked popcount per vector
    by_dim: list[list[tuple[int, ...]]] = [[(v,) for v in range(1, size)]]
    for _ in range(n - 1):
        nxt = set()
        for sub in by_dim[-1]:
            sub_set = set(sub)
            swapped = [_swap_bit_pairs(b) for b in _basis_of(sub)]
            for v in range(1, size):
                if v in sub_set:
                    continue
                if all(bin(v & s).count("1") & 1 == 0 for s in swapped):
                    nxt.add(_span(list(sub) + [v]))
        by_dim.append(sorted(nxt))
    elements = []
    for d, subs in enumerate(by_dim, start=1):
        elements.extend((s, d) for s in subs)
    all_subs = [s for subs in by_dim for s in subs]
    geometry = Geometry(n, elements, _containment_incidences(all_subs))
    group = PermutationGroup(symplectic_transvections(n), name=f"Sp{dim}(2)")

    def apply(g: Permutation, sub):
        return tuple(sorted(g.images[v - 1] + 1 for v in sub))

    action = element_action(geometry, group, apply)
    meta = ConstructionMetadata(
        geometry, group, action, provenance={"name": "sp", "n": n}
    )
    if 2 <= n <= 3:
        verdict = is_geometry(geometry)
        if not verdict.ok:
            raise ConstructionError(f"symplectic space fails axioms: {verdict.failures}")
        if not is_flag_transitive(geometry, action):
            raise ConstructionError("symplectic group is not flag-transitive")
    return meta


# ---------------------------------------------------------------------------
# the generic subgroup-pattern geometry


@dataclass
class SubgroupPatternInput:
    """G acting linearly on the nonzero vectors of H = GF(2)^m (point i of
    the permutation domain is the vector i+1), and a subspace E given by its
    nonzero vectors as 0-based points."""

    group: PermutationGroup
    dim_h: int
    subspace_points: tuple[int, ...]

    def __post_init__(self):
        expected = (1 << self.dim_h) - 1
        if self.group.degree != expected:
            raise ValueError(
                f"group degree {self.group.degree} does not match 2^{self.dim_h}-1"
            )
        span = _span([p + 1 for p in self.subspace_points])
        if set(span) != {p + 1 for p in self.subspace_points}:
            raise ValueError("subspace_points is not closed under addition")


def _points_to_subspace(points: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(points))


def _apply_points(g: Permutation, sub: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(g.images[p] for p in sub))


def normalizer_induces_full_linear_group(
    group: PermutationGroup, subspace_points: Sequence[int]
) -> bool:
    """Check the construction precondition: the setwise stabilizer of E must
    induce the whole of GL(E) on E."""
    points = sorted(subspace_points)
    normalizer = group.stabilizer(points, mode="setwise")
    induced = induced_action(normalizer, points, lambda g, p: g.images[p])
    order = induced.image_group().order()
    dim = _subspace_dim(points)
    return order == _gl_order(dim)


def _gl_order(n: int) -> int:
    out = 1
    for i in range(n):
        out *= (1 << n) - (1 << i)
    return out


def subgroup_pattern_geometry(pattern: SubgroupPatternInput) -> Geometry:
    """Elements are the G-orbit closure of the nonzero subspaces of E, typed
    by dimension, incidence by containment.  Strong connectedness is NOT
    assumed; callers must run is_geometry on the result."""
    group = pattern.group
    e_points = sorted(pattern.subspace_points)
    if not normalizer_induces_full_linear_group(group, e_points):
        raise ConstructionError(
            "normalizer of E does not induce the full linear group on E"
        )
    dim_e = _subspace_dim(e_points)
    seeds = []
    sub_vectors = _all_subspaces([p + 1 for p in e_points], dim_e)
    for sub in sub_vectors:
        seeds.append(_points_to_subspace(v - 1 for v in sub))
    elements_by_type: dict[int, set] = {d: set() for d in range(1, dim_e + 1)}
    for seed in seeds:
        d = _subspace_dim(seed)
        if seed in elements_by_type[d]:
            continue
        queue = [seed]
        elements_by_type[d].add(seed)
        while queue:
            nxt = []
            for sub in queue:
                for g in group.generators:
                    img = _apply_points(g, sub)
                    if img not in elements_by_type[d]:
                        elements_by_type[d].add(img)
                        nxt.append(img)
            queue = nxt
    elements = []
    for d in sorted(elements_by_type):
        elements.extend((s, d) for s in sorted(elements_by_type[d]))
    all_subs = [s for s, _ in elements]
    return Geometry(dim_e, elements, _containment_incidences(all_subs, shift=1))


# ---------------------------------------------------------------------------
# the tilde geometry T0 inside GammaL3(4)


# GF(4) = {0, 1, w, w+1} encoded as 0..3 with bits (a, b) for a + b*w
_GF4_MUL = ((0, 0, 0, 0), (0, 1, 2, 3), (0, 2, 3, 1), (0, 3, 1, 2))


def _gf4_coord(v: int, i: int) -> int:
    return (v >> (2 * i)) & 3


def _gf4_set_coord(v: int, i: int, c: int) -> int:
    return (v & ~(3 << (2 * i))) | (c << (2 * i))


def _gf4_scale(c: int, v: int) -> int:
    out = 0
    for i in range(3):
        out |= _GF4_MUL[c][_gf4_coord(v, i)] << (2 * i)
    return out


def _vector_perm(func) -> Permutation:
    """Permutation of the 63 nonzero vectors of GF(4)^3 read as GF(2)^6."""
    return Permutation([func(v) - 1 for v in range(1, 64)])


def gamma_l3_4() -> tuple[PermutationGroup, Permutation]:
    """GammaL3(4) on the 63 nonzero hexacode vectors, plus the order-3
    scalar (multiplication by w).  The GF(2)^6 reading uses basis (1, w)
    per GF(4) coordinate."""

    def diag_w(v: int) -> int:
        return _gf4_set_coord(v, 0, _GF4_MUL[2][_gf4_coord(v, 0)])

    def cycle(v: int) -> int:
        return _gf4_coord(v, 2) | (_gf4_coord(v, 0) << 2) | (_gf4_coord(v, 1) << 4)

    def transvection(v: int) -> int:
        return _gf4_set_coord(v, 0, _gf4_coord(v, 0) ^ _gf4_coord(v, 1))

    def frobenius(v: int) -> int:
        out = 0
        for i in range(3):
            c = _gf4_coord(v, i)
            a, b = c & 1, c >> 1
            out |= ((a ^ b) | (b << 1)) << (2 * i)
        return out

    group = PermutationGroup(
        [_vector_perm(f) for f in (diag_w, cycle, transvection, frobenius)],
        name="GammaL3(4)",
    )
    scalar = _vector_perm(lambda v: _gf4_scale(2, v))
    if group.order() != 362880:
        raise ConstructionError(f"GammaL3(4) order check failed: {group.order()}")
    if scalar.order() != 3 or not group.contains(scalar):
        raise ConstructionError("scalar subgroup check failed")
    return group, scalar


def tilde_geometry(seed: int) -> ConstructionMetadata:
    """The rank-2 tilde geometry: find G of order 2160 containing the scalar
    subgroup inside GammaL3(4), select the dim-2 subspace orbit satisfying
    the normalizer condition, build the subgroup-pattern geometry and verify
    counts, flag-transitivity and the triple-cover structure over GQ(2,2)."""
    ambient, scalar = gamma_l3_4()
    scalar_group = PermutationGroup([scalar], name="O3")
    predicate = SubgroupPredicate(order=2160, contains=scalar_group)
    group = subgroup_search(ambient, predicate, seed=seed)
    if group is None:
        raise ConstructionError(
            f"subgroup search (order 2160, seed {seed}) exhausted its budget"
        )

    # candidate E: orbit representatives of 2-subspaces, orbit length 45,
    # normalizer inducing GL2(2) on E
    two_subspaces = sorted(
        {
            _points_to_subspace(v - 1 for v in _span([v1, v2]))
            for v1 in range(1, 64)
            for v2 in range(v1 + 1, 64)
        }
    )
    sub_action = induced_action(group, two_subspaces, _apply_points)
    passing: list[tuple[tuple[int, ...], list]] = []
    seen: set = set()
    for sub in two_subspaces:
        if sub in seen:
            continue
        orb = sub_action.orbit(sub)
        seen.update(orb)
        if len(orb) != 45:
            continue
        rep = orb[0]
        if normalizer_induces_full_linear_group(group, rep):
            passing.append((rep, orb))
    if not passing:
        raise ConstructionError("no 2-subspace orbit satisfies the preconditions")
    e_points, _ = passing[0]

    pattern = SubgroupPatternInput(group=group, dim_h=6, subspace_points=e_points)
    geometry = subgroup_pattern_geometry(pattern)
    verdict = is_geometry(geometry)
    if not verdict.ok:
        raise ConstructionError(f"tilde candidate fails axioms: {verdict.failures}")
    points = geometry.elements_of_type(1)
    lines = geometry.elements_of_type(2)
    if len(points) != 45 or len(lines) != 45:
        raise ConstructionError(
            f"tilde counts are {len(points)}/{len(lines)}, expected 45/45"
        )
    action = element_action(geometry, group, _apply_points)
    if not is_flag_transitive(geometry, action):
        raise ConstructionError("tilde action is not flag-transitive")

    # quotient by the scalar subgroup must 1-cover GQ(2,2)
    o3_action = induced_action(
        PermutationGroup([scalar], name="O3"), geometry.elements, _apply_points
    )
    quotient, morphism = quotient_by_action(geometry, o3_action)
    q_verdict = is_geometry(quotient)
    if not q_verdict.ok:
        raise ConstructionError(f"tilde quotient fails axioms: {q_verdict.failures}")
    gq = symplectic_polar_space(2)
    if isomorphic(quotient, gq.geometry) is None:
        raise ConstructionError("tilde quotient is not isomorphic to GQ(2,2)")
    if not is_s_covering(morphism, 1):
        raise ConstructionError("tilde quotient map is not a 1-covering")
    # normality makes the normal closure of the scalar the scalar subgroup
    # itself, so it acts trivially on the quotient by construction
    if not scalar_group.is_normal_in(group):
        raise ConstructionError("scalar subgroup is not normal in the found group")

    hexacode_vectors = {p: _mask_to_bits(p[0] + 1, 6) for p in points}
    return ConstructionMetadata(
        geometry,
        group,
        action,
        o3_generator=scalar,
        provenance={
            "name": "tilde",
            "seed": seed,
            "subspace": list(e_points),
            "passing_orbits": len(passing),
        },
        natural_vectors=hexacode_vectors,
    )


def _mask_to_bits(mask: int, width: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(width))


# ---------------------------------------------------------------------------
# counting utility


def gaussian_binomial_n2(n: int) -> int:
    """Number of 2-subspaces of GF(2)^n: (2^n - 1)(2^n - 2)/6, exact."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return (2**n - 1) * (2**n - 2) // 6


# ---------------------------------------------------------------------------
# optional stretch tier: Golay code, M24, Aut(M22) and its rank-3 geometry


def m22_pipeline(seed: int) -> ConstructionMetadata:
    from .m22 import build_m22_geometry

    return build_m22_geometry(seed)
