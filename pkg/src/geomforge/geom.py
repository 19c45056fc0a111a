"""Incidence geometries: axiom verification, residues, diagrams with rank-2
residue classification, flag transitivity, collinearity and derived graphs,
truncations, quotients, s-covering checks, small-scale isomorphism and
amalgam reports.

Elements carry a type in 1..rank; two incident elements never share a type.
Ids may be ints, strings or nested tuples; every element list is kept in a
canonical sorted order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .graphs import Graph, graph_isomorphism
from .perm import GroupAction, PermutationGroup, label_key

__all__ = [
    "Geometry",
    "GeometryError",
    "StructureError",
    "FlagError",
    "ActionError",
    "MorphismError",
    "CapacityError",
    "GeometryVerdict",
    "DiagramReport",
    "GeometryMorphism",
    "AmalgamReport",
    "is_geometry",
    "residue",
    "diagram",
    "is_flag_transitive",
    "collinearity_graph",
    "derived_graph",
    "truncation",
    "quotient_by_action",
    "is_s_covering",
    "isomorphic",
    "amalgam_report",
    "element_action",
]

ISOMORPHISM_ELEMENT_BOUND = 500


class GeometryError(ValueError):
    """Base class for geometry-level errors."""


class StructureError(GeometryError):
    """The element/incidence data violates incidence-system structure
    (bad types, asymmetry, or a same-type incidence)."""


class FlagError(GeometryError):
    """The provided element set is not a flag."""


class ActionError(GeometryError):
    """A group action does not preserve types or incidence."""


class MorphismError(GeometryError):
    """A map between geometries is not a valid morphism."""


class CapacityError(RuntimeError):
    """Operation exceeds its configured size bound."""


class Geometry:
    """An incidence system with typed elements and symmetric incidence.

    Structural validity (types in range, no same-type incidence) is enforced
    at construction; the geometry axioms themselves are checked separately by
    :func:`is_geometry`.
    """

    def __init__(
        self,
        rank: int,
        elements: Iterable[tuple],
        incidences: Iterable[tuple],
        type_map: Optional[dict] = None,
    ):
        if rank < 0:
            raise StructureError("rank must be nonnegative")
        self.rank = rank
        type_of: dict = {}
        for eid, etype in elements:
            if not 1 <= etype <= rank:
                raise StructureError(f"element {eid!r} has type {etype} outside 1..{rank}")
            if eid in type_of:
                raise StructureError(f"duplicate element id {eid!r}")
            type_of[eid] = etype
        self.type_of = type_of
        self.elements = tuple(sorted(type_of, key=lambda e: (type_of[e], label_key(e))))
        adj: dict = {e: set() for e in self.elements}
        for a, b in incidences:
            if a not in type_of or b not in type_of:
                raise StructureError(f"incidence ({a!r},{b!r}) uses unknown element")
            if a == b:
                raise StructureError(f"reflexive incidence at {a!r}")
            if type_of[a] == type_of[b]:
                raise StructureError(
                    f"same-type incidence between {a!r} and {b!r} (type {type_of[a]})"
                )
            adj[a].add(b)
            adj[b].add(a)
        self._adj = {e: frozenset(s) for e, s in adj.items()}
        self._order = {e: i for i, e in enumerate(self.elements)}
        self._pairs: Optional[list[tuple]] = None
        # renumbering provenance for residues/truncations (original -> new)
        self.type_map = dict(type_map) if type_map else None

    # -- basic queries -------------------------------------------------------

    def elements_of_type(self, etype: int) -> tuple:
        return tuple(e for e in self.elements if self.type_of[e] == etype)

    def incident(self, a, b) -> bool:
        return b in self._adj[a]

    def pencil(self, element) -> frozenset:
        """All elements incident to the given one."""
        return self._adj[element]

    def incidence_pairs(self) -> list[tuple]:
        if self._pairs is None:
            order = self._order
            out = []
            for a in self.elements:
                for b in self._adj[a]:
                    if order[a] < order[b]:
                        out.append((a, b))
            out.sort(key=lambda p: (order[p[0]], order[p[1]]))
            self._pairs = out
        return self._pairs

    @property
    def size(self) -> int:
        return len(self.elements)

    def is_flag(self, flag: Iterable) -> bool:
        flag = list(flag)
        types = [self.type_of.get(e) for e in flag]
        if None in types or len(set(types)) != len(types):
            return False
        return all(
            self.incident(a, b) for i, a in enumerate(flag) for b in flag[i + 1 :]
        )

    def walk_flags(self, visit, max_size: Optional[int] = None) -> None:
        """Depth-first walk over all flags, each visited exactly once.

        ``visit(flag_tuple, candidates)`` receives the flag (in canonical
        order) and the full set of elements incident to all of it; a flag is
        non-extensible exactly when candidates is empty.  Returning the
        string "prune" skips extensions of this flag; any other truthy value
        aborts the walk.  Same-type elements are never incident, so pencil
        intersection handles type disjointness automatically.
        """
        limit = self.rank if max_size is None else max_size
        order = self._order
        all_set = frozenset(self.elements)

        def rec(flag: tuple, cands) -> bool:
            verdict = visit(flag, cands)
            if verdict == "prune":
                return False
            if verdict:
                return True
            if len(flag) >= limit:
                return False
            floor = order[flag[-1]] if flag else -1
            for e in sorted(cands, key=order.get):
                if order[e] <= floor:
                    continue
                if rec(flag + (e,), cands & self._adj[e]):
                    return True
            return False

        rec((), all_set)

    def maximal_flags(self) -> list[tuple]:
        """All flags meeting every type, as canonically ordered tuples."""
        out: list[tuple] = []

        def visit(flag, cands):
            if len(flag) == self.rank:
                out.append(flag)
            return None

        self.walk_flags(visit)
        return out

    def all_flags(self, max_size: Optional[int] = None) -> list[tuple]:
        """Every nonempty flag, canonically ordered (desk scale)."""
        out: list[tuple] = []
        self.walk_flags(lambda flag, cands: out.append(flag) if flag else None,
                        max_size=max_size)
        return out

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "elements": [
                {"id": _id_to_str(e), "type": self.type_of[e]} for e in self.elements
            ],
            "incidences": [
                [_id_to_str(a), _id_to_str(b)] for a, b in self.incidence_pairs()
            ],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "Geometry":
        try:
            rank = payload["rank"]
            elements = [(e["id"], e["type"]) for e in payload["elements"]]
            incidences = [tuple(p) for p in payload["incidences"]]
        except (KeyError, TypeError) as exc:
            raise StructureError(f"malformed geometry payload: {exc}") from exc
        return cls(rank, elements, incidences)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Geometry":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self) -> str:
        counts = "/".join(str(len(self.elements_of_type(t))) for t in range(1, self.rank + 1))
        return f"Geometry(rank={self.rank}, {counts})"


def _id_to_str(eid) -> str:
    return eid if isinstance(eid, str) else repr(eid)


# ---------------------------------------------------------------------------
# geometry axioms


@dataclass
class GeometryVerdict:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_geometry(candidate: Geometry) -> GeometryVerdict:
    """Check the two geometry axioms: every maximal flag meets all types, and
    every residue of rank at least 2 (including the whole system) is
    connected.  Diagnostics name the first failing flag or residue."""
    failures: list[str] = []

    def check_flags(flag, cands):
        if len(flag) < candidate.rank and not cands:
            failures.append(
                f"maximal flag {[_id_to_str(e) for e in flag]} misses some type"
            )
            return True
        return None

    def check_connectivity(flag, cands):
        if len(flag) <= candidate.rank - 2:
            if not _subset_connected(candidate, cands):
                failures.append(
                    f"residue of flag {[_id_to_str(e) for e in flag]} is disconnected"
                )
                return True
            return None
        return "prune"

    candidate.walk_flags(check_flags)
    if not failures:
        candidate.walk_flags(check_connectivity, max_size=max(candidate.rank - 2, 0))
    return GeometryVerdict(not failures, failures)


def _subset_connected(g: Geometry, subset) -> bool:
    """Connectivity of the incidence graph induced on a subset."""
    if not subset:
        return True
    subset = set(subset)
    start = next(iter(subset))
    seen = {start}
    queue = [start]
    while queue:
        nxt = []
        for e in queue:
            for f in g._adj[e] & subset:
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        queue = nxt
    return len(seen) == len(subset)


# ---------------------------------------------------------------------------
# residues and truncations


def residue(g: Geometry, flag: Iterable) -> Geometry:
    """Elements incident to the whole flag, types renumbered preserving
    order; the renumbering map is recorded on the result."""
    flag = list(flag)
    if not g.is_flag(flag):
        raise FlagError(f"{[_id_to_str(e) for e in flag]} is not a flag")
    flag_set = set(flag)
    members = [
        e
        for e in g.elements
        if e not in flag_set and all(g.incident(e, f) for f in flag)
    ]
    remaining_types = sorted(set(range(1, g.rank + 1)) - {g.type_of[f] for f in flag})
    type_map = {t: i + 1 for i, t in enumerate(remaining_types)}
    new_rank = g.rank - len(flag)
    member_set = set(members)
    order = g._order
    incidences = [
        (a, b)
        for a in members
        for b in g._adj[a] & member_set
        if order[a] < order[b]
    ]
    return Geometry(
        new_rank,
        [(e, type_map[g.type_of[e]]) for e in members],
        incidences,
        type_map=type_map,
    )


def truncation(g: Geometry, keep: Iterable[int]) -> Geometry:
    """Induced system on the elements whose type is kept, types renumbered."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("truncation requires a nonempty type set")
    for t in keep:
        if not 1 <= t <= g.rank:
            raise ValueError(f"type {t} outside 1..{g.rank}")
    type_map = {t: i + 1 for i, t in enumerate(keep)}
    members = [e for e in g.elements if g.type_of[e] in type_map]
    member_set = set(members)
    incidences = [
        (a, b) for a, b in g.incidence_pairs() if a in member_set and b in member_set
    ]
    return Geometry(
        len(keep),
        [(e, type_map[g.type_of[e]]) for e in members],
        incidences,
        type_map=type_map,
    )


# ---------------------------------------------------------------------------
# graphs attached to a geometry


def collinearity_graph(g: Geometry) -> Graph:
    """Type-1 elements adjacent when incident to a common type-2 element."""
    return _common_neighbor_graph(g, point_type=1, line_type=2)


def derived_graph(g: Geometry) -> Graph:
    """Type-n elements adjacent when incident to a common type-(n-1) element."""
    return _common_neighbor_graph(g, point_type=g.rank, line_type=g.rank - 1)


def _common_neighbor_graph(g: Geometry, point_type: int, line_type: int) -> Graph:
    if g.rank < 2:
        raise GeometryError("graph construction requires rank at least 2")
    points = g.elements_of_type(point_type)
    edges = set()
    for line in g.elements_of_type(line_type):
        on_line = sorted(
            (e for e in g.pencil(line) if g.type_of[e] == point_type), key=label_key
        )
        for i, a in enumerate(on_line):
            for b in on_line[i + 1 :]:
                edges.add((a, b))
    return Graph(points, sorted(edges, key=lambda e: (label_key(e[0]), label_key(e[1]))))


# ---------------------------------------------------------------------------
# group actions on elements


def element_action(g: Geometry, group: PermutationGroup, apply) -> GroupAction:
    """Action of a group on geometry elements given ``apply(perm, id) -> id``;
    verified to preserve types and incidence."""
    from .perm import induced_action

    action = induced_action(group, g.elements, apply)
    _check_action(g, action)
    return action


def _check_action(g: Geometry, action: GroupAction) -> None:
    if set(action.domain) != set(g.elements):
        raise ActionError("action domain differs from the element set")
    for gi in range(len(action.group.generators)):
        for e in g.elements:
            img = action.apply(gi, e)
            if g.type_of[img] != g.type_of[e]:
                raise ActionError(f"generator {gi} does not preserve the type of {e!r}")
    pair_set = {frozenset(p) for p in g.incidence_pairs()}
    for gi in range(len(action.group.generators)):
        for a, b in pair_set:
            if frozenset((action.apply(gi, a), action.apply(gi, b))) not in pair_set:
                raise ActionError(f"generator {gi} does not preserve incidence")


def is_flag_transitive(g: Geometry, action: GroupAction) -> bool:
    """True when one maximal-flag orbit covers all maximal flags."""
    _check_action(g, action)
    flags = g.maximal_flags()
    if not flags:
        return False
    order = g._order
    index = action.index
    images = action.images
    domain = action.domain

    def canon(flag) -> tuple:
        return tuple(sorted(flag, key=order.get))

    start = canon(flags[0])
    seen = {start}
    queue = [start]
    while queue:
        nxt = []
        for flag in queue:
            idxs = [index[e] for e in flag]
            for img in images:
                moved = canon(domain[img[i]] for i in idxs)
                if moved not in seen:
                    seen.add(moved)
                    nxt.append(moved)
        queue = nxt
    return len(seen) == len(flags)


# ---------------------------------------------------------------------------
# diagrams


@dataclass
class DiagramReport:
    """Classification of every rank-2 residue by type pair, plus node
    orders q_i (rank-1 residue size minus one; None when not constant)."""

    rank: int
    edges: dict  # (i, j) -> classification string
    orders: dict  # i -> Optional[int]

    def edge(self, i: int, j: int) -> str:
        return self.edges[(min(i, j), max(i, j))]

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "edges": {f"{i},{j}": c for (i, j), c in sorted(self.edges.items())},
            "orders": {str(i): self.orders[i] for i in sorted(self.orders)},
        }


DIGON = "digon"
PROJECTIVE_PLANE_2 = "projective-plane-2"
GQ_2_2 = "gq-2-2"
PETERSEN_EDGE = "petersen-edge"
TILDE_EDGE = "tilde-edge"
UNKNOWN = "unknown"


def diagram(g: Geometry) -> DiagramReport:
    """Classify all rank-2 residues per type pair and report node orders."""
    verdict = is_geometry(g)
    if not verdict.ok:
        raise GeometryError(f"diagram requires a geometry: {verdict.failures}")
    edges: dict = {}
    if g.rank == 1:
        return DiagramReport(1, {}, {1: len(g.elements_of_type(1)) - 1})
    all_types = set(range(1, g.rank + 1))
    for i in range(1, g.rank + 1):
        for j in range(i + 1, g.rank + 1):
            cotype = sorted(all_types - {i, j})
            classifications = set()
            for flag in _flags_of_type_set(g, cotype):
                res = residue(g, flag)
                classifications.add(_classify_rank2(res))
                if len(classifications) > 1:
                    break
            if len(classifications) == 1:
                edges[(i, j)] = classifications.pop()
            else:
                edges[(i, j)] = UNKNOWN
    orders: dict = {}
    for i in range(1, g.rank + 1):
        cotype = sorted(all_types - {i})
        sizes = {residue(g, flag).size for flag in _flags_of_type_set(g, cotype)}
        orders[i] = sizes.pop() - 1 if len(sizes) == 1 else None
    return DiagramReport(g.rank, edges, orders)


def _flags_of_type_set(g: Geometry, types: Sequence[int]) -> list[tuple]:
    """All flags whose type set is exactly the given one."""
    types = list(types)
    out: list[tuple] = []

    def extend(partial: list, idx: int) -> None:
        if idx == len(types):
            out.append(tuple(partial))
            return
        for e in g.elements_of_type(types[idx]):
            if all(g.incident(e, f) for f in partial):
                partial.append(e)
                extend(partial, idx + 1)
                partial.pop()

    extend([], 0)
    return out


def _classify_rank2(res: Geometry) -> str:
    if res.rank != 2:
        return UNKNOWN
    points = res.elements_of_type(1)
    lines = res.elements_of_type(2)
    if not points or not lines:
        return UNKNOWN
    if all(res.incident(p, l) for p in points for l in lines):
        return DIGON
    if _is_fano(res, points, lines):
        return PROJECTIVE_PLANE_2
    if _is_gq22(res, points, lines):
        return GQ_2_2
    if len(points) == 15 and len(lines) == 10 and _matches_reference(res, "petersen"):
        return PETERSEN_EDGE
    if len(points) == 45 and len(lines) == 45 and _matches_reference(res, "tilde"):
        return TILDE_EDGE
    return UNKNOWN


def _is_fano(res: Geometry, points, lines) -> bool:
    if len(points) != 7 or len(lines) != 7:
        return False
    for l in lines:
        if sum(1 for p in points if res.incident(p, l)) != 3:
            return False
    for p in points:
        if sum(1 for l in lines if res.incident(p, l)) != 3:
            return False
    # any two distinct points on exactly one common line
    for i, p in enumerate(points):
        for q in points[i + 1 :]:
            common = sum(
                1 for l in lines if res.incident(p, l) and res.incident(q, l)
            )
            if common != 1:
                return False
    return True


def _is_gq22(res: Geometry, points, lines) -> bool:
    if len(points) != 15 or len(lines) != 15:
        return False
    on_line = {l: [p for p in points if res.incident(p, l)] for l in lines}
    on_point = {p: [l for l in lines if res.incident(p, l)] for p in points}
    if any(len(v) != 3 for v in on_line.values()):
        return False
    if any(len(v) != 3 for v in on_point.values()):
        return False
    collinear = {p: set() for p in points}
    for l, ps in on_line.items():
        for a in ps:
            for b in ps:
                if a != b:
                    collinear[a].add(b)
    # generalized-quadrangle axiom: point off a line sees exactly one of its points
    for p in points:
        for l in lines:
            if res.incident(p, l):
                continue
            seen = sum(1 for q in on_line[l] if q in collinear[p])
            if seen != 1:
                return False
    return True


@lru_cache(maxsize=None)
def _reference_geometry(kind: str) -> Geometry:
    # late import: build depends on geom at module level
    from . import build

    if kind == "petersen":
        return build.petersen_geometry().geometry
    if kind == "tilde":
        return build.tilde_geometry(seed=0).geometry
    if kind == "gq22":
        return build.symplectic_polar_space(2).geometry
    raise ValueError(f"unknown reference {kind!r}")


def _matches_reference(res: Geometry, kind: str) -> bool:
    return isomorphic(res, _reference_geometry(kind)) is not None


# ---------------------------------------------------------------------------
# morphisms, quotients, coverings


class GeometryMorphism:
    """A type-preserving, incidence-preserving element map."""

    def __init__(self, source: Geometry, target: Geometry, mapping: dict):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        for e in source.elements:
            if e not in self.mapping:
                raise MorphismError(f"element {e!r} has no image")
            img = self.mapping[e]
            if img not in target.type_of:
                raise MorphismError(f"image {img!r} not in target")
            if target.type_of[img] != source.type_of[e]:
                raise MorphismError(f"map does not preserve the type of {e!r}")
        for a, b in source.incidence_pairs():
            fa, fb = self.mapping[a], self.mapping[b]
            if fa != fb and not target.incident(fa, fb):
                raise MorphismError(
                    f"incident pair ({a!r},{b!r}) maps to a non-incident pair"
                )

    def __call__(self, element):
        return self.mapping[element]

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.elements)

    def compose(self, other: "GeometryMorphism") -> "GeometryMorphism":
        """self after other (other.source -> self.target)."""
        if other.target is not self.source and other.target.elements != self.source.elements:
            raise MorphismError("composition mismatch")
        return GeometryMorphism(
            other.source,
            self.target,
            {e: self.mapping[other.mapping[e]] for e in other.source.elements},
        )


def quotient_by_action(g: Geometry, action: GroupAction) -> tuple[Geometry, GeometryMorphism]:
    """Quotient by the orbits of an action; incidence holds between orbits
    containing incident representatives.  The caller must run is_geometry on
    the result (quotients can degenerate)."""
    _check_action(g, action)
    orbit_of: dict = {}
    orbit_ids: list[tuple] = []
    for e in g.elements:
        if e in orbit_of:
            continue
        orb = tuple(action.orbit(e))
        for x in orb:
            orbit_of[x] = orb
        orbit_ids.append(orb)
    elements = [(orb, g.type_of[orb[0]]) for orb in orbit_ids]
    incidences = set()
    for a, b in g.incidence_pairs():
        oa, ob = orbit_of[a], orbit_of[b]
        if oa != ob:
            incidences.add((oa, ob) if label_key(oa) < label_key(ob) else (ob, oa))
    quotient = Geometry(g.rank, elements, sorted(incidences, key=lambda p: (label_key(p[0]), label_key(p[1]))))
    morphism = GeometryMorphism(g, quotient, {e: orbit_of[e] for e in g.elements})
    return quotient, morphism


def is_s_covering(f: GeometryMorphism, s: int) -> bool:
    """True when f is surjective and restricts to an isomorphism on every
    residue of rank at most s.  With s = rank-1 this is the covering test
    (isomorphism on every proper residue)."""
    if not 1 <= s < f.source.rank:
        raise MorphismError(f"s must satisfy 1 <= s < rank, got {s}")
    if not f.is_surjective():
        return False
    src = f.source
    for size in range(src.rank - s, src.rank):
        for flag in _flags_of_size(src, size):
            res_src = residue(src, flag)
            res_tgt = residue(f.target, sorted({f(e) for e in flag}, key=label_key))
            if not _restriction_is_isomorphism(f, res_src, res_tgt):
                return False
    return True


def _flags_of_size(g: Geometry, size: int) -> list[tuple]:
    if size == 0:
        return [()]
    return [fl for fl in g.all_flags(max_size=size) if len(fl) == size]


def _restriction_is_isomorphism(f: GeometryMorphism, res_src: Geometry, res_tgt: Geometry) -> bool:
    images = {}
    for e in res_src.elements:
        img = f(e)
        if img not in res_tgt.type_of:
            return False
        images[e] = img
    if len(set(images.values())) != res_src.size or res_src.size != res_tgt.size:
        return False
    for a, b in res_src.incidence_pairs():
        if not res_tgt.incident(images[a], images[b]):
            return False
    # bijection plus incidence preservation; reverse incidence must match too
    back = {v: k for k, v in images.items()}
    for a, b in res_tgt.incidence_pairs():
        if not res_src.incident(back[a], back[b]):
            return False
    return True


# ---------------------------------------------------------------------------
# isomorphism


def isomorphic(g1: Geometry, g2: Geometry) -> Optional[dict]:
    """A type- and incidence-preserving bijection, or None.

    Tries the trivial id-based bijections first (so exported/imported copies
    of large geometries still verify), then degree/type refinement plus
    backtracking, capacity-limited to 500 elements."""
    if g1.rank != g2.rank or g1.size != g2.size:
        return None
    for t in range(1, g1.rank + 1):
        if len(g1.elements_of_type(t)) != len(g2.elements_of_type(t)):
            return None
    shortcut = _trivial_bijection(g1, g2)
    if shortcut is not None:
        return shortcut
    if g1.size > ISOMORPHISM_ELEMENT_BOUND:
        raise CapacityError(
            f"isomorphism search limited to {ISOMORPHISM_ELEMENT_BOUND} elements"
        )
    graph1 = Graph(g1.elements, g1.incidence_pairs())
    graph2 = Graph(g2.elements, g2.incidence_pairs())
    mapping = graph_isomorphism(
        graph1,
        graph2,
        colors1={e: g1.type_of[e] for e in g1.elements},
        colors2={e: g2.type_of[e] for e in g2.elements},
    )
    return mapping


def _trivial_bijection(g1: Geometry, g2: Geometry) -> Optional[dict]:
    for convert in (lambda e: e, _id_to_str):
        try:
            mapping = {e: convert(e) for e in g1.elements}
        except Exception:
            continue
        if set(mapping.values()) != set(g2.elements):
            continue
        if any(g1.type_of[e] != g2.type_of[mapping[e]] for e in g1.elements):
            continue
        pairs1 = {frozenset((mapping[a], mapping[b])) for a, b in g1.incidence_pairs()}
        pairs2 = {frozenset(p) for p in g2.incidence_pairs()}
        if pairs1 == pairs2:
            return mapping
    return None


# ---------------------------------------------------------------------------
# amalgam reports


@dataclass
class AmalgamReport:
    flag: tuple
    parabolic_orders: dict  # type -> |M_i|
    intersection_orders: dict  # (i, j) -> |M_i meet M_j|
    borel_order: int
    image_order: int

    def to_json(self) -> dict:
        return {
            "flag": [_id_to_str(e) for e in self.flag],
            "parabolic_orders": {str(i): v for i, v in sorted(self.parabolic_orders.items())},
            "intersection_orders": {
                f"{i},{j}": v for (i, j), v in sorted(self.intersection_orders.items())
            },
            "borel_order": self.borel_order,
            "image_order": self.image_order,
        }


def amalgam_report(g: Geometry, action: GroupAction, flag: Sequence) -> AmalgamReport:
    """Orders of the maximal parabolics (flag-element stabilizers in the
    action image), their pairwise intersections and the Borel subgroup."""
    if not is_flag_transitive(g, action):
        raise ActionError("amalgam report requires a flag-transitive action")
    flag = tuple(sorted(flag, key=label_key))
    if len(flag) != g.rank or not g.is_flag(flag):
        raise FlagError("amalgam report requires a maximal flag")
    image = action.image_group()
    position = {e: i for i, e in enumerate(action.domain)}
    by_type = {g.type_of[e]: position[e] for e in flag}
    parabolic = {
        t: image.stabilizer([idx], mode="pointwise").order() for t, idx in by_type.items()
    }
    intersections = {}
    types = sorted(by_type)
    for a in range(len(types)):
        for b in range(a + 1, len(types)):
            i, j = types[a], types[b]
            sub = image.stabilizer([by_type[i], by_type[j]], mode="pointwise")
            intersections[(i, j)] = sub.order()
    borel = image.stabilizer([by_type[t] for t in types], mode="pointwise").order()
    return AmalgamReport(flag, parabolic, intersections, borel, image.order())
