"""Permutation groups on {0..degree-1}: orbits, stabilizer chains, stabilizers,
minimal normal subgroups, randomized subgroup search and induced actions.

Permutations act on the right: ``x ^ g = g.images[x]`` and ``(p * q)`` means
"apply p first, then q".  All derived domains are kept in a canonical sorted
order so that every operation is deterministic and reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from random import Random
from typing import Callable, Iterable, Optional, Sequence

__all__ = [
    "Permutation",
    "PermutationGroup",
    "GroupAction",
    "SubgroupPredicate",
    "DomainError",
    "ClosureError",
    "CapacityError",
    "orbit",
    "group_order",
    "stabilizer",
    "minimal_normal_subgroups",
    "subgroup_search",
    "induced_action",
    "label_key",
    "load_group",
    "save_group",
]

NORMAL_ORDER_BOUND = 10**6
ELEMENT_ENUMERATION_BOUND = 200_000


class DomainError(ValueError):
    """A point or label lies outside the acting domain."""


class ClosureError(ValueError):
    """A derived domain is not closed under the group generators."""


class CapacityError(RuntimeError):
    """An operation exceeded its configured size bound."""


def label_key(label):
    """Total order on domain labels (ints, strings and nested tuples)."""
    if isinstance(label, bool):
        return (0, (int(label),))
    if isinstance(label, int):
        return (0, (label,))
    if isinstance(label, str):
        return (1, (label,))
    if isinstance(label, tuple):
        return (2, tuple(label_key(x) for x in label))
    if isinstance(label, frozenset):
        return (3, tuple(sorted(label_key(x) for x in label)))
    raise TypeError(f"unsupported domain label type: {type(label)!r}")


class Permutation:
    """An immutable bijection of {0..degree-1} stored as an image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if set(images) != set(range(len(images))):
            raise ValueError("images sequence is not a bijection of 0..n-1")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:]):
                images[a] = b
            if cycle:
                images[cycle[-1]] = cycle[0]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # apply self first, then other
        oth = other.images
        return Permutation([oth[i] for i in self.images])

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        seen = [False] * self.degree
        result = 1
        for i in range(self.degree):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            result = _lcm(result, length)
        return result

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            j = self.images[i]
            seen[i] = True
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return f"Permutation(id, degree={self.degree})"
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)
        return f"Permutation({body}, degree={self.degree})"


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# stabilizer chains


class _ChainLevel:
    """One level of a stabilizer chain: a base point, its orbit transversal
    and the strong generators that fix all earlier base points."""

    __slots__ = ("base", "transversal", "gens")

    def __init__(self, base: int, degree: int):
        self.base = base
        self.transversal: dict[int, Permutation] = {base: Permutation.identity(degree)}
        self.gens: list[Permutation] = []


class StabilizerChain:
    """Randomized Schreier-Sims chain with a deterministic seed and a final
    Schreier-generator verification pass, so reported orders are certified.

    ``base_prefix`` forces the chain base to start with the given points,
    which makes pointwise stabilizers directly readable off the chain.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Permutation],
        base_prefix: Sequence[int] = (),
        seed: int = 1,
        order_limit: Optional[int] = None,
    ):
        self.degree = degree
        self.generators = [g for g in generators if not g.is_identity()]
        self.levels: list[_ChainLevel] = []
        self._rng = Random(seed)
        self._base_prefix = list(base_prefix)
        self._order_limit = order_limit
        self.aborted = False
        self._build()

    # -- construction ------------------------------------------------------

    def _build(self) -> None:
        for g in self.generators:
            self._add_generator(g, 0)
            if self._over_limit():
                return
        if not self.generators:
            return
        sampler = _ProductReplacer(self.generators, self._rng)
        quiet = 0
        while quiet < 12:
            g = sampler.sample()
            if self._add_generator(g, 0):
                quiet = 0
                if self._over_limit():
                    return
            else:
                quiet += 1
        while not self._verify():
            if self._over_limit():
                return

    def _over_limit(self) -> bool:
        if self._order_limit is not None and self.order() > self._order_limit:
            self.aborted = True
            return True
        return False

    def _sift(self, g: Permutation, start: int = 0) -> tuple[Permutation, int]:
        """Reduce g through the chain; returns (residue, failing level)."""
        for i in range(start, len(self.levels)):
            level = self.levels[i]
            image = g.images[level.base]
            rep = level.transversal.get(image)
            if rep is None:
                return g, i
            g = g * rep.inverse()
        return g, len(self.levels)

    def _add_generator(self, g: Permutation, start: int) -> bool:
        g, i = self._sift(g, start)
        if g.is_identity():
            return False
        if i == len(self.levels):
            base = self._next_base_point(g)
            self.levels.append(_ChainLevel(base, self.degree))
        self.levels[i].gens.append(g)
        # the new generator lives in every group down to level 0, so all
        # orbits up to level i may grow
        for k in range(i, -1, -1):
            self._extend_orbit(k)
        return True

    def _next_base_point(self, g: Permutation) -> int:
        for b in self._base_prefix[len(self.levels):]:
            return b
        for x in range(self.degree):
            if g.images[x] != x:
                return x
        raise AssertionError("identity passed to _next_base_point")

    def _level_gens(self, i: int) -> list[Permutation]:
        gens: list[Permutation] = []
        for level in self.levels[i:]:
            gens.extend(level.gens)
        return gens

    def _extend_orbit(self, i: int) -> None:
        level = self.levels[i]
        gens = self._level_gens(i)
        queue = sorted(level.transversal)
        while queue:
            nxt = []
            for p in queue:
                rep = level.transversal[p]
                for g in gens:
                    q = g.images[p]
                    if q not in level.transversal:
                        level.transversal[q] = rep * g
                        nxt.append(q)
            queue = nxt

    def _verify(self) -> bool:
        """Schreier's lemma check: every Schreier generator of every level
        must sift to the identity below that level.  Any witness found is
        added to the chain and the check restarts."""
        for i, level in enumerate(self.levels):
            gens = self._level_gens(i)
            for p in sorted(level.transversal):
                rep = level.transversal[p]
                for g in gens:
                    target = self.levels[i].transversal[g.images[p]]
                    schreier = rep * g * target.inverse()
                    residue, j = self._sift(schreier, i + 1)
                    if not residue.is_identity():
                        if j == len(self.levels):
                            base = self._next_base_point(residue)
                            self.levels.append(_ChainLevel(base, self.degree))
                        self.levels[j].gens.append(residue)
                        for k in range(j, -1, -1):
                            self._extend_orbit(k)
                        return False
        return True

    # -- queries -----------------------------------------------------------

    def order(self) -> int:
        result = 1
        for level in self.levels:
            result *= len(level.transversal)
        return result

    def contains(self, g: Permutation) -> bool:
        residue, _ = self._sift(g)
        return residue.is_identity()

    def base(self) -> list[int]:
        return [level.base for level in self.levels]

    def strong_generators(self) -> list[Permutation]:
        return self._level_gens(0)

    def stabilizer_generators(self, fixed: int) -> list[Permutation]:
        """Generators of the subgroup fixing the first ``fixed`` base-prefix
        points.  Level k always carries base-prefix point k (new levels take
        prefix points in order), so the verified chain puts that stabilizer
        at level ``fixed``; a shorter chain means the stabilizer is trivial."""
        if fixed > len(self._base_prefix):
            raise ValueError("more fixed points requested than the base prefix holds")
        return self._level_gens(min(fixed, len(self.levels)))

    def sample(self, rng: Random) -> Permutation:
        """Uniform random element (valid because the chain is verified).

        Sifting factors every element as (deep part) * (level-0 rep), so the
        transversal representatives compose deepest level first."""
        g = Permutation.identity(self.degree)
        for level in reversed(self.levels):
            p = rng.choice(sorted(level.transversal))
            g = g * level.transversal[p]
        return g


class _ProductReplacer:
    """Rattle-style pseudo-random element generator over a generating set."""

    def __init__(self, gens: Sequence[Permutation], rng: Random, slots: int = 8):
        degree = gens[0].degree
        self.rng = rng
        self.reservoir = list(gens) + [Permutation.identity(degree)] * slots
        self.accumulator = Permutation.identity(degree)
        for _ in range(max(40, 5 * len(gens))):
            self._stir()

    def _stir(self) -> Permutation:
        rng = self.rng
        i = rng.randrange(len(self.reservoir))
        j = rng.randrange(len(self.reservoir))
        p = self.reservoir[i]
        if rng.randrange(2):
            p = p.inverse()
        self.reservoir[j] = self.reservoir[j] * p
        self.accumulator = self.accumulator * self.reservoir[j]
        return self.accumulator

    def sample(self) -> Permutation:
        return self._stir()


# ---------------------------------------------------------------------------
# permutation groups


class PermutationGroup:
    """A group given by permutation generators, with a cached verified
    stabilizer chain.  Immutable after construction."""

    def __init__(
        self,
        generators: Sequence[Permutation],
        degree: Optional[int] = None,
        name: Optional[str] = None,
        expected_order: Optional[int] = None,
    ):
        generators = list(generators)
        if degree is None:
            if not generators:
                raise ValueError("degree required for a generator-free group")
            degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise ValueError("generators of mixed degree")
        if not generators:
            generators = [Permutation.identity(degree)]
        self.degree = degree
        self.generators = tuple(generators)
        self.name = name
        self._chain: Optional[StabilizerChain] = None
        self._verified_order: Optional[int] = None
        if expected_order is not None and self.order() != expected_order:
            raise ValueError(
                f"group order {self.order()} does not match expected {expected_order}"
            )

    @classmethod
    def trivial(cls, degree: int) -> "PermutationGroup":
        return cls([Permutation.identity(degree)], degree=degree, name="1")

    @classmethod
    def symmetric(cls, n: int) -> "PermutationGroup":
        if n <= 1:
            return cls.trivial(max(n, 1))
        cycle = Permutation.from_cycles(n, [tuple(range(n))])
        swap = Permutation.from_cycles(n, [(0, 1)])
        return cls([cycle, swap], name=f"S{n}")

    @classmethod
    def alternating(cls, n: int) -> "PermutationGroup":
        if n <= 2:
            return cls.trivial(max(n, 1))
        three = Permutation.from_cycles(n, [(0, 1, 2)])
        if n % 2:
            long = Permutation.from_cycles(n, [tuple(range(n))])
        else:
            long = Permutation.from_cycles(n, [tuple(range(1, n))])
        return cls([three, long], name=f"A{n}")

    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.degree, self.generators)
        return self._chain

    def order(self) -> int:
        if self._verified_order is None:
            self._verified_order = self.chain().order()
        return self._verified_order

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        return self.chain().contains(g)

    def is_subgroup_of(self, other: "PermutationGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: "PermutationGroup") -> bool:
        return (
            self.order() == other.order()
            and self.is_subgroup_of(other)
        )

    def random_element(self, rng: Random) -> Permutation:
        return self.chain().sample(rng)

    def elements(self, bound: int = ELEMENT_ENUMERATION_BOUND) -> list[Permutation]:
        """All elements by breadth-first closure; capacity-limited."""
        if self.order() > bound:
            raise CapacityError(
                f"group of order {self.order()} exceeds enumeration bound {bound}"
            )
        seen = {Permutation.identity(self.degree)}
        queue = [Permutation.identity(self.degree)]
        while queue:
            nxt = []
            for p in queue:
                for g in self.generators:
                    q = p * g
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            queue = nxt
        return sorted(seen, key=lambda p: p.images)

    def point_orbit(self, point: int) -> list[int]:
        if not 0 <= point < self.degree:
            raise DomainError(f"point {point} outside degree {self.degree}")
        seen = {point}
        queue = [point]
        while queue:
            nxt = []
            for p in queue:
                for g in self.generators:
                    q = g.images[p]
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            queue = nxt
        return sorted(seen)

    def stabilizer(self, points: Sequence[int], mode: str = "pointwise") -> "PermutationGroup":
        """Setwise or pointwise stabilizer of a point sequence."""
        for p in points:
            if not 0 <= p < self.degree:
                raise DomainError(f"point {p} outside degree {self.degree}")
        if not points:
            return self
        if mode == "pointwise":
            return self._pointwise_stabilizer(list(points))
        if mode == "setwise":
            return self._setwise_stabilizer(sorted(set(points)))
        raise ValueError(f"unknown stabilizer mode: {mode!r}")

    def _pointwise_stabilizer(self, points: list[int]) -> "PermutationGroup":
        chain = StabilizerChain(self.degree, self.generators, base_prefix=points)
        gens = chain.stabilizer_generators(len(points))
        name = None if self.name is None else f"{self.name}_{points}"
        return PermutationGroup(gens, degree=self.degree, name=name)

    def _setwise_stabilizer(self, points: list[int]) -> "PermutationGroup":
        # Schreier generators of the induced action on the orbit of the set,
        # pruned by sifting against the growing stabilizer subgroup.  The
        # target order is known exactly by orbit counting.
        start = tuple(points)
        reps: dict[tuple[int, ...], Permutation] = {start: Permutation.identity(self.degree)}
        queue = [start]
        while queue:
            nxt = []
            for s in queue:
                rep = reps[s]
                for g in self.generators:
                    t = tuple(sorted(g.images[x] for x in s))
                    if t not in reps:
                        reps[t] = rep * g
                        nxt.append(t)
            queue = nxt
        target = self.order() // len(reps)
        stab_gens: list[Permutation] = []
        stab_chain: Optional[StabilizerChain] = None
        for s in sorted(reps):
            rep = reps[s]
            for g in self.generators:
                t = tuple(sorted(g.images[x] for x in s))
                schreier = rep * g * reps[t].inverse()
                if schreier.is_identity():
                    continue
                if stab_chain is not None and stab_chain.contains(schreier):
                    continue
                stab_gens.append(schreier)
                stab_chain = StabilizerChain(self.degree, stab_gens)
                if stab_chain.order() == target:
                    return PermutationGroup(stab_gens, degree=self.degree)
        return PermutationGroup(stab_gens or [Permutation.identity(self.degree)], degree=self.degree)

    def normal_closure(self, seeds: Sequence[Permutation]) -> "PermutationGroup":
        """Smallest normal subgroup containing the seed permutations."""
        gens = [g for g in seeds if not g.is_identity()]
        chain = StabilizerChain(self.degree, gens) if gens else None
        queue = list(gens)
        while queue:
            h = queue.pop()
            for g in self.generators:
                conj = g.inverse() * h * g
                if chain is None:
                    chain = StabilizerChain(self.degree, [conj])
                    gens.append(conj)
                    queue.append(conj)
                elif not chain.contains(conj):
                    gens.append(conj)
                    chain = StabilizerChain(self.degree, gens)
                    queue.append(conj)
        return PermutationGroup(gens or [Permutation.identity(self.degree)], degree=self.degree)

    def is_normal_in(self, ambient: "PermutationGroup") -> bool:
        for g in ambient.generators:
            ginv = g.inverse()
            for h in self.generators:
                if not self.contains(ginv * h * g):
                    return False
        return True

    def is_transitive(self, domain_size: Optional[int] = None) -> bool:
        n = self.degree if domain_size is None else domain_size
        return len(self.point_orbit(0)) == n if n > 0 else True

    def minimal_normal_subgroups(self, bound: int = NORMAL_ORDER_BOUND) -> list["PermutationGroup"]:
        """Normal closures of prime-order cyclic subgroups, minimal under
        inclusion.  Requires full element enumeration, hence the bound."""
        if self.order() > bound:
            raise CapacityError(
                f"group order {self.order()} above normal-subgroup bound {bound}"
            )
        if self.order() == 1:
            return []
        cyclic_seeds: dict[tuple, Permutation] = {}
        for g in self.elements(bound=bound):
            if g.is_identity():
                continue
            o = g.order()
            p = _smallest_prime_factor(o)
            x = g ** (o // p)
            key = tuple(sorted((x ** k).images for k in range(1, p)))
            cyclic_seeds.setdefault(key, x)
        closures: list[PermutationGroup] = []
        seen_orders: dict[int, list[PermutationGroup]] = {}
        for x in cyclic_seeds.values():
            if any(c.contains(x) and c.order() <= x.order() for c in closures):
                continue
            closure = self.normal_closure([x])
            key = closure.order()
            if any(closure.is_subgroup_of(other) for other in seen_orders.get(key, [])):
                continue
            seen_orders.setdefault(key, []).append(closure)
            closures.append(closure)
        minimal = []
        for n_sub in closures:
            if any(
                other.order() < n_sub.order() and other.is_subgroup_of(n_sub)
                for other in closures
            ):
                continue
            minimal.append(n_sub)
        # dedupe equal subgroups
        out: list[PermutationGroup] = []
        for n_sub in minimal:
            if not any(n_sub.order() == m.order() and n_sub.is_subgroup_of(m) for m in out):
                out.append(n_sub)
        return sorted(out, key=lambda g: g.order())

    def __repr__(self) -> str:
        label = self.name or f"{len(self.generators)} gens"
        return f"PermutationGroup({label}, degree={self.degree})"


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


# ---------------------------------------------------------------------------
# group actions on labelled domains


class GroupAction:
    """Action of a PermutationGroup on a finite labelled domain, stored as
    one domain permutation per generator.  The domain holds canonical sorted
    labels, so orbit output is reproducible."""

    def __init__(self, group: PermutationGroup, domain: Sequence, images: Sequence[Sequence[int]]):
        self.group = group
        self.domain = tuple(domain)
        self.index = {label: i for i, label in enumerate(self.domain)}
        if len(self.index) != len(self.domain):
            raise ValueError("duplicate labels in action domain")
        self.images = tuple(tuple(img) for img in images)
        if len(self.images) != len(group.generators):
            raise ValueError("one domain image required per group generator")
        n = len(self.domain)
        for img in self.images:
            if sorted(img) != list(range(n)):
                raise ClosureError("generator image is not a bijection of the domain")

    def apply(self, gen_index: int, label):
        return self.domain[self.images[gen_index][self.index[label]]]

    def orbit(self, seed) -> list:
        if seed not in self.index:
            raise DomainError(f"seed {seed!r} not in action domain")
        seen = {self.index[seed]}
        queue = [self.index[seed]]
        while queue:
            nxt = []
            for i in queue:
                for img in self.images:
                    j = img[i]
                    if j not in seen:
                        seen.add(j)
                        nxt.append(j)
            queue = nxt
        return sorted((self.domain[i] for i in seen), key=label_key)

    def orbits(self) -> list[list]:
        remaining = set(range(len(self.domain)))
        out = []
        while remaining:
            i = min(remaining)
            orb = self.orbit(self.domain[i])
            out.append(orb)
            remaining -= {self.index[x] for x in orb}
        return out

    def image_group(self) -> PermutationGroup:
        """The permutation group induced on the domain (the action image)."""
        gens = [Permutation(img) for img in self.images]
        return PermutationGroup(gens, degree=len(self.domain), name=None)

    def restricted(self, labels: Sequence) -> "GroupAction":
        """Action induced on an invariant subset of the domain."""
        labels = sorted(labels, key=label_key)
        sub_index = {label: i for i, label in enumerate(labels)}
        imgs = []
        for img in self.images:
            row = []
            for label in labels:
                target = self.domain[img[self.index[label]]]
                if target not in sub_index:
                    raise ClosureError("subset is not invariant under the action")
                row.append(sub_index[target])
            imgs.append(row)
        return GroupAction(self.group, labels, imgs)

    def spot_check_homomorphism(self, rng: Random, samples: int = 20) -> bool:
        """Compare the action of random generator words against composed
        domain images; a cheap sanity check that the action is consistent."""
        k = len(self.group.generators)
        if k == 0:
            return True
        n = len(self.domain)
        for _ in range(samples):
            word = [rng.randrange(k) for _ in range(rng.randrange(1, 6))]
            g = Permutation.identity(self.group.degree)
            composed = list(range(n))
            for idx in word:
                g = g * self.group.generators[idx]
                img = self.images[idx]
                composed = [img[x] for x in composed]
            direct = _apply_word_images(self.images, word, n)
            if composed != direct:
                return False
        return True


def _apply_word_images(images, word, n):
    out = list(range(n))
    for idx in word:
        img = images[idx]
        out = [img[x] for x in out]
    return out


def induced_action(group: PermutationGroup, domain: Iterable, apply: Callable) -> GroupAction:
    """Lift the point action to a derived domain.

    ``apply(perm, label) -> label`` must send domain labels to domain labels
    for every generator; otherwise a ClosureError is raised.  The domain is
    canonically sorted.
    """
    labels = sorted(set(domain), key=label_key)
    index = {label: i for i, label in enumerate(labels)}
    images = []
    for g in group.generators:
        row = []
        for label in labels:
            target = apply(g, label)
            j = index.get(target)
            if j is None:
                raise ClosureError(
                    f"domain not closed: {label!r} maps outside under a generator"
                )
            row.append(j)
        images.append(row)
    return GroupAction(group, labels, images)


def closure_domain(group: PermutationGroup, seeds: Iterable, apply: Callable) -> list:
    """Smallest superset of the seeds closed under the generators."""
    seen = set(seeds)
    queue = sorted(seen, key=label_key)
    while queue:
        nxt = []
        for label in queue:
            for g in group.generators:
                target = apply(g, label)
                if target not in seen:
                    seen.add(target)
                    nxt.append(target)
        queue = nxt
    return sorted(seen, key=label_key)


def natural_action(group: PermutationGroup) -> GroupAction:
    """The defining action on 0..degree-1."""
    return induced_action(group, range(group.degree), lambda g, x: g.images[x])


# ---------------------------------------------------------------------------
# spec-level operation wrappers


def orbit(action: GroupAction, seed) -> list:
    return action.orbit(seed)


def group_order(group: PermutationGroup) -> int:
    return group.order()


def stabilizer(group: PermutationGroup, points: Sequence[int], mode: str = "pointwise") -> PermutationGroup:
    return group.stabilizer(points, mode=mode)


def minimal_normal_subgroups(group: PermutationGroup, bound: int = NORMAL_ORDER_BOUND) -> list[PermutationGroup]:
    return group.minimal_normal_subgroups(bound=bound)


@dataclass
class SubgroupPredicate:
    """Search target for subgroup_search: an exact order, an optional
    subgroup that must be contained, and an optional order for the quotient
    by that subgroup (all orders must divide the ambient order)."""

    order: int
    contains: Optional[PermutationGroup] = None
    quotient_order: Optional[int] = None

    def admissible_element_orders(self) -> set[int]:
        return {d for d in range(1, self.order + 1) if self.order % d == 0}


def subgroup_search(
    group: PermutationGroup,
    predicate: SubgroupPredicate,
    seed: int,
    max_trials: int = 20000,
) -> Optional[PermutationGroup]:
    """Randomized search for a subgroup matching the predicate.

    Strategy: draw pairs of uniform random elements, prune by element order,
    and test the order of the subgroup they generate together with the
    required contained subgroup.  Deterministic for a fixed seed; returns
    None when the trial budget runs out.
    """
    ambient_order = group.order()
    if ambient_order % predicate.order != 0:
        raise ValueError("target order does not divide the ambient group order")
    if predicate.quotient_order is not None:
        if predicate.contains is None:
            raise ValueError("quotient_order requires a contained subgroup")
        if predicate.order != predicate.quotient_order * predicate.contains.order():
            raise ValueError("order, contained order and quotient_order disagree")
    if predicate.order == ambient_order:
        return group
    required = list(predicate.contains.generators) if predicate.contains else []
    allowed = predicate.admissible_element_orders()
    rng = Random(seed)
    chain = group.chain()
    for _ in range(max_trials):
        a = chain.sample(rng)
        if a.order() not in allowed:
            continue
        b = chain.sample(rng)
        if b.order() not in allowed:
            continue
        gens = required + [a, b]
        sub_chain = StabilizerChain(
            group.degree, gens, seed=1, order_limit=predicate.order
        )
        if sub_chain.aborted or sub_chain.order() != predicate.order:
            continue
        candidate = PermutationGroup(gens, degree=group.degree)
        if candidate.order() != predicate.order:
            continue
        return candidate
    return None


# ---------------------------------------------------------------------------
# group file I/O


def load_group(path) -> PermutationGroup:
    """Read the JSON group format; fails when expected_order mismatches."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return group_from_json(payload)


def group_from_json(payload: dict) -> PermutationGroup:
    degree = payload["degree"]
    gens = [Permutation(images) for images in payload["generators"]]
    return PermutationGroup(
        gens,
        degree=degree,
        name=payload.get("name"),
        expected_order=payload.get("expected_order"),
    )


def group_to_json(group: PermutationGroup) -> dict:
    payload = {
        "degree": group.degree,
        "generators": [list(g.images) for g in group.generators],
    }
    if group.name is not None:
        payload["name"] = group.name
    payload["expected_order"] = group.order()
    return payload


def save_group(group: PermutationGroup, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(group_to_json(group), fh, indent=1, sort_keys=True)
        fh.write("\n")
