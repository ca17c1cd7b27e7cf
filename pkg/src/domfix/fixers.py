"""Symmetric gamma-sets and prism-fixer / pi-fixer decisions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from domfix.domination import (
    EnumerationLimitExceeded,
    _enumerate_masks,
    gamma_exact,
    is_maximal_two_packing,
    is_two_packing,
)
from domfix.graph import Graph, Permutation, cartesian_prism, from_mask, iter_mask, to_mask

ENUMERATION_LIMIT = 10**6


class ConsistencyError(RuntimeError):
    """Two routes to the same fact disagreed."""


@dataclass(frozen=True)
class SymmetricGammaSet:
    """A gamma-set split as ``[d1, d2]``: ``d1`` dominates ``V - d2`` and vice versa."""

    d1: frozenset[int]
    d2: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "d1", frozenset(self.d1))
        object.__setattr__(self, "d2", frozenset(self.d2))
        if self.d1 & self.d2:
            raise ValueError("parts must be disjoint")

    @property
    def vertices(self) -> frozenset[int]:
        return self.d1 | self.d2

    @property
    def is_even(self) -> bool:
        return len(self.d1) == len(self.d2)

    def swapped(self) -> "SymmetricGammaSet":
        return type(self)(self.d2, self.d1)

    def larger_first(self) -> "SymmetricGammaSet":
        """Orientation with ``|d1| >= |d2|`` (unchanged on ties)."""
        return self if len(self.d1) >= len(self.d2) else self.swapped()

    def as_lists(self) -> list[list[int]]:
        return [sorted(self.d1), sorted(self.d2)]


class EvenSymmetricGammaSet(SymmetricGammaSet):
    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.d1) != len(self.d2):
            raise ValueError("even symmetric gamma-set needs parts of equal size")


def _cover(closed: tuple[int, ...], mask: int) -> int:
    out = 0
    for v in iter_mask(mask):
        out |= closed[v]
    return out


def _symmetric_splits(g: Graph, gamma: int, limit: int | None) -> Iterator[SymmetricGammaSet]:
    closed = g.closed_masks
    full = g.full_mask
    for count, dmask in enumerate(_enumerate_masks(g, gamma), start=1):
        if limit is not None and count > limit:
            raise EnumerationLimitExceeded(limit)
        elems = list(iter_mask(dmask))
        # bit 0 of the characteristic vector (smallest label) is always in d1
        for bits in range(1 << (len(elems) - 1)):
            part2 = 0
            for i, v in enumerate(elems[1:]):
                if not (bits >> i) & 1:
                    part2 |= 1 << v
            if part2 == 0:
                continue
            part1 = dmask & ~part2
            if (full & ~part2) & ~_cover(closed, part1):
                continue
            if (full & ~part1) & ~_cover(closed, part2):
                continue
            yield SymmetricGammaSet(from_mask(part1), from_mask(part2))


def find_symmetric_gamma_sets(
    g: Graph, gamma: int | None = None, limit: int | None = ENUMERATION_LIMIT
) -> list[SymmetricGammaSet]:
    """All symmetric gamma-sets of ``g``, normalized so ``min(d1) < min(d2)``.

    Gamma-sets are visited lexicographically and, within one gamma-set,
    splits by ascending characteristic bitmask. ``limit`` bounds the number
    of gamma-sets examined.
    """
    if gamma is None:
        gamma = gamma_exact(g).gamma
    return list(_symmetric_splits(g, gamma, limit))


@dataclass(frozen=True)
class PrismFixerVerdict:
    is_fixer: bool
    gamma: int
    gamma_prism: int
    witness: SymmetricGammaSet | None

    def __bool__(self) -> bool:
        return self.is_fixer


def _require_nontrivial_connected(g: Graph) -> None:
    if g.n < 2:
        raise ValueError("graph must be nontrivial (n >= 2)")
    if not g.is_connected():
        raise ValueError("graph must be connected")


def is_prism_fixer(
    g: Graph, gamma: int | None = None, limit: int | None = ENUMERATION_LIMIT
) -> PrismFixerVerdict:
    """Decide whether ``gamma(G □ K2) == gamma(G)`` two ways and insist they agree.

    The first route looks for a symmetric gamma-set, the second computes the
    domination number of the Cartesian prism directly.
    """
    _require_nontrivial_connected(g)
    if gamma is None:
        gamma = gamma_exact(g).gamma
    witness = next(_symmetric_splits(g, gamma, limit), None)
    gamma_prism = gamma_exact(cartesian_prism(g)).gamma
    if (witness is not None) != (gamma_prism == gamma):
        raise ConsistencyError(
            f"symmetric gamma-set {'found' if witness else 'absent'} but "
            f"gamma(G)={gamma}, gamma(G□K2)={gamma_prism}"
        )
    return PrismFixerVerdict(witness is not None, gamma, gamma_prism, witness)


def check_hartnell_rall_c(g: Graph, s: SymmetricGammaSet) -> bool:
    """Independent split where every outside vertex sees exactly one vertex of each part
    and every member has at least two outside neighbors."""
    d = s.vertices
    if any(g.adj[v] & d for v in d):
        return False
    for v in range(g.n):
        if v in d:
            if len(g.adj[v] - d) < 2:
                return False
        elif len(g.adj[v] & s.d1) != 1 or len(g.adj[v] & s.d2) != 1:
            return False
    return True


def invariant_checks(g: Graph, s: SymmetricGammaSet, gamma: int) -> dict[str, bool]:
    """Structural consequences every symmetric gamma-set must satisfy."""
    d = s.vertices
    packings = is_two_packing(g, s.d1) and is_two_packing(g, s.d2)
    return {
        "independent": not any(g.adj[v] & d for v in d),
        "min_degree_two": g.min_degree() >= 2,
        "maximal_two_packings": packings
        and is_maximal_two_packing(g, s.d1)
        and is_maximal_two_packing(g, s.d2),
        "degree_sums": all(
            sum(g.degree(x) for x in part) == g.n - gamma for part in (s.d1, s.d2)
        ),
    }


@dataclass(frozen=True)
class PiFixerVerdict:
    holds: bool
    witness: tuple[frozenset[int], frozenset[int]] | None

    def __bool__(self) -> bool:
        return self.holds


def check_pi_fixer_condition(
    g: Graph,
    pi: Permutation,
    gamma: int | None = None,
    limit: int | None = ENUMERATION_LIMIT,
) -> PiFixerVerdict:
    """Search for a gamma-set ``D = D1 ∪ D2`` with ``D1`` dominating ``V - D2``,
    ``pi(D)`` a gamma-set and ``pi(D2)`` dominating ``V - pi(D1)``.

    For connected ``g`` with at least two vertices this holds exactly when
    ``g`` is a ``pi``-fixer. The witness is ``(D1, D2)``.
    """
    if len(pi) != g.n:
        raise ValueError(f"permutation has size {len(pi)}, graph has {g.n} vertices")
    if gamma is None:
        gamma = gamma_exact(g).gamma
    closed = g.closed_masks
    full = g.full_mask
    gamma_sets = []
    for count, mask in enumerate(_enumerate_masks(g, gamma), start=1):
        if limit is not None and count > limit:
            raise EnumerationLimitExceeded(limit)
        gamma_sets.append(mask)
    lookup = set(gamma_sets)
    for dmask in gamma_sets:
        if pi.image_mask(dmask) not in lookup:
            continue
        elems = list(iter_mask(dmask))
        for bits in range(1 << len(elems)):
            part1 = to_mask(v for i, v in enumerate(elems) if (bits >> i) & 1)
            part2 = dmask & ~part1
            if (full & ~part2) & ~_cover(closed, part1):
                continue
            img1, img2 = pi.image_mask(part1), pi.image_mask(part2)
            if (full & ~img1) & ~_cover(closed, img2):
                continue
            return PiFixerVerdict(True, (from_mask(part1), from_mask(part2)))
    return PiFixerVerdict(False, None)


def check_intersection_property(
    a: SymmetricGammaSet, b: SymmetricGammaSet, g: Graph | None = None
) -> bool:
    """Check both intersection clauses for every orientation with smaller part first.

    With ``|A1| <= |A2|`` and ``|B1| <= |B2|``: if ``|A1| < |B1|`` then ``A2``
    meets ``B1``; if ``|B1| == |A1| < |A2|`` then ``A2`` meets ``B2``.
    Passing ``g`` also verifies that both splits are symmetric in ``g`` and
    of the same size.
    """
    if g is not None:
        for s in (a, b):
            if not _is_symmetric_split(g, s):
                raise ValueError(f"{s.as_lists()} is not a symmetric split of this graph")
        if len(a.vertices) != len(b.vertices):
            raise ValueError("sets come from graphs with different domination numbers")

    def orientations(s: SymmetricGammaSet) -> list[SymmetricGammaSet]:
        out = [s] if len(s.d1) <= len(s.d2) else []
        if len(s.d2) <= len(s.d1):
            out.append(s.swapped())
        return out

    for oa in orientations(a):
        for ob in orientations(b):
            a1, a2, b1, b2 = len(oa.d1), len(oa.d2), len(ob.d1), len(ob.d2)
            if a1 < b1 and not (oa.d2 & ob.d1):
                return False
            if b1 == a1 < a2 and not (oa.d2 & ob.d2):
                return False
    return True


def _is_symmetric_split(g: Graph, s: SymmetricGammaSet) -> bool:
    closed = g.closed_masks
    m1, m2 = to_mask(g.check_vertices(s.d1)), to_mask(g.check_vertices(s.d2))
    full = g.full_mask
    return not ((full & ~m2) & ~_cover(closed, m1)) and not ((full & ~m1) & ~_cover(closed, m2))


class EvenKind(str, Enum):
    NO_EVEN = "NO_EVEN"
    PIVOT = "PIVOT"
    DISJOINT_FAMILY = "DISJOINT_FAMILY"


@dataclass(frozen=True)
class EvenStructure:
    kind: EvenKind
    sets: tuple[SymmetricGammaSet, ...]

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "sets": [s.as_lists() for s in self.sets]}


def even_symmetric_gamma_sets(splits: list[SymmetricGammaSet]) -> list[EvenSymmetricGammaSet]:
    """Distinct gamma-sets admitting an even split, first split kept."""
    seen: set[frozenset[int]] = set()
    out = []
    for s in splits:
        if s.is_even and s.vertices not in seen:
            seen.add(s.vertices)
            out.append(EvenSymmetricGammaSet(s.d1, s.d2))
    return out


def classify_even_structure(
    g: Graph,
    splits: list[SymmetricGammaSet] | None = None,
    limit: int | None = ENUMERATION_LIMIT,
) -> EvenStructure:
    """Sort a prism fixer into one of three mutually exclusive cases.

    ``NO_EVEN``: no even symmetric gamma-set. ``PIVOT``: the first even one
    meeting every other even one. ``DISJOINT_FAMILY``: otherwise, a maximal
    pairwise-disjoint family built greedily in enumeration order (``m >= 2``).
    """
    if splits is None:
        _require_nontrivial_connected(g)
        splits = find_symmetric_gamma_sets(g, limit=limit)
    if not splits:
        raise ValueError("graph is not a prism fixer")
    even = even_symmetric_gamma_sets(splits)
    if not even:
        return EvenStructure(EvenKind.NO_EVEN, ())
    for d in even:
        if all(d.vertices & e.vertices for e in even):
            return EvenStructure(EvenKind.PIVOT, (d,))
    family: list[EvenSymmetricGammaSet] = []
    for e in even:
        if all(not (e.vertices & f.vertices) for f in family):
            family.append(e)
    # extension pass
    for e in even:
        if e not in family and all(not (e.vertices & f.vertices) for f in family):
            raise AssertionError("greedy disjoint family is not maximal")
    assert len(family) >= 2
    return EvenStructure(EvenKind.DISJOINT_FAMILY, tuple(family))
