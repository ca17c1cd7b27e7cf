"""Domination numbers, gamma-set enumeration and 2-packing predicates."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from domfix.graph import Graph, from_mask, iter_mask, to_mask

BRUTEFORCE_CAP = 24


class CapExceeded(ValueError):
    pass


class EnumerationLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"more than {limit} gamma-sets; enumeration aborted")
        self.limit = limit


@dataclass(frozen=True)
class DominationCertificate:
    gamma: int
    witness: frozenset[int]

    def __post_init__(self) -> None:
        if len(self.witness) != self.gamma:
            raise ValueError("witness size differs from gamma")


def is_dominating(g: Graph, dominators: Iterable[int]) -> bool:
    """True iff every vertex is in ``dominators`` or adjacent to one of them."""
    return _cover(g, to_mask(g.check_vertices(dominators))) == g.full_mask


def dominates_set(g: Graph, a: Iterable[int], b: Iterable[int]) -> bool:
    """True iff ``b`` is contained in ``N[a]``."""
    amask = to_mask(g.check_vertices(a))
    bmask = to_mask(g.check_vertices(b))
    return bmask & ~_cover(g, amask) == 0


def _cover(g: Graph, mask: int) -> int:
    closed = g.closed_masks
    out = 0
    for v in iter_mask(mask):
        out |= closed[v]
    return out


# exact search ---------------------------------------------------------------


def gamma_bruteforce(g: Graph, cap: int = BRUTEFORCE_CAP) -> DominationCertificate:
    """Smallest dominating set by trying all subsets in order of size."""
    if g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds brute-force cap {cap}")
    closed = g.closed_masks
    full = g.full_mask
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            cover = 0
            for v in combo:
                cover |= closed[v]
            if cover == full:
                return DominationCertificate(k, frozenset(combo))
    raise AssertionError("unreachable: the whole vertex set dominates")


def _greedy(closed: tuple[int, ...], full: int) -> int:
    """Max-coverage greedy dominating set, ties to the lowest label."""
    uncovered = full
    chosen = 0
    while uncovered:
        best_v, best_c = -1, -1
        for v, cm in enumerate(closed):
            c = (cm & uncovered).bit_count()
            if c > best_c:
                best_v, best_c = v, c
        chosen |= 1 << best_v
        uncovered &= ~closed[best_v]
    return chosen


class _BranchAndBound:
    """Search for a dominating set smaller than ``bound``.

    Branches on the uncovered vertex with the fewest admissible dominators
    (lowest label on ties). Siblings already explored are excluded from later
    branches, so each dominating set is reached at most once.
    """

    def __init__(self, closed: tuple[int, ...], bound: int, best: int | None = None):
        self.closed = closed
        self.n = len(closed)
        self.best_size = bound
        self.best = best
        self.nodes = 0

    def lower_bound(self, uncovered: int, allowed: int) -> int:
        closed = self.closed
        need = uncovered.bit_count()
        # each remaining pick covers at most its current coverage
        gains = sorted(
            ((closed[w] & uncovered).bit_count() for w in iter_mask(allowed)), reverse=True
        )
        total = 0
        by_cover = 0
        for c in gains:
            if total >= need or c == 0:
                break
            total += c
            by_cover += 1
        if total < need:
            return self.n + 1
        # uncovered vertices with pairwise disjoint candidate sets need distinct picks
        used = 0
        packing = 0
        for u in iter_mask(uncovered):
            cand = closed[u] & allowed
            if cand & used == 0:
                used |= cand
                packing += 1
        return max(by_cover, packing)

    def run(self, uncovered: int, allowed: int, chosen: int, size: int) -> None:
        self.nodes += 1
        if uncovered == 0:
            if size < self.best_size:
                self.best_size = size
                self.best = chosen
            return
        if size + 1 >= self.best_size:
            return
        closed = self.closed
        pivot, pivot_cands, fewest = -1, 0, self.n + 1
        for u in iter_mask(uncovered):
            cand = closed[u] & allowed
            c = cand.bit_count()
            if c < fewest:
                pivot, pivot_cands, fewest = u, cand, c
                if c <= 1:
                    break
        if fewest == 0:
            return
        if size + self.lower_bound(uncovered, allowed) >= self.best_size:
            return
        order = sorted(
            iter_mask(pivot_cands), key=lambda w: (-(closed[w] & uncovered).bit_count(), w)
        )
        for w in order:
            self.run(uncovered & ~closed[w], allowed, chosen | (1 << w), size + 1)
            allowed &= ~(1 << w)
            if size + 1 >= self.best_size:
                return


def gamma_exact(g: Graph) -> DominationCertificate:
    """Exact domination number by branch and bound, seeded with a greedy solution."""
    if g.n == 0:
        return DominationCertificate(0, frozenset())
    closed = g.closed_masks
    greedy = _greedy(closed, g.full_mask)
    search = _BranchAndBound(closed, greedy.bit_count(), greedy)
    search.run(g.full_mask, g.full_mask, 0, 0)
    return DominationCertificate(search.best_size, from_mask(search.best))


def find_dominating_set(g: Graph, k: int) -> frozenset[int] | None:
    """Some dominating set with at most ``k`` vertices, or ``None``."""
    if k < 0:
        return None
    if g.n == 0:
        return frozenset()
    closed = g.closed_masks
    greedy = _greedy(closed, g.full_mask)
    if greedy.bit_count() <= k:
        return from_mask(greedy)
    search = _BranchAndBound(closed, k + 1)
    search.run(g.full_mask, g.full_mask, 0, 0)
    return None if search.best is None else from_mask(search.best)


def gamma_at_least(g: Graph, k: int) -> bool:
    """True iff no dominating set of size below ``k`` exists."""
    return find_dominating_set(g, k - 1) is None


# enumeration ----------------------------------------------------------------


def _enumerate_masks(g: Graph, size: int) -> Iterator[int]:
    n = g.n
    closed = g.closed_masks
    reach = g.max_degree() + 1
    top = [max(iter_mask(cm)) for cm in closed]

    def rec(start: int, uncovered: int, chosen: int, remaining: int) -> Iterator[int]:
        if remaining == 0:
            if uncovered == 0:
                yield chosen
            return
        last = n - remaining
        if uncovered:
            if uncovered.bit_count() > remaining * reach:
                return
            low = (uncovered & -uncovered).bit_length() - 1
            # the lowest uncovered vertex needs a dominator among the later picks
            last = min(last, top[low])
            if not closed[low] >> start:
                return
        for v in range(start, last + 1):
            yield from rec(v + 1, uncovered & ~closed[v], chosen | (1 << v), remaining - 1)

    yield from rec(0, g.full_mask, 0, size)


def enumerate_gamma_sets(
    g: Graph, gamma: int, limit: int | None = None
) -> Iterator[frozenset[int]]:
    """Yield every dominating set of exactly ``gamma`` vertices in lexicographic order.

    Meant to be called with ``gamma`` equal to the domination number. Raises
    ``EnumerationLimitExceeded`` once more than ``limit`` sets have been produced.
    """
    for count, mask in enumerate(_enumerate_masks(g, gamma), start=1):
        if limit is not None and count > limit:
            raise EnumerationLimitExceeded(limit)
        yield from_mask(mask)


# packings -------------------------------------------------------------------


def is_two_packing(g: Graph, vertices: Iterable[int]) -> bool:
    """True iff the closed neighborhoods of the given vertices are pairwise disjoint."""
    closed = g.closed_masks
    seen = 0
    for v in g.check_vertices(vertices):
        if closed[v] & seen:
            return False
        seen |= closed[v]
    return True


def is_maximal_two_packing(g: Graph, vertices: Iterable[int]) -> bool:
    s = g.check_vertices(vertices)
    if not is_two_packing(g, s):
        raise ValueError(f"{sorted(s)} is not a 2-packing")
    covered = _cover(g, to_mask(s))
    closed = g.closed_masks
    return all(closed[v] & covered for v in range(g.n) if v not in s)
