"""Witness permutations that raise the domination number of the prism.

``find_witness`` dispatches a graph to a construction and then recomputes
``gamma(alpha G)`` independently; a construction that fails to raise it is
reported as a violation rather than raised, so corpus runs always finish.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from domfix.domination import gamma_at_least, gamma_exact
from domfix.fixers import (
    ENUMERATION_LIMIT,
    EvenKind,
    SymmetricGammaSet,
    classify_even_structure,
    find_symmetric_gamma_sets,
    is_prism_fixer,
)
from domfix.graph import Graph, Permutation, build_prism, connected_components

log = logging.getLogger(__name__)

FALLBACK_BUDGET = 10**5
EXHAUSTIVE_BELOW = 8


class Route(str, Enum):
    THEOREM4 = "THEOREM4"
    THEOREM5 = "THEOREM5"
    THEOREM6 = "THEOREM6"
    IDENTITY = "IDENTITY"
    OBSERVATION2 = "OBSERVATION2"
    FALLBACK_SEARCH = "FALLBACK_SEARCH"
    EDGELESS = "EDGELESS"


class ChainIndexingError(ValueError):
    pass


@dataclass(frozen=True)
class WitnessReport:
    gamma_g: int
    construction: Route
    permutation: Permutation | None
    gamma_prism: int | None
    detail: dict = field(default_factory=dict)
    prism_fixer: bool | None = None
    violation: bool = False

    @property
    def found(self) -> bool:
        return self.permutation is not None

    @property
    def increases(self) -> bool:
        return self.gamma_prism is not None and self.gamma_prism > self.gamma_g


# private-neighbor cycle -----------------------------------------------------


def select_private_neighbor(g: Graph, d1: Sequence[int], x1: int) -> int:
    """Smallest neighbor of ``x1`` adjacent to no other member of ``d1``."""
    if x1 not in d1:
        raise ValueError(f"{x1} is not in {list(d1)}")
    others = [x for x in d1 if x != x1]
    for u in sorted(g.adj[x1]):
        if u not in others and not any(u in g.adj[x] for x in others):
            return u
    raise ValueError(f"no private neighbor of {x1} with respect to {list(d1)}; not a 2-packing?")


def build_alpha_private_cycle(g: Graph, d1: Sequence[int]) -> Permutation:
    """The cycle ``(x1 x2 ... xk u1)`` where ``u1`` is a private neighbor of ``x1``."""
    xs = list(d1)
    if not xs:
        raise ValueError("d1 must be nonempty")
    u1 = select_private_neighbor(g, xs, xs[0])
    return Permutation.from_cycles([xs + [u1]], g.n)


# chain construction ---------------------------------------------------------


@dataclass(frozen=True)
class ChainIndexing:
    """Rows ``x[i]`` index the 2-packings ``X_1..X_m`` so that ``x[i+1][j]`` is a
    neighbor of ``x[i][j]``; ``x[m-1][a[j]]`` is the neighbor of ``x[0][j]`` in
    the last row."""

    x: tuple[tuple[int, ...], ...]
    a: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.x)

    @property
    def k(self) -> int:
        return len(self.a)

    def to_dict(self) -> dict:
        return {"x": [list(r) for r in self.x], "a": list(self.a)}


def _unique_neighbor_in(g: Graph, v: int, row: frozenset[int], label: str) -> int:
    hits = g.adj[v] & row
    if len(hits) != 1:
        raise ChainIndexingError(
            f"vertex {v} has {len(hits)} neighbors in {label} {sorted(row)}; expected exactly one"
        )
    return next(iter(hits))


def build_chain_indexing(g: Graph, family: Sequence[SymmetricGammaSet]) -> ChainIndexing:
    """Index the ``d1`` parts of pairwise disjoint even symmetric gamma-sets as a chain."""
    if len(family) < 2:
        raise ChainIndexingError("need at least two sets")
    rows = [frozenset(s.d1) for s in family]
    k = len(rows[0])
    if k == 0 or any(len(r) != k or len(s.d2) != k for r, s in zip(rows, family)):
        raise ChainIndexingError("all parts must have the same nonzero size")
    for i, s in enumerate(family):
        for t in family[i + 1 :]:
            if s.vertices & t.vertices:
                raise ChainIndexingError("family is not pairwise disjoint")

    x = [tuple(sorted(rows[0]))]
    for i in range(1, len(rows)):
        nxt = tuple(_unique_neighbor_in(g, v, rows[i], f"X_{i + 1}") for v in x[-1])
        if len(set(nxt)) != k:
            raise ChainIndexingError(f"row X_{i + 1} is not hit bijectively")
        x.append(nxt)
    last = {v: j for j, v in enumerate(x[-1])}
    a = tuple(last[_unique_neighbor_in(g, v, rows[-1], f"X_{len(rows)}")] for v in x[0])
    if len(set(a)) != k:
        raise ChainIndexingError("closing map is not a bijection")
    return ChainIndexing(tuple(x), a)


def build_alpha_chain(ci: ChainIndexing, n: int) -> Permutation:
    """Shift each row of the chain to the next; close ``x[m-1][a[j]] -> x[0][j+1]``."""
    m, k = ci.m, ci.k
    if m < 2 or any(len(r) != k for r in ci.x) or sorted(ci.a) != list(range(k)):
        raise ChainIndexingError("malformed chain indexing")
    mapping = list(range(n))
    for i in range(m - 1):
        for j in range(k):
            mapping[ci.x[i][j]] = ci.x[i + 1][j]
    for j in range(k):
        mapping[ci.x[m - 1][ci.a[j]]] = ci.x[0][(j + 1) % k]
    return Permutation(tuple(mapping))


def chain_cycle(g: Graph, ci: ChainIndexing, alpha: Permutation) -> list[int]:
    """Recover the alternating cycle on the first and last rows from adjacency and ``alpha``.

    Starting at ``x[0][0]``, step to its unique neighbor in the last row, then
    apply ``alpha``; repeat until back at the start. The returned list starts
    with that last-row neighbor and ends with ``x[0][0]``.
    """
    first, last = ci.x[0], frozenset(ci.x[-1])
    start = first[0]
    out: list[int] = []
    v = start
    while True:
        w = _unique_neighbor_in(g, v, last, "last row")
        out.append(w)
        v = alpha(w)
        out.append(v)
        if v == start or len(out) > 2 * len(first):
            break
    return out


def check_chain_cycle(g: Graph, ci: ChainIndexing, alpha: Permutation) -> bool:
    """The alternating cycle has length ``2k``, covers both rows, and each last-row entry
    is adjacent to its predecessor and sent by ``alpha`` to its successor."""
    cyc = chain_cycle(g, ci, alpha)
    k = ci.k
    if len(cyc) != 2 * k or cyc[-1] != ci.x[0][0]:
        return False
    if set(cyc[0::2]) != set(ci.x[-1]) or set(cyc[1::2]) != set(ci.x[0]):
        return False
    for pos in range(0, 2 * k, 2):
        if cyc[pos] not in g.adj[cyc[pos - 1]] or alpha(cyc[pos]) != cyc[pos + 1]:
            return False
    return True


# disconnected graphs --------------------------------------------------------


def compose_component_witness(
    g: Graph,
    components: Sequence[tuple[Graph, Sequence[int]]],
    j: int,
    pi_j: Permutation,
) -> Permutation:
    """Act as ``pi_j`` on component ``j`` (through its back-map) and fix everything else."""
    if not 0 <= j < len(components):
        raise IndexError(f"component index {j} out of range")
    comp, back = components[j]
    if len(pi_j) != comp.n or len(back) != comp.n:
        raise ValueError("permutation size does not match component")
    mapping = list(range(g.n))
    for i, v in enumerate(back):
        mapping[v] = back[pi_j(i)]
    return Permutation(tuple(mapping))


# fallback -------------------------------------------------------------------


def raises_gamma(g: Graph, pi: Permutation, gamma: int) -> bool:
    return gamma_at_least(build_prism(g, pi).graph, gamma + 1)


def fallback_witness_search(
    g: Graph,
    budget: int = FALLBACK_BUDGET,
    seed: int = 0,
    gamma: int | None = None,
    exhaustive_below: int = EXHAUSTIVE_BELOW,
) -> Permutation | None:
    """Identity first, then every permutation when ``n < exhaustive_below``,
    otherwise ``budget`` seeded random permutations. ``None`` if nothing works."""
    if g.m == 0:
        raise ValueError("graph has no edges; no permutation can raise gamma")
    if gamma is None:
        gamma = gamma_exact(g).gamma
    ident = Permutation.identity(g.n)
    if raises_gamma(g, ident, gamma):
        return ident
    if g.n < exhaustive_below:
        for mapping in itertools.permutations(range(g.n)):
            pi = Permutation(mapping)
            if raises_gamma(g, pi, gamma):
                return pi
        return None
    rng = random.Random(seed)
    labels = list(range(g.n))
    for _ in range(budget):
        rng.shuffle(labels)
        pi = Permutation(tuple(labels))
        if raises_gamma(g, pi, gamma):
            return pi
    return None


# dispatcher -----------------------------------------------------------------


def _construct(g: Graph, gamma: int, limit: int | None) -> tuple[Route, Permutation, dict]:
    """Pick the construction for a connected prism fixer with gamma >= 4."""
    splits = find_symmetric_gamma_sets(g, gamma, limit=limit)
    structure = classify_even_structure(g, splits)
    detail: dict = {"structure": structure.to_dict(), "symmetric_sets": len(splits)}
    if structure.kind is EvenKind.NO_EVEN:
        d = splits[0].larger_first()
        xs = sorted(d.d1)
        u1 = select_private_neighbor(g, xs, xs[0])
        detail.update(D=d.as_lists(), d1_order=xs, u1=u1)
        return Route.THEOREM5, build_alpha_private_cycle(g, xs), detail
    if structure.kind is EvenKind.PIVOT:
        d = structure.sets[0]
        xs = sorted(d.d1)
        u1 = select_private_neighbor(g, xs, xs[0])
        detail.update(D=d.as_lists(), d1_order=xs, u1=u1)
        return Route.THEOREM4, build_alpha_private_cycle(g, xs), detail
    ci = build_chain_indexing(g, structure.sets)
    alpha = build_alpha_chain(ci, g.n)
    detail.update(chain=ci.to_dict(), chain_cycle_ok=check_chain_cycle(g, ci, alpha))
    return Route.THEOREM6, alpha, detail


def _connected_witness(
    g: Graph, budget: int, seed: int, limit: int | None
) -> WitnessReport:
    verdict = is_prism_fixer(g, limit=limit)
    gamma = verdict.gamma
    if not verdict:
        perm = Permutation.identity(g.n)
        return WitnessReport(
            gamma, Route.IDENTITY, perm, verdict.gamma_prism, {}, prism_fixer=False
        )
    if gamma <= 3:
        perm = fallback_witness_search(g, budget=budget, seed=seed, gamma=gamma)
        if perm is None:
            return WitnessReport(
                gamma, Route.FALLBACK_SEARCH, None, None, {"status": "NOT_FOUND"}, prism_fixer=True
            )
        route, detail = Route.FALLBACK_SEARCH, {}
    else:
        route, perm, detail = _construct(g, gamma, limit)
    gamma_prism = gamma_exact(build_prism(g, perm).graph).gamma
    violation = gamma_prism <= gamma
    if violation:
        log.warning("construction %s failed to raise gamma on %r", route.value, g)
    return WitnessReport(gamma, route, perm, gamma_prism, detail, True, violation)


def find_witness(
    g: Graph,
    budget: int = FALLBACK_BUDGET,
    seed: int = 0,
    limit: int | None = ENUMERATION_LIMIT,
) -> WitnessReport:
    """Find a permutation raising the domination number of the prism, or show ``g`` is edgeless."""
    if g.m == 0:
        perm = Permutation.identity(g.n)
        return WitnessReport(
            g.n,
            Route.EDGELESS,
            perm,
            gamma_exact(build_prism(g, perm).graph).gamma,
            {},
            prism_fixer=True,
        )
    components = connected_components(g)
    if len(components) == 1:
        return _connected_witness(g, budget, seed, limit)

    gamma = gamma_exact(g).gamma
    prism_fixer = gamma_exact(build_prism(g, Permutation.identity(g.n)).graph).gamma == gamma
    for j, (comp, back) in enumerate(components):
        if comp.m == 0:
            continue
        inner = _connected_witness(comp, budget, seed, limit)
        if not inner.found or not (inner.increases or inner.violation):
            continue
        perm = compose_component_witness(g, components, j, inner.permutation)
        gamma_prism = gamma_exact(build_prism(g, perm).graph).gamma
        detail = {
            "component": j,
            "component_vertices": list(back),
            "inner_route": inner.construction.value,
            "inner_detail": inner.detail,
            "inner_gamma": inner.gamma_g,
            "inner_gamma_prism": inner.gamma_prism,
        }
        return WitnessReport(
            gamma, Route.OBSERVATION2, perm, gamma_prism, detail, prism_fixer, gamma_prism <= gamma
        )
    return WitnessReport(
        gamma, Route.OBSERVATION2, None, None, {"status": "NOT_FOUND"}, prism_fixer
    )
