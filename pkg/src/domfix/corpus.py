"""Small-graph corpora: exhaustive connected graphs and planted prism fixers."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterator

import networkx as nx
import pynauty

from domfix.domination import find_dominating_set
from domfix.graph import Graph, Permutation, write_graph6

ATLAS_MAX_N = 7


def from_networkx(h: nx.Graph) -> Graph:
    index = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph.from_edges(len(index), ((index[u], index[v]) for u, v in h.edges()))


@lru_cache(maxsize=None)
def _atlas_connected(n: int) -> tuple[Graph, ...]:
    return tuple(
        from_networkx(h)
        for h in nx.graph_atlas_g()
        if h.number_of_nodes() == n and (n == 0 or nx.is_connected(h))
    )


def _canonical(g: Graph) -> tuple[bytes, Graph]:
    ng = pynauty.Graph(g.n, adjacency_dict={v: sorted(g.adj[v]) for v in range(g.n)})
    lab = pynauty.canon_label(ng)
    new = [0] * g.n
    for i, v in enumerate(lab):
        new[v] = i
    return pynauty.certificate(ng), g.relabel(Permutation(tuple(new)))


@lru_cache(maxsize=None)
def _augmented_connected(n: int) -> tuple[Graph, ...]:
    # every connected graph has a non-cut vertex, so extending connected
    # (n-1)-vertex graphs by one vertex reaches all of them
    seen: dict[bytes, Graph] = {}
    for parent in connected_graphs(n - 1):
        base = n - 1
        for nbrs in range(1, 1 << base):
            edges = parent.edges() + [(v, base) for v in range(base) if (nbrs >> v) & 1]
            cert, canon = _canonical(Graph.from_edges(n, edges))
            if cert not in seen:
                seen[cert] = canon
    return tuple(seen.values())


def connected_graphs(n: int, method: str = "auto") -> tuple[Graph, ...]:
    """All connected graphs on ``n`` vertices up to isomorphism.

    ``n <= 7`` comes from the networkx graph atlas; larger orders (or
    ``method="augment"``) use one-vertex extension with nauty canonical labels.
    """
    if n < 1:
        return ()
    if n == 1:
        return (Graph.empty(1),)
    if method == "atlas" or (method == "auto" and n <= ATLAS_MAX_N):
        if n > ATLAS_MAX_N:
            raise ValueError(f"graph atlas only covers n <= {ATLAS_MAX_N}")
        return _atlas_connected(n)
    return _augmented_connected(n)


def iter_connected(min_n: int, max_n: int) -> Iterator[Graph]:
    for n in range(min_n, max_n + 1):
        yield from connected_graphs(n)


def planted_prism_fixer(
    n: int,
    sizes: tuple[int, int],
    rng: random.Random,
    edge_prob: float = 0.3,
    copies: int = 1,
) -> tuple[Graph, list[tuple[frozenset[int], frozenset[int]]]]:
    """Random graph carrying ``copies`` pairwise disjoint splits ``[D1, D2]``.

    Every vertex outside a split gets exactly one neighbor in each of its
    parts and each split is independent; parts of different splits are joined
    by perfect matchings, which forces equal part sizes when ``copies > 1``.
    The remaining vertices are joined at random with probability
    ``edge_prob``. A split is a gamma-set (making the graph a prism fixer)
    only when nothing smaller dominates, so callers must filter on the
    domination number.
    """
    k1, k2 = sizes
    if min(k1, k2) < 1 or copies < 1:
        raise ValueError("parts must be nonempty")
    if copies > 1 and k1 != k2:
        raise ValueError("disjoint splits need equal part sizes")
    used = copies * (k1 + k2)
    rest = n - used
    if rest < 0 or (copies == 1 and rest < 2 * max(k1, k2)):
        raise ValueError(f"cannot plant {copies} x {sizes} in {n} vertices")
    parts = []
    start = 0
    for _ in range(copies):
        for k in (k1, k2):
            parts.append(list(range(start, start + k)))
            start += k
    outside = list(range(used, n))
    edges: list[tuple[int, int]] = []
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            if a // 2 != b // 2:
                image = parts[b][:]
                rng.shuffle(image)
                edges += list(zip(parts[a], image))
    for part in parts:
        k = len(part)
        order = outside[:]
        rng.shuffle(order)
        if copies == 1:
            # keeps every member of D with at least two outside neighbors
            owners = [part[i % k] for i in range(2 * k)]
            owners += [rng.choice(part) for _ in range(rest - 2 * k)]
        else:
            owners = [rng.choice(part) for _ in range(rest)]
        edges += list(zip(order, owners))
    edges += [
        (u, v) for i, u in enumerate(outside) for v in outside[i + 1 :] if rng.random() < edge_prob
    ]
    labels = list(range(n))
    rng.shuffle(labels)
    perm = Permutation(tuple(labels))
    g = Graph.from_edges(n, edges).relabel(perm)
    splits = [(perm.image(parts[2 * c]), perm.image(parts[2 * c + 1])) for c in range(copies)]
    return g, splits


def sample_planted_fixers(
    n: int,
    sizes: tuple[int, int],
    count: int,
    seed: int,
    copies: int = 1,
    edge_probs: tuple[float, ...] = (0.0, 0.1, 0.2, 0.4),
) -> Iterator[Graph]:
    """Draw ``count`` planted graphs and keep the connected ones whose planted
    splits really are gamma-sets."""
    rng = random.Random(seed)
    target = sizes[0] + sizes[1]
    for _ in range(count):
        g, _splits = planted_prism_fixer(n, sizes, rng, rng.choice(edge_probs), copies)
        if g.is_connected() and find_dominating_set(g, target - 1) is None:
            yield g


def _attachments(outside: list[int], part: list[int]) -> Iterator[tuple[int, ...]]:
    # owner of each outside vertex; every member owns at least two, and the
    # first outside vertex goes to the first member (members are interchangeable)
    for owners in itertools.product(part, repeat=len(outside)):
        if owners and owners[0] != part[0]:
            continue
        if all(owners.count(x) >= 2 for x in part):
            yield owners


def split_structured_fixers(n: int, sizes: tuple[int, int]) -> Iterator[Graph]:
    """Every connected graph, up to isomorphism, whose gamma-sets include an
    independent split ``[D1, D2]`` of the given sizes in which each outside vertex
    has exactly one neighbor in each part and each member has at least two
    outside neighbors.

    Those are exactly the connected prism fixers with that split shape, so
    this is an exhaustive search for them that only enumerates edge sets among
    the ``n - |D|`` outside vertices.
    """
    k1, k2 = sizes
    if min(k1, k2) < 1:
        raise ValueError("parts must be nonempty")
    d1, d2 = list(range(k1)), list(range(k1, k1 + k2))
    outside = list(range(k1 + k2, n))
    pairs = list(itertools.combinations(outside, 2))
    seen: set[bytes] = set()
    for own1 in _attachments(outside, d1):
        for own2 in _attachments(outside, d2):
            base = list(zip(outside, own1)) + list(zip(outside, own2))
            for mask in range(1 << len(pairs)):
                edges = base + [p for i, p in enumerate(pairs) if (mask >> i) & 1]
                g = Graph.from_edges(n, edges)
                if not g.is_connected() or find_dominating_set(g, k1 + k2 - 1) is not None:
                    continue
                cert, canon = _canonical(g)
                if cert not in seen:
                    seen.add(cert)
                    yield canon


def graph6_lines(graphs) -> Iterator[str]:
    for g in graphs:
        yield write_graph6(g)
