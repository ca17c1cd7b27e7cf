"""Simple undirected graphs, vertex permutations, prisms and graph6 I/O.

Vertices are always the contiguous integers ``0..n-1``. Vertex sets cross the
public API as ``frozenset``; internally most routines work on Python ``int``
bitmasks, where bit ``v`` stands for vertex ``v``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class GraphFormatError(ValueError):
    """Raised for malformed graph6 input; ``offset`` is the offending byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


# bitmask helpers ------------------------------------------------------------


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(iter_mask(mask))


def iter_mask(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# graphs ---------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph stored as per-vertex neighbor sets."""

    n: int
    adj: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(self.adj) != self.n:
            raise ValueError(f"expected {self.n} adjacency sets, got {len(self.adj)}")
        for v, nbrs in enumerate(self.adj):
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise ValueError(f"neighbor {u} of {v} out of range")
                if u == v:
                    raise ValueError(f"self-loop at {v}")
                if v not in self.adj[u]:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        """The edgeless graph on ``n`` vertices."""
        return cls(n, tuple(frozenset() for _ in range(n)))

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(s) for s in self.adj), default=0)

    def min_degree(self) -> int:
        return min((len(s) for s in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    @cached_property
    def closed_masks(self) -> tuple[int, ...]:
        """Bitmask of ``N[v]`` for every vertex."""
        return tuple(to_mask(s) | (1 << v) for v, s in enumerate(self.adj))

    @cached_property
    def open_masks(self) -> tuple[int, ...]:
        return tuple(to_mask(s) for s in self.adj)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def check_vertices(self, vertices: Iterable[int]) -> frozenset[int]:
        s = frozenset(vertices)
        for v in s:
            if not (isinstance(v, int) and 0 <= v < self.n):
                raise ValueError(f"vertex label {v!r} out of range for n={self.n}")
        return s

    def is_connected(self) -> bool:
        return self.n <= 1 or len(connected_components(self)) == 1

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph on ``vertices``, relabeled ``vertices[i] -> i``."""
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            tuple(frozenset(index[u] for u in self.adj[v] if u in index) for v in vertices),
        )

    def relabel(self, perm: "Permutation") -> "Graph":
        """Isomorphic copy with vertex ``v`` renamed ``perm(v)``."""
        nbrs: list[frozenset[int]] = [frozenset()] * self.n
        for v in range(self.n):
            nbrs[perm(v)] = frozenset(perm(u) for u in self.adj[v])
        return Graph(self.n, tuple(nbrs))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def open_neighborhood(g: Graph, vertices: Iterable[int]) -> frozenset[int]:
    s = g.check_vertices(vertices)
    out: set[int] = set()
    for v in s:
        out |= g.adj[v]
    return frozenset(out)


def closed_neighborhood(g: Graph, vertices: Iterable[int]) -> frozenset[int]:
    """``N[S]``: the members of ``S`` together with all their neighbors."""
    s = g.check_vertices(vertices)
    return open_neighborhood(g, s) | s


def connected_components(g: Graph) -> list[tuple[Graph, tuple[int, ...]]]:
    """Split ``g`` into components, ordered by their smallest vertex.

    Each entry is ``(component, back_map)`` where ``back_map[i]`` is the label
    in ``g`` of component vertex ``i``; labels keep their relative order.
    """
    seen = [False] * g.n
    out = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        members = []
        while queue:
            v = queue.popleft()
            members.append(v)
            for u in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
        back = tuple(sorted(members))
        out.append((g.induced_subgraph(back), back))
    return out


# permutations ---------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``0..n-1``; ``mapping[v]`` is the image of ``v``."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mapping", tuple(self.mapping))
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"{self.mapping} is not a permutation of 0..{len(self.mapping) - 1}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        """Build from disjoint cycles; vertices not mentioned are fixed."""
        mapping = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for v in cyc:
                if not 0 <= v < n:
                    raise ValueError(f"label {v} out of range for n={n}")
                if v in seen:
                    raise ValueError(f"label {v} appears more than once")
                seen.add(v)
            for i, v in enumerate(cyc):
                mapping[v] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(mapping))

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        """Parse disjoint-cycle notation such as ``"(0 2 1)(3)"``.

        Labels may be separated by spaces or commas; fixed points may be
        omitted and an empty string (or ``"()"``) is the identity.
        """
        stripped = text.strip()
        if _CYCLE_RE.sub("", stripped).strip():
            raise ValueError(f"invalid cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            tokens = [t for t in re.split(r"[\s,]+", body.strip()) if t]
            try:
                cycles.append([int(t) for t in tokens])
            except ValueError:
                raise ValueError(f"invalid cycle notation: {text!r}") from None
        return cls.from_cycles(cycles, n)

    def __len__(self) -> int:
        return len(self.mapping)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def image(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(self.mapping[v] for v in vertices)

    def image_mask(self, mask: int) -> int:
        out = 0
        for v in iter_mask(mask):
            out |= 1 << self.mapping[v]
        return out

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.mapping)
        for v, w in enumerate(self.mapping):
            inv[w] = v
        return Permutation(tuple(inv))

    def then(self, other: "Permutation") -> "Permutation":
        """Apply ``self`` first, then ``other``."""
        if len(other) != len(self):
            raise ValueError("size mismatch")
        return Permutation(tuple(other.mapping[w] for w in self.mapping))

    def is_identity(self) -> bool:
        return all(v == w for v, w in enumerate(self.mapping))

    def support(self) -> frozenset[int]:
        return frozenset(v for v, w in enumerate(self.mapping) if v != w)

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest label, sorted by start."""
        seen = [False] * len(self.mapping)
        out = []
        for start in range(len(self.mapping)):
            if seen[start]:
                continue
            cyc = []
            v = start
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = self.mapping[v]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        """Disjoint-cycle notation with fixed points omitted; ``"()"`` for identity."""
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()}, n={len(self)})"


# prisms ---------------------------------------------------------------------


@dataclass(frozen=True)
class PrismGraph:
    """The prism of ``G`` with respect to a permutation.

    Vertex ``v`` of the first copy keeps label ``v``; its twin in the second
    copy is ``v + n``. ``copy_of[w]`` is 1 or 2, ``project[w]`` the source
    vertex in ``G``.
    """

    graph: Graph
    copy_of: tuple[int, ...]
    project: tuple[int, ...]
    source_permutation: Permutation
    base: Graph = field(repr=False)

    @property
    def n_base(self) -> int:
        return self.base.n

    def vertex(self, v: int, copy: int) -> int:
        if copy not in (1, 2):
            raise ValueError("copy must be 1 or 2")
        return v if copy == 1 else v + self.n_base

    def lift(self, vertices: Iterable[int], copy: int) -> frozenset[int]:
        """``A^i``: the copies of ``A`` inside copy ``i``."""
        return frozenset(self.vertex(v, copy) for v in vertices)

    def part(self, vertices: Iterable[int], copy: int) -> frozenset[int]:
        """``B^(i)``: the members of ``B`` lying in copy ``i``."""
        return frozenset(w for w in vertices if self.copy_of[w] == copy)

    def projection(self, vertices: Iterable[int]) -> frozenset[int]:
        """``p(B)``: source vertices with at least one copy in ``B``."""
        return frozenset(self.project[w] for w in vertices)


def build_prism(g: Graph, pi: Permutation) -> PrismGraph:
    """Two disjoint copies of ``g`` joined by the matching ``v -> pi(v) + n``."""
    n = g.n
    if len(pi) != n:
        raise ValueError(f"permutation has size {len(pi)}, graph has {n} vertices")
    nbrs: list[set[int]] = [set(s) for s in g.adj] + [{u + n for u in s} for s in g.adj]
    for v in range(n):
        w = pi(v) + n
        nbrs[v].add(w)
        nbrs[w].add(v)
    return PrismGraph(
        graph=Graph(2 * n, tuple(frozenset(s) for s in nbrs)),
        copy_of=(1,) * n + (2,) * n,
        project=tuple(range(n)) * 2,
        source_permutation=pi,
        base=g,
    )


def cartesian_prism(g: Graph) -> Graph:
    """``G □ K2``, i.e. the prism for the identity permutation."""
    return build_prism(g, Permutation.identity(g.n)).graph


# graph6 ---------------------------------------------------------------------

_HEADER = ">>graph6<<"


def _encode_size(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph too large for graph6")


def write_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 string (no header, no newline)."""
    bits = [1 if i in g.adj[j] else 0 for j in range(1, g.n) for i in range(j)]
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        body.append(chr(val + 63))
    return _encode_size(g.n) + "".join(body)


def parse_graph6(text: str) -> Graph:
    """Decode a single graph6 string; an optional ``>>graph6<<`` prefix is allowed."""
    s = text.strip("\r\n")
    base = 0
    if s.startswith(_HEADER):
        base = len(_HEADER)
        s = s[base:]
    if not s:
        raise GraphFormatError("empty graph6 string", base)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"invalid graph6 byte {ch!r}", base + i)

    def six(i: int) -> int:
        return ord(s[i]) - 63

    if s[0] != "~":
        n, pos = six(0), 1
    elif len(s) >= 2 and s[1] == "~":
        if len(s) < 8:
            raise GraphFormatError("truncated size header", base + len(s))
        n = 0
        for i in range(2, 8):
            n = (n << 6) | six(i)
        pos = 8
    else:
        if len(s) < 4:
            raise GraphFormatError("truncated size header", base + len(s))
        n = (six(1) << 12) | (six(2) << 6) | six(3)
        pos = 4

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = s[pos:]
    if len(body) < nbytes:
        raise GraphFormatError(
            f"truncated bit body: expected {nbytes} bytes, got {len(body)}", base + len(s)
        )
    if len(body) > nbytes:
        raise GraphFormatError("trailing garbage after graph6 body", base + pos + nbytes)

    nbrs: list[set[int]] = [set() for _ in range(n)]
    k = 0
    i, j = 0, 1
    for b in range(nbytes):
        val = six(pos + b)
        for shift in range(5, -1, -1):
            bit = (val >> shift) & 1
            if k < nbits:
                if bit:
                    nbrs[i].add(j)
                    nbrs[j].add(i)
                i += 1
                if i == j:
                    i, j = 0, j + 1
            elif bit:
                raise GraphFormatError("nonzero padding bits", base + pos + b)
            k += 1
    return Graph(n, tuple(frozenset(x) for x in nbrs))


def iter_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, text)`` for each graph line, 1-based.

    Blank lines and lines consisting only of a ``>>`` format header are
    skipped; a header prefixed to a graph is kept for ``parse_graph6``.
    """
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">>") and (not line.startswith(_HEADER) or line == _HEADER):
            continue
        yield lineno, line
