"""Frozen graphs shared by the adversary and acceptance tests."""

from domfix.fixers import SymmetricGammaSet
from domfix.graph import Graph

# Chain fixture with m = 3 rows of k = 4.
# x[i][j] = 4*i + j; Y rows are 12..15, 16..19, 20..23.
# The first and last X rows close through a = (1, 3, 2, 0).
CHAIN_X = ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11))
CHAIN_Y = ((12, 13, 14, 15), (16, 17, 18, 19), (20, 21, 22, 23))
CHAIN_A = (1, 3, 2, 0)
CHAIN_EDGES = [
    (0, 4), (1, 5), (2, 6), (3, 7),
    (4, 8), (5, 9), (6, 10), (7, 11),
    (0, 9), (1, 11), (2, 10), (3, 8),
    (0, 18), (0, 20), (1, 16), (1, 21), (2, 17), (2, 23), (3, 19), (3, 22),
    (4, 12), (4, 21), (5, 14), (5, 20), (6, 13), (6, 23), (7, 15), (7, 22),
    (8, 14), (8, 19), (9, 12), (9, 17), (10, 15), (10, 18), (11, 13), (11, 16),
    (12, 18), (12, 23), (13, 16), (13, 21), (14, 19), (14, 22), (15, 17), (15, 20),
    (16, 21), (17, 20), (18, 22), (19, 23),
]  # fmt: skip
CHAIN_GRAPH6 = "W?`@?_W`@CGGAC?`?c?AOO@O_OS?S?`@AC?SQ?Q?a@CCOOG"
# cross edges of the figure: row i+1 follows row i; the last row closes onto
# the first as x32->x12, x34->x13, x33->x14, x31->x11
CHAIN_CLOSING = {9: 1, 11: 2, 10: 3, 8: 0}


def chain_graph() -> Graph:
    return Graph.from_edges(24, CHAIN_EDGES)


def chain_family() -> list[SymmetricGammaSet]:
    return [SymmetricGammaSet(frozenset(x), frozenset(y)) for x, y in zip(CHAIN_X, CHAIN_Y)]
