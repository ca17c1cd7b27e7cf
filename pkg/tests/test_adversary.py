import random

import pytest
from conftest import complete, cycle, disjoint_union, path, star
from fixtures import CHAIN_A, CHAIN_CLOSING, CHAIN_X, chain_family, chain_graph
from hypothesis import given, settings
from test_graph import graphs

from domfix.adversary import (
    ChainIndexing,
    ChainIndexingError,
    Route,
    build_alpha_chain,
    build_alpha_private_cycle,
    build_chain_indexing,
    chain_cycle,
    check_chain_cycle,
    compose_component_witness,
    fallback_witness_search,
    find_witness,
    select_private_neighbor,
)
from domfix.corpus import planted_prism_fixer
from domfix.domination import dominates_set, gamma_exact
from domfix.fixers import SymmetricGammaSet, find_symmetric_gamma_sets
from domfix.graph import Graph, Permutation, build_prism, cartesian_prism, connected_components


def prism_gamma(g, pi):
    return gamma_exact(build_prism(g, pi).graph).gamma


class TestPrivateCycle:
    def test_select_c6(self):
        assert select_private_neighbor(cycle(6), [0, 3], 0) == 1

    def test_select_c4_single(self):
        assert select_private_neighbor(cycle(4), [0], 0) == 1

    def test_select_star(self):
        assert select_private_neighbor(star(3), [0], 0) == 1

    def test_select_requires_packing(self):
        with pytest.raises(ValueError):
            select_private_neighbor(cycle(4), [0, 2], 0)
        with pytest.raises(ValueError):
            select_private_neighbor(cycle(4), [0], 2)

    def test_c6(self):
        alpha = build_alpha_private_cycle(cycle(6), [0, 3])
        assert alpha.cycle_string() == "(0 3 1)"
        assert alpha.support() == {0, 1, 3}

    def test_transposition(self):
        alpha = build_alpha_private_cycle(cycle(4), [0])
        assert alpha.cycle_string() == "(0 1)"

    def test_c4_pair_is_not_a_packing(self):
        # {0, 2} leaves 0 with no private neighbor, so the construction refuses;
        # the cycle (0 2 1) itself still raises gamma of C4
        with pytest.raises(ValueError):
            build_alpha_private_cycle(cycle(4), [0, 2])
        assert prism_gamma(cycle(4), Permutation.parse("(0 2 1)", 4)) == 3

    def test_empty(self):
        with pytest.raises(ValueError):
            build_alpha_private_cycle(cycle(4), [])

    def test_single_cycle_shape(self):
        g, ((big, _),) = planted_prism_fixer(13, (4, 1), random.Random(5))
        d1 = sorted(big)
        alpha = build_alpha_private_cycle(g, d1)
        (cyc,) = alpha.cycles()
        assert len(cyc) == 5 and list(cyc[:4]) == d1


class TestChain:
    def test_c4(self, c4):
        family = [SymmetricGammaSet(frozenset({0}), frozenset({2})),
                  SymmetricGammaSet(frozenset({1}), frozenset({3}))]  # fmt: skip
        ci = build_chain_indexing(c4, family)
        assert ci.to_dict() == {"x": [[0], [1]], "a": [0]}
        alpha = build_alpha_chain(ci, 4)
        assert alpha.cycle_string() == "(0 1)"
        assert prism_gamma(c4, alpha) == 3
        assert check_chain_cycle(c4, ci, alpha)

    def test_fixture_indexing(self):
        g = chain_graph()
        ci = build_chain_indexing(g, chain_family())
        assert ci.x == CHAIN_X and ci.a == CHAIN_A
        assert (ci.m, ci.k) == (3, 4)

    def test_fixture_cross_edges(self):
        g = chain_graph()
        alpha = build_alpha_chain(build_chain_indexing(g, chain_family()), g.n)
        prism = build_prism(g, alpha)
        cross = {u: v - g.n for u, v in prism.graph.edges() if prism.copy_of[u] != prism.copy_of[v]}
        for i in range(2):
            for j in range(4):
                assert cross[CHAIN_X[i][j]] == CHAIN_X[i + 1][j]
        for u, v in CHAIN_CLOSING.items():
            assert cross[u] == v
        assert all(cross[v] == v for v in range(12, 24))

    def test_fixture_cycle(self):
        g = chain_graph()
        ci = build_chain_indexing(g, chain_family())
        alpha = build_alpha_chain(ci, g.n)
        assert check_chain_cycle(g, ci, alpha)
        # (x_{3,a_1}, x_{1,2}, x_{3,a_2}, x_{1,3}, ..., x_{3,a_4}, x_{1,1})
        want = []
        for j in range(4):
            want += [CHAIN_X[2][CHAIN_A[j]], CHAIN_X[0][(j + 1) % 4]]
        assert chain_cycle(g, ci, alpha) == want

    def test_fixture_raises_gamma(self):
        g = chain_graph()
        alpha = build_alpha_chain(build_chain_indexing(g, chain_family()), g.n)
        gamma = gamma_exact(g).gamma
        assert gamma_exact(cartesian_prism(g)).gamma == 8
        assert prism_gamma(g, alpha) == 10 > 8 > gamma

    def test_fixture_splits_dominate(self):
        g = chain_graph()
        everything = set(range(g.n))
        for s in chain_family():
            assert dominates_set(g, s.d1, everything - s.d2)
            assert dominates_set(g, s.d2, everything - s.d1)

    def test_broken_cycle_detected(self):
        g = chain_graph()
        ci = build_chain_indexing(g, chain_family())
        # this closing map sends x_{1,1} back to itself after one step
        bad = ChainIndexing(ci.x, (0, 2, 3, 1))
        assert not check_chain_cycle(g, bad, build_alpha_chain(bad, g.n))

    def test_errors(self, c4):
        one = SymmetricGammaSet(frozenset({0}), frozenset({2}))
        with pytest.raises(ChainIndexingError):
            build_chain_indexing(c4, [one])
        with pytest.raises(ChainIndexingError):
            build_chain_indexing(c4, [one, SymmetricGammaSet(frozenset({0}), frozenset({1}))])
        with pytest.raises(ChainIndexingError):
            build_chain_indexing(cycle(6), [one, SymmetricGammaSet(frozenset({3}), frozenset({4}))])
        with pytest.raises(ChainIndexingError):
            build_alpha_chain(ChainIndexing(((0,), (1,)), (1,)), 4)


class TestCompose:
    def test_k3_k2(self):
        g = disjoint_union(complete(3), complete(2))
        comps = connected_components(g)
        pi = compose_component_witness(g, comps, 0, Permutation.identity(3))
        assert pi.is_identity()
        assert gamma_exact(g).gamma == 2
        assert prism_gamma(g, pi) == 4

    def test_acts_on_one_component(self):
        g = disjoint_union(cycle(4), path(3))
        comps = connected_components(g)
        pi = compose_component_witness(g, comps, 1, Permutation.parse("(0 2)", 3))
        assert pi.mapping == (0, 1, 2, 3, 6, 5, 4)

    @given(graphs(max_n=8))
    @settings(max_examples=60, deadline=None)
    def test_component_sum(self, g):
        comps = connected_components(g)
        for j, (comp, _) in enumerate(comps):
            if comp.n < 2:
                continue
            pi_j = Permutation(tuple(reversed(range(comp.n))))
            pi = compose_component_witness(g, comps, j, pi_j)
            others = sum(gamma_exact(cartesian_prism(c)).gamma for i, (c, _) in enumerate(comps) if i != j)
            assert prism_gamma(g, pi) == others + prism_gamma(comp, pi_j)

    def test_errors(self, c4):
        comps = connected_components(c4)
        with pytest.raises(IndexError):
            compose_component_witness(c4, comps, 1, Permutation.identity(4))
        with pytest.raises(ValueError):
            compose_component_witness(c4, comps, 0, Permutation.identity(3))


class TestFallback:
    @pytest.mark.parametrize("g", [complete(3), path(4)], ids=["K3", "P4"])
    def test_identity(self, g):
        assert fallback_witness_search(g).is_identity()

    def test_c4(self, c4):
        pi = fallback_witness_search(c4)
        assert pi is not None and prism_gamma(c4, pi) == 3

    def test_random_branch(self, c4):
        pi = fallback_witness_search(c4, budget=200, seed=1, exhaustive_below=0)
        assert pi is not None and prism_gamma(c4, pi) == 3

    def test_budget_exhausted(self, c4):
        assert fallback_witness_search(c4, budget=0, exhaustive_below=0) is None

    def test_edgeless(self):
        with pytest.raises(ValueError):
            fallback_witness_search(Graph.empty(3))


class TestFindWitness:
    def test_edgeless(self):
        r = find_witness(Graph.empty(5))
        assert r.construction is Route.EDGELESS and r.gamma_g == r.gamma_prism == 5
        assert not r.violation

    def test_k3(self, k3):
        r = find_witness(k3)
        assert r.construction is Route.IDENTITY and (r.gamma_g, r.gamma_prism) == (1, 2)
        assert r.prism_fixer is False

    def test_c4(self, c4):
        r = find_witness(c4)
        assert r.construction is Route.FALLBACK_SEARCH
        assert (r.gamma_g, r.gamma_prism) == (2, 3) and r.prism_fixer

    def test_disconnected(self):
        r = find_witness(disjoint_union(cycle(4), Graph.empty(1)))
        assert r.construction is Route.OBSERVATION2 and r.increases
        assert r.detail["inner_route"] == "FALLBACK_SEARCH"

    def test_chain_fixture_through_dispatcher(self):
        # the fixture's splits are not minimum, so the dispatcher never reaches THEOREM6 on it
        r = find_witness(chain_graph())
        assert r.increases and not r.violation

    @pytest.mark.parametrize(
        "sizes, copies, route",
        [((2, 2), 1, Route.THEOREM4), ((3, 1), 1, Route.THEOREM5), ((2, 2), 3, Route.THEOREM6)],
    )
    def test_planted_routes(self, sizes, copies, route):
        rng = random.Random(11)
        for _ in range(400):
            n = 12 if copies > 1 else 10
            g, _ = planted_prism_fixer(n, sizes, rng, edge_prob=0.2, copies=copies)
            if not g.is_connected() or gamma_exact(g).gamma != 4:
                continue
            r = find_witness(g)
            if r.construction is route:
                assert r.increases and not r.violation
                assert find_symmetric_gamma_sets(g)
                if route is Route.THEOREM6:
                    assert r.detail["chain_cycle_ok"]
                return
        pytest.fail(f"no planted graph took route {route.value}")
