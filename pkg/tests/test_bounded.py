"""Fixed-palette search: mutation laws, selection, and full runs."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recolorlab import (
    BoundedState,
    Coloring,
    StopRule,
    build_graph,
    count_conflicts,
    ea_step,
    recount_all,
    rls_step,
    run_bounded,
    targeted_ea_step,
    targeted_rls_step,
)
from recolorlab.bounded import (
    _binomial_cdf_table,
    _different_color,
    sample_mutation_count,
)


def path_graph(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def fresh_state(colors, k, seed=0, g=None):
    g = g or path_graph(len(colors))
    return BoundedState(g, Coloring(list(colors), k), k, random.Random(seed))


class TestMutationPrimitives:
    def test_two_color_flip_is_deterministic(self):
        rng = random.Random(0)
        assert _different_color(rng, 1, 2) == 2
        assert _different_color(rng, 2, 2) == 1

    def test_different_color_is_uniform_and_never_current(self):
        rng = random.Random(1)
        counts = {c: 0 for c in (1, 3, 4, 5)}
        trials = 40_000
        for _ in range(trials):
            c = _different_color(rng, 2, 5)
            counts[c] += 1
        for c, cnt in counts.items():
            assert abs(cnt / trials - 0.25) < 0.01

    def test_binomial_table_matches_exact_cdf(self):
        for n in (2, 5, 30):
            table = _binomial_cdf_table(n)
            p = 1.0 / n
            acc = 0.0
            for m, cum in enumerate(table[:-1]):
                acc += math.comb(n, m) * p**m * (1 - p) ** (n - m)
                assert cum == pytest.approx(acc, abs=1e-12)
            assert table[-1] == 1.0

    def test_mutation_count_moments(self):
        state = fresh_state([1, 2] * 5, 2, seed=7)
        trials = 200_000
        total = zeros = 0
        for _ in range(trials):
            m = sample_mutation_count(state)
            total += m
            zeros += m == 0
        assert total / trials == pytest.approx(1.0, abs=0.02)  # Binomial(n, 1/n)
        assert zeros / trials == pytest.approx((1 - 0.1) ** 10, abs=0.01)


class TestLocalSearchStep:
    def test_rejects_move_that_breaks_a_proper_coloring(self):
        state = fresh_state([1, 2], 2, seed=3)
        for _ in range(50):
            accepted = rls_step(state)
            assert not accepted
            assert state.colors == [1, 2]
        assert state.iteration == 50  # rejected moves still count

    def test_accepts_equal_fitness_moves(self):
        # isolated vertex: any flip keeps 0 conflicts and is accepted
        g = build_graph(1, [])
        state = BoundedState(g, Coloring([1], 3), 3, random.Random(0))
        assert rls_step(state)
        assert state.colors[0] in (2, 3)

    def test_resolves_single_conflict_on_path(self):
        g = path_graph(8)
        colors = [1, 2, 1, 1, 2, 1, 2, 1]  # one conflict at (2, 3)
        res = run_bounded("rls", g, Coloring(colors, 2), 2, StopRule(10_000), random.Random(5))
        assert not res.censored
        assert res.final_conflicts == 0

    def test_rls_respects_palette(self):
        state = fresh_state([1, 1, 1, 1], 3, seed=11)
        for _ in range(300):
            rls_step(state)
        assert all(1 <= c <= 3 for c in state.colors)


class TestTargetedLocalSearch:
    def test_conflict_vertex_preferred_with_half_probability(self):
        # one conflicting edge (0, 1) on a 10-path; a step changes vertex 0
        # or 1 with probability 1/2 + 2/(2n) = 0.6 (any such move is kept)
        n, trials, hits = 10, 60_000, 0
        base = [1, 1, 2, 1, 2, 1, 2, 1, 2, 1]
        g = path_graph(n)
        master = random.Random(99)
        for _ in range(trials):
            state = BoundedState(g, Coloring(list(base), 10), 10, random.Random(master.getrandbits(48)))
            targeted_rls_step(state)
            if state.colors[0] != 1 or state.colors[1] != 1:
                hits += 1
        assert hits / trials == pytest.approx(0.6, abs=0.01)

    def test_falls_back_to_uniform_when_proper(self):
        state = fresh_state([1, 2, 1, 2], 4, seed=2)
        for _ in range(200):
            targeted_rls_step(state)
            conf, _, _ = recount_all(state.graph, state.colors)
            assert conf == 0  # acceptance keeps properness

    def test_solves_single_conflict(self):
        g = path_graph(8)
        colors = [1, 2, 1, 1, 2, 1, 2, 1]
        res = run_bounded(
            "rls_targeted", g, Coloring(colors, 2), 2, StopRule(10_000), random.Random(5)
        )
        assert not res.censored


class TestEvolutionarySteps:
    def test_proper_offspring_rate_on_all_ones_path(self):
        # P3 colored [1,1,1], k=2: masks {v1} and {v0,v2} give the only
        # proper offspring: (1/3)(2/3)^2 + (1/3)^2(2/3) = 6/27
        g = path_graph(3)
        master = random.Random(4)
        trials, proper = 120_000, 0
        for _ in range(trials):
            state = BoundedState(g, Coloring([1, 1, 1], 2), 2, random.Random(master.getrandbits(48)))
            ea_step(state)
            proper += state.conflicts.edge_count == 0
        assert proper / trials == pytest.approx(6 / 27, abs=0.01)

    def test_targeted_rate_on_all_ones_path(self):
        # all three vertices conflict, so each flips with probability 1/2:
        # proper offspring masks {v1}, {v0,v2} now have mass 2/8
        g = path_graph(3)
        master = random.Random(8)
        trials, proper = 60_000, 0
        for _ in range(trials):
            state = BoundedState(g, Coloring([1, 1, 1], 2), 2, random.Random(master.getrandbits(48)))
            targeted_ea_step(state)
            proper += state.conflicts.edge_count == 0
        assert proper / trials == pytest.approx(2 / 8, abs=0.01)

    def test_non_conflicting_vertices_keep_low_rate_in_targeted_step(self):
        # conflict confined to (0, 1); vertex 5 should flip w.p. ~1/n
        n, trials, hits = 10, 60_000, 0
        base = [1, 1, 2, 1, 2, 2, 1, 2, 1, 2]  # conflicts at (0,1) and (4,5)
        g = path_graph(n)
        master = random.Random(17)
        for _ in range(trials):
            state = BoundedState(
                g, Coloring(list(base), 9), 9, random.Random(master.getrandbits(48))
            )
            # count mutation picks directly: run one step and diff all vertices
            targeted_ea_step(state)
            if state.colors[8] != base[8]:
                hits += 1
        # vertex 8 is non-conflicting: picked w.p. 1/10, kept only if the
        # offspring survives selection, so the rate stays well under 1/2
        assert hits / trials < 0.2

    def test_empty_mutation_counts_as_iteration(self):
        state = fresh_state([1, 2, 1, 2], 2, seed=0)
        before = state.iteration
        for _ in range(20):
            ea_step(state)
        assert state.iteration == before + 20


class TestRunBounded:
    def test_solved_instance_costs_zero_iterations(self):
        g = path_graph(4)
        res = run_bounded("ea", g, Coloring([1, 2, 1, 2], 2), 2, StopRule(100), random.Random(0))
        assert res.iterations == 0 and not res.censored

    def test_budget_censoring_on_infeasible_instance(self):
        g = build_graph(3, [(0, 1), (1, 2), (0, 2)])  # triangle, k=2
        res = run_bounded("rls", g, Coloring([1, 2, 1], 2), 2, StopRule(500), random.Random(0))
        assert res.censored
        assert res.iterations == 500
        assert res.final_conflicts >= 1

    def test_checkpoint_cadence(self):
        g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
        seen = []
        run_bounded(
            "rls",
            g,
            Coloring([1, 2, 1], 2),
            2,
            StopRule(350),
            random.Random(0),
            checkpoint=lambda s: seen.append(s.iteration),
            checkpoint_every=100,
        )
        assert seen == [100, 200, 300]

    def test_unknown_algorithm(self):
        g = path_graph(2)
        with pytest.raises(ValueError):
            run_bounded("annealing", g, Coloring([1, 2], 2), 2, StopRule(10), random.Random(0))

    def test_small_palette_rejected(self):
        g = path_graph(2)
        with pytest.raises(ValueError):
            BoundedState(g, Coloring([1, 1], 1), 1, random.Random(0))

    @pytest.mark.parametrize("algorithm", ["rls", "ea", "rls_targeted", "ea_targeted"])
    def test_every_algorithm_two_colors_an_even_cycle(self, algorithm):
        n = 12
        g = build_graph(n, [(i, (i + 1) % n) for i in range(n)])
        colors = [1, 2] * (n // 2)
        colors[0] = 2  # two conflicts
        res = run_bounded(algorithm, g, Coloring(colors, 2), 2, StopRule(200_000), random.Random(1))
        assert not res.censored, algorithm
        assert res.final_conflicts == 0


class TestConflictBookkeeping:
    @given(st.integers(0, 2**30))
    @settings(max_examples=30, deadline=None)
    def test_tracked_counts_match_recount_after_mixed_steps(self, seed):
        rng = random.Random(seed)
        n = rng.randrange(4, 16)
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.3:
                    edges.append((u, v))
        g = build_graph(n, edges)
        k = rng.randrange(2, 5)
        colors = [rng.randint(1, k) for _ in range(n)]
        state = BoundedState(g, Coloring(colors, k), k, rng)
        steps = [rls_step, ea_step, targeted_rls_step, targeted_ea_step]
        for _ in range(60):
            rng.choice(steps)(state)
        conf, _, _ = recount_all(g, state.colors)
        assert state.conflicts.edge_count == conf
        members = set(state.conflicts.member_list())
        expect = {
            v
            for v in range(n)
            if any(state.colors[u] == state.colors[v] for u in g.adj[v])
        }
        assert members == expect
