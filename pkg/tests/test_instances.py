"""Instance generators: shapes, colorings, and failure modes."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recolorlab import (
    ConfigInvalidError,
    InstanceSpec,
    count_conflicts,
    generate,
    greedy_coloring,
    grid_edges,
    is_bipartite,
    star_layout,
)
from recolorlab.oracles import check_complete_binary_tree


def gen(family, n, **kw):
    seed = kw.pop("seed", 0)
    return generate(InstanceSpec(family, n, **kw), random.Random(seed))


def degrees(g):
    return [len(g.adj[v]) for v in range(g.n)]


class TestShapes:
    def test_path(self):
        g, c = gen("path", 6)
        assert g.edge_count == 5
        assert sorted(degrees(g)) == [1, 1, 2, 2, 2, 2]
        assert c.colors == [1, 2, 1, 2, 1, 2]
        assert count_conflicts(g, c) == 0

    def test_cycle(self):
        g, c = gen("cycle", 6)
        assert g.edge_count == 6
        assert degrees(g) == [2] * 6
        assert count_conflicts(g, c) == 0

    def test_odd_cycle_has_no_proper_two_coloring(self):
        with pytest.raises(ConfigInvalidError):
            gen("cycle", 5)

    def test_complete_binary_tree(self):
        g, c = gen("complete_binary_tree", 15)
        assert check_complete_binary_tree(g) == 4
        # depth parity: root 1, next level 2, ...
        assert c.colors[0] == 1 and c.colors[1] == c.colors[2] == 2
        assert count_conflicts(g, c) == 0

    def test_tree_size_must_fill_every_level(self):
        with pytest.raises(ConfigInvalidError):
            gen("complete_binary_tree", 6)

    def test_depth2_star(self):
        g, c = gen("depth2_star", 13)
        center, middles, leaves = star_layout(13)
        assert center == 0
        assert middles == [1, 2, 3, 4, 5, 6]
        assert leaves == [7, 8, 9, 10, 11, 12]
        assert g.edge_count == 12
        assert len(g.adj[center]) == 6
        for i, m in enumerate(middles):
            assert sorted(g.adj[m]) == [center, leaves[i]]
        assert count_conflicts(g, c) == 0

    def test_star_layout_rejects_even_sizes(self):
        with pytest.raises(ConfigInvalidError):
            star_layout(12)

    def test_star_forest_root_mode(self):
        g, c = gen("star_forest", 13, detached=3, detach_mode="root")
        center, middles, leaves = star_layout(13)
        # first 3 middles lost their center edge but keep their leaf
        for m in middles[:3]:
            assert g.adj[m] == [leaves[m - 1] + 0] or center not in g.adj[m]
            assert len(g.adj[m]) == 1
        for m in middles[3:]:
            assert center in g.adj[m] and len(g.adj[m]) == 2
        assert g.edge_count == 12 - 3
        assert count_conflicts(g, c) == 0
        # detached middles sit on color 2, so re-attaching conflicts
        assert all(c.colors[m] == 2 for m in middles[:3])
        assert c.colors[center] == 2

    def test_star_forest_root_mode_needs_n_4k_plus_1(self):
        with pytest.raises(ConfigInvalidError):
            gen("star_forest", 15, detached=3, detach_mode="root")

    def test_star_forest_leaf_mode(self):
        g, c = gen("star_forest", 13, detached=3, detach_mode="leaf")
        center, middles, leaves = star_layout(13)
        for i, m in enumerate(middles):
            assert center in g.adj[m]
            attached = leaves[i] in g.adj[m]
            assert attached == (i >= 3)
        assert count_conflicts(g, c) == 0
        # detached leaves share their middle's color, so re-attaching conflicts
        for i in range(3):
            assert c.colors[leaves[i]] == c.colors[middles[i]] == 1

    def test_star_forest_detached_bounds(self):
        with pytest.raises(ConfigInvalidError):
            gen("star_forest", 13, detached=6, detach_mode="leaf")
        with pytest.raises(ConfigInvalidError):
            gen("star_forest", 13, detached=0, detach_mode="leaf")

    def test_random_bipartite(self):
        g, c = gen("random_bipartite", 20, edge_prob=0.4, seed=5)
        assert is_bipartite(g).ok
        half = 10
        for u in range(half):
            assert all(v >= half for v in g.adj[u])
        assert count_conflicts(g, c) == 0

    def test_unknown_family(self):
        with pytest.raises(ConfigInvalidError):
            gen("hypercube", 8)


class TestGrid:
    def test_edge_count(self):
        # rows*(cols-1) horizontal + (rows-1)*cols vertical + one diagonal per cell
        for rows, cols in [(2, 2), (2, 3), (4, 4), (3, 7)]:
            m = len(grid_edges(rows, cols))
            assert m == rows * (cols - 1) + (rows - 1) * cols + (rows - 1) * (cols - 1)

    def test_diagonal_orientation(self):
        # "/" joins the top-right and bottom-left corners of each cell
        edges = set(grid_edges(2, 2))
        assert (1, 2) in edges and (0, 3) not in edges
        edges = set(grid_edges(2, 2, diagonal="\\"))
        assert (0, 3) in edges and (1, 2) not in edges

    def test_max_degree_at_most_six(self):
        g, _ = gen("grid", 36, rows=6, cols=6)
        assert max(degrees(g)) <= 6

    def test_greedy_coloring_uses_at_most_four_colors(self):
        # row-major first-fit sees at most 3 earlier neighbors per vertex
        for rows, cols in [(3, 3), (5, 8), (10, 10)]:
            g, c = gen("grid", rows * cols, rows=rows, cols=cols)
            assert count_conflicts(g, c) == 0
            assert c.max_color() <= 4

    def test_square_inferred_from_n(self):
        g, _ = gen("grid", 25)
        assert g.n == 25

    def test_non_square_needs_rows_and_cols(self):
        with pytest.raises(ConfigInvalidError):
            gen("grid", 12)
        g, _ = gen("grid", 12, rows=3, cols=4)
        assert g.n == 12


class TestColoringModes:
    def test_inverted_swaps_the_two_classes(self):
        g, c = gen("path", 6, coloring="inverted")
        assert c.colors == [2, 1, 2, 1, 2, 1]
        assert count_conflicts(g, c) == 0

    def test_random_mode_respects_palette(self):
        g, c = gen("path", 50, coloring="random", palette=3, seed=9)
        assert c.palette == 3
        assert set(c.colors) <= {1, 2, 3}

    def test_random_mode_defaults_palette_to_degree_plus_one(self):
        g, c = gen("path", 200, coloring="random", seed=3)
        assert set(c.colors) <= {1, 2, 3}  # max degree 2

    def test_unknown_mode(self):
        with pytest.raises(ConfigInvalidError):
            gen("path", 6, coloring="rainbow")


class TestGreedyColoring:
    @given(st.integers(4, 30), st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_proper_and_bounded_on_random_graphs(self, n, seed):
        rng = random.Random(seed)
        g, _ = gen("random_bipartite", 2 * ((n + 1) // 2), edge_prob=0.3, seed=seed)
        colors = greedy_coloring(g)
        assert count_conflicts(g, colors) == 0
        assert max(colors) <= max(degrees(g)) + 1

    def test_custom_order(self):
        g, _ = gen("path", 4)
        assert greedy_coloring(g, order=[3, 2, 1, 0]) == [2, 1, 2, 1]
