import itertools

import numpy as np
import pytest
from scipy.special import expit

from otalign import CostMatrix, ShapeError, SizeError, SolverConfig, sinkhorn_solve, transport_cost
from otalign.oracle import entropic_ot_2x2, exact_ot_assignment, gw_exhaustive

from helpers import rand_cost, uniform_pair


def polytope_vertices(rows, cols):
    """All vertices of the uniform-marginal transportation polytope,
    enumerated over spanning-tree supports of the bipartite graph.
    Independent of the library's solvers."""
    a = np.full(rows, 1.0 / rows)
    b = np.full(cols, 1.0 / cols)
    cells = list(itertools.product(range(rows), range(cols)))
    vertices = []
    for support in itertools.combinations(cells, rows + cols - 1):
        # solve the marginal equations restricted to the support
        system = np.zeros((rows + cols, len(support)))
        for idx, (i, j) in enumerate(support):
            system[i, idx] = 1.0
            system[rows + j, idx] = 1.0
        rhs = np.concatenate([a, b])
        sol, residual, rank, _ = np.linalg.lstsq(system, rhs, rcond=None)
        if rank < len(support):
            continue
        fitted = system @ sol
        if np.max(np.abs(fitted - rhs)) > 1e-9 or np.any(sol < -1e-12):
            continue
        plan = np.zeros((rows, cols))
        for idx, (i, j) in enumerate(support):
            plan[i, j] = max(sol[idx], 0.0)
        vertices.append(plan)
    return vertices


class TestExactOTAssignment:
    def test_zero_cost_matching(self):
        cost = CostMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), kind="cross-modal")
        coupling, value = exact_ot_assignment(cost)
        assert value == 0.0
        assert coupling.values.tolist() == [[0.5, 0.0], [0.0, 0.5]]

    def test_single_row_polytope_is_a_point(self):
        cost = CostMatrix(np.array([[0.2, 0.4, 0.9]]), kind="cross-modal")
        coupling, value = exact_ot_assignment(cost)
        assert np.allclose(coupling.values, np.full((1, 3), 1.0 / 3.0))
        assert value == pytest.approx((0.2 + 0.4 + 0.9) / 3.0, abs=1e-15)

    def test_two_by_three_expansion(self):
        cost = CostMatrix(np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]), kind="cross-modal")
        coupling, value = exact_ot_assignment(cost)
        assert value == pytest.approx(0.0, abs=1e-15)
        # cross-check against exhaustive vertex enumeration
        best = min(float(np.sum(cost.values * v)) for v in polytope_vertices(2, 3))
        assert value == pytest.approx(best, abs=1e-12)

    def test_matches_vertex_enumeration_on_random_costs(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            cost = rand_cost(rng, 3, 4)
            _, value = exact_ot_assignment(cost)
            best = min(float(np.sum(cost.values * v)) for v in polytope_vertices(3, 4))
            assert value == pytest.approx(best, abs=1e-10)

    def test_lower_bounds_feasible_plans(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            cost = rand_cost(rng, 5, 3)
            a, b = uniform_pair(5, 3)
            _, value = exact_ot_assignment(cost)
            coupling, _ = sinkhorn_solve(cost, a, b, SolverConfig(beta=0.3))
            assert value <= transport_cost(cost, coupling) + 1e-9

    def test_expansion_limit(self):
        with pytest.raises(SizeError):
            exact_ot_assignment(CostMatrix(np.zeros((63, 62)), kind="cross-modal"))


class TestEntropic2x2:
    def test_constant_cost_gives_product(self):
        cost = CostMatrix(np.full((2, 2), 0.7), kind="cross-modal")
        plan = entropic_ot_2x2(cost, 0.3).values
        assert plan[0, 0] == pytest.approx(0.25, abs=1e-12)

    def test_entropy_dominates_at_large_beta(self):
        cost = CostMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), kind="cross-modal")
        plan = entropic_ot_2x2(cost, 1000.0).values
        assert plan[0, 0] == pytest.approx(0.25, abs=1e-3)

    def test_agrees_with_closed_form_sigmoid(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            values = rng.uniform(0.0, 2.0, (2, 2))
            cost = CostMatrix(values, kind="cross-modal")
            beta = float(rng.uniform(0.05, 1.0))
            gap = values[0, 0] + values[1, 1] - values[0, 1] - values[1, 0]
            expected = 0.5 * expit(-gap / (2.0 * beta))
            assert entropic_ot_2x2(cost, beta).values[0, 0] == pytest.approx(
                expected, abs=1e-12
            )

    def test_small_beta_concentrates(self):
        cost = CostMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), kind="cross-modal")
        t = entropic_ot_2x2(cost, 0.05).values[0, 0]
        assert t == pytest.approx(0.5 * expit(2.0 / 0.1), abs=1e-12)

    def test_non_2x2_rejected(self):
        with pytest.raises(ShapeError):
            entropic_ot_2x2(CostMatrix(np.zeros((2, 3)), kind="cross-modal"), 0.1)


class TestGWExhaustive:
    def test_identical_spaces_score_zero(self):
        rng = np.random.default_rng(24)
        from otalign import intra_modal_cost

        from helpers import rand_features

        edges = intra_modal_cost(rand_features(rng, 4))
        assert gw_exhaustive(edges, edges) == 0.0

    def test_equal_two_point_spaces(self):
        d = CostMatrix(np.array([[0.0, 0.8], [0.8, 0.0]]), kind="intra-modal")
        assert gw_exhaustive(d, d, grid_step=1e-3) == 0.0

    def test_two_point_grid_minimum(self):
        # off-diagonals 1 and 3: objective -24 t^2 + 12 t + 2 on [0, .5],
        # minimized at the endpoints with value 2
        d_a = CostMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), kind="intra-modal")
        d_l = CostMatrix(np.array([[0.0, 3.0], [3.0, 0.0]]), kind="intra-modal")
        assert gw_exhaustive(d_a, d_l, grid_step=1e-4) == pytest.approx(2.0, abs=1e-12)

    def test_three_point_relabeling(self):
        values = np.array(
            [
                [0.0, 0.3, 0.7],
                [0.3, 0.0, 1.1],
                [0.7, 1.1, 0.0],
            ]
        )
        perm = np.array([2, 0, 1])
        p = np.zeros((3, 3))
        p[np.arange(3), perm] = 1.0
        d_a = CostMatrix(values, kind="intra-modal")
        d_l = CostMatrix(p.T @ values @ p, kind="intra-modal")
        assert gw_exhaustive(d_a, d_l) == 0.0

    def test_unsupported_shape(self):
        with pytest.raises(SizeError):
            gw_exhaustive(
                CostMatrix(np.zeros((5, 5)), kind="intra-modal"),
                CostMatrix(np.zeros((5, 5)), kind="intra-modal"),
            )
