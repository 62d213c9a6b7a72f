import itertools

import pytest

from listchroma.core import EPS, partition_colors, root_state
from listchroma.master import (
    Column,
    DualSolution,
    DuplicateColumnError,
    FRACTIONAL_ON_BIG_SETS,
    INTEGRAL,
    LPResult,
    SINGLETON_FRACTIONAL_ONLY,
    add_columns,
    check_integrality,
    extract_integer_solution,
    init_with_dummies,
    node_lower_bound,
    solve_lp,
)

from conftest import make_instance


def master_for(inst):
    state = root_state(inst)
    return init_with_dummies(state, partition_colors(inst))


def brute_force_selection_cost(mp, columns):
    """Cheapest 0/1 column selection satisfying cover and class capacities."""
    best = None
    part = mp.partition
    n = mp.instance.n
    for picks in itertools.product([0, 1], repeat=len(columns)):
        covered = 0
        used = {}
        cost = 0
        for x, col in zip(picks, columns):
            if not x:
                continue
            covered |= col.mask
            cost += col.cost
            if col.class_rep in part.bounded:
                used[col.class_rep] = used.get(col.class_rep, 0) + 1
        if covered != (1 << n) - 1:
            continue
        if any(used.get(k, 0) > part.class_size[k] for k in part.bounded):
            continue
        if best is None or cost < best:
            best = cost
    return best


class TestInitWithDummies:
    def test_three_vertices_weight_sum_five(self):
        inst = make_instance(
            3, [(0, 1)], [[0, 1]] * 3, weights={0: 2, 1: 3}
        )
        mp = master_for(inst)
        assert mp.big_m == 6
        assert len(mp.columns) == 3
        assert all(c.is_dummy and c.cost == 6 for c in mp.columns)
        res = solve_lp(mp)
        assert res.objective == pytest.approx(18.0)

    def test_single_vertex(self):
        inst = make_instance(1, [], [[0]], weights={0: 4})
        mp = master_for(inst)
        res = solve_lp(mp)
        assert res.objective == pytest.approx(mp.big_m)

    def test_dummy_duals_hit_big_m(self):
        inst = make_instance(2, [], [[0], [0]], weights={0: 3})
        mp = master_for(inst)
        assert mp.big_m == 4
        res = solve_lp(mp)
        assert res.objective == pytest.approx(8.0)
        assert res.duals.pi == pytest.approx((4.0, 4.0))
        assert res.duals.gamma_of(0) == pytest.approx(0.0)


class TestSolveLP:
    def test_single_real_column_wins(self):
        inst = make_instance(2, [], [[0], [0]], weights={0: 1})
        mp = master_for(inst)
        add_columns(mp, [Column(0b11, 0, 1)])
        res = solve_lp(mp)
        expected = brute_force_selection_cost(mp, mp.columns)
        assert expected == 1
        assert res.objective == pytest.approx(expected)
        assert res.values[2] == pytest.approx(1.0)

    def test_singleton_cover_of_triangle(self):
        inst = make_instance(3, [(0, 1), (1, 2), (0, 2)], [[0, 1, 2]] * 3, weights={0: 2, 1: 2, 2: 2})
        mp = master_for(inst)
        add_columns(mp, [Column(1 << v, 0, 2) for v in range(3)])
        res = solve_lp(mp)
        expected = brute_force_selection_cost(mp, mp.columns)
        assert expected == 6
        assert res.objective == pytest.approx(expected)

    def test_pool_dual_feasibility_and_slackness(self):
        inst = make_instance(4, [(0, 1), (1, 2), (2, 3)], [[0, 1]] * 4, weights={0: 2, 1: 5})
        mp = master_for(inst)
        add_columns(
            mp,
            [
                Column(0b0101, 0, 2),
                Column(0b1010, 0, 2),
                Column(0b0101, 1, 5),
                Column(0b1001, 0, 2),
            ],
        )
        res = solve_lp(mp)
        tol = EPS * max(1.0, mp.big_m)
        for col, x in zip(res.columns, res.values):
            gamma = 0.0 if col.is_dummy else res.duals.gamma_of(col.class_rep)
            reduced = sum(res.duals.pi[v] for v in col.vertices()) - (col.cost + gamma)
            assert reduced <= tol
            if x > EPS:
                assert abs(reduced) <= tol
        # primal feasibility and row-side complementary slackness
        for v in range(inst.n):
            cover = sum(
                x for col, x in zip(res.columns, res.values) if col.mask >> v & 1
            )
            assert cover >= 1 - EPS
            if cover > 1 + EPS:
                assert res.duals.pi[v] <= tol
        for k in mp.partition.bounded:
            used = sum(
                x
                for col, x in zip(res.columns, res.values)
                if col.class_rep == k
            )
            assert used <= mp.partition.class_size[k] + EPS
            if used < mp.partition.class_size[k] - EPS:
                assert res.duals.gamma_of(k) <= tol

    def test_objective_never_increases_with_columns(self):
        inst = make_instance(3, [(0, 1), (1, 2)], [[0, 1]] * 3, weights={0: 1, 1: 2})
        mp = master_for(inst)
        prev = solve_lp(mp).objective
        for col in [Column(0b101, 0, 1), Column(0b010, 0, 1), Column(0b101, 1, 2)]:
            add_columns(mp, [col])
            cur = solve_lp(mp).objective
            assert cur <= prev + EPS
            prev = cur

    def test_big_m_dominance(self):
        inst = make_instance(2, [(0, 1)], [[0, 1]] * 2, weights={0: 1, 1: 2})
        mp = master_for(inst)
        add_columns(mp, [Column(0b01, 0, 1), Column(0b10, 0, 1), Column(0b01, 1, 2), Column(0b10, 1, 2)])
        res = solve_lp(mp)
        assert res.objective < mp.big_m
        assert all(
            x <= EPS for col, x in zip(res.columns, res.values) if col.is_dummy
        )

    def test_deterministic_given_pool(self):
        inst = make_instance(3, [(0, 1)], [[0, 1]] * 3)
        mp = master_for(inst)
        add_columns(mp, [Column(0b101, 0, 1), Column(0b010, 0, 1)])
        a = solve_lp(mp)
        b = solve_lp(mp)
        assert a == b


class TestAddColumns:
    def test_grows_pool(self):
        inst = make_instance(2, [], [[0], [0, 1]])
        mp = master_for(inst)
        add_columns(mp, [Column(0b11, 0, 1)])
        assert len(mp.columns) == 3

    def test_one_column_per_class(self):
        inst = make_instance(2, [], [[0, 1], [0, 1]], weights={0: 1, 1: 2})
        mp = master_for(inst)
        part = partition_colors(inst)
        cols = [Column(0b11, k, inst.weights[k]) for k in part.reps]
        add_columns(mp, cols)
        assert len(mp.columns) == 2 + len(part.reps)

    def test_duplicate_rejected(self):
        inst = make_instance(2, [], [[0], [0, 1]])
        mp = master_for(inst)
        add_columns(mp, [Column(0b11, 0, 1)])
        with pytest.raises(DuplicateColumnError):
            add_columns(mp, [Column(0b11, 0, 1)])

    def test_unstable_column_rejected(self):
        inst = make_instance(2, [(0, 1)], [[0], [0, 1]])
        mp = master_for(inst)
        with pytest.raises(ValueError):
            add_columns(mp, [Column(0b11, 0, 1)])


def fake_result(columns, values, objective=0.0):
    n = max(max(c.vertices()) for c in columns) + 1
    return LPResult(
        objective=objective,
        values=tuple(values),
        columns=tuple(columns),
        duals=DualSolution(tuple([0.0] * n), {}),
    )


class TestCheckIntegrality:
    def test_integral(self):
        cols = [Column(0b011, 0, 1), Column(0b100, 0, 1), Column(0b001, None, 9)]
        res = fake_result(cols, [1.0, 1.0, 0.0])
        verdict = check_integrality(res)
        assert verdict.kind == INTEGRAL
        assert verdict.selection == (0, 1)

    def test_fractional_big_set(self):
        cols = [Column(0b011, 0, 1), Column(0b101, 0, 1), Column(0b010, 0, 1)]
        res = fake_result(cols, [0.5, 0.5, 0.5])
        assert check_integrality(res).kind == FRACTIONAL_ON_BIG_SETS

    def test_singleton_fractional_only(self):
        cols = [Column(0b011, 0, 1), Column(0b100, 0, 1), Column(0b100, 1, 1)]
        res = fake_result(cols, [1.0, 0.5, 0.5])
        assert check_integrality(res).kind == SINGLETON_FRACTIONAL_ONLY


class TestExtractIntegerSolution:
    def test_degenerate_singleton_split(self):
        # big column covers {0,1}; vertex 2 splits 0.5/0.5 over two
        # equal-cost singleton columns of distinct classes
        inst = make_instance(
            3, [], [[0, 2], [0], [1, 2]], weights={0: 1, 1: 2, 2: 2}
        )
        mp = master_for(inst)
        add_columns(mp, [Column(0b011, 0, 1), Column(0b100, 1, 2), Column(0b100, 2, 2)])
        res = LPResult(
            objective=3.0,
            values=(0.0, 0.0, 0.0, 1.0, 0.5, 0.5),
            columns=tuple(mp.columns),
            duals=DualSolution((1.0, 0.0, 2.0), {}),
        )
        ext = extract_integer_solution(mp, res)
        assert len(ext.selection) == 2
        assert ext.objective == pytest.approx(3.0)
        assert brute_force_selection_cost(mp, mp.columns) == 3

    def test_class_capacity_respected(self):
        # two isolated vertices; class 0 (cost 2) capped at one stable set,
        # class 1 (cost 3) takes the other vertex: optimum 5, fractional LP
        # point 0.5 everywhere has the same value
        inst = make_instance(2, [], [[0, 1], [0, 1]], weights={0: 2, 1: 3})
        mp = master_for(inst)
        part = mp.partition
        assert part.bounded == frozenset({0, 1})
        cols = [
            Column(0b01, 0, 2),
            Column(0b10, 0, 2),
            Column(0b01, 1, 3),
            Column(0b10, 1, 3),
        ]
        add_columns(mp, cols)
        res = LPResult(
            objective=5.0,
            values=(0.0, 0.0, 0.5, 0.5, 0.5, 0.5),
            columns=tuple(mp.columns),
            duals=DualSolution((2.5, 2.5), {0: 0.5}),
        )
        ext = extract_integer_solution(mp, res)
        assert ext.objective == pytest.approx(5.0)
        chosen = [res.columns[i] for i in ext.selection]
        per_class = {}
        covered = 0
        for col in chosen:
            covered |= col.mask
            per_class[col.class_rep] = per_class.get(col.class_rep, 0) + 1
        assert covered == 0b11
        assert all(per_class.get(k, 0) <= part.class_size[k] for k in part.bounded)
        # independent enumeration of every 0/1 selection
        assert brute_force_selection_cost(mp, mp.columns) == 5

    def test_empty_residual_keeps_big_columns(self):
        inst = make_instance(2, [], [[0, 1], [0, 1]], weights={0: 1, 1: 1})
        mp = master_for(inst)
        add_columns(mp, [Column(0b11, 0, 1)])
        res = LPResult(
            objective=1.0,
            values=(0.0, 0.0, 1.0),
            columns=tuple(mp.columns),
            duals=DualSolution((1.0, 0.0), {}),
        )
        ext = extract_integer_solution(mp, res)
        assert ext.selection == (2,)
        assert ext.residual_vertices == ()


class TestNodeLowerBound:
    def test_rounds_up_within_eps(self):
        res = fake_result([Column(0b1, 0, 1)], [1.0], objective=2.000001)
        assert node_lower_bound(res, big_m=100) == 2

    def test_fractional_rounds_up(self):
        res = fake_result([Column(0b1, 0, 1)], [1.0], objective=2.5)
        assert node_lower_bound(res, big_m=100) == 3

    def test_big_m_means_infeasible(self):
        res = fake_result([Column(0b1, 0, 1)], [1.0], objective=100.0)
        assert node_lower_bound(res, big_m=100) is None
