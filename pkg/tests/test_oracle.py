import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from listchroma.core import EmptyListError
from listchroma.oracle import TooLargeError, oracle_solve

from conftest import enumerate_optimum, k33_mirrored, make_instance


def test_triangle_needs_three_colors():
    inst = make_instance(3, [(0, 1), (1, 2), (0, 2)], [[0, 1, 2]] * 3)
    res = oracle_solve(inst)
    assert res.optimum == 3
    assert res.witness is not None and res.witness.weight == 3


def test_k33_mirrored_is_infeasible():
    inst = k33_mirrored()
    res = oracle_solve(inst)
    assert not res.feasible
    assert enumerate_optimum(inst) is None


def test_shared_color_on_edgeless_graph():
    inst = make_instance(4, [], [[0, 1], [0, 2], [0, 3], [0]])
    assert oracle_solve(inst).optimum == 1


def test_cap_enforced():
    inst = make_instance(15, [], [[0]] * 15)
    with pytest.raises(TooLargeError):
        oracle_solve(inst, cap=14)
    assert oracle_solve(inst, cap=15).optimum == 1


def test_witness_is_always_valid_and_minimal():
    rng = np.random.Generator(np.random.PCG64(3))
    for _ in range(150):
        n = int(rng.integers(1, 8))
        edges = [
            (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5
        ]
        ncolors = int(rng.integers(1, 5))
        lists = []
        try:
            inst = make_instance(
                n,
                edges,
                [
                    sorted(
                        rng.choice(ncolors, size=int(rng.integers(1, ncolors + 1)), replace=False)
                    )
                    for _ in range(n)
                ],
                weights={j: int(rng.integers(0, 5)) for j in range(ncolors)},
            )
        except EmptyListError:
            continue
        res = oracle_solve(inst)
        full = enumerate_optimum(inst)
        assert res.optimum == full
        if res.feasible:
            assert res.witness.weight == res.optimum


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_pruned_matches_unpruned_enumeration(data):
    n = data.draw(st.integers(min_value=1, max_value=6))
    ncolors = data.draw(st.integers(min_value=1, max_value=4))
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if data.draw(st.booleans(), label=f"edge{u},{v}")
    ]
    lists = [
        data.draw(
            st.lists(
                st.integers(min_value=0, max_value=ncolors - 1),
                min_size=1,
                max_size=ncolors,
                unique=True,
            ),
            label=f"list{v}",
        )
        for v in range(n)
    ]
    weights = {
        j: data.draw(st.integers(min_value=0, max_value=6), label=f"w{j}")
        for j in range(ncolors)
    }
    inst = make_instance(n, edges, lists, weights={
        j: weights[j] for j in {c for l in lists for c in l}
    })
    assert oracle_solve(inst).optimum == enumerate_optimum(inst)
