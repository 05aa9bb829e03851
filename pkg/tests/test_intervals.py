import numpy as np
import pytest

from mbfcount import intervals
from mbfcount.core import Mbf, bottom, dual, top
from mbfcount.errors import BudgetError
from mbfcount.intervals import (
    IntervalTable,
    build_full_table,
    build_upward_table,
    load_upward_table,
    re_fast,
    re_scan,
    save_upward_table,
    upward_counts,
)
from mbfcount.layers import generate_layer

from oracles import slow_interval_count

# upward counts for the six n=2 elements in ascending order, frozen from
# the definition scan (recomputed against the oracle below)
D2_UPWARD = [6, 5, 3, 3, 2, 1]


@pytest.fixture(autouse=True)
def fresh_memo():
    intervals.clear_memo()
    yield


def test_re_scan_examples():
    layer2 = generate_layer(2)
    assert re_scan(layer2, bottom(2), top(2)) == 6
    assert re_scan(layer2, Mbf.from_string("0101"), top(2)) == 3
    layer3 = generate_layer(3)
    for x in layer3:
        assert re_scan(layer3, x, x) == 1


def test_re_scan_matches_slow_oracle():
    layer = generate_layer(3)
    for x in layer:
        for y in layer:
            assert re_scan(layer, x, y) == slow_interval_count(layer.values, x.bits, y.bits)


def test_re_fast_examples():
    assert re_fast(bottom(2), top(2)) == 6
    assert re_fast(Mbf.from_string("0001"), Mbf.from_string("0111")) == 4
    assert re_fast(Mbf.from_string("0011"), Mbf.from_string("0101")) == 0


def test_re_fast_equals_scan_exhaustive_d3():
    layer = generate_layer(3)
    for x in layer:
        for y in layer:
            assert re_fast(x, y) == re_scan(layer, x, y)


def test_re_fast_equals_scan_random_d5():
    layer = generate_layer(5)
    rng = np.random.default_rng(42)
    idx = rng.integers(0, len(layer), size=(2000, 2))
    for i, j in idx:
        x, y = layer.mbf(int(i)), layer.mbf(int(j))
        assert re_fast(x, y) == re_scan(layer, x, y)


def test_duality_symmetry_d3():
    layer = generate_layer(3)
    for x in layer:
        for y in layer:
            assert re_fast(x, y) == re_fast(dual(y), dual(x))


def test_monotone_in_upper_end():
    layer = generate_layer(3)
    for x in layer:
        for y1 in layer:
            for y2 in layer:
                if y1 <= y2:
                    assert re_fast(x, y1) <= re_fast(x, y2)


def test_upward_table_d2_frozen_values():
    layer = generate_layer(2)
    by_scan = [re_scan(layer, x, top(2)) for x in layer]
    assert by_scan == D2_UPWARD
    table = build_upward_table(layer)
    assert [table.up(x) for x in layer] == D2_UPWARD


def test_upward_table_extremes():
    for n in range(5):
        layer = generate_layer(n)
        table = build_upward_table(layer)
        assert table.up(top(n)) == 1
        assert table.up(bottom(n)) == len(layer)


def test_upward_counts_sum_is_next_layer_size():
    for n in range(5):
        layer = generate_layer(n)
        assert int(upward_counts(n, layer.values).sum()) == len(generate_layer(n + 1))


def test_upward_counts_n6_recursion_matches_scan():
    layer = generate_layer(6)
    rng = np.random.default_rng(7)
    xs = layer.values[rng.choice(len(layer), size=50, replace=False)]
    got = upward_counts(6, xs)
    V = layer.values
    expect = [int(np.count_nonzero((x & ~V) == 0)) for x in xs]
    assert got.tolist() == expect


def test_upward_counts_workers_deterministic():
    layer = generate_layer(4)
    a = upward_counts(4, layer.values, workers=1)
    b = upward_counts(4, layer.values, workers=2)
    assert np.array_equal(a, b)


def test_upward_table_from_classes():
    from mbfcount.orbits import classify

    layer = generate_layer(3)
    classes = classify(layer)
    table = build_upward_table(classes, 3)
    for c in classes:
        assert table.up(c.representative) == re_scan(layer, c.representative, top(3))


def test_full_table_matches_scan():
    for n in range(4):
        layer = generate_layer(n)
        table = build_full_table(n)
        for x in layer:
            for y in layer:
                assert table.re(x, y) == re_scan(layer, x, y)


def test_full_table_n4_sampled():
    layer = generate_layer(4)
    table = build_full_table(4)
    rng = np.random.default_rng(3)
    for i, j in rng.integers(0, len(layer), size=(500, 2)):
        x, y = layer.mbf(int(i)), layer.mbf(int(j))
        assert table.re(x, y) == re_scan(layer, x, y)


def test_full_table_n5_exactness_sampled():
    # the n=5 matrix is built through float32 matmul; spot-check hard
    layer = generate_layer(5)
    table = build_full_table(5)
    assert table.counts.dtype == np.uint16
    rng = np.random.default_rng(11)
    for i, j in rng.integers(0, len(layer), size=(300, 2)):
        x, y = layer.mbf(int(i)), layer.mbf(int(j))
        assert table.re(x, y) == re_fast(x, y)
    assert table.re(bottom(5), top(5)) == len(layer)


def test_on_demand_table():
    t = intervals.memo_table(3)
    assert t.mode == "on-demand"
    assert t.re(bottom(3), top(3)) == 20
    assert t.up(bottom(3)) == 20


def test_upward_mode_rejects_re_queries():
    table = build_upward_table(generate_layer(2))
    with pytest.raises(ValueError):
        table.re(bottom(2), top(2))
    with pytest.raises(KeyError):
        IntervalTable(2, "upward", np.array([8], dtype=np.uint64), np.array([5])).up(0)


def test_retable_round_trip(tmp_path):
    table = build_upward_table(generate_layer(2))
    path = tmp_path / "re2.txt"
    save_upward_table(table, str(path))
    first = path.read_bytes()
    loaded = load_upward_table(str(path))
    assert loaded.n == 2
    assert np.array_equal(loaded.elements, table.elements)
    assert np.array_equal(loaded.counts, table.counts)
    save_upward_table(loaded, str(path))
    assert path.read_bytes() == first
    assert path.read_text().splitlines()[0] == "mbf-retable n=2 mode=upward count=6"


def test_memo_budget_refusal():
    intervals.clear_memo()
    with pytest.raises(BudgetError):
        re_fast(bottom(4), top(4), max_memo=3)


def test_bulk_budget_refusals():
    with pytest.raises(BudgetError):
        upward_counts(6, np.zeros(200_001, dtype=np.uint64))
    with pytest.raises(BudgetError):
        build_full_table(6)
    with pytest.raises(BudgetError):
        build_full_table(5, budget_mb=50)
