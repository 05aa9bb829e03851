import random

import numpy as np
import pytest

from mbfcount import counting, parallel, vecbits
from mbfcount.counting import (
    LAMBDA_KNOWN,
    LambdaResult,
    exact_sum,
    lambda_any,
    lambda_brute,
    lambda_plus2,
    lambda_plus3,
    lambda_plus4_classes,
    lambda_plus4_direct,
    plus4_pruned_term_count,
    verify_result,
)
from mbfcount.errors import BudgetError, UnsupportedCombinationError, VerificationError
from mbfcount.intervals import upward_counts
from mbfcount.layers import generate_layer


def setup(n, classes):
    return generate_layer(n), classes(n)


@pytest.mark.parametrize("n", range(5))
def test_plus2_known_values(n, classes):
    layer, cl = setup(n, classes)
    assert lambda_plus2(layer, cl).value == LAMBDA_KNOWN[n + 2]


def test_plus2_base0_hand_decomposition():
    # both one-variable-less elements join with their dual to the top,
    # each with one element above it
    ups = upward_counts(0, np.array([1, 1], dtype=np.uint64))
    assert ups.tolist() == [1, 1]
    assert lambda_any(2, "plus2").value == 2


@pytest.mark.parametrize("n", range(5))
def test_plus2_class_fold_equals_plain_sum(n, classes):
    layer, cl = setup(n, classes)
    V = layer.values
    plain = exact_sum(upward_counts(n, V | vecbits.dual_array(V, n)))
    assert lambda_plus2(layer, cl).value == plain


@pytest.mark.parametrize("n", range(4))
def test_plus3_known_values(n, classes):
    layer, cl = setup(n, classes)
    got = lambda_plus3(layer, cl)
    assert got.value == LAMBDA_KNOWN[n + 3]
    assert got.base_source == "brute"


@pytest.mark.parametrize("n", range(4))
def test_plus3_refined_equals_unrefined(n, classes):
    layer, cl = setup(n, classes)
    assert (
        lambda_plus3(layer, cl, refined=True).value
        == lambda_plus3(layer, cl, refined=False).value
    )


@pytest.mark.parametrize("n", range(5))
def test_plus3_loop_orders_agree(n, classes):
    layer, cl = setup(n, classes)
    assert (
        lambda_plus3(layer, cl, loop_order="pairs-first").value
        == lambda_plus3(layer, cl, loop_order="d-first").value
    )


def test_plus3_rejects_unknown_loop_order(classes):
    layer, cl = setup(1, classes)
    with pytest.raises(ValueError):
        lambda_plus3(layer, cl, loop_order="sideways")


def test_plus3_given_base(classes):
    layer, cl = setup(2, classes)
    got = lambda_plus3(layer, cl, lambda_base=2)
    assert got.value == LAMBDA_KNOWN[5]
    assert got.base_source == "given"


@pytest.mark.parametrize("n", range(4))
def test_plus4_known_values(n, classes):
    layer, cl = setup(n, classes)
    assert lambda_plus4_direct(layer, cl).value == LAMBDA_KNOWN[n + 4]


@pytest.mark.parametrize("n", range(4))
def test_plus4_strategies_agree(n, classes):
    layer, cl = setup(n, classes)
    dense = lambda_plus4_direct(layer, cl, strategy="dense").value
    pruned = lambda_plus4_direct(layer, cl, strategy="pruned").value
    assert dense == pruned


@pytest.mark.parametrize("n", range(4))
def test_plus4c_known_values(n, classes):
    layer, cl = setup(n, classes)
    got = lambda_plus4_classes(layer, cl)
    assert got.value == LAMBDA_KNOWN[n + 4]


@pytest.mark.parametrize("n", range(3))
def test_plus4c_widening_equivalence(n, classes):
    layer, cl = setup(n, classes)
    assert (
        lambda_plus4_classes(layer, cl, widen=False).value
        == lambda_plus4_classes(layer, cl, widen=True).value
    )


def test_plus4_pruned_term_count_matches_direct_loop(classes):
    for n in range(3):
        layer, cl = setup(n, classes)
        V = layer.values
        duals = vecbits.dual_array(V, n)
        total = 0
        for c in cl:
            u = c.representative.bits | c.representative.dual().bits
            for hi, h in enumerate(V):
                if int(duals[hi]) & ~int(h) or u & ~int(h):
                    continue
                size = sum(
                    1
                    for z in V
                    if int(duals[hi]) & ~int(z) == 0 and int(z) & ~int(h) == 0
                )
                total += size * size
        assert plus4_pruned_term_count(layer, cl) == total


def test_cross_method_agreement_small(classes):
    for target in (4, 5, 6):
        values = {lambda_brute(target).value}
        values.add(lambda_plus2(*setup(target - 2, classes)).value)
        if target - 3 >= 0:
            values.add(lambda_plus3(*setup(target - 3, classes)).value)
        if target - 4 >= 0:
            values.add(lambda_plus4_direct(*setup(target - 4, classes)).value)
            values.add(lambda_plus4_classes(*setup(target - 4, classes)).value)
        assert len(values) == 1


def test_partial_sums_order_independent(classes):
    # per-class contributions merged in any order give the same exact value
    layer, cl = setup(4, classes)
    reps = np.array([c.representative.bits for c in cl], dtype=np.uint64)
    duals = vecbits.dual_array(reps, 4)
    shared = {
        "values": layer.values,
        "n": 4,
        "reps": reps,
        "rep_duals": duals,
        "gammas": np.array([c.gamma for c in cl], dtype=np.int64),
        "loop_order": "pairs-first",
    }
    tasks = [
        ci
        for ci in range(len(cl))
        if int(reps[ci]) & ~int(duals[ci]) == 0 and 2 * int(reps[ci]).bit_count() < 16
    ]
    parts = parallel.run_tasks(counting._plus3_class, tasks, 1, shared=shared)
    base = counting.self_dual_brute(4)
    reference = lambda_plus3(layer, cl).value
    assert base + sum(parts) == reference
    rng = random.Random(5)
    for _ in range(10):
        shuffled = parts[:]
        rng.shuffle(shuffled)
        assert base + sum(shuffled) == reference


def test_workers_do_not_change_values(classes):
    layer, cl = setup(4, classes)
    for fn in (lambda_plus2, lambda_plus3, lambda_plus4_direct):
        assert fn(layer, cl, workers=1).value == fn(layer, cl, workers=2).value
    assert (
        lambda_plus4_classes(layer, cl, workers=1).value
        == lambda_plus4_classes(layer, cl, workers=2).value
    )


def test_exact_sum():
    rng = np.random.default_rng(17)
    a = rng.integers(0, 1 << 52, size=4321, dtype=np.int64)
    assert exact_sum(a) == sum(int(v) for v in a)
    assert exact_sum(np.array([], dtype=np.int64)) == 0
    big = np.full(10_000, (1 << 52) - 1, dtype=np.int64)
    assert exact_sum(big) == 10_000 * ((1 << 52) - 1)


def test_record_format():
    r = LambdaResult(8, "plus4", 229809982112, 4, 1.23456)
    assert r.record() == "lambda n=8 method=plus4 value=229809982112 base_n=4 seconds=1.235"


def test_lambda_any_dispatch():
    assert lambda_any(0, "brute").value == 0
    assert lambda_any(6, "brute").value == 2646
    assert lambda_any(4, "plus4").value == 12
    got = lambda_any(5, "plus4c")
    assert got.value == 81 and got.base_n == 1 and got.n_target == 5


def test_lambda_any_unsupported_combinations():
    with pytest.raises(UnsupportedCombinationError):
        lambda_any(1, "plus2")
    with pytest.raises(UnsupportedCombinationError):
        lambda_any(9, "plus2")  # would need the n=7 classes
    with pytest.raises(UnsupportedCombinationError):
        lambda_any(9, "plus4c")
    with pytest.raises(UnsupportedCombinationError):
        lambda_any(10, "plus4")
    with pytest.raises(UnsupportedCombinationError):
        lambda_any(7, "brute")
    with pytest.raises(UnsupportedCombinationError):
        lambda_any(4, "magic")


def test_method_budget_refusals(classes):
    layer5, cl5 = setup(5, classes)
    with pytest.raises(BudgetError):
        lambda_plus4_direct(layer5, cl5, budget_mb=50)  # full n=5 matrix refused
    with pytest.raises(BudgetError):
        lambda_plus4_classes(layer5, cl5)
    with pytest.raises(BudgetError):
        lambda_plus3(generate_layer(6), [])


def test_verify_result():
    verify_result(LambdaResult(4, "brute", 12, 4, 0.0))
    with pytest.raises(VerificationError):
        verify_result(LambdaResult(4, "brute", 13, 4, 0.0))
    # unknown targets pass through unchecked
    verify_result(LambdaResult(10, "plus4", 1, 6, 0.0))


def test_lambda_any_verify_flag(monkeypatch):
    monkeypatch.setitem(LAMBDA_KNOWN, 3, 5)
    with pytest.raises(VerificationError):
        lambda_any(3, "brute")
    assert lambda_any(3, "brute", verify=False).value == 4
