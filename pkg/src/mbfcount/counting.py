"""Exact counts of self-dual monotone functions, by five routes.

A monotone function of n+k variables is a monotone assignment of one
n-variable function to each vertex of the k-cube (split the table into
2^k blocks); it is self-dual exactly when the block at vertex v is the
dual of the block at the complementary vertex.  Fixing k = 2, 3, 4 turns
that constraint into closed sums over a smaller layer:

  brute   scan the materialized layer for fixed points of the dual map
          (n <= 6).

  plus2   with k = 2 the four blocks are d*, b, b*, d with the single
          constraint d >= b | b*, so the count is
              sum over b of |{h : h >= b | dual(b)}|,
          folded over orbit classes with multiplicity gamma.

  plus3   with k = 3 the blocks are a, b, d, c, c*, d*, b*, a* with
          a <= b <= c <= dual(a) and a <= d <= c & dual(b); summing the
          interval count re(a, c & dual(b)) over b, c pairs counts the
          d choices.  Classes with weight(a) = 2^(n-1) force every block
          equal to a and contribute exactly one function each, which is
          the count for n itself; the refined form adds that as a closed
          term and restricts the sum to weight(a) < 2^(n-1).

  plus4   with k = 4 the sixteen blocks reduce to a, b, c plus a top
          block h >= a|b|c|dual(a)|dual(b)|dual(c) and four free middle
          blocks, each ranging over one interval ending at h; the count
          is the sum over (a, b, c, h) of the product of four interval
          counts.  The product vanishes unless dual(h) <= a, b, c <= h,
          which the pruned strategy exploits.

  plus4c  the same k = 4 sum regrouped per top block h over orbit
          classes with dual(h) <= h, weight(h) > 2^(n-1), plus the
          closed weight-equal term (again the count for n itself).

Every accumulator is an exact integer: numpy partial sums stay below
2^63 by construction (wide blocks are split 26 bits at a time before
summing), and the final folds are Python ints, so results are identical
for any worker count or task order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from . import parallel, vecbits
from .core import table_width
from .errors import BudgetError, UnsupportedCombinationError, VerificationError
from .intervals import build_full_table, upward_counts
from .layers import Layer, generate_layer, self_dual_brute
from .orbits import OrbitClass, classify

# reference values for verification (OEIS A001206); counts of self-dual
# monotone functions of 0..9 variables
LAMBDA_KNOWN = {
    0: 0,
    1: 1,
    2: 2,
    3: 4,
    4: 12,
    5: 81,
    6: 2_646,
    7: 1_422_564,
    8: 229_809_982_112,
    9: 423_295_099_074_735_261_880,
}

METHODS = ("brute", "plus2", "plus3", "plus4", "plus4c")

_BASE_OFFSET = {"brute": 0, "plus2": 2, "plus3": 3, "plus4": 4, "plus4c": 4}
_BASE_MAX = {"brute": 6, "plus2": 6, "plus3": 5, "plus4": 5, "plus4c": 4}


@dataclass(frozen=True)
class LambdaResult:
    """One exact count: which index, which route, and the timing."""

    n_target: int
    method: str
    value: int
    base_n: int
    seconds: float
    base_source: str | None = None  # provenance of an additive closed term

    def record(self) -> str:
        """Machine-readable result line; value always plain decimal."""
        return (
            f"lambda n={self.n_target} method={self.method} value={self.value}"
            f" base_n={self.base_n} seconds={self.seconds:.3f}"
        )


def exact_sum(a: np.ndarray) -> int:
    """Exact integer sum of nonnegative int64 entries below 2^52.

    Splitting at 26 bits keeps both partial sums inside int64 for any
    array under 2^37 elements, then recombines in Python integers.
    """
    lo = int((a & np.int64((1 << 26) - 1)).sum())
    hi = int((a >> np.int64(26)).sum())
    return lo + (hi << 26)


def _rep_array(classes: list[OrbitClass]) -> tuple[np.ndarray, np.ndarray]:
    reps = np.array([c.representative.bits for c in classes], dtype=np.uint64)
    gammas = np.array([c.gamma for c in classes], dtype=np.int64)
    return reps, gammas


def _base_lambda(n: int, given: int | None) -> tuple[int, str]:
    if given is not None:
        return given, "given"
    if n <= 6:
        return self_dual_brute(n), "brute"
    return LAMBDA_KNOWN[n], "table"


def lambda_brute(n: int, budget_mb: int | None = None) -> LambdaResult:
    """Count by scanning the layer for fixed points of the dual map."""
    t0 = time.perf_counter()
    value = self_dual_brute(n, budget_mb)
    return LambdaResult(n, "brute", value, n, time.perf_counter() - t0)


# -- plus2 ------------------------------------------------------------------


def lambda_plus2(layer: Layer, classes: list[OrbitClass], workers: int = 1) -> LambdaResult:
    """Count for n+2: per class, gamma times |{h >= rep | dual(rep)}|."""
    t0 = time.perf_counter()
    n = layer.n
    reps, gammas = _rep_array(classes)
    points = reps | vecbits.dual_array(reps, n)
    ups = upward_counts(n, points, workers)
    value = exact_sum(gammas * ups)
    return LambdaResult(n + 2, "plus2", value, n, time.perf_counter() - t0)


# -- plus3 ------------------------------------------------------------------


def _interval_values(V: np.ndarray, lo, hi) -> np.ndarray:
    return V[((V & lo) == lo) & ((V & hi) == V)]


def _downward_within(I: np.ndarray) -> np.ndarray:
    """out[j] = |{z in I : z <= I[j]}|."""
    out = np.empty(len(I), dtype=np.int64)
    for j, w in enumerate(I):
        out[j] = np.count_nonzero((I & ~w) == 0)
    return out


def _upward_within(I: np.ndarray) -> np.ndarray:
    """out[j] = |{z in I : z >= I[j]}|."""
    out = np.empty(len(I), dtype=np.int64)
    for j, w in enumerate(I):
        out[j] = np.count_nonzero((w & ~I) == 0)
    return out


def _plus3_class(ci: int) -> int:
    st = parallel.state()
    V, n = st["values"], st["n"]
    a = st["reps"][ci]
    a_star = st["rep_duals"][ci]
    I = _interval_values(V, a, a_star)
    Id = vecbits.dual_array(I, n)
    G = 0
    if st["loop_order"] == "pairs-first":
        # for each b <= c in [a, a*], the d choices fill [a, c & dual(b)]
        rea = _downward_within(I)
        for bi in range(len(I)):
            cs = I[(I[bi] & ~I) == 0]
            idx = np.searchsorted(I, cs & Id[bi])
            G += int(rea[idx].sum())
    else:
        # "d-first": pick d in [a, a*], then b <= dual(d), then c >= b | d
        upI = _upward_within(I)
        for di in range(len(I)):
            bs = I[(I & ~(a_star & Id[di])) == 0]
            idx = np.searchsorted(I, bs | I[di])
            G += int(upI[idx].sum())
    return int(st["gammas"][ci]) * G


def lambda_plus3(
    layer: Layer,
    classes: list[OrbitClass],
    workers: int = 1,
    refined: bool = True,
    loop_order: str = "pairs-first",
    lambda_base: int | None = None,
) -> LambdaResult:
    """Count for n+3 from the 4-tuple sum over orbit classes."""
    if loop_order not in ("pairs-first", "d-first"):
        raise ValueError(f"unknown loop order {loop_order!r}")
    t0 = time.perf_counter()
    n = layer.n
    if n > 5:
        raise BudgetError(
            f"plus3 over base n={n} is out of budget (intervals up to d_{n} wide)"
        )
    reps, gammas = _rep_array(classes)
    rep_duals = vecbits.dual_array(reps, n)
    below_dual = (reps & ~rep_duals) == 0
    if refined:
        sel = below_dual & (2 * vecbits.popcount(reps) < table_width(n))
        base_value, base_source = _base_lambda(n, lambda_base)
    else:
        sel = below_dual
        base_value, base_source = 0, None
    order = np.argsort(-vecbits.popcount(rep_duals) + vecbits.popcount(reps))
    tasks = [int(ci) for ci in order if sel[ci]]  # widest intervals first
    shared = {
        "values": layer.values,
        "n": n,
        "reps": reps,
        "rep_duals": rep_duals,
        "gammas": gammas,
        "loop_order": loop_order,
    }
    parts = parallel.run_tasks(_plus3_class, tasks, workers, shared=shared)
    value = base_value + sum(parts)
    return LambdaResult(
        n + 3, "plus3", value, n, time.perf_counter() - t0, base_source
    )


# -- plus4, dense strategy (full interval matrix, n <= 4) --------------------


def _value_index_lut(V: np.ndarray, n: int) -> np.ndarray:
    lut = np.full(1 << table_width(n), -1, dtype=np.int32)
    lut[V] = np.arange(len(V), dtype=np.int32)
    return lut


def _plus4_dense_class(ci: int) -> int:
    st = parallel.state()
    V, Vd, lut, RE = st["values"], st["duals"], st["lut"], st["re"]
    a = st["reps"][ci]
    da = st["rep_duals"][ci]
    total = 0
    for bi in range(len(V)):
        b, db = V[bi], Vd[bi]
        rows_bot = RE[lut[(a | b) | V]]  # rows: one block per c, columns h
        rows_a = RE[lut[(a | db) | Vd]]
        rows_b = RE[lut[(b | da) | Vd]]
        rows_c = RE[lut[(da | db) | V]]
        total += int((rows_bot * rows_a * rows_b * rows_c).sum())
    return int(st["gammas"][ci]) * total


# -- plus4, pruned strategy (per top block, n <= 5) ---------------------------


def _tops_and_intervals(V: np.ndarray, n: int):
    """Indices of h with dual(h) <= h, and the index array of [dual(h), h]."""
    Vd = vecbits.dual_array(V, n)
    tops = np.nonzero((Vd & ~V) == 0)[0].astype(np.int32)
    intervals = {}
    for ih in tops:
        ih = int(ih)
        m = ((Vd[ih] & ~V) == 0) & ((V & ~V[ih]) == 0)
        intervals[ih] = np.nonzero(m)[0].astype(np.int32)
    return tops, intervals


def _join_index_table(V: np.ndarray) -> np.ndarray:
    """J[i, j] = index of V[i] | V[j]; needs the layer closed under joins."""
    d = len(V)
    dtype = np.uint16 if d < (1 << 16) else np.int32
    J = np.empty((d, d), dtype=dtype)
    for i in range(d):
        J[i] = np.searchsorted(V, V[i] | V)
    return J


_PRUNED_CHUNK = 512


def _plus4_pruned_class(ci: int) -> int:
    st = parallel.state()
    V, J, RET = st["values"], st["join_idx"], st["re_by_top"]
    dual_idx = st["dual_idx"]
    tops, intervals = st["tops"], st["intervals"]
    Vtops = st["top_values"]
    ia = int(st["rep_idx"][ci])
    ida = int(dual_idx[ia])
    u = V[ia] | V[ida]
    total = 0
    for ih in tops[(u & ~Vtops) == 0]:
        ih = int(ih)
        cidx = intervals[ih]
        dcidx = dual_idx[cidx]
        col = RET[ih].astype(np.int64)
        jb_bot = J[ia, cidx]  # index of a | b, per b in the interval
        jb_a = J[ia, dcidx]  # a | dual(b)
        jb_b = J[ida, cidx]  # dual(a) | b
        jb_c = J[ida, dcidx]  # dual(a) | dual(b)
        for lo in range(0, len(cidx), _PRUNED_CHUNK):
            cc = cidx[lo:lo + _PRUNED_CHUNK]
            dcc = dcidx[lo:lo + _PRUNED_CHUNK]
            prod = col[J[jb_bot[:, None], cc[None, :]]]
            prod = prod * col[J[jb_a[:, None], dcc[None, :]]]
            prod = prod * col[J[jb_b[:, None], dcc[None, :]]]
            prod = prod * col[J[jb_c[:, None], cc[None, :]]]
            total += exact_sum(prod)
    return int(st["gammas"][ci]) * total


def plus4_pruned_term_count(layer: Layer, classes: list[OrbitClass]) -> int:
    """Number of (b, c) interval products the pruned strategy evaluates."""
    V, n = layer.values, layer.n
    reps, _ = _rep_array(classes)
    rep_duals = vecbits.dual_array(reps, n)
    tops, intervals = _tops_and_intervals(V, n)
    Vtops = V[tops]
    sizes = np.array([len(intervals[int(ih)]) for ih in tops], dtype=np.int64)
    total = 0
    for u in reps | rep_duals:
        total += int((sizes[(u & ~Vtops) == 0] ** 2).sum())
    return total


def lambda_plus4_direct(
    layer: Layer,
    classes: list[OrbitClass],
    workers: int = 1,
    budget_mb: int | None = None,
    strategy: str = "auto",
) -> LambdaResult:
    """Count for n+4 by the direct sum over (a, b, c, top block)."""
    if strategy not in ("auto", "dense", "pruned"):
        raise ValueError(f"unknown strategy {strategy!r}")
    t0 = time.perf_counter()
    n = layer.n
    if n > 5:
        raise BudgetError(f"plus4 over base n={n} is out of budget")
    if strategy == "auto":
        strategy = "dense" if n <= 4 else "pruned"
    if strategy == "dense" and n > 4:
        raise BudgetError("dense plus4 needs the full matrix in int64; use pruned")
    V = layer.values
    reps, gammas = _rep_array(classes)
    rep_duals = vecbits.dual_array(reps, n)
    table = build_full_table(n, budget_mb)
    tasks = list(range(len(classes)))
    if strategy == "dense":
        shared = {
            "values": V,
            "duals": vecbits.dual_array(V, n),
            "lut": _value_index_lut(V, n),
            "re": table.counts.astype(np.int64),
            "reps": reps,
            "rep_duals": rep_duals,
            "gammas": gammas,
        }
        parts = parallel.run_tasks(_plus4_dense_class, tasks, workers, shared=shared)
    else:
        tops, intervals = _tops_and_intervals(V, n)
        shared = {
            "values": V,
            "join_idx": _join_index_table(V),
            "re_by_top": np.ascontiguousarray(table.counts.T),
            "dual_idx": np.searchsorted(V, vecbits.dual_array(V, n)).astype(np.int32),
            "tops": tops,
            "intervals": intervals,
            "top_values": V[tops],
            "rep_idx": np.searchsorted(V, reps).astype(np.int32),
            "gammas": gammas,
        }
        parts = parallel.run_tasks(_plus4_pruned_class, tasks, workers, shared=shared)
    value = sum(parts)
    return LambdaResult(n + 4, "plus4", value, n, time.perf_counter() - t0)


# -- plus4c (per top block over orbit classes) --------------------------------


def _plus4c_class(ci: int) -> int:
    st = parallel.state()
    V, lut, RE, n = st["values"], st["lut"], st["re"], st["n"]
    h = st["reps"][ci]
    hstar = st["rep_duals"][ci]
    ih = int(np.searchsorted(V, h))
    col = np.ascontiguousarray(RE[:, ih])
    I = V if st["widen"] else _interval_values(V, hstar, h)
    Id = vecbits.dual_array(I, n)
    F = 0
    for ai in range(len(I)):
        a, da = I[ai], Id[ai]
        x_bot = lut[(a | I)[:, None] | I[None, :]]  # a|b|c, rows b, cols c
        x_a = lut[(a | Id)[:, None] | Id[None, :]]  # a|b*|c*
        x_b = lut[(I | da)[:, None] | Id[None, :]]  # b|a*|c*
        x_c = lut[(Id | da)[:, None] | I[None, :]]  # c|a*|b*
        F += int((col[x_bot] * col[x_a] * col[x_b] * col[x_c]).sum())
    return int(st["gammas"][ci]) * F


def lambda_plus4_classes(
    layer: Layer,
    classes: list[OrbitClass],
    lambda_base: int | None = None,
    workers: int = 1,
    widen: bool = False,
    budget_mb: int | None = None,
) -> LambdaResult:
    """Count for n+4 grouped per top block h over orbit classes.

    Only classes with dual(h) <= h and weight(h) > 2^(n-1) are summed;
    the weight-equal top blocks contribute the closed n-count term.
    With widen=True the middle blocks range over the whole layer instead
    of [dual(h), h], which must not change the result (zero factors).
    """
    t0 = time.perf_counter()
    n = layer.n
    if n > 4:
        raise BudgetError(f"plus4c over base n={n} is out of budget")
    V = layer.values
    reps, gammas = _rep_array(classes)
    rep_duals = vecbits.dual_array(reps, n)
    sel = ((rep_duals & ~reps) == 0) & (2 * vecbits.popcount(reps) > table_width(n))
    base_value, base_source = _base_lambda(n, lambda_base)
    table = build_full_table(n, budget_mb)
    shared = {
        "values": V,
        "n": n,
        "lut": _value_index_lut(V, n),
        "re": table.counts.astype(np.int64),
        "reps": reps,
        "rep_duals": rep_duals,
        "gammas": gammas,
        "widen": widen,
    }
    tasks = [ci for ci in range(len(classes)) if sel[ci]]
    parts = parallel.run_tasks(_plus4c_class, tasks, workers, shared=shared)
    value = base_value + sum(parts)
    return LambdaResult(
        n + 4, "plus4c", value, n, time.perf_counter() - t0, base_source
    )


# -- dispatch -----------------------------------------------------------------


def verify_result(result: LambdaResult) -> None:
    """Raise if the value contradicts the known reference table."""
    known = LAMBDA_KNOWN.get(result.n_target)
    if known is not None and result.value != known:
        raise VerificationError(
            f"{result.method} produced {result.value} for n={result.n_target};"
            f" the known value is {known} (implementation defect)"
        )


def lambda_any(
    n_target: int,
    method: str,
    workers: int = 1,
    budget_mb: int | None = None,
    verify: bool = True,
) -> LambdaResult:
    """Compute the count for n_target by the named method, with verification.

    Chooses the base layer n_target - offset, builds prerequisites, runs
    the method, and checks the value against the reference table (raising
    VerificationError on mismatch) unless verify is off.
    """
    if method not in METHODS:
        raise UnsupportedCombinationError(
            f"unknown method {method!r}; choose from {', '.join(METHODS)}"
        )
    base = n_target - _BASE_OFFSET[method]
    if base < 0 or base > _BASE_MAX[method]:
        raise UnsupportedCombinationError(
            f"{method} cannot reach n={n_target}: base layer n={base} is outside"
            f" 0..{_BASE_MAX[method]}"
        )
    t0 = time.perf_counter()
    if method == "brute":
        result = lambda_brute(base, budget_mb)
    else:
        layer = generate_layer(base, budget_mb)
        classes = classify(layer, workers)
        if method == "plus2":
            result = lambda_plus2(layer, classes, workers)
        elif method == "plus3":
            result = lambda_plus3(layer, classes, workers)
        elif method == "plus4":
            result = lambda_plus4_direct(layer, classes, workers, budget_mb)
        else:
            result = lambda_plus4_classes(layer, classes, None, workers, budget_mb=budget_mb)
    result = replace(result, seconds=time.perf_counter() - t0)
    if verify:
        verify_result(result)
    return result
