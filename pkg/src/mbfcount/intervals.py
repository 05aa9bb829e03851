"""Interval cardinalities: how many layer elements lie between x and y.

Two independent routes compute |{z : x <= z <= y}|:

  * re_scan: a linear scan of the materialized layer (the definition;
    also the test oracle).
  * re_fast: recursion over the half-split.  z = z0.z1 lies in [x, y]
    iff x0 <= z0 <= y0 and z1 ranges over [x1 | z0, y1], so the count is
    the sum over admissible z0 of the next-lower count.  Memoized on
    (n, x, y); empty intervals count 0 by convention so callers never
    branch on comparability.

Bulk tables: upward counts (to the top element) for a given element
list, and the full all-pairs matrix for small n, computed exactly as a
boolean matrix product of the order relation with itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import parallel
from .core import Mbf, table_width, to_hex
from .errors import BudgetError, WidthError
from .layers import DEFAULT_BUDGET_MB, Layer, generate_layer

MAX_MEMO_ENTRIES = 10_000_000

_memo: dict[tuple[int, int, int], int] = {}


def _bits(v) -> int:
    return v.bits if isinstance(v, Mbf) else int(v)


def re_scan(layer: Layer, x, y) -> int:
    """Count z in the layer with x <= z <= y by direct scan."""
    xb, yb = _bits(x), _bits(y)
    V = layer.values
    # subset tests: x <= z iff z & x == x, z <= y iff z & y == z
    return int(np.count_nonzero(((V & xb) == xb) & ((V & yb) == V)))


def clear_memo() -> None:
    _memo.clear()


def memo_entries() -> int:
    return len(_memo)


def re_fast(x: Mbf, y: Mbf, max_memo: int | None = None) -> int:
    """Count z with x <= z <= y via the memoized half-split recursion."""
    if x.n != y.n:
        raise WidthError(f"width mismatch: n={x.n} vs n={y.n}")
    if x.n > 6:
        raise WidthError(f"interval recursion needs materializable layers (n <= 6)")
    return _re(x.n, x.bits, y.bits, MAX_MEMO_ENTRIES if max_memo is None else max_memo)


def _re(n: int, x: int, y: int, max_memo: int) -> int:
    if x & ~y:
        return 0
    if n == 0:
        return y - x + 1
    key = (n, x, y)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    halfw = table_width(n - 1)
    mask = (1 << halfw) - 1
    x0, x1 = x & mask, x >> halfw
    y0, y1 = y & mask, y >> halfw
    prev = generate_layer(n - 1).values
    mids = prev[((prev & x0) == x0) & ((prev & y0) == prev)]
    total = 0
    for z0 in mids:
        total += _re(n - 1, x1 | int(z0), y1, max_memo)
    if len(_memo) >= max_memo:
        raise BudgetError(
            f"interval memo would exceed {max_memo} entries; raise the budget"
        )
    _memo[key] = total
    return total


_full_upward_cache: dict[int, np.ndarray] = {}


def _scan_upward(values: np.ndarray, xs: np.ndarray) -> np.ndarray:
    out = np.empty(len(xs), dtype=np.int64)
    for i, x in enumerate(xs):
        out[i] = np.count_nonzero((values & x) == x)
    return out


def _full_upward(n: int) -> np.ndarray:
    """Upward counts for every element of the layer, n <= 5."""
    cached = _full_upward_cache.get(n)
    if cached is None:
        V = generate_layer(n).values
        cached = _scan_upward(V, V)
        _full_upward_cache[n] = cached
    return cached


def _upward_chunk(task) -> np.ndarray:
    lo, hi = task
    st = parallel.state()
    n, xs = st["n"], st["xs"][lo:hi]
    if n <= 5:
        return _scan_upward(st["values"], xs)
    # n == 6: z >= x splits into z0 >= x0 (scan the half layer) and
    # z1 >= x1 | z0 (precomputed upward count one level down)
    prev = st["prev"]
    up_prev = st["up_prev"]
    halfw = np.uint64(32)
    mask = np.uint64(0xFFFF_FFFF)
    out = np.empty(len(xs), dtype=np.int64)
    for i, x in enumerate(xs):
        x0, x1 = x & mask, x >> halfw
        mids = prev[(prev & x0) == x0]
        idx = np.searchsorted(prev, x1 | mids)
        out[i] = up_prev[idx].sum()
    return out


def upward_counts(n: int, xs: np.ndarray, workers: int = 1) -> np.ndarray:
    """Count z >= x over the layer for each x in xs (int64 array)."""
    if n > 6:
        raise WidthError("upward counts need materializable layers (n <= 6)")
    if n == 6 and len(xs) > 200_000:
        raise BudgetError(
            f"upward counts for {len(xs)} elements at n=6 are out of budget"
        )
    xs = np.asarray(xs, dtype=np.uint64)
    if len(xs) == 0:
        return np.empty(0, dtype=np.int64)
    shared: dict = {"n": n, "xs": xs}
    if n <= 5:
        shared["values"] = generate_layer(n).values
    else:
        shared["prev"] = generate_layer(5).values
        shared["up_prev"] = _full_upward(5)
    if workers > 1 and len(xs) > 1024:
        step = -(-len(xs) // (workers * 4))
    else:
        step = len(xs)
    tasks = [(lo, min(lo + step, len(xs))) for lo in range(0, len(xs), step)]
    return np.concatenate(parallel.run_tasks(_upward_chunk, tasks, workers, shared=shared))


@dataclass(frozen=True)
class IntervalTable:
    """Precomputed interval counts: full matrix, upward column, or memo view."""

    n: int
    mode: str  # "full" | "upward" | "on-demand"
    elements: np.ndarray | None = field(default=None, repr=False)
    counts: np.ndarray | None = field(default=None, repr=False)

    def up(self, x) -> int:
        """re(x, top) for a listed element (upward/full modes)."""
        xb = _bits(x)
        if self.mode == "upward":
            i = int(np.searchsorted(self.elements, np.uint64(xb)))
            if i >= len(self.elements) or int(self.elements[i]) != xb:
                raise KeyError(f"0x{xb:x} not in the table")
            return int(self.counts[i])
        if self.mode == "full":
            return self.re(xb, (1 << table_width(self.n)) - 1)
        return re_fast(Mbf(self.n, xb), Mbf(self.n, (1 << table_width(self.n)) - 1))

    def re(self, x, y) -> int:
        """re(x, y); full mode indexes the matrix, on-demand falls back."""
        xb, yb = _bits(x), _bits(y)
        if self.mode == "full":
            ix = int(np.searchsorted(self.elements, np.uint64(xb)))
            iy = int(np.searchsorted(self.elements, np.uint64(yb)))
            return int(self.counts[ix, iy])
        if self.mode == "on-demand":
            return re_fast(Mbf(self.n, xb), Mbf(self.n, yb))
        raise ValueError("upward tables only answer up() queries")


def memo_table(n: int) -> IntervalTable:
    """The on-demand mode: queries are answered by the shared re_fast memo."""
    return IntervalTable(n, "on-demand")


def build_upward_table(source, n: int | None = None, budget_mb: int | None = None,
                       workers: int = 1) -> IntervalTable:
    """Upward counts for a Layer, a list of orbit classes, or a value array."""
    if isinstance(source, Layer):
        xs, n = source.values, source.n
    elif n is None:
        raise ValueError("n is required unless source is a Layer")
    elif source and hasattr(source[0], "representative"):
        xs = np.array([c.representative.bits for c in source], dtype=np.uint64)
    else:
        xs = np.asarray(source, dtype=np.uint64)
    return IntervalTable(n, "upward", xs, upward_counts(n, xs, workers))


def build_full_table(n: int, budget_mb: int | None = None) -> IntervalTable:
    """All-pairs interval matrix; n <= 5 (above that it cannot fit)."""
    if n > 5:
        raise BudgetError(f"full interval table for n={n} is out of budget")
    layer = generate_layer(n, budget_mb)
    d = len(layer)
    budget = DEFAULT_BUDGET_MB if budget_mb is None else budget_mb
    need_mb = d * d * 10 / 1e6
    if need_mb > budget:
        raise BudgetError(
            f"full interval table for n={n} needs ~{need_mb:.0f} MB, over the"
            f" {budget} MB budget"
        )
    V = layer.values
    if n <= 4:
        L = ((V[:, None] & ~V[None, :]) == 0).astype(np.int64)
        counts = L @ L  # (L @ L)[x, y] counts z with x <= z and z <= y
    else:
        # exact in float32: entries are 0/1 and row sums stay below 2^24
        Lf = np.empty((d, d), dtype=np.float32)
        for lo in range(0, d, 512):
            Lf[lo:lo + 512] = (V[lo:lo + 512, None] & ~V[None, :]) == 0
        counts = np.empty((d, d), dtype=np.uint16)
        for lo in range(0, d, 1024):
            counts[lo:lo + 1024] = (Lf[lo:lo + 1024] @ Lf).astype(np.uint16)
    return IntervalTable(n, "full", V, counts)


def write_upward_table(table: IntervalTable, fh) -> None:
    """Write the text format: header, then 'element_hex count' per line."""
    if table.mode != "upward":
        raise ValueError("only upward tables have a file format")
    fh.write(f"mbf-retable n={table.n} mode=upward count={len(table.elements)}\n")
    for v, c in zip(table.elements, table.counts):
        fh.write(f"{to_hex(table.n, int(v))} {int(c)}\n")


def save_upward_table(table: IntervalTable, path: str) -> None:
    with open(path, "w") as fh:
        write_upward_table(table, fh)


def load_upward_table(path: str) -> IntervalTable:
    """Read an upward table file back."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "mbf-retable" or header[2] != "mode=upward":
            raise ValueError(f"{path}: not an upward interval table file")
        n = int(header[1].removeprefix("n="))
        count = int(header[3].removeprefix("count="))
        elements, counts = [], []
        for line in fh:
            h, c = line.split()
            elements.append(int(h, 16))
            counts.append(int(c))
    if len(elements) != count:
        raise ValueError(f"{path}: header says {count} entries, found {len(elements)}")
    return IntervalTable(
        n, "upward", np.array(elements, dtype=np.uint64), np.array(counts, dtype=np.int64)
    )
