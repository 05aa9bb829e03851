"""Variable-relabeling action on layers: orbits, representatives, sizes.

A permutation of the n input variables permutes the binary digits of every
table position, hence the bits of every packed function.  Orbit
representatives are the minimal orbit members under the integer order.

Bulk canonicalization walks all n! relabelings with a plain-changes
(Johnson-Trotter) sequence: each successive relabeling differs from the
previous one by one digit transposition, so one pass over the value array
per group element suffices, folding an elementwise minimum as it goes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from . import parallel, vecbits
from .core import Mbf, check_n, table_width
from .errors import BudgetError, WidthError
from .layers import Layer

ORBIT_MAX_N = 7  # 5040 images per element is the single-value ceiling


@dataclass(frozen=True)
class VariablePermutation:
    """Relabeling of variables; mapping[d] is the new 0-based label of d.

    position_map sends table position i to the position whose digit
    mapping[d] equals digit d of i; it is a popcount-preserving bijection.
    """

    n: int
    mapping: tuple[int, ...]
    position_map: tuple[int, ...]

    @classmethod
    def of(cls, mapping) -> "VariablePermutation":
        mapping = tuple(mapping)
        n = len(mapping)
        check_n(n)
        if sorted(mapping) != list(range(n)):
            raise ValueError(f"{mapping} is not a permutation of 0..{n - 1}")
        pm = []
        for pos in range(table_width(n)):
            q = 0
            for d in range(n):
                if (pos >> d) & 1:
                    q |= 1 << mapping[d]
            pm.append(q)
        return cls(n, mapping, tuple(pm))

    @classmethod
    def identity(cls, n: int) -> "VariablePermutation":
        return cls.of(range(n))

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "VariablePermutation":
        m = list(range(n))
        m[i], m[j] = m[j], m[i]
        return cls.of(m)


def compose(p: VariablePermutation, q: VariablePermutation) -> VariablePermutation:
    """Composite relabeling with apply(compose(p, q), g) == apply(p, apply(q, g))."""
    if p.n != q.n:
        raise WidthError(f"cannot compose permutations of {p.n} and {q.n} variables")
    return VariablePermutation.of(tuple(p.mapping[q.mapping[d]] for d in range(p.n)))


def all_permutations(n: int):
    """All n! relabelings, lexicographic by mapping."""
    for m in itertools.permutations(range(n)):
        yield VariablePermutation.of(m)


def apply_permutation(pi: VariablePermutation, g: Mbf) -> Mbf:
    """Relabel the inputs of g: bit position_map[i] of the result is bit i of g."""
    if pi.n != g.n:
        raise WidthError(f"width mismatch: permutation n={pi.n}, function n={g.n}")
    bits = g.bits
    out = 0
    pm = pi.position_map
    while bits:
        low = bits & -bits
        out |= 1 << pm[low.bit_length() - 1]
        bits ^= low
    return Mbf(g.n, out)


def orbit_values(g: Mbf) -> set[int]:
    """Distinct packed values of g under all relabelings."""
    if g.n > ORBIT_MAX_N:
        raise BudgetError(f"orbit enumeration limited to n <= {ORBIT_MAX_N}")
    return {apply_permutation(pi, g).bits for pi in all_permutations(g.n)}


def orbit_size(g: Mbf) -> int:
    """Number of distinct images of g under all n! relabelings."""
    return len(orbit_values(g))


def canonical(g: Mbf) -> Mbf:
    """The minimal orbit member (the orbit's representative)."""
    return Mbf(g.n, min(orbit_values(g)))


@dataclass(frozen=True)
class OrbitClass:
    """A canonical representative and its orbit size gamma."""

    representative: Mbf
    gamma: int


@lru_cache(maxsize=None)
def adjacent_swap_sequence(n: int) -> tuple[int, ...]:
    """Johnson-Trotter swap positions: n!-1 adjacent transpositions that
    step through every arrangement of n items."""
    if n < 2:
        return ()
    perm = list(range(n))
    direction = [-1] * n
    seq = []
    while True:
        mobile, mi = -1, -1
        for i, v in enumerate(perm):
            j = i + direction[v]
            if 0 <= j < n and perm[j] < v and v > mobile:
                mobile, mi = v, i
        if mobile < 0:
            return tuple(seq)
        j = mi + direction[mobile]
        seq.append(min(mi, j))
        perm[mi], perm[j] = perm[j], perm[mi]
        for v in range(mobile + 1, n):
            direction[v] = -direction[v]


def canonical_array(values: np.ndarray, n: int) -> np.ndarray:
    """Per-element orbit minimum over all n! digit relabelings."""
    vecbits.check_vector_n(n)
    canon = values.copy()
    cur = values.copy()
    for k in adjacent_swap_sequence(n):
        cur = vecbits.digit_transpose(cur, k, k + 1, n)
        np.minimum(canon, cur, out=canon)
    return canon


def _canonical_chunk(task) -> np.ndarray:
    lo, hi = task
    st = parallel.state()
    return canonical_array(st["values"][lo:hi], st["n"])


def classify(layer: Layer, workers: int = 1) -> list[OrbitClass]:
    """Partition a layer into orbits, ascending by representative.

    gamma of each class is the number of layer elements whose canonical
    form is that representative, i.e. the orbit size.
    """
    n = layer.n
    if n > 6:
        raise BudgetError(f"classification over n={n} is out of budget")
    values = layer.values
    if workers > 1 and len(values) > 1 << 16:
        step = -(-len(values) // (workers * 4))
        tasks = [(lo, min(lo + step, len(values))) for lo in range(0, len(values), step)]
        chunks = parallel.run_tasks(
            _canonical_chunk, tasks, workers, shared={"values": values, "n": n}
        )
        canon = np.concatenate(chunks)
    else:
        canon = canonical_array(values, n)
    reps, counts = np.unique(canon, return_counts=True)
    assert int(counts.sum()) == len(values)
    return [OrbitClass(Mbf(n, int(r)), int(c)) for r, c in zip(reps, counts)]


def gammas_consistent(classes: list[OrbitClass], layer: Layer) -> bool:
    """Orbit sizes must add up to the layer size and divide n!."""
    nfact = factorial(layer.n)
    return (
        sum(c.gamma for c in classes) == len(layer)
        and all(nfact % c.gamma == 0 for c in classes)
    )


def write_classes(classes: list[OrbitClass], n: int, fh) -> None:
    """Write the text format: header, then 'rep_hex gamma' per line."""
    fh.write(f"mbf-classes n={n} count={len(classes)}\n")
    for c in classes:
        fh.write(f"{c.representative.to_hex()} {c.gamma}\n")


def save_classes(classes: list[OrbitClass], n: int, path: str) -> None:
    with open(path, "w") as fh:
        write_classes(classes, n, fh)


def load_classes(path: str) -> tuple[int, list[OrbitClass]]:
    """Read a classes file back; returns (n, classes)."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != "mbf-classes":
            raise ValueError(f"{path}: not a classes file")
        n = int(header[1].removeprefix("n="))
        count = int(header[2].removeprefix("count="))
        classes = []
        for line in fh:
            h, g = line.split()
            classes.append(OrbitClass(Mbf(n, int(h, 16)), int(g)))
    if len(classes) != count:
        raise ValueError(f"{path}: header says {count} classes, found {len(classes)}")
    return n, classes
