"""Independent brute-force oracles the tests check the library against.

Everything here is written the slow, obvious way on purpose: full
pairwise scans, string manipulation, set-walking orbit enumeration.
None of it shares code with the library's fast paths.
"""

from __future__ import annotations

import itertools


def slow_is_monotone(n: int, bits: int) -> bool:
    """All-pairs check straight from the definition (O(4^n))."""
    w = 1 << n
    for i in range(w):
        for j in range(w):
            if (i & j) == i and ((bits >> i) & 1) > ((bits >> j) & 1):
                return False
    return True


def slow_leq(n: int, x: int, y: int) -> bool:
    """Positionwise scan."""
    return all((x >> i) & 1 <= (y >> i) & 1 for i in range(1 << n))


def slow_dual(n: int, bits: int) -> int:
    """Via the text form: reverse the string, complement the characters."""
    w = 1 << n
    s = "".join("1" if (bits >> i) & 1 else "0" for i in range(w))
    flipped = "".join("0" if ch == "1" else "1" for ch in reversed(s))
    return sum(1 << i for i, ch in enumerate(flipped) if ch == "1")


def slow_layer(n: int) -> list[int]:
    """Filter every raw vector through the definition check (n <= 3)."""
    return [v for v in range(1 << (1 << n)) if slow_is_monotone(n, v)]


def permute_value(n: int, bits: int, mapping: tuple[int, ...]) -> int:
    """Move digit d of every set position to digit mapping[d]."""
    out = 0
    for pos in range(1 << n):
        if (bits >> pos) & 1:
            q = 0
            for d in range(n):
                if (pos >> d) & 1:
                    q |= 1 << mapping[d]
            out |= 1 << q
    return out


def slow_orbit(n: int, bits: int) -> set[int]:
    return {
        permute_value(n, bits, m) for m in itertools.permutations(range(n))
    }


def slow_classes(n: int, values) -> list[tuple[int, int]]:
    """(representative, orbit size) pairs by set-walking, ascending."""
    seen: set[int] = set()
    out = []
    for v in sorted(int(x) for x in values):
        if v in seen:
            continue
        orbit = slow_orbit(n, v)
        seen |= orbit
        out.append((v, len(orbit)))
    return out


def slow_interval_count(values, x: int, y: int) -> int:
    """Count layer elements z with x <= z <= y, one by one."""
    total = 0
    for z in values:
        z = int(z)
        if x & ~z == 0 and z & ~y == 0:
            total += 1
    return total
