"""Exact minimum linear arrangement over the subset lattice.

Every problem here has the shape ``min over orders of max over proper
prefixes T of cost(T)`` where ``cost`` depends only on the set ``T``.  The
table ``best[S]`` is the optimum over orders of ``S`` placed first, so

    best[S] = min over v in S of max(best[S - v], cost(S))

with ``cost`` skipped for the full set.  Subsets are bitmasks; bit ``i`` is
element ``i``.
"""

from __future__ import annotations

import os
from typing import Callable, Iterable, Sequence

from .errors import CapExceededError

DEFAULT_N_CAP = 20
N_CAP_ENV = "ROABP_NCAP"


def n_cap() -> int:
    """The size cap for exact searches; the environment variable overrides the default."""
    raw = os.environ.get(N_CAP_ENV)
    if raw is None:
        return DEFAULT_N_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise CapExceededError(f"{N_CAP_ENV}={raw!r} is not an integer") from None
    if cap < 1:
        raise CapExceededError(f"{N_CAP_ENV} must be positive")
    return cap


def check_cap(n: int, cap: int | None, what: str) -> None:
    cap = n_cap() if cap is None else cap
    if n > cap:
        raise CapExceededError(
            f"{what} on {n} elements visits 2^{n} subsets; cap is {cap} "
            f"(raise it with --ncap or {N_CAP_ENV})"
        )


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def masks_by_size(n: int) -> list[list[int]]:
    levels: list[list[int]] = [[] for _ in range(n + 1)]
    for m in range(1 << n):
        levels[m.bit_count()].append(m)
    return levels


def prefix_cost(order: Sequence[int], cost: Callable[[int], int], floor: int = 0) -> int:
    """``max(floor, max over proper nonempty prefixes of cost)`` for one order."""
    best = floor
    mask = 0
    for v in order[:-1]:
        mask |= 1 << v
        best = max(best, cost(mask))
    return best


def min_arrangement(
    n: int,
    cost: Callable[[int], int],
    floor: int = 0,
    cap: int | None = None,
    what: str = "arrangement search",
) -> tuple[int, list[int]]:
    """Minimum over orders of ``prefix_cost``, with a witness order.

    Ties keep the smallest last-added element, so witnesses are deterministic.
    The table is filled level by level; ``cost`` is called once per proper
    nonempty subset.
    """
    check_cap(n, cap, what)
    full = (1 << n) - 1
    best = [0] * (1 << n)
    back = [0] * (1 << n)
    best[0] = floor
    for level in masks_by_size(n)[1:]:
        for S in level:
            here = cost(S) if S != full else floor
            choice = -1
            value = None
            rest = S
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                cand = best[S ^ low]
                if value is None or cand < value:
                    value, choice = cand, v
            best[S] = max(value, here)
            back[S] = choice
    order = []
    S = full
    while S:
        v = back[S]
        order.append(v)
        S ^= 1 << v
    order.reverse()
    return best[full], order
