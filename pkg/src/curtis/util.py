"""Shared small utilities: orders, partitions, guards."""

from __future__ import annotations

from math import gcd


class GuardExceeded(RuntimeError):
    """An enumeration would exceed its desk-scale guard."""


def multiplicative_order(a: int, n: int) -> int:
    """Order of a modulo n; n = 1 gives 1."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    order = 1
    acc = a % n
    while acc != 1:
        acc = acc * a % n
        order += 1
    return order


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def prime_power_base(n: int) -> int | None:
    """The prime p if n is a power of p, else None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else None
        p += 1
    return n


def partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of n as descending tuples."""
    return partitions_with_parts(n, list(range(1, n + 1)))


def partitions_with_parts(n: int, parts: list[int]) -> list[tuple[int, ...]]:
    """Partitions of n using only the given part sizes, descending tuples."""
    parts = sorted(set(parts), reverse=True)
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, max_idx: int, acc: list[int]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(max_idx, len(parts)):
            p = parts[i]
            if p <= remaining:
                acc.append(p)
                rec(remaining - p, i, acc)
                acc.pop()

    rec(n, 0, [])
    return out
