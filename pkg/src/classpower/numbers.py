"""Small integer helpers."""

from __future__ import annotations


def prime_factorization(n: int) -> dict[int, int]:
    n = int(n)
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def prime_divisors(n: int) -> set[int]:
    return set(prime_factorization(n))


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if prime_factorization(p) == {p: 1}]


def is_prime_power(n: int) -> bool:
    """True for ``p^a`` with ``a >= 1``; 1 is not a prime power."""
    return len(prime_factorization(n)) == 1
