"""Integer substrate: Kronecker symbol, deterministic factorization, valuations.

Everything downstream (ideal arithmetic, local symbols, character sums) reduces
to the three functions in this module, so they are total, exact, and pure.
"""

from __future__ import annotations

import math

from .errors import ResourceBudgetError, UndefinedInputError

# Factorization maps prime -> exponent; keys are produced in increasing order.
Factorization = dict[int, int]

_TRIAL_LIMIT = 10**6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_small_primes: list[int] | None = None


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), totally extended: n may be negative, even, or zero.

    Agrees with the Legendre symbol for odd prime n and is completely
    multiplicative in both arguments. (a|0) is 1 iff |a| = 1, else 0.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # n odd and positive: Jacobi via quadratic reciprocity.
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def small_primes() -> list[int]:
    """Primes below the trial-division limit, sieved once and cached."""
    global _small_primes
    if _small_primes is None:
        limit = _TRIAL_LIMIT
        sieve = bytearray([1]) * (limit + 1)
        sieve[0] = sieve[1] = 0
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _small_primes = [i for i in range(limit + 1) if sieve[i]]
    return _small_primes


def _rho_factor(n: int, budget: int) -> int:
    """Brent's cycle-finding rho; deterministic constants, returns a proper factor."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        iterations = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            iterations += r
            if iterations > budget:
                raise ResourceBudgetError(
                    f"factorization budget exhausted on {n} (budget {budget})"
                )
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ResourceBudgetError(f"rho failed to split {n}")


def factorize(n: int, rho_budget: int = 4_000_000) -> Factorization:
    """Exact prime factorization of n >= 1 with keys in increasing order.

    Trial division below 10^6, then deterministic Brent rho; a budget on the
    rho iteration count guards against cryptographic-size inputs.
    """
    if n < 1:
        raise UndefinedInputError(f"factorize requires n >= 1, got {n}")
    factors: Factorization = {}
    # Small inputs never pay for the full sieve.
    if n < 10**6:
        p = 2
        while p * p <= n:
            while n % p == 0:
                factors[p] = factors.get(p, 0) + 1
                n //= p
            p += 1 if p == 2 else 2
        if n > 1:
            factors[n] = factors.get(n, 0) + 1
        return dict(sorted(factors.items()))
    for p in small_primes():
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # Remaining cofactor: 1, a prime, or a product of primes above the trial range.
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _rho_factor(m, rho_budget)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(factors.items()))


def valuation(n: int, p: int) -> int:
    """Largest e with p^e dividing n; n must be nonzero."""
    if n == 0:
        raise UndefinedInputError("valuation of 0 is undefined")
    if p < 2:
        raise UndefinedInputError(f"valuation requires p >= 2, got {p}")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def divisors_from_factorization(factors: Factorization) -> list[int]:
    """All positive divisors, ascending, of the value the factorization describes."""
    divs = [1]
    for p, e in factors.items():
        divs = [d * q for d in divs for q in (p**i for i in range(e + 1))]
    return sorted(divs)
