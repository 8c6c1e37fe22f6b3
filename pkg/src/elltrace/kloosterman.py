"""Kloosterman-type character sums and their Dirichlet series.

The global sum attached to a pair of ideals runs over residues mod
4 a d^2 and pairs the modified Hilbert symbol with a square congruence
condition.  It factors over primes, and each local factor falls into
one of five regimes according to the residue characteristic and the
valuation of rho.  Four regimes have proven closed tables; the fifth
(even prime dividing rho, k even) is only ever evaluated by exact
enumeration here.

All local sums are exact integers.  Local evaluation above 2 operates
on the image of the local constant inside the 2-adic completion of the
split prime, never on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import EllipticDatum, satisfies_divisor_condition
from .errors import (
    NonconvergentRequestError,
    PoleError,
    ResourceBudgetError,
    UndefinedInputError,
    UnsupportedRegimeError,
)
from .intarith import kronecker, small_primes, valuation
from .lfun import kappa, zeta_field
from .quadfield import (
    SPLIT,
    AlgInt,
    FieldDescriptor,
    Ideal,
    PrimeIdeal,
    element_valuation,
    ideal_factorization,
    ideal_multiply,
    ideal_pow,
    ideal_valuation,
    integer,
    local_image,
    principal_ideal,
    residues,
    split_prime,
    sqrt_mod_prime_power,
    unit_ideal,
)
from .symbols import _adjusted_symbol, modified_hilbert

DEFAULT_BUDGET = 4_000_000

# kronecker(x, 2) by x mod 8
_KRON2 = (0, 1, 0, -1, 0, -1, 0, 1)


def sqrt_mod_two_power(c: int, e: int) -> list[int]:
    """All x mod 2^e with x^2 = c (mod 2^e)."""
    if e == 0:
        return [0]
    pe = 1 << e
    c %= pe
    if c == 0:
        step = 1 << ((e + 1) // 2)
        return list(range(0, pe, step))
    j = valuation(c, 2)
    if j % 2 == 1:
        return []
    unit = c >> j
    rem = e - j
    if rem == 1:
        ysols = [1]
    elif rem == 2:
        ysols = [1, 3] if unit % 4 == 1 else []
    else:
        if unit % 8 != 1:
            ysols = []
        else:
            ysols = [1, 3, 5, 7]
            mod_bits = 3
            while mod_bits < rem:
                step = 1 << mod_bits
                nxt = []
                for y in ysols:
                    for cand in (y, y + step):
                        if (cand * cand - unit) % (step * 2) == 0:
                            nxt.append(cand)
                ysols = nxt
                mod_bits += 1
    if not ysols:
        return []
    half = 1 << (j // 2)
    base = 1 << rem
    out = set()
    for y in ysols:
        for t in range(half):
            out.add((half * (y + base * t)) % pe)
    return sorted(out)


@dataclass(frozen=True)
class LocalSumParams:
    """One local sum: prime, depths (v, r), and the data entering 4 u rho^k'."""

    prime: PrimeIdeal
    v: int
    r: int
    u: AlgInt
    rho: AlgInt
    k_prime: int

    def __post_init__(self) -> None:
        if self.v < 0 or self.r < 0 or self.k_prime < 0:
            raise UndefinedInputError("depths and exponent must be nonnegative")
        if not self.u.is_unit():
            raise UndefinedInputError("u must be a unit")

    @property
    def field(self) -> FieldDescriptor:
        return self.prime.field

    def constant(self) -> AlgInt:
        """The local constant 4 u rho^k'."""
        return 4 * (self.u * self.rho**self.k_prime)


def local_params(datum: EllipticDatum, prime: PrimeIdeal, v: int, r: int) -> LocalSumParams:
    return LocalSumParams(prime, v, r, datum.u, datum.rho, datum.k // datum.h)


def _check_two_adic(prime: PrimeIdeal) -> None:
    if prime.p == 2 and not prime.field.is_rational and prime.splitting != SPLIT:
        raise UnsupportedRegimeError(
            "local sums above 2 require a completion isomorphic to the 2-adics"
        )


def _regime(params: LocalSumParams) -> tuple[int, int]:
    """(regime number, local valuation of rho^k')."""
    _check_two_adic(params.prime)
    if params.k_prime == 0:
        k_loc = 0
    else:
        k_loc = params.k_prime * element_valuation(params.field, params.prime, params.rho)
    if params.prime.p != 2:
        return (1 if k_loc == 0 else 2), k_loc
    if k_loc == 0:
        return 3, 0
    return (4 if k_loc % 2 == 1 else 5), k_loc


def _is_degree_one_unramified(prime: PrimeIdeal) -> bool:
    return prime.field.is_rational or prime.splitting == SPLIT


# ---------------------------------------------------------------------------
# Exact evaluation


def _local_sum_literal(params: LocalSumParams, budget: int = DEFAULT_BUDGET) -> int:
    """Definitional sum over the full residue range."""
    prime, v, r = params.prime, params.v, params.r
    field = params.field
    c_elt = params.constant()
    if _is_degree_one_unramified(prime):
        q = prime.p
        if q == 2:
            modulus = 1 << (2 + v + 2 * r)
            if modulus > budget:
                raise ResourceBudgetError(f"literal modulus {modulus} exceeds budget {budget}")
            prec = 2 * r + 3
            c = local_image(field, prime, c_elt, max(prec, 2 + v + 2 * r))
            cond_mod = 1 << (2 * r)
            val_mod = 1 << (2 * r + 3)
            total = 0
            for mu in range(modulus):
                d = mu * mu - c
                if d % cond_mod:
                    continue
                x = (d % val_mod) >> (2 * r)
                if x % 4 > 1:
                    continue
                total += 1 if v == 0 else _KRON2[x] ** v
            return total
        modulus = q ** (v + 2 * r)
        if modulus > budget:
            raise ResourceBudgetError(f"literal modulus {modulus} exceeds budget {budget}")
        c = local_image(field, prime, c_elt, v + 2 * r + 1)
        cond_mod = q ** (2 * r)
        val_mod = cond_mod * q
        if modulus >= 4096:
            mu = np.arange(modulus, dtype=np.int64)
            d = mu * mu - np.int64(c % val_mod)
            mask = d % cond_mod == 0
            if v == 0:
                return int(mask.sum())
            leg = np.full(q, -1, dtype=np.int64)
            leg[(np.arange(q, dtype=np.int64) ** 2) % q] = 1
            leg[0] = 0
            x = (d[mask] % val_mod) // cond_mod
            s = leg[x]
            return int(s.sum() if v % 2 else np.abs(s).sum())
        total = 0
        for mu_i in range(modulus):
            d = mu_i * mu_i - c
            if d % cond_mod:
                continue
            if v == 0:
                total += 1
            else:
                x = (d % val_mod) // cond_mod
                total += kronecker(x, q) ** v
        return total
    # Inert or ramified: enumerate the residue ring of the prime power.
    _check_two_adic(prime)
    ideal = ideal_pow(prime.as_ideal(), v + 2 * r) if v + 2 * r else unit_ideal(field)
    reps = residues(field, ideal, budget)
    total = 0
    for mu in reps:
        w = mu * mu - c_elt
        if w.x == 0 and w.y == 0:
            total += 1 if v == 0 else 0
            continue
        if element_valuation(field, prime, w) < 2 * r:
            continue
        if v == 0:
            total += 1
        else:
            sym = _adjusted_symbol(w, prime, r)
            total += sym if v % 2 else abs(sym)
    return total


def _legendre_table(q: int) -> np.ndarray:
    leg = np.full(q, -1, dtype=np.int64)
    leg[(np.arange(q, dtype=np.int64) ** 2) % q] = 1
    leg[0] = 0
    return leg


def _odd_refined_histogram(
    sols: list[int], q: int, r: int, c: int
) -> tuple[int, int]:
    """(plus, minus) counts of the Legendre value over refined solutions.

    Solutions of mu^2 = c (mod q^2r) are refined one level so the unit
    part of (mu^2 - c) / q^2r is determined mod q; beyond that level
    the value is constant on lifts.
    """
    q2r = q ** (2 * r)
    leg = _legendre_table(q)
    plus = minus = 0
    t = np.arange(q, dtype=np.int64)
    for s in sols:
        x0 = ((s * s - c) // q2r) % q
        xs = (x0 + ((2 * s) % q) * t + (q2r % q) * t * t) % q
        vals = leg[xs]
        plus += int((vals == 1).sum())
        minus += int((vals == -1).sum())
    return plus, minus


def _two_refined_histogram(sols: list[int], r: int, c: int) -> tuple[int, int]:
    """(plus, minus) counts of kronecker(x, 2) over admissible refined lifts."""
    base = 1 << (2 * r)
    val_mod = 1 << (2 * r + 3)
    plus = minus = 0
    for s in sols:
        for t in range(8):
            mu = s + t * base
            x = ((mu * mu - c) % val_mod) >> (2 * r)
            if x % 4 > 1:
                continue
            k2 = _KRON2[x]
            if k2 == 1:
                plus += 1
            elif k2 == -1:
                minus += 1
    return plus, minus


def _local_sum_families(params: LocalSumParams, budget: int = DEFAULT_BUDGET) -> int:
    """Exact sum by enumerating square-root families instead of all residues."""
    prime, v, r = params.prime, params.v, params.r
    if not _is_degree_one_unramified(prime):
        raise UndefinedInputError("family enumeration needs a degree-one unramified prime")
    field = params.field
    c_elt = params.constant()
    q = prime.p
    if q == 2:
        c = local_image(field, prime, c_elt, 2 * r + 3)
        if v == 0:
            base = 1 << (2 * r)
            mod = base * 4
            cc = c % mod
            return len(sqrt_mod_two_power(cc, 2 * r + 2)) + len(
                sqrt_mod_two_power((cc + base) % mod, 2 * r + 2)
            )
        sols = sqrt_mod_two_power(c % (1 << (2 * r)), 2 * r)
        if 8 * len(sols) > budget:
            raise ResourceBudgetError("solution family exceeds budget")
        plus, minus = _two_refined_histogram(sols, r, c)
        lift = 1 << (v - 1)
        return lift * ((plus - minus) if v % 2 else (plus + minus))
    c = local_image(field, prime, c_elt, v + 2 * r + 1)
    if v == 0:
        if r == 0:
            return 1
        return len(sqrt_mod_prime_power(c % q ** (2 * r), q, 2 * r))
    sols = [0] if r == 0 else sqrt_mod_prime_power(c % q ** (2 * r), q, 2 * r)
    if q * len(sols) > budget:
        raise ResourceBudgetError("solution family exceeds budget")
    plus, minus = _odd_refined_histogram(sols, q, r, c % q ** (2 * r + 1))
    lift = q ** (v - 1)
    return lift * ((plus - minus) if v % 2 else (plus + minus))


_LITERAL_CUTOFF = 65536


def local_sum_bruteforce(params: LocalSumParams, budget: int = DEFAULT_BUDGET) -> int:
    """Exact local sum by enumeration (full range or square-root families)."""
    prime = params.prime
    _check_two_adic(prime)
    if not _is_degree_one_unramified(prime):
        return _local_sum_literal(params, budget)
    q = prime.p
    modulus = (1 << (2 + params.v + 2 * params.r)) if q == 2 else q ** (params.v + 2 * params.r)
    if modulus <= _LITERAL_CUTOFF:
        return _local_sum_literal(params, budget)
    return _local_sum_families(params, budget)


# ---------------------------------------------------------------------------
# Closed tables (four proven regimes)


def _table_regime1(q: int, chi: int, v: int, r: int) -> int:
    if v == 0:
        return 1 if r == 0 else 1 + chi
    if v % 2 == 0:
        if r == 0:
            return q**v - q ** (v - 1) * (1 + chi)
        return q ** (v - 1) * (q - 1) * (1 + chi)
    return -(q ** (v - 1)) if r == 0 else 0


def _table_regime2_odd_k(q: int, k: int, v: int, r: int) -> int:
    k0 = (k - 1) // 2
    if r == 0:
        return 1 if v == 0 else q**v - q ** (v - 1)
    if r > k0:
        return 0
    return q**r if v == 0 else q ** (r + v) - q ** (r + v - 1)


def _table_regime2_even_k(q: int, k: int, chi: int, v: int, r: int) -> int:
    k0 = k // 2
    if v == 0:
        if r <= k0:
            return q**r
        return q**k0 * (1 + chi)
    if r <= k0 - 1:
        return q ** (r + v) - q ** (r + v - 1)
    if r == k0:
        if v % 2 == 0:
            return q ** (k0 + v) - q ** (k0 + v - 1) * (1 + chi)
        return -(q ** (k0 + v - 1))
    if v % 2 == 0:
        return (q - 1) * q ** (k0 + v - 1) * (1 + chi)
    return 0


def _table_regime3(c8: int, v: int, r: int) -> int:
    if v == 0:
        if r <= 1:
            return 4
        if r == 2:
            return 8 if c8 in (1, 5) else 0
        return 16 if c8 == 1 else 0
    if v % 2 == 1:
        return -(1 << (v + 1)) if r == 0 else 0
    if r == 0:
        return 1 << (v + 1)
    if r == 1:
        return (1 << (v + 2)) if c8 in (3, 7) else 0
    if r == 2:
        return (1 << (v + 3)) if c8 == 5 else 0
    return (1 << (v + 3)) if c8 == 1 else 0


def _table_regime4(k: int, v: int, r: int) -> int:
    k0 = (k - 1) // 2
    if r == 0:
        return 4 if v == 0 else 1 << (v + 1)
    if r > k0:
        return 0
    return (1 << (2 + r)) if v == 0 else (1 << (v + r + 1))


def local_sum_closed(params: LocalSumParams) -> int:
    """Table value for the local sum; the even-k regime above 2 is unproven."""
    regime, k_loc = _regime(params)
    q = params.prime.norm
    v, r = params.v, params.r
    if regime == 1:
        chi = _adjusted_symbol(params.constant(), params.prime, 0)
        return _table_regime1(q, chi, v, r)
    if regime == 2:
        if k_loc % 2 == 1:
            return _table_regime2_odd_k(q, k_loc, v, r)
        chi = _adjusted_symbol(params.constant(), params.prime, k_loc // 2)
        return _table_regime2_even_k(q, k_loc, chi, v, r)
    if regime == 3:
        image = local_image(params.field, params.prime, params.constant(), 5)
        return _table_regime3((image >> 2) % 8, v, r)
    if regime == 4:
        return _table_regime4(k_loc, v, r)
    raise UnsupportedRegimeError(
        "no proven closed table above 2 with rho of even local valuation"
    )


# ---------------------------------------------------------------------------
# Dirichlet series


@dataclass(frozen=True)
class DirichletEval:
    """A truncated Dirichlet value with its growth-bound tail estimate."""

    z: complex
    value: complex
    tail_bound: float
    v_max: int
    r_max: int
    closed_reference: complex | None = None


def _weight(norm: int, z: complex, v: int, r: int) -> complex:
    return complex(norm) ** (-(v * (z + 1) + r * (2 * z + 1)))


def _box_tail(norm: int, z: complex, v_max: int, r_max: int, scale: float) -> float:
    """Tail of the growth bound scale * norm^(v+2r) outside the (v_max, r_max) box."""
    sigma = z.real if isinstance(z, complex) else float(z)
    a = float(norm) ** (-sigma)
    b = float(norm) ** (1 - 2 * sigma)
    if a >= 1 or b >= 1:
        raise NonconvergentRequestError("tail bounds require Re z > 1")
    head_a = (1 - a ** (v_max + 1)) / (1 - a)
    tail_a = a ** (v_max + 1) / (1 - a)
    tail_b = b ** (r_max + 1) / (1 - b)
    return scale * (tail_a / (1 - b) + head_a * tail_b)


def local_dirichlet_closed(prime: PrimeIdeal, z: complex, datum: EllipticDatum) -> complex:
    """Closed local Dirichlet factor in the four proven regimes."""
    params = local_params(datum, prime, 0, 0)
    regime, k_loc = _regime(params)
    if regime == 5:
        raise UnsupportedRegimeError(
            "no proven closed Dirichlet factor above 2 with rho of even local valuation"
        )
    q = prime.norm
    x1 = complex(q) ** (-(z + 1))
    x2 = complex(q) ** (-2 * z)
    xz = complex(q) ** (-z)
    if abs(1 - x2) < 1e-12 or (regime in (2, 4) and abs(1 - xz) < 1e-12):
        raise PoleError("local Dirichlet factor evaluated at a pole")
    if regime == 1:
        return (1 - x1) / (1 - x2)
    if regime == 2:
        return (1 - x1) * (1 - xz ** (k_loc + 1)) / ((1 - x2) * (1 - xz))
    if regime == 3:
        return 4 * (1 - x1) / (1 - x2)
    return 4 * (1 - xz ** (k_loc + 1)) * (1 - x1) / ((1 - x2) * (1 - xz))


def local_dirichlet_truncated(
    prime: PrimeIdeal,
    z: complex,
    datum: EllipticDatum,
    v_max: int,
    r_max: int,
    budget: int = DEFAULT_BUDGET,
) -> DirichletEval:
    """Truncated local Dirichlet factor from exact sums, with a tail bound."""
    zc = complex(z)
    if zc.real <= 1:
        raise NonconvergentRequestError("truncated local factors require Re z > 1")
    norm = prime.norm
    scale = 4.0 if prime.p == 2 else 1.0
    total = 0j
    abs_accum = 0.0
    cells = 0
    for v in range(v_max + 1):
        for r in range(r_max + 1):
            term = local_sum_bruteforce(local_params(datum, prime, v, r), budget)
            cells += 1
            if term:
                contrib = term * _weight(norm, zc, v, r)
                total += contrib
                abs_accum += abs(contrib)
    tail = _box_tail(norm, zc, v_max, r_max, scale)
    # deep truncations: summation roundoff can exceed the analytic tail
    roundoff = cells * 2.0**-52 * abs_accum
    return DirichletEval(zc, total, tail + roundoff, v_max, r_max)


# ---------------------------------------------------------------------------
# Global sums and the global Dirichlet series


def global_sum_bruteforce(
    datum: EllipticDatum, a: Ideal, d: Ideal, budget: int = 2_000_000
) -> int:
    """The full character sum over residues mod 4 a d^2, by enumeration."""
    field = datum.field
    modulus = ideal_multiply(
        principal_ideal(field, integer(field, 4)), ideal_multiply(a, ideal_pow(d, 2))
    )
    c4 = 4 * (datum.u * datum.epsilon)
    total = 0
    for mu in residues(field, modulus, budget):
        w = mu * mu - c4
        if w.x == 0 and w.y == 0:
            total += 1 if a.norm == 1 else 0
            continue
        if not satisfies_divisor_condition(field, w, d):
            continue
        total += modified_hilbert(w, d, a)
    return total


def _field_primes(field: FieldDescriptor, norm_bound: int) -> list[PrimeIdeal]:
    out = []
    for p in small_primes():
        if p > norm_bound:
            break
        for prime in split_prime(field, p):
            if prime.norm <= norm_bound:
                out.append(prime)
    return out


def _depth_for(norm: int, z: complex, scale: float, tol: float) -> tuple[int, int]:
    v_max, r_max = 1, 0
    while _box_tail(norm, z, v_max, 10**6, scale) > tol / 2 and v_max < 400:
        v_max += 1
    while _box_tail(norm, z, v_max, r_max, scale) > tol and r_max < 200:
        r_max += 1
    return v_max, r_max


def _local_series_enum(
    prime: PrimeIdeal, z: complex, datum: EllipticDatum, v_max: int, r_max: int
) -> complex:
    """Truncated local factor from exact family sums, shared work per prime."""
    field = datum.field
    q = prime.p
    c_elt = 4 * (datum.u * datum.epsilon)
    norm = prime.norm
    total = 1 + 0j  # the (0, 0) cell for odd primes; replaced below for q = 2
    if q == 2:
        c_full = local_image(field, prime, c_elt, 2 * r_max + 3 + 1)
        total = 0j
        for r in range(r_max + 1):
            base = 1 << (2 * r)
            c_r = c_full % (base << 3)
            cc = c_full % (base << 2)
            count0 = len(sqrt_mod_two_power(cc, 2 * r + 2)) + len(
                sqrt_mod_two_power((cc + base) % (base << 2), 2 * r + 2)
            )
            total += count0 * _weight(norm, z, 0, r)
            sols = sqrt_mod_two_power(c_full % base, 2 * r)
            plus, minus = _two_refined_histogram(sols, r, c_r)
            diff, tot = plus - minus, plus + minus
            if diff == 0 and tot == 0:
                continue
            for v in range(1, v_max + 1):
                term = (1 << (v - 1)) * (diff if v % 2 else tot)
                if term:
                    total += term * _weight(norm, z, v, r)
        return total
    c_full = local_image(field, prime, c_elt, 2 * r_max + 2)
    for r in range(r_max + 1):
        q2r = q ** (2 * r)
        c_r = c_full % (q2r * q)
        if r > 0:
            sols = sqrt_mod_prime_power(c_full % q2r, q, 2 * r)
            total += len(sols) * _weight(norm, z, 0, r)
        else:
            sols = [0]
        plus, minus = _odd_refined_histogram(sols, q, r, c_r)
        diff, tot = plus - minus, plus + minus
        if diff == 0 and tot == 0:
            continue
        for v in range(1, v_max + 1):
            term = q ** (v - 1) * (diff if v % 2 else tot)
            total += term * _weight(norm, z, v, r)
    return total


def _local_series_table(
    prime: PrimeIdeal, z: complex, datum: EllipticDatum, v_max: int, r_max: int
) -> complex:
    """Truncated local factor from the proven tables (inert/ramified primes)."""
    params0 = local_params(datum, prime, 0, 0)
    regime, k_loc = _regime(params0)
    q = prime.norm
    if regime == 1:
        chi = _adjusted_symbol(params0.constant(), prime, 0)
        row = lambda v, r: _table_regime1(q, chi, v, r)
    elif regime == 2 and k_loc % 2 == 1:
        row = lambda v, r: _table_regime2_odd_k(q, k_loc, v, r)
    elif regime == 2:
        chi = _adjusted_symbol(params0.constant(), prime, k_loc // 2)
        row = lambda v, r: _table_regime2_even_k(q, k_loc, chi, v, r)
    else:
        raise UnsupportedRegimeError("table route is only for odd residue characteristic")
    total = 0j
    for v in range(v_max + 1):
        for r in range(r_max + 1):
            term = row(v, r)
            if term:
                total += term * _weight(q, z, v, r)
    return total


def global_dirichlet_closed(z: complex, datum: EllipticDatum) -> complex:
    """The closed form 4^n zeta_K(2z)/zeta_K(z+1) times the rho-power factor."""
    field = datum.field
    zc = complex(z)
    value = 4**field.degree * zeta_field(field, 2 * zc) / zeta_field(field, zc + 1)
    if datum.k:
        p = datum.p
        pz = complex(p) ** (-zc)
        if abs(1 - pz) < 1e-12:
            raise PoleError("rho-power factor evaluated at a pole")
        value *= (1 - pz ** (datum.k + 1)) / (1 - pz)
    return value


def global_dirichlet(
    z: complex,
    datum: EllipticDatum,
    norm_bound: int,
    tol: float = 1e-12,
    budget: int = DEFAULT_BUDGET,
) -> DirichletEval:
    """Truncated double ideal sum of the global Dirichlet series.

    The truncation is taken in Euler form: the proven prime
    factorization of the sums turns the double ideal series into a
    product of local series, and the partial product over primes of
    norm at most norm_bound, each summed to depth meeting tol, is a
    finite subsum of the double series.  A rectangular norm cut cannot
    push the unit-dependence of the remainder below the requested
    tolerances; this one can, because per-prime depths are cheap.
    """
    zc = complex(z)
    if zc.real <= 1:
        raise NonconvergentRequestError("the global series is summed only for Re z > 1")
    field = datum.field
    primes = _field_primes(field, norm_bound)
    if not primes:
        raise UndefinedInputError("norm bound excludes every prime")
    per_prime_tol = tol / (4 * len(primes))
    value = complex(1.0)
    tail_sum = 0.0
    deepest_v = deepest_r = 0
    for prime in primes:
        scale = 4.0 if prime.p == 2 else 1.0
        v_max, r_max = _depth_for(prime.norm, zc, scale, per_prime_tol)
        deepest_v, deepest_r = max(deepest_v, v_max), max(deepest_r, r_max)
        if _is_degree_one_unramified(prime):
            factor = _local_series_enum(prime, zc, datum, v_max, r_max)
        else:
            factor = _local_series_table(prime, zc, datum, v_max, r_max)
        value *= factor
        tail_sum += _box_tail(prime.norm, zc, v_max, r_max, scale)
    sigma = zc.real
    s0 = min(sigma, 2 * sigma - 1)
    omitted = 4.0 * float(norm_bound) ** (1 - s0) / (s0 - 1)
    tail_bound = abs(value) * float(np.expm1(2 * tail_sum + omitted))
    return DirichletEval(
        zc, value, tail_bound, deepest_v, deepest_r, global_dirichlet_closed(zc, datum)
    )


def residue_display(datum: EllipticDatum) -> float:
    """The displayed residue value 4^n kappa / zeta_K(3/2) times the rho factor."""
    field = datum.field
    value = 4**field.degree * kappa(field) / zeta_field(field, 1.5).real
    if datum.k:
        p = datum.p
        value *= (1 - float(p) ** (-(datum.k + 1) / 2)) / (1 - float(p) ** -0.5)
    return value


def residue_at_half(datum: EllipticDatum) -> float:
    """Residue of the closed-form series at z = 1/2, in the pole variable 2z.

    Computed as the symmetric limit of (2z - 1) times the closed form,
    Richardson-extrapolated in the step; matches the displayed
    expression because the pole enters through zeta_K at 2z.
    """

    def symmetric(h: float) -> float:
        up = global_dirichlet_closed(0.5 + h, datum)
        down = global_dirichlet_closed(0.5 - h, datum)
        return (h * (up - down)).real

    h = 1e-2
    return (4 * symmetric(h / 2) - symmetric(h)) / 3


def langlands_sum(q: int, m: int) -> int:
    """Sum of kronecker(x^2 - m, q) over x mod q; equals -1 for odd q, q not dividing m."""
    if q < 3 or q % 2 == 0:
        raise UndefinedInputError("q must be an odd prime")
    if m % q == 0:
        raise UndefinedInputError("m must be coprime to q")
    return sum(kronecker(x * x - m, q) for x in range(q))
