"""Base-field arithmetic: the rationals or a real quadratic field.

Elements are exact integer coordinate pairs over the integral basis (1, omega),
ideals are kept in two-row Hermite normal form, and local data at split primes
is reached through Hensel-lifted roots of the minimal polynomial of omega.
Class-group data is never computed; principality inputs are supplied by the
caller and validated.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import mpmath

from .errors import (
    ConfigError,
    InvalidFieldError,
    NotApplicableError,
    ResourceBudgetError,
    UndefinedInputError,
)
from .intarith import factorize, kronecker, valuation

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"


@dataclass(frozen=True)
class FieldDescriptor:
    """The rationals (m is None) or the real quadratic field of squarefree m > 1.

    omega satisfies omega^2 = omega_t * omega + omega_n, with omega = sqrt(m)
    when m is 2 or 3 mod 4 and omega = (1 + sqrt(m))/2 when m is 1 mod 4.
    """

    kind: str
    m: int | None
    disc: int
    degree: int
    omega_t: int
    omega_n: int

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    def omega_embeddings(self, dps: int = 30) -> tuple[mpmath.mpf, mpmath.mpf]:
        """The two real images of omega, larger first."""
        if self.is_rational:
            raise NotApplicableError("the rationals have a single trivial embedding")
        with mpmath.workdps(dps):
            root = mpmath.sqrt(self.omega_t**2 + 4 * self.omega_n)
            return (
                (self.omega_t + root) / 2,
                (self.omega_t - root) / 2,
            )


def field_init(m: int | None = None) -> FieldDescriptor:
    """Build a field descriptor for the rationals (m absent) or Q(sqrt m)."""
    if m is None:
        return FieldDescriptor(kind="rational", m=None, disc=1, degree=1, omega_t=0, omega_n=0)
    if m <= 1:
        raise InvalidFieldError(f"m must exceed 1, got {m}")
    if any(e >= 2 for e in factorize(m).values()):
        raise InvalidFieldError(f"m must be squarefree, got {m}")
    if m % 4 == 1:
        return FieldDescriptor(
            kind="real_quadratic", m=m, disc=m, degree=2, omega_t=1, omega_n=(m - 1) // 4
        )
    return FieldDescriptor(kind="real_quadratic", m=m, disc=4 * m, degree=2, omega_t=0, omega_n=m)


@dataclass(frozen=True)
class AlgInt:
    """x + y*omega with integer coordinates; y = 0 over the rationals."""

    field: FieldDescriptor
    x: int
    y: int

    def __post_init__(self) -> None:
        if self.field.is_rational and self.y != 0:
            raise UndefinedInputError("rational elements have no omega component")

    def _check(self, other: AlgInt) -> None:
        if self.field != other.field:
            raise UndefinedInputError("elements belong to different fields")

    def __add__(self, other: AlgInt) -> AlgInt:
        self._check(other)
        return AlgInt(self.field, self.x + other.x, self.y + other.y)

    def __sub__(self, other: AlgInt) -> AlgInt:
        self._check(other)
        return AlgInt(self.field, self.x - other.x, self.y - other.y)

    def __neg__(self) -> AlgInt:
        return AlgInt(self.field, -self.x, -self.y)

    def __mul__(self, other: AlgInt | int) -> AlgInt:
        if isinstance(other, int):
            return AlgInt(self.field, self.x * other, self.y * other)
        self._check(other)
        t, n = self.field.omega_t, self.field.omega_n
        cross = self.y * other.y
        return AlgInt(
            self.field,
            self.x * other.x + cross * n,
            self.x * other.y + self.y * other.x + cross * t,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> AlgInt:
        if e < 0:
            return self.inverse() ** (-e)
        result = AlgInt(self.field, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> AlgInt:
        return AlgInt(self.field, self.x + self.y * self.field.omega_t, -self.y)

    def norm(self) -> int:
        t, n = self.field.omega_t, self.field.omega_n
        return self.x**2 + self.x * self.y * t - self.y**2 * n

    def trace(self) -> int:
        return 2 * self.x + self.y * self.field.omega_t

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse(self) -> AlgInt:
        nrm = self.norm()
        if abs(nrm) != 1:
            raise UndefinedInputError("only units are invertible in the ring of integers")
        return self.conj() * nrm

    def embeddings(self, dps: int = 30) -> tuple[mpmath.mpf, ...]:
        if self.field.is_rational:
            return (mpmath.mpf(self.x),)
        w1, w2 = self.field.omega_embeddings(dps)
        return (self.x + self.y * w1, self.x + self.y * w2)

    def is_totally_positive(self) -> bool:
        if self.field.is_rational:
            return self.x > 0
        # sigma1 + sigma2 = trace, sigma1 * sigma2 = norm: both positive iff
        # the norm is positive and the trace is positive.
        return self.norm() > 0 and self.trace() > 0

    def __repr__(self) -> str:
        if self.field.is_rational:
            return f"AlgInt({self.x})"
        return f"AlgInt({self.x} + {self.y}*w)"


def integer(field: FieldDescriptor, x: int, y: int = 0) -> AlgInt:
    return AlgInt(field, x, y)


@dataclass(frozen=True)
class PrimeIdeal:
    """A maximal ideal of O_K above the rational prime p.

    For a split prime, root_mod_p is the residue of omega the local projection
    sends omega to; the two primes above p carry the two roots, smaller root
    on the first-listed prime.
    """

    field: FieldDescriptor
    p: int
    splitting: str
    f: int
    e: int
    norm: int
    root_mod_p: int | None
    uniformizer: AlgInt

    def as_ideal(self) -> "Ideal":
        return _prime_as_ideal(self)


@dataclass(frozen=True)
class Ideal:
    """Nonzero integral ideal in HNF: Z-span of (a, 0) and (b, c) over (1, omega).

    Normalized so that c | a, c | b, 0 <= b < a; the norm is a*c. Over the
    rationals the form is (a, 0, 1) and the norm is a.
    """

    field: FieldDescriptor
    a: int
    b: int
    c: int

    @property
    def norm(self) -> int:
        return self.a if self.field.is_rational else self.a * self.c

    def basis_elements(self) -> tuple[AlgInt, AlgInt]:
        return (AlgInt(self.field, self.a, 0), AlgInt(self.field, self.b, self.c))

    def __repr__(self) -> str:
        if self.field.is_rational:
            return f"Ideal({self.a})"
        return f"Ideal([{self.a}, {self.b}+{self.c}w])"


def _hnf_from_rows(field: FieldDescriptor, rows: list[tuple[int, int]]) -> Ideal:
    """HNF of the Z-module spanned by coordinate rows (x, y)."""
    rows = [(x, y) for x, y in rows if x or y]
    if not rows:
        raise UndefinedInputError("the zero module is not an ideal")
    # Column echelon over Z: (b, c) with c = gcd of the omega coordinates.
    b, c = 0, 0
    for x, y in rows:
        if y == 0:
            continue
        if c == 0:
            b, c = x, y
        else:
            g, s, t = _xgcd(c, y)
            b, c = s * b + t * x, g
    if c < 0:
        b, c = -b, -c
    a = 0
    for x, y in rows:
        reduced = x - (y // c) * b if c else x
        a = math.gcd(a, reduced)
    if a == 0:
        raise UndefinedInputError("degenerate module: no rational part")
    b %= a
    return Ideal(field, a, b, c)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, s, t with s*a + t*b = g = gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def ideal_from_elements(field: FieldDescriptor, gens: list[AlgInt]) -> Ideal:
    """The integral ideal generated by gens (as an O_K-module)."""
    if field.is_rational:
        g = 0
        for elt in gens:
            g = math.gcd(g, elt.x)
        if g == 0:
            raise UndefinedInputError("the zero ideal is excluded")
        return Ideal(field, g, 0, 1)
    rows: list[tuple[int, int]] = []
    omega = AlgInt(field, 0, 1)
    for elt in gens:
        rows.append((elt.x, elt.y))
        shifted = elt * omega
        rows.append((shifted.x, shifted.y))
    return _hnf_from_rows(field, rows)


def principal_ideal(field: FieldDescriptor, elt: AlgInt) -> Ideal:
    return ideal_from_elements(field, [elt])


def ideal_multiply(i: Ideal, j: Ideal) -> Ideal:
    if i.field != j.field:
        raise UndefinedInputError("ideals belong to different fields")
    if i.field.is_rational:
        return Ideal(i.field, i.a * j.a, 0, 1)
    e1, e2 = i.basis_elements()
    f1, f2 = j.basis_elements()
    return ideal_from_elements(i.field, [e1 * f1, e1 * f2, e2 * f1, e2 * f2])


def ideal_add(i: Ideal, j: Ideal) -> Ideal:
    """The ideal gcd: smallest ideal containing both."""
    if i.field != j.field:
        raise UndefinedInputError("ideals belong to different fields")
    if i.field.is_rational:
        return Ideal(i.field, math.gcd(i.a, j.a), 0, 1)
    rows = [(i.a, 0), (i.b, i.c), (j.a, 0), (j.b, j.c)]
    return _hnf_from_rows(i.field, rows)


def ideal_pow(i: Ideal, e: int) -> Ideal:
    if e < 0:
        raise UndefinedInputError("negative ideal powers are not integral")
    result = unit_ideal(i.field)
    for _ in range(e):
        result = ideal_multiply(result, i)
    return result


def unit_ideal(field: FieldDescriptor) -> Ideal:
    return Ideal(field, 1, 0, 1)


@lru_cache(maxsize=None)
def _prime_as_ideal(q: PrimeIdeal) -> Ideal:
    field = q.field
    if field.is_rational:
        return Ideal(field, q.p, 0, 1)
    if q.splitting == INERT:
        return Ideal(field, q.p, 0, q.p)
    return ideal_from_elements(
        field, [AlgInt(field, q.p, 0), q.uniformizer]
    )


def split_prime(field: FieldDescriptor, p: int) -> list[PrimeIdeal]:
    """The primes of O_K above p, with deterministic uniformizer choices."""
    return list(_split_prime_cached(field, p))


@lru_cache(maxsize=None)
def _split_prime_cached(field: FieldDescriptor, p: int) -> tuple[PrimeIdeal, ...]:
    if field.is_rational:
        return (
            PrimeIdeal(field, p, SPLIT, 1, 1, p, 0, AlgInt(field, p, 0)),
        )
    t, n = field.omega_t, field.omega_n
    symbol = kronecker(field.disc, p)
    if symbol == 1:
        roots = sorted(r for r in range(p) if (r * r - t * r - n) % p == 0)
        out = []
        for r in roots:
            pi = AlgInt(field, -r, 1)  # omega - r
            # Valuation 1 is needed of a uniformizer; nudge by p when the root
            # accidentally lifts one level further.
            if valuation(pi.norm(), p) > 1:
                pi = AlgInt(field, -r + p, 1)
            out.append(PrimeIdeal(field, p, SPLIT, 1, 1, p, r, pi))
        return tuple(out)
    if symbol == -1:
        return (PrimeIdeal(field, p, INERT, 2, 1, p * p, None, AlgInt(field, p, 0)),)
    # Ramified: find the double root of the minimal polynomial mod p and a
    # degree-one uniformizer.
    root = next(r for r in range(p) if (r * r - t * r - n) % p == 0)
    pi = AlgInt(field, -root, 1)
    if valuation(pi.norm(), p) != 1:
        pi = AlgInt(field, -root + p, 1)
    if valuation(pi.norm(), p) != 1:
        raise InvalidFieldError(f"no degree-one uniformizer above ramified {p}")
    return (PrimeIdeal(field, p, RAMIFIED, 1, 2, p, root, pi),)


_hensel_cache: dict[tuple[FieldDescriptor, int, int], tuple[int, int]] = {}


def hensel_root(field: FieldDescriptor, q: PrimeIdeal, precision: int) -> int:
    """Root of the minimal polynomial of omega mod p^precision attached to q."""
    if q.splitting != SPLIT or field.is_rational:
        raise UndefinedInputError("local projections exist only at split primes")
    key = (field, q.p, q.root_mod_p)
    root, prec = _hensel_cache.get(key, (q.root_mod_p, 1))
    t, n = field.omega_t, field.omega_n
    while prec < precision:
        prec *= 2
        mod = q.p**prec
        f_val = (root * root - t * root - n) % mod
        deriv = (2 * root - t) % mod
        root = (root - f_val * pow(deriv, -1, mod)) % mod
    _hensel_cache[key] = (root, prec)
    return root % q.p**precision


def local_image(field: FieldDescriptor, q: PrimeIdeal, elt: AlgInt, precision: int) -> int:
    """Image of elt in Z/p^precision under the projection attached to split q."""
    if field.is_rational:
        return elt.x % q.p**precision
    root = hensel_root(field, q, precision)
    return (elt.x + elt.y * root) % q.p**precision


def element_valuation(field: FieldDescriptor, q: PrimeIdeal, elt: AlgInt) -> int:
    """Valuation of a nonzero element at the prime q."""
    if elt.x == 0 and elt.y == 0:
        raise UndefinedInputError("valuation of 0 is undefined")
    if field.is_rational:
        return valuation(elt.x, q.p)
    nrm_val = valuation(elt.norm(), q.p)
    if q.splitting == INERT:
        return min(
            valuation(elt.x, q.p) if elt.x else nrm_val,
            valuation(elt.y, q.p) if elt.y else nrm_val,
        )
    if q.splitting == RAMIFIED:
        return nrm_val
    # Split: the element valuation never exceeds the norm valuation, so one
    # projection at precision nrm_val + 1 decides it.
    image = local_image(field, q, elt, nrm_val + 1)
    return valuation(image, q.p) if image else nrm_val


def ideal_valuation(i: Ideal, q: PrimeIdeal) -> int:
    """Valuation of the ideal i at the prime q."""
    field = i.field
    if field.is_rational:
        return valuation(i.a, q.p)
    b1, b2 = i.basis_elements()
    return min(element_valuation(field, q, b1), element_valuation(field, q, b2))


@lru_cache(maxsize=None)
def ideal_factorization(i: Ideal) -> tuple[tuple[PrimeIdeal, int], ...]:
    """Prime factorization of the ideal, primes ordered by (p, root)."""
    out: list[tuple[PrimeIdeal, int]] = []
    for p in factorize(i.norm):
        for q in split_prime(i.field, p):
            v = ideal_valuation(i, q)
            if v:
                out.append((q, v))
    return tuple(out)


def _primitive_norms(field: FieldDescriptor, bound: int) -> dict[int, list[int]]:
    """For each a <= bound, the offsets b with [a, b + omega] an ideal of norm a."""
    t, n = field.omega_t, field.omega_n
    table: dict[int, list[int]] = {}
    for a in range(1, bound + 1):
        roots = _quadratic_roots_mod(t, -n, a)
        if roots is not None:
            table[a] = roots
    return table


def _quadratic_roots_mod(t: int, c0: int, mod: int) -> list[int] | None:
    """Solutions b of b^2 + t b + c0 = 0 (mod mod), [] possible, None never."""
    sols = [0]
    m_run = 1
    for p, e in factorize(mod).items():
        pe = p**e
        local: list[int] = []
        if p == 2:
            local = [b for b in range(pe) if (b * b + t * b + c0) % pe == 0]
        else:
            # Complete the square: (2b + t)^2 = t^2 - 4 c0 (mod 4 p^e).
            disc = t * t - 4 * c0
            inv2 = pow(2, -1, pe)
            local = [((s - t) * inv2) % pe for s in sqrt_mod_prime_power(disc, p, e)]
        if not local:
            return []
        sols = [
            (x + m_run * (((b - x) * pow(m_run, -1, pe)) % pe)) % (m_run * pe)
            for x in sols
            for b in local
        ]
        m_run *= pe
    return sorted(set(sols))


def sqrt_mod_prime_power(c: int, p: int, e: int) -> list[int]:
    """All x mod p^e with x^2 = c (mod p^e); p an odd prime, e >= 1."""
    pe = p**e
    c %= pe
    if c == 0:
        step = p ** ((e + 1) // 2)
        return list(range(0, pe, step))
    j = valuation(c, p)
    if j >= e:
        # cannot happen once c != 0 mod p^e
        raise UndefinedInputError("inconsistent valuation")
    if j % 2 == 1:
        return []
    unit = c // p**j
    rem = e - j
    root = _unit_sqrt_mod(unit % p**rem, p, rem)
    if root is None:
        return []
    half = p ** (j // 2)
    base_mod = p**rem
    out = []
    for r in (root, (-root) % base_mod):
        # x = p^{j/2} (r + base_mod * s), s ranges over p^{j/2} lifts
        for s in range(half):
            out.append((half * (r + base_mod * s)) % pe)
    return sorted(set(out))


def _unit_sqrt_mod(c: int, p: int, e: int) -> int | None:
    """One square root of the unit c mod p^e (p odd), or None."""
    if kronecker(c, p) != 1:
        return None
    root = _tonelli_shanks(c % p, p)
    pe = p
    while pe < p**e:
        pe_next = min(pe * pe, p**e)
        root = (root - (root * root - c) * pow(2 * root, -1, pe_next)) % pe_next
        pe = pe_next
    return root


def _tonelli_shanks(a: int, p: int) -> int:
    """Square root of a QR a mod odd prime p."""
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Write p-1 = q 2^s with q odd.
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = next(z for z in range(2, p) if kronecker(z, p) == -1)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        r, t = r * b % p, t * c % p
    return r


def enumerate_by_norm(field: FieldDescriptor, bound: int, b_max: int = 10**6) -> list[Ideal]:
    """Every nonzero integral ideal of norm <= bound, exactly once.

    Ordered by norm, ties broken by the HNF triple (c, b, a) ascending.
    """
    if bound < 1:
        raise UndefinedInputError("the norm bound must be at least 1")
    if bound > b_max:
        raise ResourceBudgetError(f"norm bound {bound} exceeds budget {b_max}")
    if field.is_rational:
        return [Ideal(field, k, 0, 1) for k in range(1, bound + 1)]
    prim = _primitive_norms(field, bound)
    out: list[Ideal] = []
    for c in range(1, math.isqrt(bound) + 1):
        limit = bound // (c * c)
        for a_prim in range(1, limit + 1):
            for b0 in prim.get(a_prim, []):
                out.append(Ideal(field, c * a_prim, (c * b0) % (c * a_prim), c))
    out.sort(key=lambda i: (i.norm, i.c, i.b, i.a))
    return out


def residues(field: FieldDescriptor, i: Ideal, budget: int = 10**6) -> list[AlgInt]:
    """Representatives of O_K modulo the ideal: exactly norm(i) elements."""
    if i.norm > budget:
        raise ResourceBudgetError(f"residue enumeration of norm {i.norm} exceeds {budget}")
    if field.is_rational:
        return [AlgInt(field, x, 0) for x in range(i.a)]
    return [
        AlgInt(field, x, y) for y in range(i.c) for x in range(i.a)
    ]


@dataclass(frozen=True)
class UnitSystem:
    """Torsion (-1) and the fundamental unit of a real quadratic field."""

    torsion: AlgInt
    beta1: AlgInt
    totally_positive: bool


def _cf_pell_unit(m: int, cap: int = 100_000) -> tuple[int, int]:
    """Smallest (x, y), y >= 1, with x^2 - m y^2 = +-1, by continued fractions."""
    a0 = math.isqrt(m)
    if a0 * a0 == m:
        raise InvalidFieldError(f"{m} is a perfect square")
    p_prev, p_cur = 1, a0
    q_prev, q_cur = 0, 1
    pp, qq, aa = 0, 1, a0
    for _ in range(cap):
        if abs(p_cur * p_cur - m * q_cur * q_cur) == 1:
            return p_cur, q_cur
        pp = aa * qq - pp
        qq = (m - pp * pp) // qq
        aa = (a0 + pp) // qq
        p_prev, p_cur = p_cur, aa * p_cur + p_prev
        q_prev, q_cur = q_cur, aa * q_cur + q_prev
    raise ResourceBudgetError(f"continued fraction for {m} exceeded {cap} steps")


def _integer_kth_root(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0:
        raise UndefinedInputError("negative radicand")
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() - 1) // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def fundamental_unit(field: FieldDescriptor) -> UnitSystem:
    """The fundamental unit, normalized to the smallest unit > 1 in the first embedding."""
    if field.is_rational:
        raise NotApplicableError("the rationals have unit rank zero")
    m = field.m
    assert m is not None
    x, y = _cf_pell_unit(m)
    if m % 4 == 1:
        # The full ring may contain a smaller unit (A + B sqrt m)/2 with
        # A^2 - m B^2 = +-4; its B is at most ~ (2 eps)^(1/3) scale.
        found = None
        b_cap = _integer_kth_root(8 * (x + y * math.isqrt(m) + 1), 3) + 2
        for b_small in range(1, b_cap + 1):
            # Norm -1 (smaller A) before norm +1, so ties at the same B pick
            # the smaller unit.
            for target in (m * b_small * b_small - 4, m * b_small * b_small + 4):
                if target <= 0:
                    continue
                a_small = math.isqrt(target)
                if a_small * a_small == target and (a_small - b_small) % 2 == 0:
                    found = (a_small, b_small)
                    break
            if found:
                break
        if found:
            a_small, b_small = found
            # (A + B sqrt m)/2 in the (1, omega) basis, omega = (1+sqrt m)/2.
            beta = AlgInt(field, (a_small - b_small) // 2, b_small)
        else:
            beta = AlgInt(field, x - y, 2 * y)
    else:
        beta = AlgInt(field, x, y)
    nrm = beta.norm()
    return UnitSystem(
        torsion=AlgInt(field, -1, 0),
        beta1=beta,
        totally_positive=(nrm == 1),
    )


def validate_hyp_div(
    field: FieldDescriptor, prime: PrimeIdeal, h: int, rho: AlgInt, k: int
) -> bool:
    """True iff (rho) equals prime^h as ideals and h divides k."""
    if h < 1 or k < 0:
        return False
    if k % h != 0:
        return False
    return principal_ideal(field, rho) == ideal_pow(prime.as_ideal(), h)


# ---------------------------------------------------------------------------
# Field configuration files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeDatumSpec:
    """One (p, h_p, rho, k) tuple from a field configuration file."""

    name: str
    p: int
    h: int
    rho: AlgInt
    k: int


@dataclass(frozen=True)
class FieldConfig:
    field: FieldDescriptor
    units: UnitSystem
    data: tuple[PrimeDatumSpec, ...]


def _parse_coords(text: str) -> tuple[int, int]:
    parts = text.replace(",", " ").split()
    if len(parts) == 1:
        return int(parts[0]), 0
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise ConfigError(f"expected one or two integer coordinates, got {text!r}")


def load_field_config(path: str | Path) -> FieldConfig:
    """Parse and validate a field configuration file (INI key-value format).

    Sections: [field] with kind and m; optional [units] with beta1 override
    coordinates; any number of [datum.NAME] sections with p, h_p, rho, k.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(str(path))
    if not read:
        raise ConfigError(f"cannot read field configuration at {path}")
    if "field" not in parser:
        raise ConfigError("missing [field] section")
    sec = parser["field"]
    kind = sec.get("kind", "rational").strip()
    if kind not in ("rational", "real_quadratic"):
        raise ConfigError(f"unknown field kind {kind!r}")
    try:
        if kind == "rational":
            field = field_init(None)
        else:
            if "m" not in sec:
                raise ConfigError("real_quadratic requires m")
            field = field_init(int(sec["m"]))
    except InvalidFieldError as exc:
        raise ConfigError(str(exc)) from exc

    if field.is_rational:
        units = UnitSystem(AlgInt(field, -1, 0), AlgInt(field, 1, 0), True)
    else:
        units = fundamental_unit(field)
    if "units" in parser and "beta1" in parser["units"]:
        if field.is_rational:
            raise ConfigError("unit override is meaningless over the rationals")
        ux, uy = _parse_coords(parser["units"]["beta1"])
        override = AlgInt(field, ux, uy)
        if not override.is_unit():
            raise ConfigError(f"beta1 override {override!r} is not a unit")
        units = UnitSystem(AlgInt(field, -1, 0), override, override.is_totally_positive())

    data: list[PrimeDatumSpec] = []
    for section in parser.sections():
        if not section.startswith("datum."):
            continue
        name = section.split(".", 1)[1]
        sec = parser[section]
        try:
            p = int(sec["p"])
            h = int(sec["h_p"])
            rx, ry = _parse_coords(sec["rho"])
            k = int(sec["k"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"[{section}] needs integer p, h_p, rho, k: {exc}") from exc
        rho = AlgInt(field, rx, ry)
        primes = split_prime(field, p)
        matching = [
            q for q in primes if validate_hyp_div(field, q, h, rho, k)
        ]
        if not matching:
            raise ConfigError(
                f"[{section}]: (rho) != q^h_p for any prime above {p}, or h_p does not divide k"
            )
        data.append(PrimeDatumSpec(name=name, p=p, h=h, rho=rho, k=k))
    return FieldConfig(field=field, units=units, data=tuple(data))
