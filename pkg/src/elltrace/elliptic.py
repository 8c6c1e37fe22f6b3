"""Regular elliptic data and their finite orbital integrals.

A datum packages the trace and unit determinant part of a conjugacy
class together with the fixed prime power that carries the test
function.  Everything downstream is driven by the discriminant
delta = tau^2 - 4 u epsilon and by the ideal S whose square divides it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt

from .errors import SquareDiscriminantError, UndefinedInputError, UnsupportedRegimeError
from .quadfield import (
    SPLIT,
    AlgInt,
    FieldDescriptor,
    Ideal,
    PrimeIdeal,
    element_valuation,
    ideal_factorization,
    ideal_valuation,
    integer,
    local_image,
    principal_ideal,
    unit_ideal,
    validate_hyp_div,
)
from .symbols import chi_gamma


@dataclass(frozen=True)
class EllipticDatum:
    """Trace/determinant data (tau, u) over a fixed prime power ideal."""

    field: FieldDescriptor
    prime: PrimeIdeal
    h: int
    rho: AlgInt
    k: int
    u: AlgInt
    tau: AlgInt

    @cached_property
    def epsilon(self) -> AlgInt:
        return self.rho ** (self.k // self.h)

    @cached_property
    def delta(self) -> AlgInt:
        return self.tau * self.tau - 4 * (self.u * self.epsilon)

    @cached_property
    def s_ideal(self) -> Ideal:
        return s_gamma(self).s_ideal

    @property
    def p(self) -> int:
        return self.prime.p if self.field.is_rational else self.prime.norm


@dataclass(frozen=True)
class DiscriminantData:
    """The square part S, the cofactor, and the per-prime valuations."""

    delta: AlgInt
    s_ideal: Ideal
    delta_ideal: Ideal
    valuations: tuple[tuple[PrimeIdeal, int], ...]


def make_datum(
    field: FieldDescriptor,
    prime: PrimeIdeal,
    h: int,
    rho: AlgInt,
    k: int,
    u: AlgInt,
    tau: AlgInt,
) -> EllipticDatum:
    """Validated constructor: (rho) = prime^h, h | k, u a unit."""
    if not validate_hyp_div(field, prime, h, rho, k):
        raise UndefinedInputError("rho, h, k do not satisfy the divisibility hypotheses")
    if abs(u.norm()) != 1:
        raise UndefinedInputError("u must be a unit")
    return EllipticDatum(field, prime, h, rho, k, u, tau)


def delta(datum: EllipticDatum) -> AlgInt:
    """The discriminant tau^2 - 4 u epsilon, exactly."""
    return datum.delta


def is_regular_elliptic(datum: EllipticDatum) -> bool:
    """True iff the discriminant is not a square in the base field."""
    return not _is_square_in_field(datum.field, datum.delta)


def _is_square_in_field(field: FieldDescriptor, value: AlgInt) -> bool:
    """Exact squareness test; any square root of an integer is integral."""
    if value.x == 0 and value.y == 0:
        return True
    if field.is_rational:
        return value.x >= 0 and isqrt(value.x) ** 2 == value.x
    nrm = value.norm()
    if nrm < 0:
        return False
    root = isqrt(nrm)
    if root * root != nrm:
        return False
    # A square root has trace s and norm +-root with s^2 = trace + 2 norm,
    # and its omega coordinate satisfies y^2 * disc = s^2 - 4 norm.
    for cand_norm in {root, -root}:
        s_sq = value.trace() + 2 * cand_norm
        if s_sq < 0:
            continue
        s = isqrt(s_sq)
        if s * s != s_sq:
            continue
        for s_signed in {s, -s}:
            y_sq_num = s_signed * s_signed - 4 * cand_norm
            if y_sq_num < 0 or y_sq_num % field.disc != 0:
                continue
            y_sq = y_sq_num // field.disc
            y = isqrt(y_sq)
            if y * y != y_sq:
                continue
            for y_signed in {y, -y}:
                x_num = s_signed - field.omega_t * y_signed
                if x_num % 2 != 0:
                    continue
                cand = AlgInt(field, x_num // 2, y_signed)
                if cand * cand == value:
                    return True
    return False


def _two_adic_square_val(field: FieldDescriptor, q: PrimeIdeal, d: AlgInt, v: int) -> int:
    """Largest r with d / 4^r locally integral and congruent to 0 or 1 mod 4."""
    if q.splitting != SPLIT:
        raise UnsupportedRegimeError(
            "square-part extraction above 2 requires a completion isomorphic to the 2-adics"
        )
    image = local_image(field, q, d, v + 3)
    for r in range(v // 2, -1, -1):
        if (image >> (2 * r)) % 4 in (0, 1):
            return r
    raise UndefinedInputError("discriminant is not congruent to 0 or 1 mod 4")


def s_gamma(datum: EllipticDatum) -> DiscriminantData:
    """Split (delta) = S^2 * Delta with Delta the relative discriminant.

    Odd primes contribute floor(v/2) to S; primes above 2 contribute the
    largest r whose removal leaves a local discriminant class.
    """
    d = datum.delta
    field = datum.field
    if _is_square_in_field(field, d):
        raise SquareDiscriminantError("discriminant is a square; datum is not regular elliptic")
    delta_ideal = principal_ideal(field, d)
    s = unit_ideal(field)
    vals: list[tuple[PrimeIdeal, int]] = []
    for q, v in ideal_factorization(delta_ideal):
        if q.p == 2 and not field.is_rational:
            s_val = _two_adic_square_val(field, q, d, v)
        elif q.p == 2:
            s_val = _two_adic_square_val_rational(d.x, v)
        else:
            s_val = v // 2
        if s_val:
            vals.append((q, s_val))
            for _ in range(s_val):
                s = _ideal_times_prime(s, q)
    cofactor = delta_ideal
    for q, s_val in vals:
        cofactor = _ideal_shrink(cofactor, q, 2 * s_val)
    return DiscriminantData(d, s, cofactor, tuple(vals))


def _two_adic_square_val_rational(x: int, v: int) -> int:
    for r in range(v // 2, -1, -1):
        if (x >> (2 * r)) % 4 in (0, 1):
            return r
    raise UndefinedInputError("discriminant is not congruent to 0 or 1 mod 4")


def _ideal_times_prime(i: Ideal, q: PrimeIdeal) -> Ideal:
    from .quadfield import ideal_multiply

    return ideal_multiply(i, q.as_ideal())


def _ideal_shrink(i: Ideal, q: PrimeIdeal, count: int) -> Ideal:
    """Divide the ideal by q^count via factorization surgery."""
    from .quadfield import ideal_multiply, ideal_pow

    out = unit_ideal(i.field)
    for prime, v in ideal_factorization(i):
        keep = v - count if prime == q else v
        if keep < 0:
            raise UndefinedInputError("ideal does not contain the requested prime power")
        if keep:
            out = ideal_multiply(out, ideal_pow(prime.as_ideal(), keep))
    return out


def satisfies_divisor_condition(field: FieldDescriptor, element: AlgInt, d: Ideal) -> bool:
    """Whether d would divide the S of a datum with discriminant `element`.

    Checks valuation 2 val_q(d) at every prime of d, with the extra
    square-class constraint mod 4 at primes above 2.
    """
    for q, t in ideal_factorization(d):
        v = element_valuation(field, q, element)
        if v < 2 * t:
            return False
        if q.p == 2:
            if not field.is_rational and q.splitting != SPLIT:
                raise UnsupportedRegimeError(
                    "divisor test above 2 requires a completion isomorphic to the 2-adics"
                )
            image = local_image(field, q, element, v + 3)
            if (image >> (2 * t)) % 4 not in (0, 1):
                return False
    return True


def divides_s_gamma(datum: EllipticDatum, d: Ideal) -> bool:
    """Membership test for divisors of S without computing S itself."""
    return satisfies_divisor_condition(datum.field, datum.delta, d)


def _divisors_of_ideal(i: Ideal) -> list[tuple[Ideal, tuple[tuple[PrimeIdeal, int], ...]]]:
    """All divisors with their exponent patterns."""
    from .quadfield import ideal_multiply, ideal_pow

    out = [(unit_ideal(i.field), ())]
    for q, v in ideal_factorization(i):
        grown = []
        for ideal, pattern in out:
            for e in range(v + 1):
                new_ideal = ideal_multiply(ideal, ideal_pow(q.as_ideal(), e)) if e else ideal
                grown.append((new_ideal, pattern + ((q, e),) if e else pattern))
        out = grown
    return out


def local_orbital(datum: EllipticDatum, q: PrimeIdeal) -> Fraction:
    """Exact local orbital integral, driven by the splitting in K(sqrt delta)."""
    n = ideal_valuation(datum.s_ideal, q)
    qq = q.norm
    sign = chi_gamma(datum, q)
    if sign == 1:
        return Fraction(qq**n)
    if sign == -1:
        return Fraction(qq**n * (qq + 1) - 2, qq - 1)
    return Fraction(qq ** (n + 1) - 1, qq - 1)


@dataclass(frozen=True)
class FiniteOrbital:
    """Value p^(-k/2) * rational, with the power kept symbolic."""

    p: int
    k: int
    rational: Fraction

    def to_float(self) -> float:
        return float(self.p) ** (-self.k / 2) * float(self.rational)


def finite_orbital(datum: EllipticDatum) -> FiniteOrbital:
    """Divisor-sum form of the finite orbital integral."""
    total = Fraction(0)
    for d_ideal, pattern in _divisors_of_ideal(datum.s_ideal):
        term = Fraction(d_ideal.norm)
        for q, _ in pattern:
            term *= 1 - Fraction(chi_gamma(datum, q), q.norm)
        total += term
    return FiniteOrbital(datum.p, datum.k, total)


def finite_orbital_product(datum: EllipticDatum) -> FiniteOrbital:
    """Product-of-local-integrals form; must agree with the divisor sum."""
    total = Fraction(1)
    for q, _ in ideal_factorization(datum.s_ideal):
        total *= local_orbital(datum, q)
    return FiniteOrbital(datum.p, datum.k, total)


def l_value_identity(datum: EllipticDatum, z: complex) -> complex:
    """Divisor sum N(S)^z sum_d N(d)^(1-2z) prod_(q | S/d) (1 - chi(q) Nq^-z)."""
    s = datum.s_ideal
    s_factors = dict(ideal_factorization(s))
    total = 0j
    for d_ideal, pattern in _divisors_of_ideal(s):
        exponents = dict(pattern)
        term = complex(d_ideal.norm) ** (1 - 2 * z)
        for q, v in s_factors.items():
            if exponents.get(q, 0) < v:
                term *= 1 - chi_gamma(datum, q) * complex(q.norm) ** (-z)
        total += term
    return complex(s.norm) ** z * total


def rational_datum(tau: int, u: int, p: int, k: int, field: FieldDescriptor) -> EllipticDatum:
    """Convenience constructor over the rationals."""
    from .quadfield import split_prime

    (prime,) = split_prime(field, p)
    return make_datum(field, prime, 1, integer(field, p), k, integer(field, u), integer(field, tau))
