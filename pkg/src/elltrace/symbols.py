"""Quadratic sign characters built from local Hilbert symbols.

The restricted symbol pairs an element against a fixed uniformizer and
vanishes off the local units.  The modified symbol corrects the element
by an even uniformizer power at each prime of the second ideal, which
makes the result independent of the uniformizer choice: two choices
differ by the square of a local unit.
"""

from __future__ import annotations

from .errors import UndefinedInputError, UnsupportedRegimeError
from .intarith import kronecker, valuation
from .quadfield import (
    INERT,
    RAMIFIED,
    SPLIT,
    AlgInt,
    FieldDescriptor,
    Ideal,
    PrimeIdeal,
    element_valuation,
    ideal_factorization,
    ideal_valuation,
    local_image,
)

SymbolValue = int
RamificationVector = tuple[int, ...]


def _as_element(field: FieldDescriptor, alpha: AlgInt | int) -> AlgInt:
    if isinstance(alpha, AlgInt):
        return alpha
    return AlgInt(field, alpha, 0)


def _residue_square_class_inert(field: FieldDescriptor, x: int, y: int, p: int) -> int:
    """Squareness of x + y*omega in the residue field with p^2 elements.

    Decided by raising to (p^2 - 1)/2 in (Z/p)[X]/(X^2 - tX - n); the
    result of the power is a scalar +-1 for any nonzero element.
    """
    t, n = field.omega_t % p, field.omega_n % p
    a, b = 1, 0
    base_a, base_b = x % p, y % p
    e = (p * p - 1) // 2
    while e:
        if e & 1:
            a, b = (a * base_a + n * b * base_b) % p, (a * base_b + b * base_a + t * b * base_b) % p
        e >>= 1
        cross = 2 * base_a * base_b + t * base_b * base_b
        base_a, base_b = (base_a * base_a + n * base_b * base_b) % p, cross % p
    if b != 0 or a not in (1, p - 1):
        raise UndefinedInputError("squareness test applied to a non-unit residue")
    return 1 if a == 1 else -1


def _adjusted_symbol(alpha: AlgInt, q: PrimeIdeal, shift: int) -> SymbolValue:
    """Restricted symbol of alpha * pi^(-2*shift) at q."""
    field = alpha.field
    p = q.p
    if p == 2 and q.splitting != SPLIT:
        raise UnsupportedRegimeError(
            "Hilbert symbols above 2 require a completion isomorphic to the 2-adics"
        )
    target = 2 * shift
    val = element_valuation(field, q, alpha)
    if val != target:
        return 0
    if q.splitting == SPLIT:
        if p == 2:
            image = local_image(field, q, alpha, target + 3)
            return 1 if (image >> target) % 8 in (1, 7) else -1
        image = local_image(field, q, alpha, target + 1)
        return kronecker((image // p**target) % p, p)
    if q.splitting == INERT:
        scale = p**target
        return _residue_square_class_inert(field, alpha.x // scale, alpha.y // scale, p)
    # Ramified: multiply by conj(pi)^(2*shift) = (N pi)^(2*shift) pi^(-2*shift)
    # and strip p^(2*shift); the residual square unit cannot change the sign.
    adjusted = alpha * q.uniformizer.conj() ** target
    scale = p**target
    x, y = adjusted.x // scale, adjusted.y // scale
    residue = (x + y * q.root_mod_p) % p
    return kronecker(residue, p)


def restricted_hilbert(alpha: AlgInt | int, q: PrimeIdeal) -> SymbolValue:
    """Hilbert symbol of alpha against a uniformizer, zero off the units.

    At odd primes the value is the squareness of the residue; above 2 the
    local residue decides it by the +-1 mod 8 rule.  Ramified or inert
    primes above 2 are outside the standing hypotheses and rejected.
    """
    elt = _as_element(q.field, alpha)
    if elt.x == 0 and elt.y == 0:
        raise UndefinedInputError("symbol of 0 is undefined")
    return _adjusted_symbol(elt, q, 0)


def modified_hilbert(alpha: AlgInt | int, a: Ideal, b: Ideal) -> SymbolValue:
    """Product over primes q | b of the symbol of alpha * pi_q^(-2 val_q(a))."""
    field = a.field
    elt = _as_element(field, alpha)
    if elt.x == 0 and elt.y == 0:
        raise UndefinedInputError("symbol of 0 is undefined")
    out = 1
    for q, mult in ideal_factorization(b):
        local = _adjusted_symbol(elt, q, ideal_valuation(a, q))
        if mult % 2 == 0:
            local = local * local
        if local == 0:
            return 0
        out *= local
    return out


def chi_gamma(datum, q: PrimeIdeal) -> SymbolValue:
    """Sign character of the datum's quadratic extension at the prime q."""
    return _adjusted_symbol(datum.delta, q, ideal_valuation(datum.s_ideal, q))


def chi_gamma_ideal(datum, a: Ideal) -> SymbolValue:
    """Multiplicative extension of chi_gamma to ideals."""
    out = 1
    for q, mult in ideal_factorization(a):
        local = chi_gamma(datum, q)
        if local == 0:
            return 0
        if mult % 2:
            out *= local
    return out


def chi_d(datum, d: Ideal, a: Ideal) -> SymbolValue:
    """Imprimitive character: chi_gamma(a) killed off ideals sharing a prime
    with the conductor complement."""
    s_factors = ideal_factorization(datum.s_ideal)
    for q, s_mult in s_factors:
        if ideal_valuation(d, q) > s_mult:
            raise UndefinedInputError("divisor ideal does not divide the conductor")
    if d.norm > 1:
        for q, _ in ideal_factorization(d):
            if not any(q == s_q for s_q, _ in s_factors):
                raise UndefinedInputError("divisor ideal does not divide the conductor")
    for q, s_mult in s_factors:
        if s_mult > ideal_valuation(d, q) and ideal_valuation(a, q) > 0:
            return 0
    return chi_gamma_ideal(datum, a)


def ramification_vector(datum) -> RamificationVector:
    """Per real place: 0 where the embedding of the discriminant is positive."""
    field = datum.field
    if field.is_rational:
        return (0,) if datum.delta.x > 0 else (1,)
    e1, e2 = datum.delta.embeddings()
    return (0 if e1 > 0 else 1, 0 if e2 > 0 else 1)
