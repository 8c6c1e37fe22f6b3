"""Dedekind zeta and L-function layer over the rationals and real
quadratic fields.

The zeta function of a quadratic field factors as zeta(s) times the
L-function of the Kronecker character of the field discriminant; that
L-function is evaluated through Hurwitz zeta values, which gives the
analytic continuation for free.  The residue of the field zeta at 1 is
the value of the character L-function at 1, computed independently of
the class number formula via the digamma expansion.
"""

from __future__ import annotations

import mpmath as mp

from .errors import PoleError, UndefinedInputError
from .intarith import kronecker
from .quadfield import FieldDescriptor

_DPS = 30


def dirichlet_l_kronecker(disc: int, s: complex) -> complex:
    """L(s, chi) for the Kronecker character of a fundamental discriminant."""
    if disc == 1:
        raise UndefinedInputError("the trivial character is the Riemann zeta; use zeta_field")
    period = abs(disc)
    with mp.workdps(_DPS):
        if mp.almosteq(mp.mpmathify(s), 1, abs_eps=mp.mpf(10) ** (-_DPS + 2)):
            # At s = 1 the Hurwitz expansion degenerates; the digamma
            # formula applies because the character sums to zero.
            total = mp.mpf(0)
            for a in range(1, period):
                chi = kronecker(disc, a)
                if chi:
                    total += chi * mp.digamma(mp.mpf(a) / period)
            return complex(-total / period)
        total = mp.mpc(0)
        for a in range(1, period + 1):
            chi = kronecker(disc, a)
            if chi:
                total += chi * mp.zeta(s, mp.mpf(a) / period)
        return complex(mp.power(period, -s) * total)


def zeta_field(field: FieldDescriptor, s: complex) -> complex:
    """Dedekind zeta of the field at s (rational: the Riemann zeta)."""
    with mp.workdps(_DPS):
        s_mp = mp.mpmathify(s)
        if mp.almosteq(s_mp, 1, abs_eps=1e-12):
            raise PoleError("the field zeta has its pole at s = 1")
        riemann = complex(mp.zeta(s_mp))
    if field.is_rational:
        return riemann
    return riemann * dirichlet_l_kronecker(field.disc, s)


def kappa(field: FieldDescriptor) -> float:
    """Residue of the field zeta at s = 1."""
    if field.is_rational:
        return 1.0
    return float(dirichlet_l_kronecker(field.disc, 1).real)
