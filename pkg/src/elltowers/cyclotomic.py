"""Exact arithmetic in prime-power cyclotomic integer rings.

An element of Z[zeta], zeta a primitive ell^n-th root of unity, is stored
as an integer coefficient vector of length phi(ell^n) = (ell-1) ell^(n-1),
i.e. a residue class modulo the sparse cyclotomic polynomial

    Phi(x) = 1 + x^(ell^(n-1)) + x^(2 ell^(n-1)) + ... + x^((ell-1) ell^(n-1)).

Everything is exact: norms down to Z are integer resultants, and ell-adic
valuations come from the expansion of an element in powers of the
uniformizer pi = 1 - zeta of the unique (totally ramified) prime above
ell.  No complex embedding, no floating point, no precision to manage.

level n = 0 is allowed and degenerates to plain integers, which is
convenient for trivial characters.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import accumulate


def phi_ell_power(ell: int, level: int) -> int:
    """Euler phi of ell^level."""
    if level == 0:
        return 1
    return (ell - 1) * ell ** (level - 1)


def _reduce_exponent_vector(ell, level, work):
    """Reduce a coefficient vector indexed by exponents in [0, ell^level)
    to the power basis 1, zeta, ..., zeta^(phi-1).

    Uses x^e = -(x^(e-phi) + x^(e-phi+s) + ... ) with s = ell^(level-1);
    every target index lands below phi, so a single top-down pass suffices.
    """
    phi = phi_ell_power(ell, level)
    if level == 0:
        return [sum(work)]
    step = ell ** (level - 1)
    m = ell**level
    for e in range(m - 1, phi - 1, -1):
        c = work[e]
        if c:
            work[e] = 0
            base = e - phi
            for j in range(ell - 1):
                work[base + j * step] -= c
    del work[phi:]
    return work


class CycInt:
    """A cyclotomic integer: level (ell, n) plus phi(ell^n) coefficients."""

    __slots__ = ("ell", "level", "coeffs")

    def __init__(self, ell, level, coeffs):
        self.ell = ell
        self.level = level
        phi = phi_ell_power(ell, level)
        coeffs = tuple(coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need exactly {phi} coefficients at level ({ell},{level})")
        self.coeffs = coeffs

    # constructors ---------------------------------------------------------

    @classmethod
    def from_exponents(cls, ell, level, long_coeffs):
        """Build from a coefficient list indexed by arbitrary exponents."""
        m = ell**level
        work = [0] * m
        for e, c in enumerate(long_coeffs):
            if c:
                work[e % m] += c
        return cls(ell, level, _reduce_exponent_vector(ell, level, work))

    @classmethod
    def integer(cls, ell, level, c):
        phi = phi_ell_power(ell, level)
        return cls(ell, level, (int(c),) + (0,) * (phi - 1))

    @classmethod
    def zero(cls, ell, level):
        return cls.integer(ell, level, 0)

    @classmethod
    def one(cls, ell, level):
        return cls.integer(ell, level, 1)

    # ring operations ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return CycInt.integer(self.ell, self.level, other)
        if isinstance(other, CycInt):
            if (other.ell, other.level) != (self.ell, self.level):
                raise ValueError("mixed cyclotomic levels")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.ell, self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.ell, self.level, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CycInt(self.ell, self.level, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        m = self.ell**self.level
        work = [0] * m
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        work[(i + j) % m] += ai * bj
        return CycInt(self.ell, self.level, _reduce_exponent_vector(self.ell, self.level, work))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not defined in the integer ring")
        result = CycInt.one(self.ell, self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycInt.integer(self.ell, self.level, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return (self.ell, self.level, self.coeffs) == (other.ell, other.level, other.coeffs)

    def __hash__(self):
        return hash((self.ell, self.level, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"CycInt(ell={self.ell}, level={self.level}, coeffs={self.coeffs})"

    # structure ------------------------------------------------------------

    def conjugate(self, u: int):
        """Apply the field automorphism zeta -> zeta^u, u coprime to ell."""
        if u % self.ell == 0:
            raise ValueError("conjugation exponent must be a unit")
        m = self.ell**self.level
        work = [0] * m
        for e, c in enumerate(self.coeffs):
            if c:
                work[(e * u) % m] += c
        return CycInt(self.ell, self.level, _reduce_exponent_vector(self.ell, self.level, work))

    def is_rational_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def constant_value(self) -> int:
        if not self.is_rational_integer():
            raise ValueError("element is not a rational integer")
        return self.coeffs[0]


def zeta_power(ell: int, level: int, k: int) -> CycInt:
    """The residue class of zeta^k (k reduced modulo ell^level)."""
    m = ell**level
    e = k % m
    return CycInt.from_exponents(ell, level, [0] * e + [1])


def epsilon(ell: int, level: int, a: int) -> CycInt:
    """(1 - zeta^a)(1 - zeta^(-a)), expanded as 2 - zeta^a - zeta^(-a)."""
    return CycInt.integer(ell, level, 2) - zeta_power(ell, level, a) - zeta_power(ell, level, -a)


# valuations -----------------------------------------------------------------


def pi_adic_ord(x: CycInt) -> int:
    """Order of x at the prime above ell, normalized so 1 - zeta has order 1.

    Repeatedly divides by pi = 1 - zeta.  The residue of x modulo pi is the
    coefficient sum x(1) mod ell; while it vanishes, division is exact in
    the ring via (1 - zeta)^(-1) = Psi(zeta)/ell with
    Psi = (Phi - ell)/(x - 1), whose coefficients are ell-1-floor(t/step).
    """
    if x.is_zero():
        raise ValueError("the zero element has infinite valuation")
    ell = x.ell
    if x.level == 0:
        c = abs(x.coeffs[0])
        order = 0
        while c % ell == 0:
            c //= ell
            order += 1
        return order
    step = ell ** (x.level - 1)
    psi = [ell - 1 - t // step for t in range(len(x.coeffs))]
    v = list(x.coeffs)
    n = len(v)
    order = 0
    while True:
        totals = list(accumulate(reversed(v)))
        s = totals[-1]
        if s % ell:
            return order
        c = s // ell
        u = [c * p for p in psi]
        for t in range(n - 1):
            u[t] -= totals[n - 2 - t]
        v = u
        order += 1


def v_ell(x: CycInt) -> Fraction:
    """The ell-adic valuation of x, normalized so v_ell(ell) = 1.

    Equals ord_ell(norm_to_int(x)) / phi(ell^n): the prime above ell is
    totally ramified, so all conjugates share one valuation and the norm
    formula collapses to the pi-adic order divided by phi.
    """
    return Fraction(pi_adic_ord(x), phi_ell_power(x.ell, x.level))


# norms ----------------------------------------------------------------------


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pseudo_remainder(a, b):
    """prem(a, b) = lc(b)^(deg a - deg b + 1) * a mod b, over Z."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[db + k]
        r = [lb * x for x in r]
        if c:
            for j, bj in enumerate(b):
                r[k + j] -= c * bj
        r[db + k] = 0
    return _trim(r[:db])


def _resultant(a, b) -> int:
    """Resultant of two integer polynomials via the subresultant PRS.

    Fraction-free: every division below is exact by the subresultant
    theory.  With a monic first argument, Res(a, b) is the product of b
    over the roots of a.
    """
    a = _trim(list(a))
    b = _trim(list(b))
    if not a or not b:
        return 0
    s = 1
    if len(a) < len(b):
        if (len(a) - 1) % 2 == 1 and (len(b) - 1) % 2 == 1:
            s = -s
        a, b = b, a
    g = 1
    h = 1
    while len(b) - 1 > 0:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        r = _pseudo_remainder(a, b)
        a, b = b, [c // (g * h**delta) for c in r]
        if not b:
            return 0
        g = a[-1]
        if delta > 0:
            h = g**delta // h ** (delta - 1)
    da = len(a) - 1
    if da == 0:
        return s
    return s * b[0] ** da // h ** (da - 1)


def _cyclotomic_polynomial(ell, level):
    """Phi_{ell^level} as a little-endian coefficient list."""
    step = ell ** (level - 1)
    phi = phi_ell_power(ell, level)
    p = [0] * (phi + 1)
    for j in range(ell):
        p[j * step] = 1
    return p


def norm_to_int(x: CycInt) -> int:
    """Norm of x down to Z, as the resultant of its representative
    polynomial with the cyclotomic polynomial of its level.

    This is the product of the images of x under all phi(ell^n) embeddings;
    callers working with an element fixed by a subgroup must account for
    the extra multiplicity themselves.
    """
    if x.level == 0:
        return x.coeffs[0]
    phi = len(x.coeffs)
    f = _trim(list(x.coeffs))
    if not f:
        return 0
    if len(f) == 1:
        return f[0] ** phi
    return _resultant(_cyclotomic_polynomial(x.ell, x.level), f)


def norm_by_conjugates(x: CycInt) -> int:
    """Independent norm: the in-ring product of all conjugates of x.

    Quadratic in phi per multiplication, so only sensible at small levels;
    kept as the cross-check for the resultant route.
    """
    if x.level == 0:
        return x.coeffs[0]
    m = x.ell**x.level
    prod = CycInt.one(x.ell, x.level)
    for u in range(1, m):
        if u % x.ell:
            prod = prod * x.conjugate(u)
    return prod.constant_value()
