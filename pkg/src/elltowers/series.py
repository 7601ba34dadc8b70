"""Multivariable power series truncated by total degree, the group
character a -> (1-T_1)^a_1 ... (1-T_d)^a_d into the series ring, and the
determinant series Q(T) = det(D - A_rho) of a voltage specification.

Two evaluation semantics coexist on purpose.  The truncated form exposes
coefficients (for the one-variable mu/lambda analysis); the exact form
substitutes roots of unity for 1 - T_i and lands in a cyclotomic integer
ring with no truncation anywhere, so the coefficient window can never
contaminate an identity check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .cyclotomic import CycInt, zeta_power
from .linalg import det_in_ring
from .treecount import ord_prime
from .voltage import VoltageSpec


@dataclass
class TruncatedSeries:
    num_vars: int
    cap: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for expo, c in self.coeffs.items():
            expo = tuple(expo)
            if len(expo) != self.num_vars:
                raise ValueError("exponent arity mismatch")
            if c and sum(expo) <= self.cap:
                clean[expo] = clean.get(expo, 0) + c
        self.coeffs = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, num_vars, cap, c):
        return cls(num_vars, cap, {(0,) * num_vars: int(c)} if c else {})

    def _coerce(self, other):
        if isinstance(other, int):
            return TruncatedSeries.constant(self.num_vars, self.cap, other)
        if isinstance(other, TruncatedSeries):
            if other.num_vars != self.num_vars or other.cap != self.cap:
                raise ValueError("mixed series rings")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.num_vars, self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.num_vars, self.cap, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        cap = self.cap
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) > cap:
                    continue
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return TruncatedSeries(self.num_vars, self.cap, out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.constant(self.num_vars, self.cap, other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.num_vars, self.cap, self.coeffs) == (other.num_vars, other.cap, other.coeffs)

    def coefficient(self, expo) -> int:
        return self.coeffs.get(tuple(expo), 0)

    def truncate(self, cap: int) -> "TruncatedSeries":
        if cap > self.cap:
            raise ValueError("cannot extend a truncation")
        return TruncatedSeries(self.num_vars, cap, dict(self.coeffs))


def _one_minus_t_power(i: int, a: int, num_vars: int, cap: int) -> TruncatedSeries:
    """(1 - T_i)^a truncated; the geometric series handles a < 0.
    Coefficient of T^t is (-1)^t C(a, t), i.e. C(t - a - 1, t) for a < 0."""
    coeffs = {}
    for t in range(cap + 1):
        if a >= 0:
            if t > a:
                break
            c = (-1) ** t * comb(a, t)
        else:
            c = comb(t - a - 1, t)
        expo = [0] * num_vars
        expo[i] = t
        coeffs[tuple(expo)] = c
    return TruncatedSeries(num_vars, cap, coeffs)


def rho_series(a, cap: int) -> TruncatedSeries:
    """The character value rho(a) = prod_i (1 - T_i)^(a_i), truncated at
    total degree cap.  Exact polynomial whenever every a_i >= 0 and cap is
    at least their sum."""
    a = tuple(int(x) for x in a)
    result = TruncatedSeries.constant(len(a), cap, 1)
    for i, ai in enumerate(a):
        if ai:
            result = result * _one_minus_t_power(i, ai, len(a), cap)
    return result


def default_truncation(spec: VoltageSpec) -> int:
    """Heuristic coefficient window: generous enough to expose the
    lambda-relevant coefficients in the worked one-variable cases."""
    biggest = max(sum(abs(a) for a in row) for row in spec.alpha)
    return 2 * biggest * spec.ell + 8


def q_series(spec: VoltageSpec, cap: int | None = None) -> TruncatedSeries:
    """Q(T) = det(D - A_rho) over the truncated series ring; the constant
    term is det(D - A) = 0."""
    if cap is None:
        cap = default_truncation(spec)
    g = spec.base
    d = spec.d
    val = g.valencies()
    rows = [
        [
            TruncatedSeries.constant(d, cap, val[i] if i == j else 0)
            for j in range(g.n_vertices)
        ]
        for i in range(g.n_vertices)
    ]
    for idx, s in enumerate(spec.section.edges):
        i, j = g.origin(s), g.terminus(s)
        rows[i][j] = rows[i][j] - rho_series(spec.alpha[idx], cap)
        rows[j][i] = rows[j][i] - rho_series(tuple(-a for a in spec.alpha[idx]), cap)
    det = det_in_ring(rows)
    if det.coefficient((0,) * d) != 0:
        raise RuntimeError("constant term of Q should vanish (singular Laplacian)")
    return det


# exact evaluation at classical points ------------------------------------------


@dataclass(frozen=True)
class ClassicalPoint:
    """The point (1 - zeta^(a_1), ..., 1 - zeta^(a_d)) of the open unit
    polydisk, kept symbolic: substituting it into 1 - T_i gives zeta^(a_i)."""

    ell: int
    level: int
    exponents: tuple[int, ...]


def _rho_at_point(point: ClassicalPoint, bvec) -> CycInt:
    """rho(b) evaluated at the point: prod_i (zeta^(a_i))^(b_i), computed by
    honest ring exponentiation (negative b_i through zeta^(-a_i))."""
    result = CycInt.one(point.ell, point.level)
    for a, b in zip(point.exponents, bvec):
        if b == 0:
            continue
        base = zeta_power(point.ell, point.level, a if b > 0 else -a)
        result = result * base ** abs(b)
    return result


def evaluate_at_classical_point(spec: VoltageSpec, point: ClassicalPoint) -> CycInt:
    """Exact value of Q at a classical point: det(D - A_rho) with every
    rho(alpha(s)) specialized to a root of unity.  No truncation is
    involved, so this equals the twisted special value on the nose."""
    if len(point.exponents) != spec.d:
        raise ValueError("point arity does not match the tower rank")
    g = spec.base
    ell, level = point.ell, point.level
    val = g.valencies()
    rows = [
        [
            CycInt.integer(ell, level, val[i] if i == j else 0)
            for j in range(g.n_vertices)
        ]
        for i in range(g.n_vertices)
    ]
    for idx, s in enumerate(spec.section.edges):
        i, j = g.origin(s), g.terminus(s)
        rows[i][j] = rows[i][j] - _rho_at_point(point, spec.alpha[idx])
        rows[j][i] = rows[j][i] - _rho_at_point(point, tuple(-a for a in spec.alpha[idx]))
    return det_in_ring(rows)


# one-variable Weierstrass data --------------------------------------------------


def iwasawa_invariants_d1(q: TruncatedSeries, ell: int):
    """(mu, lambda) of a one-variable series from its computed window.

    mu is the least coefficient valuation seen; lambda the least index
    carrying a unit coefficient of q / ell^mu.  Returns None when no
    computed coefficient of q / ell^mu is a unit (the window cannot
    certify lambda).  Both numbers are relative to the window: a
    coefficient beyond the truncation can always lower mu.
    """
    if q.num_vars != 1:
        raise ValueError("one-variable series required")
    dense = [q.coefficient((i,)) for i in range(q.cap + 1)]
    if not any(dense):
        raise ValueError("series is zero to the computed precision")
    mu = min(ord_prime(abs(c), ell) for c in dense if c)
    for i, c in enumerate(dense):
        if c and ord_prime(abs(c), ell) == mu:
            return mu, i
    return None
