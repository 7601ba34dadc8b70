"""Special values of twisted graph L-functions along a tower.

For a character psi of (Z/ell^n Z)^d indexed by a vector a, the twisted
adjacency matrix has entries sum psi(alpha(s)) + psi(-alpha(s)) over the
section edges joining the two vertices, and the special value of interest
is det(D - A_psi), a cyclotomic integer.  Characters fall into Galois
orbits under the diagonal action of (Z/ell^n Z)^x; the product of the
values over one orbit is a rational integer, equal to the norm of the
value at any orbit member taken from the field its exact order generates.

The tree-number identity used everywhere downstream:

    ell^(d n) * kappa_n = kappa_X * prod over nontrivial orbits of the
                          orbit values,

so ord_ell(kappa_n) = -d n + ord_ell(kappa_X) + sum of the per-orbit
pi-adic orders.  Orders are computed exactly (no norms needed); the full
integers are computed on demand via resultants.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .cyclotomic import (
    CycInt,
    norm_to_int,
    phi_ell_power,
    pi_adic_ord,
    zeta_power,
)
from .graphs import validate_base
from .linalg import det_in_ring
from .treecount import TreeCount, kappa_matrix_tree, ord_prime
from .voltage import DisconnectedCoverError, VoltageSpec, check_tower_connectivity, reduce_voltage


class VanishingLValueError(RuntimeError):
    """A nontrivial character value came out zero: the layer is disconnected."""


@dataclass(frozen=True)
class CharacterIndex:
    level: int
    vector: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.vector)


@dataclass(frozen=True)
class CharacterOrbit:
    ell: int
    level: int
    representative: CharacterIndex
    exact_order: int
    size: int

    def members(self) -> list[CharacterIndex]:
        m = self.ell**self.level
        rep = self.representative.vector
        out = set()
        for u in range(1, self.exact_order):
            if u % self.ell == 0:
                continue
            out.add(tuple(u * x % m for x in rep))
        return [CharacterIndex(self.level, v) for v in sorted(out)]


@dataclass(frozen=True)
class LValueRecord:
    orbit: CharacterOrbit
    ord_ell: int
    integer_value: int | None


# character values -------------------------------------------------------------


def twisted_adjacency(spec: VoltageSpec, n: int, chi: CharacterIndex):
    """The adjacency matrix twisted by the character indexed by chi:
    entry (i, j) sums zeta^(a.alpha(s)) over section edges from v_i to
    v_j plus zeta^(-a.alpha(s)) over those from v_j to v_i."""
    if chi.level != n:
        raise ValueError("character level does not match the requested layer")
    if len(chi.vector) != spec.d:
        raise ValueError("character index has the wrong number of coordinates")
    g = spec.base
    ell = spec.ell
    m = ell**n
    alpha_n = reduce_voltage(spec, n)
    rows = [[CycInt.zero(ell, n) for _ in range(g.n_vertices)] for _ in range(g.n_vertices)]
    for idx, s in enumerate(spec.section.edges):
        i, j = g.origin(s), g.terminus(s)
        c = sum(a * b for a, b in zip(chi.vector, alpha_n[idx])) % m
        rows[i][j] = rows[i][j] + zeta_power(ell, n, c)
        rows[j][i] = rows[j][i] + zeta_power(ell, n, -c)
    return rows


def l_value_at_one(spec: VoltageSpec, n: int, chi: CharacterIndex) -> CycInt:
    """det(D - A_psi): the special value of the twisted determinant
    polynomial at u = 1.  Zero exactly at the trivial character (for a
    connected tower)."""
    g = spec.base
    a_psi = twisted_adjacency(spec, n, chi)
    val = g.valencies()
    rows = [
        [
            (CycInt.integer(spec.ell, n, val[i]) - a_psi[i][j]) if i == j else -a_psi[i][j]
            for j in range(g.n_vertices)
        ]
        for i in range(g.n_vertices)
    ]
    return det_in_ring(rows)


def _bouquet_value_vector(spec: VoltageSpec, k: int, avec) -> list[int]:
    """Coefficient vector of sum_s (2 - zeta^(a.alpha(s)) - zeta^(-a.alpha(s)))
    at level k, built without any ring multiplications."""
    ell = spec.ell
    m = ell**k
    phi = phi_ell_power(ell, k)
    step = ell ** (k - 1) if k else 1
    vec = [0] * phi
    vec[0] = 2 * len(spec.alpha)

    def sub_zeta(e):
        if e < phi:
            vec[e] -= 1
        else:
            base = e - phi
            for j in range(ell - 1):
                vec[base + j * step] += 1

    for row in spec.alpha:
        c = sum(a * b for a, b in zip(avec, row)) % m
        sub_zeta(c)
        sub_zeta((m - c) % m)
    return vec


def _character_value(spec: VoltageSpec, k: int, avec) -> CycInt:
    """h(1, psi) for the character indexed by avec at its exact level k."""
    if spec.base.n_vertices == 1:
        return CycInt(spec.ell, k, _bouquet_value_vector(spec, k, avec))
    return l_value_at_one(spec, k, CharacterIndex(k, tuple(avec)))


# orbit enumeration ------------------------------------------------------------


@lru_cache(maxsize=None)
def _primitive_orbit_reps(ell: int, k: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least members of the unit-group orbits on the
    primitive vectors modulo ell^k (those with a unit coordinate).

    Each orbit contains exactly one vector whose first unit coordinate is
    1; that normal form enumerates the orbits, and the minimum over the
    phi(ell^k) members makes the representative canonical.
    """
    m = ell**k
    units = [u for u in range(1, m) if u % ell]
    reps = []
    for pivot in range(d):
        for prefix in product(range(0, m, ell), repeat=pivot):
            for suffix in product(range(m), repeat=d - 1 - pivot):
                v = prefix + (1,) + suffix
                reps.append(min(tuple(u * x % m for x in v) for u in units))
    reps.sort()
    return tuple(reps)


def enumerate_orbits(ell: int, n: int, d: int) -> list[CharacterOrbit]:
    """All Galois orbits of nontrivial characters of (Z/ell^n Z)^d,
    grouped by exact order and sorted by representative."""
    if n < 1:
        raise ValueError("need n >= 1")
    orbits = []
    for k in range(1, n + 1):
        scale = ell ** (n - k)
        for prim in _primitive_orbit_reps(ell, k, d):
            rep = CharacterIndex(n, tuple(scale * x for x in prim))
            orbits.append(CharacterOrbit(ell, n, rep, ell**k, phi_ell_power(ell, k)))
    orbits.sort(key=lambda o: (o.exact_order, o.representative.vector))
    return orbits


def _orbit_exact_value(spec: VoltageSpec, n: int, orbit: CharacterOrbit) -> CycInt:
    """The representative value, computed at the character's exact level
    (where the coefficient vector is shortest)."""
    if orbit.representative.is_trivial:
        raise ValueError("the trivial orbit carries no invertible value")
    k = 0
    q = orbit.exact_order
    while q > 1:
        q //= spec.ell
        k += 1
    scale = spec.ell ** (n - k)
    prim = tuple(x // scale for x in orbit.representative.vector)
    value = _character_value(spec, k, prim)
    if value.is_zero():
        raise VanishingLValueError(
            f"character {orbit.representative.vector} at level {n} has vanishing value; "
            "the corresponding layer is disconnected"
        )
    return value


def orbit_value(spec: VoltageSpec, n: int, orbit: CharacterOrbit, *, with_integer: bool = True) -> LValueRecord:
    """Evaluate one Galois orbit: the pi-adic order of the orbit product
    always, and the exact integer (a resultant norm) unless suppressed.

    The representative value lives in the field of the character's exact
    order ell^k, so the norm is taken from there: the degree drops from
    phi(ell^n) to phi(ell^k), and the orbit product equals that norm.
    """
    value = _orbit_exact_value(spec, n, orbit)
    order = pi_adic_ord(value)
    integer = None
    if with_integer:
        integer = norm_to_int(value)
        if integer <= 0 or ord_prime(integer, spec.ell) != order:
            raise RuntimeError("norm and pi-adic order disagree; internal inconsistency")
    return LValueRecord(orbit, order, integer)


def orbit_records(spec: VoltageSpec, n: int, *, digit_limit: int = 0) -> list[LValueRecord]:
    """All orbit records at layer n in canonical order.  A positive digit
    limit skips integer values whose predicted size (phi * log10 of the
    coefficient 1-norm, an upper bound) exceeds it; orders stay exact."""
    out = []
    for orbit in enumerate_orbits(spec.ell, n, spec.d):
        value = _orbit_exact_value(spec, n, orbit)
        order = pi_adic_ord(value)
        integer = None
        if digit_limit <= 0 or _digit_bound(value) <= digit_limit:
            integer = norm_to_int(value)
        out.append(LValueRecord(orbit, order, integer))
    return out


def _digit_bound(value: CycInt) -> int:
    l1 = sum(abs(c) for c in value.coeffs)
    return int(len(value.coeffs) * math.log10(max(l1, 2))) + 1


# fast batch valuations at ell = 2 ----------------------------------------------


@lru_cache(maxsize=8)
def _pascal_mod_2_64(phi: int) -> np.ndarray:
    p = np.zeros((phi, phi), dtype=np.uint64)
    p[0, 0] = 1
    for i in range(1, phi):
        p[i, 0] = 1
        p[i, 1:] = p[i - 1, 1:] + p[i - 1, :-1]
    return p


_MASK64 = (1 << 64) - 1


def _batch_ord_two(vectors, phi: int) -> list[int | None]:
    """pi-adic orders of many level-(2, k) elements at once.

    Writing x = g(pi) in the uniformizer basis (g = f(1 - X), a binomial
    transform), the terms g_j pi^j have pairwise distinct valuations
    phi * ord_2(g_j) + j, so the valuation of x is their minimum.  The
    transform is done modulo 2^64; a residue r != 0 pins ord_2(g_j)
    exactly whenever it is < 64, and a zero residue only pushes the term
    to >= 64 * phi.  Rows whose minimum is not certified (>= 64 * phi)
    come back as None and the caller falls back to exact division.
    """
    pas = _pascal_mod_2_64(phi)
    f = np.array([[c & _MASK64 for c in vec] for vec in vectors], dtype=np.uint64)
    g = f @ pas
    low = g & (~g + np.uint64(1))
    zero = g == 0
    low_safe = np.where(zero, np.uint64(1), low)
    tz = np.log2(low_safe.astype(np.float64)).round().astype(np.int64)
    tz = np.where(zero, np.int64(64), tz)
    cand = phi * tz + np.arange(phi, dtype=np.int64)[None, :]
    mins = cand.min(axis=1)
    return [int(v) if v < 64 * phi else None for v in mins]


# the tower calculator ----------------------------------------------------------


def _ord_batch_worker(args):
    spec, k, prims = args
    return [pi_adic_ord(_character_value(spec, k, p)) for p in prims]


class TowerCalculator:
    """Caches per-level orbit data for one voltage specification.

    Level k data (values of characters of exact order ell^k) is the same
    for every layer n >= k, so the tables for n = 1..n_max cost one pass
    per level, not one per layer.
    """

    def __init__(self, spec: VoltageSpec, jobs: int = 1):
        report = validate_base(spec.base)
        if not report.ok:
            raise ValueError("base graph is not admissible: " + "; ".join(report.reasons))
        conn = check_tower_connectivity(spec)
        if not conn.ok:
            raise DisconnectedCoverError("; ".join(conn.reasons))
        self.spec = spec
        self.jobs = max(1, jobs)
        self._level_ords: dict[int, tuple[int, ...]] = {}
        self._level_norms: dict[int, tuple[int, ...]] = {}
        self._base: TreeCount | None = None

    def base_tree_count(self) -> TreeCount:
        if self._base is None:
            self._base = kappa_matrix_tree(self.spec.base, self.spec.ell)
        return self._base

    def level_ords(self, k: int) -> tuple[int, ...]:
        """pi-adic orders of all exact-level-k orbit values, aligned with
        _primitive_orbit_reps(ell, k, d)."""
        got = self._level_ords.get(k)
        if got is not None:
            return got
        spec = self.spec
        prims = _primitive_orbit_reps(spec.ell, k, spec.d)
        phi = phi_ell_power(spec.ell, k)
        ords: list[int]
        if spec.ell == 2 and spec.base.n_vertices == 1 and phi >= 32:
            vectors = [_bouquet_value_vector(spec, k, p) for p in prims]
            for vec in vectors:
                if not any(vec):
                    raise VanishingLValueError(f"vanishing orbit value at level {k}")
            fast = _batch_ord_two(vectors, phi)
            ords = [
                o if o is not None else pi_adic_ord(CycInt(spec.ell, k, vec))
                for o, vec in zip(fast, vectors)
            ]
        elif self.jobs > 1 and len(prims) >= 4 * self.jobs:
            chunks = [prims[i :: self.jobs] for i in range(self.jobs)]
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                parts = list(pool.map(_ord_batch_worker, [(spec, k, c) for c in chunks]))
            ords = [0] * len(prims)
            for offset, part in enumerate(parts):
                for j, val in enumerate(part):
                    ords[offset + j * self.jobs] = val
        else:
            ords = [pi_adic_ord(_character_value(spec, k, p)) for p in prims]
        result = tuple(ords)
        self._level_ords[k] = result
        return result

    def level_norms(self, k: int) -> tuple[int, ...]:
        got = self._level_norms.get(k)
        if got is not None:
            return got
        spec = self.spec
        prims = _primitive_orbit_reps(spec.ell, k, spec.d)
        norms = tuple(norm_to_int(_character_value(spec, k, p)) for p in prims)
        self._level_norms[k] = norms
        return norms

    def ord_valuation(self, n: int) -> int:
        """ord_ell(kappa_n) via the orbit-sum formula; exact, no norms."""
        base = self.base_tree_count()
        total = base.ord_ell
        for k in range(1, n + 1):
            total += sum(self.level_ords(k))
        return total - self.spec.d * n

    def kappa_exact(self, n: int) -> int:
        """The full tree number of layer n from the orbit-norm product."""
        spec = self.spec
        base = self.base_tree_count()
        prod = base.kappa
        for k in range(1, n + 1):
            for v in self.level_norms(k):
                prod *= v
        denominator = spec.ell ** (spec.d * n)
        if prod % denominator:
            raise RuntimeError("orbit product is not divisible by ell^(d n); internal inconsistency")
        return prod // denominator

    def records(self, n: int, *, with_integer: bool = True) -> list[LValueRecord]:
        out = []
        for orbit in enumerate_orbits(self.spec.ell, n, self.spec.d):
            out.append(orbit_value(self.spec, n, orbit, with_integer=with_integer))
        return out


def kappa_via_lfunctions(spec: VoltageSpec, n: int) -> TreeCount:
    """Tree number of layer n computed without building the layer:
    kappa_X times the product of the orbit norms, divided by ell^(d n)."""
    calc = TowerCalculator(spec)
    kappa = calc.kappa_exact(n)
    order = calc.ord_valuation(n)
    if ord_prime(kappa, spec.ell) != order:
        raise RuntimeError("valuation route and norm route disagree; internal inconsistency")
    return TreeCount(kappa, spec.ell, order, route="l-function")
