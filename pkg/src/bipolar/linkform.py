"""The linking form on Z_m + Z_m and its metabolizers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .numtheory import crt, factor, sqrt_minus_one

BRUTE_FORCE_LIMIT = 200

Pair = tuple[int, int]


@dataclass(frozen=True)
class LinkingGroup:
    """Z_m + Z_m with the form a(x1 y1 + x2 y2)/m in Q/Z."""

    m: int
    a: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if gcd(self.a, self.m) != 1:
            raise ValueError(f"a={self.a} is not a unit mod {self.m}")

    @property
    def order(self) -> int:
        return self.m * self.m

    def form(self, u: Pair, v: Pair) -> Fraction:
        return Fraction(self.a * (u[0] * v[0] + u[1] * v[1]) % self.m, self.m)

    def elements(self):
        m = self.m
        return ((x1, x2) for x1 in range(m) for x2 in range(m))


@dataclass(frozen=True)
class Metabolizer:
    m: int
    generators: tuple[Pair, ...]
    elements: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple((x % self.m, y % self.m) for x, y in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "elements", _span(self.m, gens))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def slope(self) -> int | None:
        """b when the subgroup is <(1, b)>, else None."""
        for b in range(self.m):
            if (1 % self.m, b) in self.elements:
                return b if self.order == self.m else None
        return None

    def is_isotropic(self, group: LinkingGroup) -> bool:
        # Bilinearity: vanishing on generator pairs is enough.
        return all(group.form(u, v) == 0 for u in self.generators for v in self.generators)

    def same_subgroup(self, other: Metabolizer) -> bool:
        return self.m == other.m and self.elements == other.elements


def _span(m: int, gens) -> frozenset:
    elems = {(0, 0)}
    for g in gens:
        new = set(elems)
        frontier = list(elems)
        while frontier:
            x, y = frontier.pop()
            z = ((x + g[0]) % m, (y + g[1]) % m)
            if z not in new:
                new.add(z)
                frontier.append(z)
        elems = new
    return frozenset(elems)


def structured_metabolizers(m: int) -> list[Metabolizer]:
    """One metabolizer <(1, b)> per square root b of -1 mod m (m odd, squarefree)."""
    fac = factor(m)
    if not fac.squarefree:
        raise ValueError(f"{m} is not squarefree")
    return [Metabolizer(m, ((1, b),)) for b in sqrt_minus_one(fac)]


def _order(m: int, g: Pair) -> int:
    return m // gcd(gcd(g[0], g[1]), m)


def _order_m_subgroups(m: int):
    # Lattices L with mZ^2 < L < Z^2 of index m, in Hermite normal form
    # rows (a, c), (0, d) with a*d = m and 0 <= c < d.
    for a in range(1, m + 1):
        if m % a:
            continue
        d = m // a
        for c in range(d):
            yield ((a % m, c % m), (0, d % m))


def brute_force_metabolizers(group: LinkingGroup) -> list[Metabolizer]:
    """Every order-m subgroup on which the form vanishes, by exhaustive search.

    Cyclic subgroups come from sweeping all generators; a second sweep over all
    order-m subgroups (Hermite normal forms of the corresponding lattices)
    confirms completeness and contributes any non-cyclic ones.
    """
    m = group.m
    if m > BRUTE_FORCE_LIMIT:
        raise ValueError(f"m={m} exceeds brute-force limit {BRUTE_FORCE_LIMIT}")
    cyclic: dict[frozenset, Metabolizer] = {}
    for g in group.elements():
        if _order(m, g) != m or group.form(g, g) != 0:
            continue
        cand = Metabolizer(m, (g,))
        if cand.elements in cyclic:
            continue
        if all(group.form(u, v) == 0 for u in cand.elements for v in cand.elements):
            cyclic[cand.elements] = cand

    every: dict[frozenset, Metabolizer] = {}
    for gens in _order_m_subgroups(m):
        cand = Metabolizer(m, gens)
        if cand.order != m:
            raise RuntimeError(f"subgroup enumeration produced order {cand.order}")
        if cand.elements not in every and cand.is_isotropic(group):
            every[cand.elements] = cand
    if not set(cyclic) <= set(every):
        raise RuntimeError("cyclic sweep found a subgroup missed by the lattice count")

    out = list(cyclic.values())
    out += [h for key, h in every.items() if key not in cyclic]
    out.sort(key=lambda h: sorted(h.elements))
    return out


def split_group(group: LinkingGroup, m1: int, m2: int) -> tuple[LinkingGroup, LinkingGroup]:
    """Component forms of the orthogonal splitting Z_{m1 m2} = Z_{m1} + Z_{m2}."""
    if m1 * m2 != group.m:
        raise ValueError("m1 * m2 must equal the group order parameter")
    if gcd(m1, m2) != 1:
        raise ValueError(f"moduli {m1}, {m2} are not coprime")
    # 1/(m1 m2) = inv(m2)/m1 + inv(m1)/m2  in Q/Z
    a1 = group.a * pow(m2, -1, m1) % m1 if m1 > 1 else 0
    a2 = group.a * pow(m1, -1, m2) % m2 if m2 > 1 else 0
    return LinkingGroup(m1, a1 or 1), LinkingGroup(m2, a2 or 1)


def split_metabolizer(m1: int, m2: int, met: Metabolizer) -> tuple[Metabolizer, Metabolizer]:
    """Project a metabolizer over m1*m2 to its coprime components."""
    if gcd(m1, m2) != 1:
        raise ValueError(f"moduli {m1}, {m2} are not coprime")
    if met.m != m1 * m2:
        raise ValueError("metabolizer modulus must be m1 * m2")
    first = Metabolizer(m1, met.generators)
    second = Metabolizer(m2, met.generators)
    return first, second


def direct_sum(first: Metabolizer, second: Metabolizer) -> Metabolizer:
    """CRT reassembly of component subgroups into a subgroup over m1*m2."""
    m1, m2 = first.m, second.m
    if gcd(m1, m2) != 1:
        raise ValueError("moduli are not coprime")
    m = m1 * m2
    gens = [(crt([g[0], 0], [m1, m2]), crt([g[1], 0], [m1, m2])) for g in first.generators]
    gens += [(crt([0, g[0]], [m1, m2]), crt([0, g[1]], [m1, m2])) for g in second.generators]
    return Metabolizer(m, tuple(gens))
