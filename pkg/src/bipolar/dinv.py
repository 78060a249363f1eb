"""Correction terms: lens spaces, surgeries via V_s, tables over Z_m."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

import numpy as np

from .cfk import VSequence


@lru_cache(maxsize=None)
def _lens(p: int, q: int, i: int) -> Fraction:
    if p == 1:
        return Fraction(0)
    return Fraction((2 * i + 1 - p - q) ** 2 - p * q, 4 * p * q) - _lens(q, p % q, i % q)


def lens_d(p: int, q: int, i: int) -> Fraction:
    """d(L(p, q), i) for L(p, q) = p/q surgery on the unknot."""
    if p < 1:
        raise ValueError("p must be positive")
    if gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    if not 0 <= i < p:
        raise ValueError(f"index {i} outside [0, {p})")
    if p == 1:
        return Fraction(0)
    return _lens(p, q % p, i)


@lru_cache(maxsize=64)
def lens_table(p: int, q: int) -> tuple[Fraction, ...]:
    """All of d(L(p, q), i), i in [0, p), sharing the recursive tail tables."""
    if gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    if p == 1:
        return (Fraction(0),)
    q %= p
    tail = lens_table(q, p % q)
    return tuple(
        Fraction((2 * i + 1 - p - q) ** 2 - p * q, 4 * p * q) - tail[i % q] for i in range(p)
    )


def _correction(v: VSequence, p: int, q: int, i: int) -> int:
    return max(v.V(i // q), v.H((i - p) // q))


def surgery_d(v: VSequence, p: int, q: int, i: int) -> Fraction:
    """d(S^3_{p/q}(K), i) = d(L(p,q), i) - 2 max(V_{floor(i/q)}, H_{floor((i-p)/q)})."""
    if p < 1 or q < 1:
        raise ValueError("only positive surgeries are supported")
    if not 0 <= i < p:
        raise ValueError(f"index {i} outside [0, {p})")
    return lens_d(p, q, i) - 2 * _correction(v, p, q, i)


def conjugate_index(p: int, q: int, i: int) -> int:
    return (q - 1 - i) % p


def spin_index(p: int, q: int) -> int:
    """Surgery index of the spin structure (the self-conjugate one), p odd."""
    if p % 2 == 0:
        raise ValueError("a unique self-conjugate index needs odd p")
    return (q - 1) * pow(2, -1, p) % p if p > 1 else 0


@dataclass(frozen=True)
class CorrectionTable:
    """x -> d(Y, s_0 + PD[x mu]) over Z_m, stored as numerators over 4m.

    The ``recipe`` string records where the table came from and is carried
    into every report built on it.
    """

    m: int
    nums: tuple[int, ...]
    recipe: str = ""

    def __post_init__(self):
        if len(self.nums) != self.m:
            raise ValueError(f"table has {len(self.nums)} entries, expected {self.m}")
        if not isinstance(self.nums, tuple):
            object.__setattr__(self, "nums", tuple(int(v) for v in self.nums))

    @property
    def denominator(self) -> int:
        return 4 * self.m

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.nums, dtype=np.int64)
        a.flags.writeable = False
        return a

    def __getitem__(self, x: int) -> Fraction:
        return Fraction(self.nums[x % self.m], self.denominator)

    def values(self) -> list[Fraction]:
        return [self[x] for x in range(self.m)]

    def total(self) -> Fraction:
        return Fraction(sum(self.nums), self.denominator)

    @property
    def symmetric(self) -> bool:
        a = self.array
        return bool(np.array_equal(a, a[(-np.arange(self.m)) % self.m]))

    def validate(self) -> CorrectionTable:
        if self.m % 2 == 0:
            raise ValueError("tables live on odd-order groups")
        if not self.symmetric:
            raise ValueError("table is not conjugation symmetric")
        return self

    @classmethod
    def from_values(cls, values, recipe: str = "") -> CorrectionTable:
        values = [Fraction(v) for v in values]
        m = len(values)
        nums = []
        for v in values:
            scaled = v * 4 * m
            if scaled.denominator != 1:
                raise ValueError(f"value {v} has denominator not dividing {4 * m}")
            nums.append(int(scaled))
        return cls(m, tuple(nums), recipe)

    @classmethod
    def zero(cls, m: int, recipe: str = "zero") -> CorrectionTable:
        return cls(m, (0,) * m, recipe)

    def to_json(self) -> str:
        entries = []
        for x in range(self.m):
            v = self[x]
            entries.append({"x": x, "num": v.numerator, "den": v.denominator})
        return json.dumps({"m": self.m, "recipe": self.recipe, "entries": entries}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> CorrectionTable:
        """Parse and validate (symmetry, denominators, completeness)."""
        doc = json.loads(text)
        m = int(doc["m"])
        vals: dict[int, Fraction] = {}
        for e in doc["entries"]:
            x = int(e["x"])
            if not 0 <= x < m or x in vals:
                raise ValueError(f"bad or repeated index {x}")
            den = int(e["den"])
            if den <= 0 or (4 * m) % den:
                raise ValueError(f"denominator {den} does not divide {4 * m}")
            vals[x] = Fraction(int(e["num"]), den)
        if len(vals) != m:
            raise ValueError("table is missing entries")
        return cls.from_values([vals[x] for x in range(m)], doc.get("recipe", "ingested")).validate()


@lru_cache(maxsize=16)
def _lens_nums(p: int, q: int) -> np.ndarray:
    scale = 4 * p
    out = np.array([int(d * scale) for d in lens_table(p, q)], dtype=np.int64)
    out.flags.writeable = False
    return out


def surgery_table(v: VSequence, p: int, q: int, recipe: str = "") -> CorrectionTable:
    """Correction terms of p/q surgery labelled by x = i - i_spin (mod p)."""
    if p % 2 == 0:
        raise ValueError("p must be odd")
    if q < 1 or gcd(p, q) != 1:
        raise ValueError(f"need positive q coprime to p, got q={q}")
    idx = np.arange(p)
    # For 0 <= i < p: floor(i/q) >= 0 and H at floor((i-p)/q) < 0 is V at -floor((i-p)/q).
    vv = np.array([v.V(s) for s in range(v.s_max + 1)], dtype=np.int64)
    up = np.minimum(idx // q, v.s_max)
    down = np.minimum(-((idx - p) // q), v.s_max)
    corr = np.maximum(vv[up], vv[down])
    by_index = _lens_nums(p, q % p if p > 1 else 0) - 8 * p * corr
    nums = by_index[(idx + spin_index(p, q)) % p]
    return CorrectionTable(p, tuple(nums.tolist()), recipe)


def lens_space_table(p: int, q: int, recipe: str = "") -> CorrectionTable:
    return surgery_table(VSequence.zero(), p, q, recipe or f"lens L({p},{q})")


def d_sum(t1: CorrectionTable, t2: CorrectionTable, mode: str | None = None) -> CorrectionTable:
    """Additivity under connected sum.

    ``mode="crt"`` pairs coprime orders through Z_{m1 m2} = Z_{m1} + Z_{m2};
    ``mode="aligned"`` adds entrywise over a common m.
    """
    if mode is None:
        if t1.m == t2.m:
            raise ValueError("tables over the same m need an explicit pairing mode")
        mode = "crt"
    recipe = f"({t1.recipe}) # ({t2.recipe})"
    if mode == "aligned":
        if t1.m != t2.m:
            raise ValueError("aligned pairing needs equal orders")
        return CorrectionTable(t1.m, tuple((t1.array + t2.array).tolist()), recipe)
    if mode != "crt":
        raise ValueError(f"unknown pairing mode {mode!r}")
    if gcd(t1.m, t2.m) != 1:
        raise ValueError("CRT pairing needs coprime orders")
    m = t1.m * t2.m
    x = np.arange(m)
    nums = t1.array[x % t1.m] * t2.m + t2.array[x % t2.m] * t1.m
    return CorrectionTable(m, tuple(nums.tolist()), recipe)


def relabel(t: CorrectionTable, b: int) -> CorrectionTable:
    """The table x -> T(b x) for a unit b."""
    if gcd(b, t.m) != 1:
        raise ValueError(f"{b} is not a unit mod {t.m}")
    x = np.arange(t.m)
    return CorrectionTable(t.m, tuple(t.array[(b * x) % t.m].tolist()), t.recipe)


def assert_order_two_vanishing(t: CorrectionTable) -> bool:
    """True iff d vanishes at the spin structure, as it must for order-two knots."""
    return t.nums[0] == 0


@dataclass(frozen=True)
class PairTable:
    """d-invariants of Y1 # Y2 on Z_m + Z_m, by additivity."""

    first: CorrectionTable
    second: CorrectionTable

    def __post_init__(self):
        if self.first.m != self.second.m:
            raise ValueError("summand orders differ")

    @property
    def m(self) -> int:
        return self.first.m

    def __call__(self, x1: int, x2: int) -> Fraction:
        return self.first[x1] + self.second[x2]
