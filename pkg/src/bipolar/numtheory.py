"""Integer arithmetic: factoring, square roots of -1, admissible moduli 4n^2+1."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt, prod

# Miller-Rabin with these bases is deterministic below 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
MR_DETERMINISTIC_BOUND = 3317044064679887385961981
TRIAL_BOUND = 1 << 12
RHO_SEED = 20170523

_SMALL_PRIMES = [p for p in range(2, TRIAL_BOUND) if all(p % d for d in range(2, isqrt(p) + 1))]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= MR_DETERMINISTIC_BOUND:
        raise ValueError(f"{n} exceeds the deterministic primality range")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int, rng: random.Random) -> int:
    # Brent's variant; returns a nontrivial factor of the odd composite n.
    while True:
        y, c, step = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(step, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += step
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    m: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if prod(p**e for p, e in self.factors) != self.m:
            raise ValueError("factors do not multiply to m")
        if list(self.factors) != sorted(self.factors):
            raise ValueError("factors must be sorted by prime")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(e for _, e in self.factors)


def factor(m: int) -> Factorization:
    """Complete prime factorization of ``m``.

    Trial division below ``TRIAL_BOUND``, then Brent-Pollard rho seeded with
    ``RHO_SEED`` so repeated runs split composites identically.
    """
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    counts: dict[int, int] = {}
    n = m
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    rng = random.Random(RHO_SEED)
    stack = [n] if n > 1 else []
    while stack:
        x = stack.pop()
        if is_prime(x):
            counts[x] = counts.get(x, 0) + 1
            continue
        r = isqrt(x)
        if r * r == x:
            stack += [r, r]
            continue
        d = _rho(x, rng)
        stack += [d, x // d]
    return Factorization(m, tuple(sorted(counts.items())))


@dataclass(frozen=True)
class RootSet:
    m: int
    roots: tuple[int, ...]

    def __post_init__(self):
        for b in self.roots:
            if (b * b + 1) % self.m:
                raise ValueError(f"{b}^2 + 1 is not divisible by {self.m}")
        if set(self.roots) != {(self.m - b) % self.m for b in self.roots}:
            raise ValueError("root set not closed under negation")

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __contains__(self, b):
        return b in self.roots


def _sqrt_minus_one_prime(p: int) -> int:
    # Any quadratic non-residue c gives c^((p-1)/4) with square -1.
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return pow(c, (p - 1) // 4, p)
    raise AssertionError("no quadratic non-residue found")


def crt(residues: list[int], moduli: list[int]) -> int:
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        if gcd(m, n) != 1:
            raise ValueError("moduli are not pairwise coprime")
        x += m * ((r - x) * pow(m, -1, n) % n)
        m *= n
    return x % m


def sqrt_minus_one(fac: Factorization | int) -> RootSet:
    """All b in [0, m) with b^2 + 1 = 0 mod m, for odd squarefree m."""
    if isinstance(fac, int):
        fac = factor(fac)
    m = fac.m
    if m % 2 == 0:
        raise ValueError("modulus must be odd")
    if not fac.squarefree:
        raise ValueError(f"{m} is not squarefree")
    if any(p % 4 == 3 for p in fac.primes):
        return RootSet(m, ())
    local = [_sqrt_minus_one_prime(p) for p in fac.primes]
    roots = {
        crt([s * r for s, r in zip(signs, local)], fac.primes)
        for signs in product((1, -1), repeat=len(local))
    }
    return RootSet(m, tuple(sorted(roots)))


@dataclass(frozen=True)
class FamilyCandidate:
    n: int
    m: int
    admissible: bool
    above_20: bool

    @property
    def eligible(self) -> bool:
        return self.admissible and self.above_20


def is_admissible(n: int) -> FamilyCandidate:
    """Test whether 4n^2+1 is a prime or a product of two distinct primes.

    The record also carries whether n > 20, the size gate used when selecting k.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    m = 4 * n * n + 1
    fac = factor(m)
    return FamilyCandidate(n, m, fac.squarefree and fac.omega <= 2, n > 20)


def find_family(n_lo: int, n_hi: int, count: int) -> list[FamilyCandidate]:
    """Greedy ascending selection of eligible n with pairwise coprime 4n^2+1."""
    if n_lo > n_hi:
        raise ValueError("empty range")
    chosen: list[FamilyCandidate] = []
    for n in range(max(n_lo, 21), n_hi + 1):
        if len(chosen) >= count:
            break
        cand = is_admissible(n)
        if cand.eligible and all(gcd(cand.m, c.m) == 1 for c in chosen):
            chosen.append(cand)
    return chosen
