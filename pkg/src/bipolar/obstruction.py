"""Decision logic: metabolizer sign test, averaging argument, k-selection, sums."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .dinv import CorrectionTable, PairTable, assert_order_two_vanishing
from .linkform import Metabolizer
from .numtheory import RootSet, is_admissible, sqrt_minus_one

OBSTRUCTED = "obstructed"
INCONCLUSIVE = "inconclusive"

MODEL_NOTE = (
    "D = Wh+(T_{2,3}) modelled by a stable knot complex; "
    "surgery parameters are a configurable recipe, not read off a diagram"
)


@dataclass(frozen=True)
class KnotDescriptor:
    """K_{n,k} = K_{D_k,n} # K_{U,n}."""

    n: int
    k: int
    topologically_slice: bool = True
    amphichiral: bool = True

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be positive")

    @property
    def zero_bipolar_eligible(self) -> bool:
        return self.n >= 4 * self.k

    @property
    def m(self) -> int:
        return 4 * self.n * self.n + 1


@dataclass
class ObstructionReport:
    verdict: str
    m: int
    satisfying_b: list[int] = field(default_factory=list)
    witnesses: dict[int, int] = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    chain: list[dict] = field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        return self.verdict == OBSTRUCTED

    def verify(self, t_d: CorrectionTable, t_u: CorrectionTable) -> bool:
        """Re-check every witness and every satisfying b against the tables."""
        for b, x in self.witnesses.items():
            if t_d[x] + t_u[b * x] == 0:
                return False
        for b in self.satisfying_b:
            if any(_pair_sums(t_d, t_u, b)):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "m": self.m,
            "satisfying_b": list(self.satisfying_b),
            "witnesses": [{"b": b, "x": x} for b, x in sorted(self.witnesses.items())],
            "provenance": self.provenance,
            "warnings": list(self.warnings),
            "chain": list(self.chain),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _pair_sums(t_d: CorrectionTable, t_u: CorrectionTable, b: int) -> np.ndarray:
    # Numerators over 4m of T_D(x) + T_U(b x), x = 0..m-1.
    x = np.arange(t_d.m)
    return t_d.array + t_u.array[(b * x) % t_d.m]


def theorem32_test(table: PairTable, metabolizers: list[Metabolizer]) -> dict:
    """Split metabolizers by the sign of d on them.

    A knot in the 1-bipolar subgroup needs one metabolizer where d <= 0 and one
    where d >= 0; an empty list is an obstruction.
    """
    nonpos, nonneg = [], []
    for met in metabolizers:
        if met.m != table.m:
            raise ValueError("metabolizer and table orders differ")
        vals = [table(x1, x2) for x1, x2 in met.elements]
        if all(v <= 0 for v in vals):
            nonpos.append(met)
        if all(v >= 0 for v in vals):
            nonneg.append(met)
    return {"nonpositive": nonpos, "nonnegative": nonneg, "obstructed": not (nonpos and nonneg)}


def _provenance(t_d: CorrectionTable, t_u: CorrectionTable) -> dict:
    return {"T_D": t_d.recipe, "T_U": t_u.recipe, "model": MODEL_NOTE}


def averaging_decision(t_d: CorrectionTable, t_u: CorrectionTable, roots: RootSet) -> ObstructionReport:
    """Obstructed unless T_D(x) + T_U(b x) = 0 for all x, for some root b."""
    if not (t_d.m == t_u.m == roots.m):
        raise ValueError(f"orders differ: {t_d.m}, {t_u.m}, {roots.m}")
    report = ObstructionReport(OBSTRUCTED, t_d.m, provenance=_provenance(t_d, t_u))
    if not len(roots):
        report.warnings.append(
            f"no square roots of -1 mod {roots.m}: no metabolizer exists, obstruction is vacuous"
        )
        return report
    for b in roots:
        bad = np.flatnonzero(_pair_sums(t_d, t_u, b))
        if bad.size:
            report.witnesses[b] = int(bad[0])
        else:
            report.satisfying_b.append(b)
    if report.satisfying_b:
        report.verdict = INCONCLUSIVE
        report.witnesses.clear()
    return report


@dataclass(frozen=True)
class AveragingChain:
    """The steps from two one-sided metabolizer bounds to a pointwise identity."""

    hyp_nonneg: bool  # T_D(x) + T_U(b1 x) >= 0 for all x
    hyp_nonpos: bool  # T_D(x) + T_U(b2 x) <= 0 for all x
    total_b1: Fraction
    total_b2: Fraction
    total_unrelabelled: Fraction
    pointwise_zero: bool | None

    @property
    def hypotheses(self) -> bool:
        return self.hyp_nonneg and self.hyp_nonpos


def averaging_lemma(t_d: CorrectionTable, t_u: CorrectionTable, b1: int, b2: int) -> AveragingChain:
    """Run the averaging argument on concrete tables.

    Relabelling by a unit permutes Z_m, so both one-sided sums equal the plain
    total; one bounds it below by 0, the other above, so it is 0, and a sum of
    nonnegative terms equal to 0 forces each term to vanish.
    """
    m = t_d.m
    if gcd(b1, m) != 1 or gcd(b2, m) != 1:
        raise ValueError("b1, b2 must be units")
    s1, s2 = _pair_sums(t_d, t_u, b1), _pair_sums(t_d, t_u, b2)
    den = 4 * m
    plain = Fraction(int(t_d.array.sum() + t_u.array.sum()), den)
    tot1, tot2 = Fraction(int(s1.sum()), den), Fraction(int(s2.sum()), den)
    if tot1 != plain or tot2 != plain:
        raise AssertionError("relabelling changed a total sum")
    h1, h2 = bool((s1 >= 0).all()), bool((s2 <= 0).all())
    pointwise = None
    if h1 and h2:
        if not (tot1 >= 0 and tot2 <= 0):
            raise AssertionError("sign bounds on the total are inconsistent")
        # total is both >= 0 and <= 0, and nonnegative terms summing to 0 all vanish
        pointwise = plain == 0 and int(s1.max()) == 0
    return AveragingChain(h1, h2, tot1, tot2, plain, pointwise)


@dataclass
class Selection:
    n: int
    selected: list[int]
    reports: dict[int, ObstructionReport]
    warnings: list[str]
    inconclusive_full_range: list[int] | None = None


def select_k(n: int, tables: dict, roots: RootSet | None = None) -> Selection:
    """k in 1..floor(n/4) whose averaging decision is Obstructed.

    ``tables`` maps k to (T_D, T_U).  Entries beyond n/4 (up to k < n/2) only
    feed the informational count of exceptional k.
    """
    cand = is_admissible(n)
    if not cand.eligible:
        raise ValueError(f"n={n} is not admissible with n > 20")
    if roots is None:
        roots = sqrt_minus_one(cand.m)
    top = n // 4
    missing = [k for k in range(1, top + 1) if k not in tables]
    if missing:
        raise ValueError(f"missing tables for k in {missing}")
    reports = {k: averaging_decision(*tables[k], roots) for k in sorted(tables)}
    selected = [k for k in range(1, top + 1) if reports[k].obstructed]
    warnings = []
    full = range(1, (n - 1) // 2 + 1)
    exceptional = None
    if all(k in tables for k in full):
        exceptional = [k for k in full if not reports[k].obstructed]
        if len(exceptional) > 4:
            warnings.append(
                f"{len(exceptional)} unobstructed k with 0<k<n/2 (expected at most 4)"
            )
    return Selection(n, selected, {k: reports[k] for k in range(1, top + 1)}, warnings, exceptional)


def connected_sum_decision(summands, position: int = 0) -> ObstructionReport:
    """Reduce K_{n1,k1} # ... # K_{nl,kl} to one summand.

    ``summands`` holds (KnotDescriptor, T_D, T_U, RootSet).  Coprime orders
    split every metabolizer, and the other summands contribute d(s_0) = 0, so
    the verdict is that of the chosen summand (the first by default).
    """
    if not summands:
        raise ValueError("empty connected sum")
    ns = [s[0].n for s in summands]
    if len(set(ns)) != len(ns):
        raise ValueError(f"repeated n among {ns}")
    ms = [s[0].m for s in summands]
    for a in range(len(ms)):
        for b in range(a + 1, len(ms)):
            if gcd(ms[a], ms[b]) != 1:
                raise ValueError(f"orders {ms[a]} and {ms[b]} are not coprime")
    chain = []
    for knot, t_d, t_u, roots in summands:
        if not (t_d.m == t_u.m == roots.m == knot.m):
            raise ValueError(f"tables for n={knot.n} have the wrong order")
        d_spin = t_d[0] + t_u[0]
        if d_spin != 0 or not assert_order_two_vanishing(t_u):
            raise ValueError(
                f"d(M(K_{{{knot.n},{knot.k}}}), s_0) = {d_spin} (T_U(0) = {t_u[0]}); "
                "order-two vanishing fails"
            )
        chain.append({"n": knot.n, "k": knot.k, "m": knot.m, "d_spin": str(d_spin)})
    knot, t_d, t_u, roots = summands[position]
    report = averaging_decision(t_d, t_u, roots)
    report.chain = chain + [
        {"reduced_to": {"n": knot.n, "k": knot.k}, "metabolizer": "G_1 + 0", "verdict": report.verdict}
    ]
    return report
