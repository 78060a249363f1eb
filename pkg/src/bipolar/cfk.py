"""Bifiltered F_2 complexes modelling CFK^infinity, and their V_s invariants.

A complex is given by a basis over F_2[U, U^-1]: each basis element carries a
position (i, j) and a Maslov grading, and the differential is an F_2 matrix
between basis elements.  U^k x sits at (i - k, j - k) with grading M - 2k.
Because every arrow drops the grading by exactly one, the differential never
involves a power of U, so the basis element and all its U-translates share
one column of the matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from . import gf2

EXACT_LIMIT = 6561


@dataclass(frozen=True)
class Generator:
    i: int
    j: int
    maslov: int


@dataclass(frozen=True)
class FilteredComplex:
    generators: tuple[Generator, ...]
    differential: tuple[tuple[int, int], ...]
    staircase_steps: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        gens = tuple(g if isinstance(g, Generator) else Generator(*g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "differential", tuple(sorted(set(map(tuple, self.differential)))))
        n = len(gens)
        for src, dst in self.differential:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"arrow {src}->{dst} out of range")
            a, b = gens[src], gens[dst]
            if b.maslov != a.maslov - 1:
                raise ValueError(f"arrow {src}->{dst} does not drop Maslov grading by 1")
            if b.i > a.i or b.j > a.j or (b.i, b.j) == (a.i, a.j):
                raise ValueError(f"arrow {src}->{dst} violates the filtrations")
        if any(self._d(self._d(1 << x)) for x in range(n)):
            raise ValueError("differential does not square to zero")

    def __len__(self):
        return len(self.generators)

    @cached_property
    def _images(self) -> list[int]:
        out = [0] * len(self.generators)
        for src, dst in self.differential:
            out[src] ^= 1 << dst
        return out

    def _d(self, chain: int) -> int:
        acc = 0
        for x in gf2.bits(chain):
            acc ^= self._images[x]
        return acc

    def boundary(self, chain: int) -> int:
        """Differential applied to a chain given as a bitmask over generators."""
        return self._d(chain)

    @cached_property
    def homology_rank(self) -> int:
        r = gf2.rank(self._images)
        return len(self.generators) - 2 * r

    @cached_property
    def tower_parity(self) -> int:
        """Parity of the Maslov grading carrying the homology of the complex."""
        if self.homology_rank != 1:
            raise ValueError(f"total homology has rank {self.homology_rank}, expected 1")
        for par in (0, 1):
            idx = [x for x, g in enumerate(self.generators) if g.maslov % 2 == par]
            cycles = gf2.kernel([self._images[x] for x in idx])
            bnd = gf2.Echelon()
            for x, g in enumerate(self.generators):
                if g.maslov % 2 != par:
                    bnd.add(self._images[x])
            if any(not bnd.contains(_lift(c, idx)) for c in cycles):
                return par
        raise AssertionError("homology class not found")

    def to_json(self) -> str:
        doc = {
            "generators": [{"i": g.i, "j": g.j, "maslov": g.maslov} for g in self.generators],
            "differential": [list(e) for e in self.differential],
        }
        if self.staircase_steps is not None:
            doc["staircase"] = list(self.staircase_steps)
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> FilteredComplex:
        doc = json.loads(text)
        gens = [Generator(int(g["i"]), int(g["j"]), int(g["maslov"])) for g in doc["generators"]]
        steps = doc.get("staircase")
        return cls(
            tuple(gens),
            tuple((int(a), int(b)) for a, b in doc["differential"]),
            tuple(steps) if steps is not None else None,
        )


def _lift(combo: int, idx: list[int]) -> int:
    out = 0
    for b in gf2.bits(combo):
        out |= 1 << idx[b]
    return out


def unknot() -> FilteredComplex:
    return FilteredComplex((Generator(0, 0, 0),), (), ())


def staircase(steps) -> FilteredComplex:
    """Staircase with alternating horizontal and vertical step lengths.

    Generator 0 sits at (0, g) where g is the total vertical length; odd
    generators are the corners carrying arrows to both neighbours.
    """
    steps = tuple(int(s) for s in steps)
    if not steps:
        return unknot()
    if len(steps) % 2 or steps != steps[::-1]:
        raise ValueError(f"step vector {steps} is not symmetric of even length")
    if any(s <= 0 for s in steps):
        raise ValueError("steps must be positive")
    i, j = 0, sum(steps[1::2])
    gens = [Generator(i, j, 0)]
    arrows = []
    for t, s in enumerate(steps, start=1):
        if t % 2:
            i += s
            gens.append(Generator(i, j, 1))
            arrows.append((t, t - 1))
        else:
            j -= s
            gens.append(Generator(i, j, 0))
            arrows.append((t - 1, t))
    return FilteredComplex(tuple(gens), tuple(arrows), steps)


def trefoil() -> FilteredComplex:
    return staircase([1, 1])


def mirror(c: FilteredComplex) -> FilteredComplex:
    """Dual complex: negate filtrations and grading, reverse arrows."""
    gens = tuple(Generator(-g.i, -g.j, -g.maslov) for g in c.generators)
    return FilteredComplex(gens, tuple((b, a) for a, b in c.differential))


def tensor(a: FilteredComplex, b: FilteredComplex) -> FilteredComplex:
    nb = len(b)
    gens = tuple(
        Generator(x.i + y.i, x.j + y.j, x.maslov + y.maslov)
        for x, y in product(a.generators, b.generators)
    )
    arrows = [(s * nb + y, t * nb + y) for s, t in a.differential for y in range(nb)]
    arrows += [(x * nb + s, x * nb + t) for x in range(len(a)) for s, t in b.differential]
    return FilteredComplex(gens, tuple(arrows))


@dataclass(frozen=True)
class VSequence:
    """V_0, V_1, ..., ending with the first zero."""

    values: tuple[int, ...]

    def __post_init__(self):
        v = self.values
        if not v or v[-1] != 0 or any(x < 0 for x in v):
            raise ValueError(f"invalid V-sequence {v}")
        if any(not (v[s] - 1 <= v[s + 1] <= v[s]) for s in range(len(v) - 1)):
            raise ValueError(f"V-sequence {v} is not non-increasing with unit steps")

    @property
    def s_max(self) -> int:
        return len(self.values) - 1

    def V(self, s: int) -> int:
        if s < 0:
            return self.V(-s) - s
        return self.values[s] if s < len(self.values) else 0

    def H(self, s: int) -> int:
        return self.V(-s)

    @classmethod
    def zero(cls) -> VSequence:
        return cls((0,))


def _top_class_grading(c: FilteredComplex, threshold) -> int:
    """Highest grading of a cycle in a U-closed region that is nonzero in H(C^inf).

    ``threshold(g)`` is the least k with U^k g inside the region, so at grading
    r the basis element g contributes exactly when r <= maslov(g) - 2*threshold(g).
    """
    par = c.tower_parity
    gens = c.generators
    bnd = gf2.Echelon()
    for x, g in enumerate(gens):
        if g.maslov % 2 != par:
            bnd.add(c._images[x])
    entry = sorted(
        ((g.maslov - 2 * threshold(g), x) for x, g in enumerate(gens) if g.maslov % 2 == par),
        reverse=True,
    )
    cycles = gf2.Echelon()
    for r, x in entry:
        dep = cycles.add(c._images[x], 1 << x)
        if dep is not None and not bnd.contains(dep):
            return r
    raise AssertionError("tower never appears; complex is not knot-like")


def _check_normalized(c: FilteredComplex) -> None:
    top = _top_class_grading(c, lambda g: g.i)
    if top != 0:
        raise ValueError(f"complex grading is not normalized (C{{i<=0}} tower top at {top})")


def v_value(c: FilteredComplex, s: int) -> int:
    """V_s from the subcomplex {max(i, j - s) <= 0}; valid for any integer s."""
    r = _top_class_grading(c, lambda g: max(g.i, g.j - s))
    if r % 2:
        raise ValueError("tower sits in odd grading")
    return -r // 2


def v_sequence(c: FilteredComplex) -> VSequence:
    _check_normalized(c)
    vals = []
    s = 0
    while True:
        vals.append(v_value(c, s))
        if vals[-1] == 0:
            return VSequence(tuple(vals))
        s += 1


def default_depth(c: FilteredComplex) -> int:
    spread = max(g.i for g in c.generators) - min(g.i for g in c.generators)
    spread = max(spread, max(g.j for g in c.generators) - min(g.j for g in c.generators))
    return len(c) + spread


def tower_bottom_plus(c: FilteredComplex, s: int, depth: int | None = None) -> int:
    """Bottom grading of the tower in H(A_s^+), by explicit truncation.

    A_s^+ is the quotient of C^inf by {max(i, j - s) < 0}.  U-translates
    U^k x are materialized for |k| <= depth; the tower is the image of
    H(C^inf) -> H(A_s^+), and its lowest nonzero grading is returned.  Used
    as an independent check on ``v_value``: the result equals -2 V_s.
    """
    if depth is None:
        depth = default_depth(c) + abs(s)
    cells = [(x, k) for k in range(-depth, depth + 1) for x in range(len(c))]
    pos = {cell: n for n, cell in enumerate(cells)}
    gens = c.generators

    def grading(cell):
        return gens[cell[0]].maslov - 2 * cell[1]

    def kept(cell):
        g = gens[cell[0]]
        return max(g.i - cell[1], g.j - cell[1] - s) >= 0

    def d(cell):
        out = 0
        for y in gf2.bits(c._images[cell[0]]):
            out |= 1 << pos[(y, cell[1])]
        return out

    by_grading: dict[int, list] = {}
    for cell in cells:
        by_grading.setdefault(grading(cell), []).append(cell)
    # A grading slice is complete when every generator of the right parity has
    # its translate inside the window.
    par = c.tower_parity
    need = sum(1 for g in gens if g.maslov % 2 == par)
    kept_mask = sum(1 << pos[cell] for cell in cells if kept(cell))
    below_seen = False
    for r in sorted(by_grading):
        if r % 2 != par or len(by_grading[r]) != need or len(by_grading.get(r + 1, ())) != len(c) - need:
            continue
        full = by_grading[r]
        bnd = gf2.Echelon()
        for cell in by_grading[r + 1]:
            bnd.add(d(cell))
        z = next(
            (
                _lift(dep, [pos[cl] for cl in full])
                for dep in gf2.kernel([d(cl) for cl in full])
                if not bnd.contains(_lift(dep, [pos[cl] for cl in full]))
            ),
            None,
        )
        if z is None:
            raise AssertionError("no homology generator in a complete slice")
        qbnd = gf2.Echelon()
        for cell in by_grading[r + 1]:
            if kept(cell):
                qbnd.add(d(cell) & kept_mask)
        if not qbnd.contains(z & kept_mask):
            if below_seen:
                return r
            break
        below_seen = True
    raise ValueError(f"truncation depth {depth} too small to reach the tower bottom")


class ConnectedSum:
    """Lazy tensor product of knot complexes.

    The V-sequence is computed exactly from the materialized tensor product when
    it has at most ``EXACT_LIMIT`` generators.  Larger sums whose factors are
    all staircases use the infimal convolution V(s) = min_{a+b=s} V1(a) + V2(b),
    which is exact for tensor products of staircases and is cross-checked
    against the exact route in the test suite.
    """

    def __init__(self, factors):
        self.factors = tuple(factors)

    @property
    def num_generators(self) -> int:
        n = 1
        for f in self.factors:
            n *= len(f)
        return n

    def complex(self) -> FilteredComplex:
        if self.num_generators > EXACT_LIMIT:
            raise ValueError(f"{self.num_generators} generators exceed EXACT_LIMIT")
        if not self.factors:
            return unknot()
        out = self.factors[0]
        for f in self.factors[1:]:
            out = tensor(out, f)
        return out

    @property
    def all_staircases(self) -> bool:
        return all(f.staircase_steps is not None for f in self.factors)

    def v_sequence(self, method: str = "auto") -> VSequence:
        if method == "auto":
            method = "exact" if self.num_generators <= EXACT_LIMIT else "convolution"
        if method == "exact":
            return v_sequence(self.complex())
        if method != "convolution":
            raise ValueError(f"unknown method {method!r}")
        if not self.all_staircases:
            raise ValueError("convolution requires every factor to be a staircase")
        acc = VSequence.zero()
        for f in self.factors:
            acc = convolve(acc, v_sequence(f))
        return acc


def convolve(v1: VSequence, v2: VSequence) -> VSequence:
    """Infimal convolution of two V-functions extended by V(-s) = V(s) + s."""
    g1, g2 = v1.s_max, v2.s_max
    # Minimizing a ranges over [-g1, g1]; the partner index s - a over [-g1, 2 g1 + g2].
    left = [v1.V(a) for a in range(-g1, g1 + 1)]
    right = {b: v2.V(b) for b in range(-g1, 2 * g1 + g2 + 1)}
    vals = [
        min(left[a + g1] + right[s - a] for a in range(-g1, g1 + 1))
        for s in range(g1 + g2 + 1)
    ]
    while len(vals) > 1 and vals[-2] == 0:
        vals.pop()
    return VSequence(tuple(vals))


def model_D_k(k: int, model: FilteredComplex | None = None) -> ConnectedSum:
    """k-fold connected sum of the stable model of Wh^+(T_{2,3}).

    The default model is the trefoil staircase; any complex can be supplied.
    """
    if k < 1:
        raise ValueError("k must be positive")
    return ConnectedSum([model if model is not None else trefoil()] * k)
