"""Linear algebra over the two-element field, vectors stored as Python int bitmasks."""

from __future__ import annotations


class Echelon:
    """Incrementally maintained echelon basis.

    Each stored row carries a tag recording which inserted vectors were summed
    to produce it, so dependencies found on insertion come out as kernel vectors.
    """

    def __init__(self):
        self._rows: dict[int, tuple[int, int]] = {}

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        while v:
            top = v.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                break
            v ^= row[0]
            tag ^= row[1]
        return v, tag

    def add(self, v: int, tag: int = 0) -> int | None:
        """Insert ``v``; return the dependency tag if it was already in the span."""
        v, tag = self.reduce(v, tag)
        if v:
            self._rows[v.bit_length() - 1] = (v, tag)
            return None
        return tag

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def kernel(images: list[int]) -> list[int]:
    """Basis of {c : sum of images[i] over bits i of c is zero}."""
    ech = Echelon()
    out = []
    for idx, v in enumerate(images):
        dep = ech.add(v, 1 << idx)
        if dep is not None:
            out.append(dep)
    return out


def bits(v: int):
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low
