"""Finite pointed sets with the smash product.

An object with `g` generators is the set {0, ..., g} with basepoint 0. Elements are those
indices; a morphism preserves the basepoint, so it is fixed by the images of 1..g.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from ildtt.core.modules.model.backends import Morphism, SmcBackend
from ildtt.errors import ModelError


def _radix(digits: Sequence[int], bases: Sequence[int]) -> int:
    value = 0
    for digit, base in zip(digits, bases, strict=True):
        value = value * base + digit
    return value


def _digits(value: int, bases: Sequence[int]) -> list[int]:
    digits: list[int] = []
    for base in reversed(bases):
        value, digit = divmod(value, base)
        digits.append(digit)
    return digits[::-1]


class PointedSetBackend(SmcBackend[int]):
    name = "pset"

    def zero(self, g: int) -> int:
        return 0

    def gen(self, g: int, i: int) -> int:
        return i + 1

    def coords(self, g: int, v: int) -> list[int]:
        return [] if v == 0 else [v - 1]

    def from_coords(self, g: int, coords: Sequence[int]) -> int:
        if len(coords) > 1:
            raise ModelError("a pointed set has no sum of two distinct points")
        return coords[0] + 1 if coords else 0

    def add(self, g: int, vs: Sequence[int]) -> int:
        nonzero = [v for v in vs if v != 0]
        if len(nonzero) > 1:
            raise ModelError("a pointed set has no sum of two distinct points")
        return nonzero[0] if nonzero else 0

    def points(self, g: int) -> list[int]:
        return list(range(g + 1))

    def point_index(self, g: int, v: int) -> int:
        return v

    def count_points(self, g: int) -> int:
        return g + 1

    def equal(self, v: int, w: int) -> bool:
        return v == w

    def parse_point(self, g: int, text: str) -> int:
        if not text.isdigit() or int(text) > g:
            raise ModelError(f"'{text}' is not a point of a pointed set of size {g + 1}")
        return int(text)

    def show(self, g: int, v: int) -> str:
        return str(v)

    def gens_of_size(self, size: int) -> int:
        if size < 1:
            raise ModelError("a pointed set has at least its basepoint")
        return size - 1

    def size(self, g: int) -> int:
        return g + 1

    def product(self, gs: Sequence[int]) -> int:
        return math.prod(g + 1 for g in gs) - 1

    def tuple_(self, gs: Sequence[int], vs: Sequence[int]) -> int:
        return _radix(vs, [g + 1 for g in gs])

    def project(self, gs: Sequence[int], v: int, k: int) -> int:
        return _digits(v, [g + 1 for g in gs])[k]

    def hom(self, a: int, b: int) -> int:
        return (b + 1) ** a - 1

    def curry(self, a: int, b: int, images: Sequence[int]) -> int:
        return _radix(images, [b + 1] * a)

    def uncurry(self, a: int, b: int, f: int) -> list[int]:
        return _digits(f, [b + 1] * a)

    def is_iso(self, f: Morphism[int]) -> bool:
        return f.dom == f.cod and sorted(f.images) == list(range(1, f.dom + 1))
