"""Finite-dimensional vector spaces over the two-element field.

Elements are `uint8` vectors; a morphism's images are the columns of its matrix.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ildtt.core.modules.model.backends import POINT_LIMIT, Morphism, SmcBackend
from ildtt.errors import ModelError, ModelLimitError

type Vector = npt.NDArray[np.uint8]


def rank(matrix: Vector) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    m = matrix.copy() % 2
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        pivots = np.flatnonzero(m[r:, c])
        if pivots.size == 0:
            continue
        p = r + int(pivots[0])
        m[[r, p]] = m[[p, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
        if r == rows:
            break
    return r


class Gf2VectBackend(SmcBackend[Vector]):
    name = "gf2"

    def zero(self, g: int) -> Vector:
        return np.zeros(g, dtype=np.uint8)

    def gen(self, g: int, i: int) -> Vector:
        v = self.zero(g)
        v[i] = 1
        return v

    def coords(self, g: int, v: Vector) -> list[int]:
        return [int(i) for i in np.flatnonzero(v)]

    def from_coords(self, g: int, coords: Sequence[int]) -> Vector:
        v = self.zero(g)
        for i in coords:
            v[i] ^= 1
        return v

    def add(self, g: int, vs: Sequence[Vector]) -> Vector:
        total = self.zero(g)
        for v in vs:
            total ^= v
        return total

    def points(self, g: int) -> list[Vector]:
        if 2**g > POINT_LIMIT:
            raise ModelLimitError(f"too many vectors to enumerate in dimension {g}")
        table = ((np.arange(2**g)[:, None] >> np.arange(g)) & 1).astype(np.uint8)
        return list(table)

    def point_index(self, g: int, v: Vector) -> int:
        return int(sum(int(bit) << i for i, bit in enumerate(v)))

    def count_points(self, g: int) -> int:
        return int(2**g)

    def equal(self, v: Vector, w: Vector) -> bool:
        return bool(np.array_equal(v, w))

    def parse_point(self, g: int, text: str) -> Vector:
        bits = "" if text == "-" else text
        if len(bits) != g or any(ch not in "01" for ch in bits):
            raise ModelError(f"'{text}' is not a vector of dimension {g}")
        return np.array([int(ch) for ch in bits], dtype=np.uint8)

    def show(self, g: int, v: Vector) -> str:
        return "".join(str(int(bit)) for bit in v) or "-"

    def gens_of_size(self, size: int) -> int:
        if size < 0:
            raise ModelError("a dimension is not negative")
        return size

    def size(self, g: int) -> int:
        return g

    def product(self, gs: Sequence[int]) -> int:
        return sum(gs)

    def tuple_(self, gs: Sequence[int], vs: Sequence[Vector]) -> Vector:
        return np.concatenate([self.zero(0), *vs]).astype(np.uint8)

    def project(self, gs: Sequence[int], v: Vector, k: int) -> Vector:
        offset = sum(gs[:k])
        return v[offset : offset + gs[k]].copy()

    def hom(self, a: int, b: int) -> int:
        return a * b

    def curry(self, a: int, b: int, images: Sequence[Vector]) -> Vector:
        return np.concatenate([self.zero(0), *images]).astype(np.uint8)

    def uncurry(self, a: int, b: int, f: Vector) -> list[Vector]:
        return [f[i * b : (i + 1) * b].copy() for i in range(a)]

    def matrix(self, f: Morphism[Vector]) -> Vector:
        if f.dom == 0:
            return np.zeros((f.cod, 0), dtype=np.uint8)
        return np.column_stack(f.images).astype(np.uint8)

    def of_matrix(self, m: Vector) -> Morphism[Vector]:
        cod, dom = m.shape
        return Morphism(dom, cod, tuple(m[:, i].copy() for i in range(dom)))

    def compose(self, g: Morphism[Vector], f: Morphism[Vector]) -> Morphism[Vector]:
        if f.cod != g.dom:
            raise ModelError("composing morphisms with mismatched objects")
        product = (self.matrix(g).astype(np.int64) @ self.matrix(f).astype(np.int64)) % 2
        return self.of_matrix(product.astype(np.uint8).reshape(g.cod, f.dom))

    def tensor_maps(self, f: Morphism[Vector], g: Morphism[Vector]) -> Morphism[Vector]:
        product = np.kron(self.matrix(f), self.matrix(g)) % 2
        return self.of_matrix(product.astype(np.uint8).reshape(f.cod * g.cod, f.dom * g.dom))

    def is_iso(self, f: Morphism[Vector]) -> bool:
        return f.dom == f.cod and rank(self.matrix(f)) == f.dom
