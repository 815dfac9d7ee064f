"""Finite symmetric monoidal backends.

An object is given by its number of generators: the non-basepoint elements of a pointed
set, or the basis vectors of a GF(2) vector space. In both backends every element is a sum
of distinct generators with coefficient 1 (a pointed set admits at most one), so the
monoidal structure is shared here and only products, internal homs and the enumeration of
global points differ per backend. Tensor generators are pairs in row-major order, which
makes the tensor strictly associative on generator indices.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import ClassVar

from ildtt.errors import ModelError, ModelLimitError

POINT_LIMIT = 1 << 16


@dataclass(frozen=True, slots=True)
class Morphism[E]:
    """A morphism given by the images of the generators of its domain."""

    dom: int
    cod: int
    images: tuple[E, ...]


class SmcBackend[E](ABC):
    """Interface every backend provides; objects are generator counts."""

    name: ClassVar[str]

    # Elements

    @abstractmethod
    def zero(self, g: int) -> E:
        """The basepoint, or the zero vector."""

    @abstractmethod
    def gen(self, g: int, i: int) -> E: ...

    @abstractmethod
    def coords(self, g: int, v: E) -> list[int]:
        """Generators occurring in `v`, ascending."""

    @abstractmethod
    def points(self, g: int) -> list[E]:
        """Hom(I, A) in a fixed order."""

    @abstractmethod
    def equal(self, v: E, w: E) -> bool: ...

    @abstractmethod
    def parse_point(self, g: int, text: str) -> E:
        """Read an element written in a model configuration."""

    @abstractmethod
    def show(self, g: int, v: E) -> str: ...

    @abstractmethod
    def gens_of_size(self, size: int) -> int:
        """Generator count of an object written with its configuration size."""

    @abstractmethod
    def size(self, g: int) -> int:
        """Cardinality (pointed sets) or dimension (vector spaces) of an object."""

    def add(self, g: int, vs: Sequence[E]) -> E:
        counts: dict[int, int] = {}
        for v in vs:
            for i in self.coords(g, v):
                counts[i] = counts.get(i, 0) + 1
        return self.from_coords(g, sorted(i for i, n in counts.items() if n % 2))

    @abstractmethod
    def from_coords(self, g: int, coords: Sequence[int]) -> E: ...

    def point_index(self, g: int, v: E) -> int:
        for k, p in enumerate(self.points(g)):
            if self.equal(p, v):
                return k
        raise ModelError(f"element {self.show(g, v)} is not a point of an object with {g} generators")

    def count_points(self, g: int) -> int:
        return len(self.points(g))

    # Monoidal structure

    def unit(self) -> int:
        return 1

    def initial(self) -> int:
        """Initial object, which is also terminal in both backends."""
        return 0

    def unit_point(self) -> E:
        return self.gen(1, 0)

    def tensor(self, a: int, b: int) -> int:
        return a * b

    def pair(self, a: int, b: int, x: E, y: E) -> E:
        return self.from_coords(a * b, sorted(i * b + j for i in self.coords(a, x) for j in self.coords(b, y)))

    def split(self, a: int, b: int, v: E) -> list[tuple[E, E]]:
        """Generator pairs whose tensors sum to `v`."""
        return [(self.gen(a, k // b), self.gen(b, k % b)) for k in self.coords(a * b, v)]

    def scale(self, g: int, scalar: E, v: E) -> E:
        """Multiply by an element of the unit object."""
        return v if self.coords(1, scalar) else self.zero(g)

    def coproduct(self, gs: Sequence[int]) -> int:
        return sum(gs)

    def inject(self, gs: Sequence[int], k: int, v: E) -> E:
        offset = sum(gs[:k])
        return self.from_coords(sum(gs), [offset + i for i in self.coords(gs[k], v)])

    def cases(self, gs: Sequence[int], v: E) -> list[tuple[int, E]]:
        """Nonzero components of an element of a coproduct."""
        result: list[tuple[int, E]] = []
        coords = self.coords(sum(gs), v)
        offset = 0
        for k, g in enumerate(gs):
            part = [i - offset for i in coords if offset <= i < offset + g]
            if part:
                result.append((k, self.from_coords(g, part)))
            offset += g
        return result

    def bang(self, g: int) -> int:
        """Coproduct of the unit over the global points."""
        return self.count_points(g)

    # Cartesian structure and internal hom

    @abstractmethod
    def product(self, gs: Sequence[int]) -> int: ...

    @abstractmethod
    def tuple_(self, gs: Sequence[int], vs: Sequence[E]) -> E: ...

    @abstractmethod
    def project(self, gs: Sequence[int], v: E, k: int) -> E: ...

    @abstractmethod
    def hom(self, a: int, b: int) -> int: ...

    @abstractmethod
    def curry(self, a: int, b: int, images: Sequence[E]) -> E:
        """Name of the morphism sending generator i of `a` to `images[i]`."""

    @abstractmethod
    def uncurry(self, a: int, b: int, f: E) -> list[E]: ...

    # Morphisms

    def morphism(self, dom: int, cod: int, fn: Callable[[int], E]) -> Morphism[E]:
        return Morphism(dom, cod, tuple(fn(i) for i in range(dom)))

    def identity(self, g: int) -> Morphism[E]:
        return self.morphism(g, g, lambda i: self.gen(g, i))

    def apply(self, f: Morphism[E], v: E) -> E:
        return self.add(f.cod, [f.images[i] for i in self.coords(f.dom, v)])

    def compose(self, g: Morphism[E], f: Morphism[E]) -> Morphism[E]:
        """`g` after `f`."""
        if f.cod != g.dom:
            raise ModelError("composing morphisms with mismatched objects")
        return Morphism(f.dom, g.cod, tuple(self.apply(g, v) for v in f.images))

    def tensor_maps(self, f: Morphism[E], g: Morphism[E]) -> Morphism[E]:
        dom = self.tensor(f.dom, g.dom)
        cod = self.tensor(f.cod, g.cod)
        return self.morphism(dom, cod, lambda k: self.pair(f.cod, g.cod, f.images[k // g.dom], g.images[k % g.dom]))

    def same(self, f: Morphism[E], g: Morphism[E]) -> bool:
        return (
            f.dom == g.dom and f.cod == g.cod and all(self.equal(a, b) for a, b in zip(f.images, g.images, strict=True))
        )

    @abstractmethod
    def is_iso(self, f: Morphism[E]) -> bool: ...

    def all_morphisms(self, dom: int, cod: int) -> list[Morphism[E]]:
        """Every morphism between two small objects."""
        choices = self.points(cod)
        if len(choices) ** dom > POINT_LIMIT:
            raise ModelLimitError(f"too many morphisms to enumerate between objects with {dom} and {cod} generators")
        return [Morphism(dom, cod, images) for images in itertools.product(choices, repeat=dom)]
