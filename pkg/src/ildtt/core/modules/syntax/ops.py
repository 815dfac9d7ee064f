"""Binding operations: opening, closing, substitution, free variables."""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import fields, replace
from typing import cast

from ildtt.core.modules.syntax.models import Bound, IntVar, LinVar, Node, Sort, Term, Ty

type Visitor = Callable[[Term, int], Node]


def map_vars[N: Node](node: N, visit: Visitor, depth: int = 0) -> N:
    """Rebuild `node` replacing every variable leaf by `visit(leaf, depth)`.

    `depth` is the number of binders crossed so far; unchanged subtrees are shared.
    """
    if isinstance(node, IntVar | LinVar | Bound):
        return cast("N", visit(node, depth))
    changes: dict[str, object] = {}
    for f in fields(node):  # type: ignore[arg-type]
        value = getattr(node, f.name)
        inner = depth + len(node.binders.get(f.name, ()))
        if isinstance(value, Node):
            new = map_vars(value, visit, inner)
            if new is not value:
                changes[f.name] = new
        elif isinstance(value, tuple) and value:
            items = tuple(map_vars(v, visit, inner) for v in value)
            if any(a is not b for a, b in zip(items, value, strict=True)):
                changes[f.name] = items
    return replace(node, **changes) if changes else node  # type: ignore[type-var]


def children(node: Node) -> Iterator[tuple[str, Node]]:
    """Yield (field name, child) pairs in source order, flattening argument tuples."""
    for f in fields(node):  # type: ignore[arg-type]
        value = getattr(node, f.name)
        if isinstance(value, Node):
            yield f.name, value
        elif isinstance(value, tuple):
            for item in value:
                yield f.name, item


def open_many[N: Node](body: N, values: Sequence[Term]) -> N:
    """Instantiate the binders scoping over `body` (outermost first) with `values`."""
    n = len(values)

    def visit(leaf: Term, depth: int) -> Node:
        if isinstance(leaf, Bound) and depth <= leaf.index < depth + n:
            return values[n - 1 - (leaf.index - depth)]
        return leaf

    return map_vars(body, visit)


def close_many[N: Node](body: N, names: Sequence[tuple[str, Sort]]) -> N:
    """Abstract the named free variables of `body` into binders (outermost first)."""
    n = len(names)
    position = {(name, sort): k for k, (name, sort) in enumerate(names)}

    def visit(leaf: Term, depth: int) -> Node:
        if isinstance(leaf, IntVar):
            k = position.get((leaf.name, Sort.INT))
        elif isinstance(leaf, LinVar):
            k = position.get((leaf.name, Sort.LIN))
        else:
            return leaf
        return leaf if k is None else Bound(depth + n - 1 - k)

    return map_vars(body, visit)


def var(name: str, sort: Sort) -> Term:
    return IntVar(name) if sort is Sort.INT else LinVar(name)


def subst_int[N: Node](target: N, a: Term, x: str) -> N:
    """`target[a/x]` for an intuitionistic variable x, in a type or a term."""

    def visit(leaf: Term, _depth: int) -> Node:
        return a if isinstance(leaf, IntVar) and leaf.name == x else leaf

    return map_vars(target, visit)


def subst_lin(b: Term, a: Term, x: str) -> Term:
    """`b[a/x]` for a linear variable x."""

    def visit(leaf: Term, _depth: int) -> Node:
        return a if isinstance(leaf, LinVar) and leaf.name == x else leaf

    return map_vars(b, visit)


def free_vars(t: Node) -> tuple[frozenset[str], Counter[str]]:
    """Free intuitionistic names and the multiset of free linear names.

    Linear multiplicities add up across multiplicative positions and take the maximum
    across additive alternatives (pair components, case and if branches), which share
    one linear context.
    """
    ints: set[str] = set()
    return frozenset(ints), _collect(t, ints)


def _collect(node: Node, ints: set[str]) -> Counter[str]:
    if isinstance(node, IntVar):
        ints.add(node.name)
        return Counter()
    if isinstance(node, LinVar):
        return Counter({node.name: 1})
    total: Counter[str] = Counter()
    alternatives: Counter[str] | None = None
    for name, child in children(node):
        counts = _collect(child, ints)
        if name in node.additive:
            alternatives = counts if alternatives is None else alternatives | counts
        else:
            total += counts
    if alternatives is not None:
        total += alternatives
    return total


def occurrences(t: Node) -> Iterator[str]:
    """Free variable names in order of first occurrence, left to right."""
    return iter(dict.fromkeys(_occurrences(t)))


def _occurrences(node: Node) -> Iterator[str]:
    if isinstance(node, IntVar | LinVar):
        yield node.name
    for _, child in children(node):
        yield from _occurrences(child)


def all_names(t: Node) -> frozenset[str]:
    ints, lins = free_vars(t)
    return ints | frozenset(lins)


def alpha_eq(t: Node, u: Node) -> bool:
    """Alpha-equivalence; bound names are hints excluded from structural equality."""
    return t == u


def is_locally_closed(node: Node) -> bool:
    dangling = False

    def visit(leaf: Term, depth: int) -> Node:
        nonlocal dangling
        if isinstance(leaf, Bound) and leaf.index >= depth:
            dangling = True
        return leaf

    map_vars(node, visit)
    return not dangling


def fresh_name(hint: str, avoid: Iterable[str]) -> str:
    """`hint` itself when unused, otherwise `hint` followed by the smallest free counter."""
    taken = set(avoid)
    base = hint.rstrip("0123456789") or "x"
    if hint not in taken:
        return hint
    n = 1
    while f"{base}{n}" in taken:
        n += 1
    return f"{base}{n}"


def instantiate(ty: Ty, *args: Term) -> Ty:
    """Open a type closed over a telescope (or a Sigma/Pi codomain) at `args`."""
    return open_many(ty, args)


def structural_key(node: Node) -> str:
    """A total, hint-independent ordering key: two nodes get the same key iff they are `==`."""
    if isinstance(node, IntVar | LinVar):
        return f"{type(node).__name__}:{node.name}"
    if isinstance(node, Bound):
        return f"#{node.index}"
    parts: list[str] = []
    for f in fields(node):  # type: ignore[arg-type]
        if not f.compare:
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node):
            parts.append(structural_key(value))
        elif isinstance(value, tuple):
            parts.append("[" + ",".join(structural_key(v) for v in value) + "]")
        elif value is None:
            parts.append("-")
        else:
            parts.append(repr(value))
    return f"{type(node).__name__}(" + ",".join(parts) + ")"
