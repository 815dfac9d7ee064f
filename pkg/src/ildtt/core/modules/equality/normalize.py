"""Rewriting to canonical form.

Terms are normalized bottom-up on opened syntax: every binder is instantiated with a fresh
name whose type is recorded in the context, so the motive of a hoisted eliminator can be
recomputed with `type_of`. At each node, after the children are normal:

1. C-rules (beta for every connective) fire at the root and the result is renormalized;
2. a let, case, if, idelim or abort sitting in an eliminator or multiplicative position
   is hoisted over its parent (aborts absorb the parent instead);
3. with eta on, lambda, Pi-lambda and with-pair eta-redexes are contracted;
4. a chain of pattern lets is put in canonical order.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import fields, replace

from ildtt.core.modules.checker.typeof import type_of
from ildtt.core.modules.equality.models import EqualityMode, Rewrite
from ildtt.core.modules.syntax.context import DualContext, Signature
from ildtt.core.modules.syntax.models import (
    Abort,
    Ann,
    App,
    Bang,
    BangIntro,
    Case,
    Ff,
    Fst,
    IdElim,
    If,
    Inl,
    Inr,
    IntVar,
    Lam,
    LetBang,
    LetSigma,
    LetTensor,
    LetUnit,
    LinVar,
    Node,
    Pair,
    PiApp,
    PiLam,
    Plus,
    Refl,
    Sigma,
    SigmaIntro,
    Snd,
    Sort,
    Star,
    Tensor,
    TensorPair,
    Term,
    Tt,
    Two,
    Ty,
)
from ildtt.core.modules.syntax.ops import (
    all_names,
    close_many,
    fresh_name,
    instantiate,
    map_vars,
    open_many,
    structural_key,
    var,
)
from ildtt.errors import NormalizationCeilingError, ValidationError

logger = logging.getLogger(__name__)

# Fields of a parent from which an eliminator's binding continuation may be pulled out.
HOIST_POSITIONS: dict[type[Term], tuple[str, ...]] = {
    LetUnit: ("scrut",),
    LetTensor: ("scrut",),
    LetBang: ("scrut",),
    LetSigma: ("scrut",),
    Case: ("scrut",),
    Abort: ("scrut",),
    IdElim: ("proof",),
    App: ("fn", "arg"),
    PiApp: ("fn",),
    Fst: ("pair",),
    Snd: ("pair",),
    TensorPair: ("left", "right"),
    SigmaIntro: ("body",),
    Inl: ("term",),
    Inr: ("term",),
}

HOISTABLE = (LetUnit, LetTensor, LetBang, LetSigma, IdElim, Case, If, Abort)
CHAIN = (LetUnit, LetTensor, LetBang, LetSigma)
type Let = LetUnit | LetTensor | LetBang | LetSigma
CONTINUATIONS: dict[type[Term], tuple[str, ...]] = {
    LetUnit: ("body",),
    LetTensor: ("body",),
    LetBang: ("body",),
    LetSigma: ("body",),
    Case: ("left", "right"),
}

type Scope = tuple[DualContext, list[Term], list[tuple[str, Sort]]]


def head(t: Term) -> Term:
    """Head of an elimination spine."""
    while True:
        match t:
            case App(fn=inner) | PiApp(fn=inner) | Fst(pair=inner) | Snd(pair=inner):
                t = inner
            case _:
                return t


def _shape[T: Ty](ty: Ty, former: type[T]) -> T:
    if not isinstance(ty, former):
        raise ValidationError(f"ill-typed term reached the equality engine: expected a {former.__name__} type")
    return ty


class Normalizer:
    """Single-use rewriting engine; counts steps and records the rewrites applied."""

    def __init__(self, signature: Signature, mode: EqualityMode, ceiling: int = 200_000) -> None:
        self.sig = signature
        self.mode = mode
        self.ceiling = ceiling
        self.steps = 0
        self.trace: list[Rewrite] = []

    def tick(self, rewrite: Rewrite) -> None:
        self.steps += 1
        self.trace.append(rewrite)
        if self.steps > self.ceiling:
            raise NormalizationCeilingError(f"normalization exceeded {self.ceiling} steps")

    def type_of(self, ctx: DualContext, t: Term) -> Ty:
        return type_of(self.sig, ctx, t)

    def fresh(self, ctx: DualContext, hint: str, *avoid: str) -> str:
        return fresh_name(hint, ctx.names() | set(avoid))

    def enter(self, ctx: DualContext, t: Term, field: str) -> Scope:
        """Open the binders of `t` scoping over `field`: extended context, values, names to close."""
        specs = t.binders.get(field, ())
        names: list[str] = []
        for hint_field, _ in specs:
            names.append(self.fresh(ctx, getattr(t, hint_field), *names))
        match t:
            case Lam(ty=dom):
                inner = ctx.with_lin(names[0], dom)
            case PiLam(ty=dom):
                inner = ctx.with_int(names[0], dom)
            case LetTensor(scrut=scrut):
                pair = _shape(self.type_of(ctx, scrut), Tensor)
                inner = ctx.with_lin(names[0], pair.left).with_lin(names[1], pair.right)
            case LetBang(scrut=scrut):
                inner = ctx.with_int(names[0], _shape(self.type_of(ctx, scrut), Bang).ty)
            case LetSigma(scrut=scrut):
                sigma = _shape(self.type_of(ctx, scrut), Sigma)
                inner = ctx.with_int(names[0], sigma.dom).with_lin(names[1], instantiate(sigma.cod, IntVar(names[0])))
            case Case(scrut=scrut):
                plus = _shape(self.type_of(ctx, scrut), Plus)
                inner = ctx.with_lin(names[0], plus.left if field == "left" else plus.right)
            case IdElim(left=left) if field == "branch":
                inner = ctx.with_int(names[0], self.type_of(ctx, left))
            case _:
                inner = ctx
        return inner, [var(n, sort) for n, (_, sort) in zip(names, specs, strict=True)], [
            (n, sort) for n, (_, sort) in zip(names, specs, strict=True)
        ]

    def normalize(self, ctx: DualContext, t: Term) -> Term:
        t = self._descend(ctx, t)
        if (reduced := self._contract(t)) is not None:
            return self.normalize(ctx, reduced)
        if (hoisted := self._hoist(ctx, t)) is not None:
            return self.normalize(ctx, hoisted)
        if self.mode.eta_negative and (contracted := self._eta(ctx, t)) is not None:
            return contracted
        if isinstance(t, CHAIN):
            return self._reorder(ctx, t)
        return t

    def _descend(self, ctx: DualContext, t: Term) -> Term:
        changes: dict[str, object] = {}
        for f in fields(t):  # type: ignore[arg-type]
            value = getattr(t, f.name)
            if isinstance(value, Term):
                new: object = self._under(ctx, t, f.name, value)
            elif isinstance(value, tuple) and value and isinstance(value[0], Term):
                new = tuple(self.normalize(ctx, v) for v in value)
            else:
                continue
            if new != value:
                changes[f.name] = new
        return replace(t, **changes) if changes else t  # type: ignore[type-var]

    def _under(self, ctx: DualContext, t: Term, field: str, body: Term) -> Term:
        if field not in t.binders:
            return self.normalize(ctx, body)
        inner, values, names = self.enter(ctx, t, field)
        return close_many(self.normalize(inner, open_many(body, values)), names)

    def _contract(self, t: Term) -> Term | None:
        rewrite: Rewrite
        match t:
            case Ann(term=inner):
                return inner
            case LetUnit(scrut=Star(), body=body):
                rewrite, result = Rewrite.UNIT_C, body
            case LetTensor(scrut=TensorPair(left=a, right=b), body=body):
                rewrite, result = Rewrite.TENSOR_C, open_many(body, [a, b])
            case App(fn=Lam(body=body), arg=arg):
                rewrite, result = Rewrite.LOLLI_C, open_many(body, [arg])
            case Fst(pair=Pair(left=left)):
                rewrite, result = Rewrite.WITH_C1, left
            case Snd(pair=Pair(right=right)):
                rewrite, result = Rewrite.WITH_C2, right
            case Case(scrut=Inl(term=inner), left=left):
                rewrite, result = Rewrite.PLUS_C1, open_many(left, [inner])
            case Case(scrut=Inr(term=inner), right=right):
                rewrite, result = Rewrite.PLUS_C2, open_many(right, [inner])
            case LetBang(scrut=BangIntro(term=inner), body=body):
                rewrite, result = Rewrite.BANG_C, open_many(body, [inner])
            case LetSigma(scrut=SigmaIntro(witness=witness, body=inner), body=body):
                rewrite, result = Rewrite.SIGMA_C, open_many(body, [witness, inner])
            case PiApp(fn=PiLam(body=body), arg=arg):
                rewrite, result = Rewrite.PI_C, open_many(body, [arg])
            case IdElim(proof=Refl(term=inner), branch=branch):
                rewrite, result = Rewrite.ID_C, open_many(branch, [inner])
            case If(scrut=Tt(), then=then):
                rewrite, result = Rewrite.TWO_C1, then
            case If(scrut=Ff(), orelse=orelse):
                rewrite, result = Rewrite.TWO_C2, orelse
            case _:
                return None
        self.tick(rewrite)
        return result

    # Commuting conversions

    def _hoist(self, ctx: DualContext, t: Term) -> Term | None:
        if isinstance(t, Lam | PiLam):
            return self._hoist_from_binder(ctx, t)
        for f in HOIST_POSITIONS.get(type(t), ()):
            child = getattr(t, f)
            if isinstance(child, HOISTABLE):
                return self._lift(ctx, t, child, _plug_into(t, f))
        return None

    def _hoist_from_binder(self, ctx: DualContext, t: Lam | PiLam) -> Term | None:
        sort = Sort.LIN if isinstance(t, Lam) else Sort.INT
        name = self.fresh(ctx, t.x)
        body = open_many(t.body, [var(name, sort)])
        if not isinstance(body, HOISTABLE):
            return None
        if any(name in all_names(part) for part in _fixed_parts(body)):
            return None

        def plug(c: Term) -> Term:
            return replace(t, body=close_many(c, [(name, sort)]))

        return self._lift(ctx, t, body, plug)

    def _lift(self, ctx: DualContext, t: Term, h: Term, plug: Callable[[Term], Term]) -> Term:
        """`t` is `plug(h)`; pull `h`'s eliminator out over the context `plug`."""
        match h:
            case Abort(scrut=scrut):
                self.tick(Rewrite.ABSORB)
                return Abort(self.type_of(ctx, t), scrut)
            case If(z=z, motive=motive, then=then, orelse=orelse):
                self.tick(Rewrite.COMMUTE)
                zi = self.fresh(ctx, z)
                hv = self.fresh(ctx, "h", zi)
                inner = ctx.with_int(zi, Two()).with_lin(hv, instantiate(motive, IntVar(zi)))
                new_motive = close_many(self.type_of(inner, plug(LinVar(hv))), [(zi, Sort.INT)])
                return replace(h, motive=new_motive, then=plug(then), orelse=plug(orelse))
            case IdElim(x=x, x2=x2, motive=motive, left=left, branch=branch):
                self.tick(Rewrite.COMMUTE)
                carrier = self.type_of(ctx, left)
                xi = self.fresh(ctx, x)
                xj = self.fresh(ctx, x2, xi)
                hv = self.fresh(ctx, "h", xi, xj)
                inner = (
                    ctx.with_int(xi, carrier)
                    .with_int(xj, carrier)
                    .with_lin(hv, instantiate(motive, IntVar(xi), IntVar(xj)))
                )
                new_motive = close_many(self.type_of(inner, plug(LinVar(hv))), [(xi, Sort.INT), (xj, Sort.INT)])
                _, values, names = self.enter(ctx, h, "branch")
                return replace(h, motive=new_motive, branch=close_many(plug(open_many(branch, values)), names))
            case _:
                self.tick(Rewrite.COMMUTE)
                changes: dict[str, object] = {"motive": self.type_of(ctx, t)}
                for f in CONTINUATIONS[type(h)]:
                    _, values, names = self.enter(ctx, h, f)
                    changes[f] = close_many(plug(open_many(getattr(h, f), values)), names)
                return replace(h, **changes)

    # Eta

    def _eta(self, ctx: DualContext, t: Term) -> Term | None:
        match t:
            case Lam(x=x, body=body):
                name = self.fresh(ctx, x)
                match open_many(body, [LinVar(name)]):
                    case App(fn=fn, arg=LinVar(name=arg)) if arg == name and name not in all_names(fn):
                        self.tick(Rewrite.LOLLI_ETA)
                        return fn
            case PiLam(x=x, body=body):
                name = self.fresh(ctx, x)
                match open_many(body, [IntVar(name)]):
                    case PiApp(fn=fn, arg=IntVar(name=arg)) if arg == name and name not in all_names(fn):
                        self.tick(Rewrite.PI_ETA)
                        return fn
            case Pair(left=Fst(pair=p), right=Snd(pair=q)) if p == q:
                self.tick(Rewrite.WITH_ETA)
                return p
        return None

    # Let chains

    def _reorder(self, ctx: DualContext, t: Term) -> Term:
        entries: list[tuple[Let, list[tuple[str, Sort]]]] = []
        node, scope = t, ctx
        while isinstance(node, CHAIN):
            scope, values, names = self.enter(scope, node, "body")
            entries.append((node, names))
            node = open_many(node.body, values)
        if len(entries) < 2:
            return t
        tail = node
        chain_ty = self.type_of(ctx, t)
        bound_by = {name: i for i, (_, names) in enumerate(entries) for name, _ in names}
        deps = [{bound_by[n] for n in all_names(e.scrut) if n in bound_by} for e, _ in entries]

        placed: dict[int, int] = {}
        order: list[int] = []
        remaining = list(range(len(entries)))
        while remaining:
            ready = [i for i in remaining if deps[i] <= placed.keys()]
            best = min(ready, key=lambda i: (self._order_key(entries[i][0].scrut, entries, bound_by, placed), i))
            placed[best] = len(order)
            order.append(best)
            remaining.remove(best)

        result = tail
        for i in reversed(order):
            entry, names = entries[i]
            result = replace(entry, motive=chain_ty, body=close_many(result, names))
        if order != sorted(order):
            self.tick(Rewrite.REORDER)
        return result

    def _order_key(
        self,
        scrut: Term,
        entries: list[tuple[Let, list[tuple[str, Sort]]]],
        bound_by: dict[str, int],
        placed: dict[int, int],
    ) -> tuple[int, int, str, str]:
        """Sort key of a ready let in the canonical chain order.

        Lets whose scrutinee is headed by a free variable come first, ordered by that
        variable's name. Then lets headed by a variable bound earlier in the chain, ordered
        by the position the binding let was given. Lets with any other head come last.
        Ties are broken by the scrutinee's fingerprint, its structural key with chain-bound
        names replaced by their positions, so the key never depends on binder hints.
        """
        local = {
            name: f"%{placed[i]}.{k}"
            for i, (_, names) in enumerate(entries)
            if i in placed
            for k, (name, _) in enumerate(names)
        }

        def visit(leaf: Term, _depth: int) -> Node:
            if isinstance(leaf, IntVar | LinVar) and leaf.name in local:
                return type(leaf)(local[leaf.name])
            return leaf

        fingerprint = structural_key(map_vars(scrut, visit))
        match head(scrut):
            case IntVar(name=name) | LinVar(name=name) if name in bound_by:
                return 1, placed[bound_by[name]], "", fingerprint
            case IntVar(name=name) | LinVar(name=name):
                return 0, 0, name, fingerprint
            case _:
                return 2, 0, "", fingerprint


def _fixed_parts(h: Term) -> tuple[Node, ...]:
    """Parts of a hoisted eliminator that stay outside the binder it is pulled over."""
    match h:
        case If(motive=motive, scrut=scrut):
            return motive, scrut
        case IdElim(motive=motive, left=left, right=right, proof=proof):
            return motive, left, right, proof
        case LetUnit(scrut=scrut) | LetTensor(scrut=scrut) | LetBang(scrut=scrut) | LetSigma(scrut=scrut):
            return (scrut,)
        case Case(scrut=scrut) | Abort(scrut=scrut):
            return (scrut,)
        case _:
            return ()


def _plug_into(t: Term, field: str) -> Callable[[Term], Term]:
    def plug(c: Term) -> Term:
        return replace(t, **{field: c})  # type: ignore[type-var]

    return plug
