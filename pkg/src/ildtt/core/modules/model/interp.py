"""Interpretation in families of backend objects.

A context denotes the finite set of its global points, enumerated variable by variable. A
type denotes, at each point, an object of the backend; a term with linear context Ξ
denotes, at each point, a morphism out of the tensor of Ξ. Terms are evaluated on
elements with every linear variable bound to a generator, which determines the morphism
because every construct is linear in its linear variables.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from ildtt.core.modules.checker.models import Derivation
from ildtt.core.modules.checker.typeof import type_of
from ildtt.core.modules.model.backends import POINT_LIMIT, Morphism, SmcBackend
from ildtt.core.modules.model.models import DEFAULT_SIZES, BackendName, ModelConfig
from ildtt.core.modules.syntax.context import DualContext, Signature
from ildtt.core.modules.syntax.models import (
    Abort,
    Ann,
    App,
    Bang,
    BangIntro,
    BaseApp,
    Case,
    Const,
    Ff,
    Fst,
    Id,
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
    Lolli,
    Pair,
    Pi,
    PiApp,
    PiLam,
    Plus,
    Refl,
    Sigma,
    SigmaIntro,
    Snd,
    Star,
    Tensor,
    TensorPair,
    Term,
    Top,
    TopUnit,
    Tt,
    Two,
    Ty,
    Unit,
    With,
    Zero,
)
from ildtt.core.modules.syntax.ops import fresh_name, instantiate, open_many
from ildtt.errors import ModelError, ModelLimitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Env[E]:
    """A point of a context, plus the elements bound to linear variables."""

    ctx: DualContext = DualContext()
    ints: dict[str, E] = field(default_factory=dict)
    lins: dict[str, E] = field(default_factory=dict)
    label: tuple[str, ...] = ()

    def bind_int(self, hint: str, ty: Ty, value: E) -> tuple[Env[E], IntVar]:
        name = fresh_name(hint, self.ctx.names())
        return Env(self.ctx.with_int(name, ty), {**self.ints, name: value}, self.lins, self.label), IntVar(name)

    def bind_lin(self, hint: str, ty: Ty, value: E) -> tuple[Env[E], LinVar]:
        name = fresh_name(hint, self.ctx.names())
        return Env(self.ctx.with_lin(name, ty), self.ints, {**self.lins, name: value}, self.label), LinVar(name)

    def point(self) -> str:
        return ", ".join(self.label) or "()"


class Interpreter[E]:
    """Denotations of one signature in one backend under one model configuration."""

    def __init__(
        self,
        signature: Signature,
        backend: SmcBackend[E],
        model: ModelConfig | None = None,
        *,
        defaults: bool = False,
        max_dim: int = 3,
        max_bang_depth: int = 2,
    ) -> None:
        self.sig = signature
        self.backend = backend
        self.model = model or ModelConfig()
        self.defaults = defaults
        self.max_dim = max_dim
        self.max_bang_depth = max_bang_depth

    # Contexts and types

    def interp_ctx(self, ctx: DualContext) -> list[Env[E]]:
        """Every global point of the intuitionistic region, in lexicographic order."""
        envs: list[Env[E]] = [Env()]
        for name, ty in ctx.int_region:
            extended: list[Env[E]] = []
            for env in envs:
                g = self.obj(env, ty)
                for p in self.backend.points(g):
                    label = (*env.label, f"{name}={self.backend.show(g, p)}")
                    extended.append(Env(env.ctx.with_int(name, ty), {**env.ints, name: p}, env.lins, label))
            if len(extended) > POINT_LIMIT:
                raise ModelLimitError(f"context has more than {POINT_LIMIT} points")
            envs = extended
        logger.debug("enumerated %d points", len(envs))
        return envs

    def interp_type(self, ctx: DualContext, ty: Ty) -> list[tuple[Env[E], int]]:
        """The object `ty` denotes at each point of `ctx`."""
        return [(env, self.obj(env, ty)) for env in self.interp_ctx(ctx)]

    def obj(self, env: Env[E], ty: Ty, depth: int = 0) -> int:
        b = self.backend
        match ty:
            case Unit():
                return b.unit()
            case Top() | Zero():
                return b.initial()
            case Two():
                return b.coproduct([b.unit(), b.unit()])
            case Tensor(left=left, right=right):
                return b.tensor(self.obj(env, left, depth), self.obj(env, right, depth))
            case Lolli(dom=dom, cod=cod):
                return b.hom(self.obj(env, dom, depth), self.obj(env, cod, depth))
            case With(left=left, right=right):
                return b.product([self.obj(env, left, depth), self.obj(env, right, depth)])
            case Plus(left=left, right=right):
                return b.coproduct([self.obj(env, left, depth), self.obj(env, right, depth)])
            case Bang(ty=inner):
                if depth >= self.max_bang_depth:
                    raise ModelLimitError(f"bang nested deeper than {self.max_bang_depth}")
                return b.bang(self.obj(env, inner, depth + 1))
            case Sigma(x=x, dom=dom, cod=cod):
                return b.coproduct(self._fibres(env, x, dom, cod, depth))
            case Pi(x=x, dom=dom, cod=cod):
                return b.product(self._fibres(env, x, dom, cod, depth))
            case Id(left=left, right=right):
                same = b.equal(self.eval(env, left), self.eval(env, right))
                logger.debug("identity type at %s: endpoints %s", env.point(), "agree" if same else "differ")
                return b.unit() if same else b.initial()
            case BaseApp(name=name, args=args):
                return self._base(env, name, args)
        raise ModelError(f"no interpretation for type {ty!r}")

    def _fibres(self, env: Env[E], x: str, dom: Ty, cod: Ty, depth: int) -> list[int]:
        g = self.obj(env, dom, depth)
        fibres: list[int] = []
        for p in self.backend.points(g):
            inner, var = env.bind_int(x, dom, p)
            fibres.append(self.obj(inner, instantiate(cod, var), depth))
        return fibres

    def _codes(self, env: Env[E], params: tuple[tuple[str, Ty], ...], args: tuple[Term, ...]) -> tuple[str, ...]:
        codes: list[str] = []
        for k, ((_, param_ty), arg) in enumerate(zip(params, args, strict=True)):
            g = self.obj(env, instantiate(param_ty, *args[:k]))
            codes.append(self.backend.show(g, self.eval(env, arg)))
        return tuple(codes)

    def _base(self, env: Env[E], name: str, args: tuple[Term, ...]) -> int:
        decl = self.sig.type_decl(name)
        codes = self._codes(env, decl.params, args)
        text = self.model.type_size(name, codes)
        if text is None:
            if not self.defaults:
                raise ModelError(f"model does not interpret base type '{name}' at ({', '.join(codes)})")
            text = str(DEFAULT_SIZES[BackendName(self.backend.name)])
        if not text.isdigit():
            raise ModelError(f"size of base type '{name}' must be a number, not '{text}'")
        size = int(text)
        if self.backend.name == BackendName.GF2 and size > self.max_dim:
            raise ModelLimitError(f"dimension {size} of base type '{name}' exceeds the cap {self.max_dim}")
        return self.backend.gens_of_size(size)

    # Terms

    def eval(self, env: Env[E], t: Term) -> E:
        """Element of the object of `t`'s type at `env`."""
        b = self.backend
        match t:
            case IntVar(name=name):
                return env.ints[name]
            case LinVar(name=name):
                return env.lins[name]
            case Const(name=name, args=args):
                return self._const(env, name, args)
            case Ann(term=inner):
                return self.eval(env, inner)
            case Star() | Refl():
                return b.unit_point()
            case TopUnit():
                return b.zero(b.initial())
            case Tt():
                return b.inject([1, 1], 0, b.unit_point())
            case Ff():
                return b.inject([1, 1], 1, b.unit_point())
            case LetUnit(motive=motive, scrut=scrut, body=body):
                return b.scale(self.obj(env, motive), self.eval(env, scrut), self.eval(env, body))
            case TensorPair(left=left, right=right):
                return b.pair(self._obj_of(env, left), self._obj_of(env, right), self.eval(env, left), self.eval(env, right))
            case LetTensor():
                return self._let_tensor(env, t)
            case Lam(x=x, ty=dom, body=body):
                lolli = type_of(self.sig, env.ctx, t)
                if not isinstance(lolli, Lolli):
                    raise ModelError("abstraction without a function type")
                a, c = self.obj(env, dom), self.obj(env, lolli.cod)
                images = []
                for i in range(a):
                    inner, var = env.bind_lin(x, dom, b.gen(a, i))
                    images.append(self.eval(inner, open_many(body, [var])))
                return b.curry(a, c, images)
            case App(fn=fn, arg=arg):
                match type_of(self.sig, env.ctx, fn):
                    case Lolli(dom=dom, cod=cod):
                        a, c = self.obj(env, dom), self.obj(env, cod)
                        images = b.uncurry(a, c, self.eval(env, fn))
                        return b.add(c, [images[i] for i in b.coords(a, self.eval(env, arg))])
                raise ModelError("application of a term without a function type")
            case Pair(left=left, right=right):
                gs = [self._obj_of(env, left), self._obj_of(env, right)]
                return b.tuple_(gs, [self.eval(env, left), self.eval(env, right)])
            case Fst(pair=pair) | Snd(pair=pair):
                match type_of(self.sig, env.ctx, pair):
                    case With(left=left_ty, right=right_ty):
                        gs = [self.obj(env, left_ty), self.obj(env, right_ty)]
                        return b.project(gs, self.eval(env, pair), 0 if isinstance(t, Fst) else 1)
                raise ModelError("projection from a term without a with type")
            case Abort(motive=motive):
                return b.zero(self.obj(env, motive))
            case Inl(other=other, term=inner):
                return b.inject([self._obj_of(env, inner), self.obj(env, other)], 0, self.eval(env, inner))
            case Inr(other=other, term=inner):
                return b.inject([self.obj(env, other), self._obj_of(env, inner)], 1, self.eval(env, inner))
            case Case():
                return self._case(env, t)
            case BangIntro(term=inner):
                g = self._obj_of(env, inner)
                return b.gen(b.bang(g), b.point_index(g, self.eval(env, inner)))
            case LetBang():
                return self._let_bang(env, t)
            case SigmaIntro(witness=witness, body=body, ann=Sigma(x=x, dom=dom, cod=cod)):
                gs = self._fibres(env, x, dom, cod, 0)
                k = b.point_index(self.obj(env, dom), self.eval(env, witness))
                return b.inject(gs, k, self.eval(env, body))
            case LetSigma():
                return self._let_sigma(env, t)
            case PiLam(x=x, ty=dom, body=body):
                values: list[E] = []
                gs: list[int] = []
                for p in b.points(self.obj(env, dom)):
                    inner, var = env.bind_int(x, dom, p)
                    opened = open_many(body, [var])
                    gs.append(self._obj_of(inner, opened))
                    values.append(self.eval(inner, opened))
                return b.tuple_(gs, values)
            case PiApp(fn=fn, arg=arg):
                match type_of(self.sig, env.ctx, fn):
                    case Pi(x=x, dom=dom, cod=cod):
                        gs = self._fibres(env, x, dom, cod, 0)
                        k = b.point_index(self.obj(env, dom), self.eval(env, arg))
                        return b.project(gs, self.eval(env, fn), k)
                raise ModelError("dependent application of a term without a pi type")
            case IdElim():
                return self._id_elim(env, t)
            case If():
                return self._if(env, t)
        raise ModelError(f"no interpretation for term {t!r}")

    def _obj_of(self, env: Env[E], t: Term) -> int:
        return self.obj(env, type_of(self.sig, env.ctx, t))

    def _const(self, env: Env[E], name: str, args: tuple[Term, ...]) -> E:
        decl = self.sig.const_decl(name)
        g = self.obj(env, decl.type_at(args))
        codes = self._codes(env, decl.params, args)
        text = self.model.const_value(name, codes)
        if text is None:
            if not self.defaults:
                raise ModelError(f"model does not interpret constant '{name}' at ({', '.join(codes)})")
            return self.backend.points(g)[-1]
        return self.backend.parse_point(g, text)

    def _let_tensor(self, env: Env[E], t: LetTensor) -> E:
        match type_of(self.sig, env.ctx, t.scrut):
            case Tensor(left=left, right=right):
                pass
            case _:
                raise ModelError("splitting a term without a tensor type")
        b = self.backend
        a, c = self.obj(env, left), self.obj(env, right)
        parts: list[E] = []
        for x, y in b.split(a, c, self.eval(env, t.scrut)):
            inner, xv = env.bind_lin(t.x, left, x)
            inner, yv = inner.bind_lin(t.y, right, y)
            parts.append(self.eval(inner, open_many(t.body, [xv, yv])))
        return b.add(self.obj(env, t.motive), parts)

    def _case(self, env: Env[E], t: Case) -> E:
        match type_of(self.sig, env.ctx, t.scrut):
            case Plus(left=left, right=right):
                pass
            case _:
                raise ModelError("case analysis on a term without a plus type")
        b = self.backend
        tys = (left, right)
        gs = [self.obj(env, left), self.obj(env, right)]
        parts: list[E] = []
        for k, v in b.cases(gs, self.eval(env, t.scrut)):
            hint, body = (t.x, t.left) if k == 0 else (t.y, t.right)
            inner, var = env.bind_lin(hint, tys[k], v)
            parts.append(self.eval(inner, open_many(body, [var])))
        return b.add(self.obj(env, t.motive), parts)

    def _let_bang(self, env: Env[E], t: LetBang) -> E:
        match type_of(self.sig, env.ctx, t.scrut):
            case Bang(ty=inner_ty):
                pass
            case _:
                raise ModelError("unpacking a term without a bang type")
        b = self.backend
        g = self.obj(env, inner_ty)
        points = b.points(g)
        parts: list[E] = []
        for k in b.coords(b.bang(g), self.eval(env, t.scrut)):
            inner, var = env.bind_int(t.x, inner_ty, points[k])
            parts.append(self.eval(inner, open_many(t.body, [var])))
        return b.add(self.obj(env, t.motive), parts)

    def _let_sigma(self, env: Env[E], t: LetSigma) -> E:
        match type_of(self.sig, env.ctx, t.scrut):
            case Sigma(x=x, dom=dom, cod=cod):
                pass
            case _:
                raise ModelError("unpacking a term without a sigma type")
        b = self.backend
        points = b.points(self.obj(env, dom))
        gs = self._fibres(env, x, dom, cod, 0)
        parts: list[E] = []
        for k, v in b.cases(gs, self.eval(env, t.scrut)):
            inner, xv = env.bind_int(t.x, dom, points[k])
            inner, yv = inner.bind_lin(t.y, instantiate(cod, xv), v)
            parts.append(self.eval(inner, open_many(t.body, [xv, yv])))
        return b.add(self.obj(env, t.motive), parts)

    def _id_elim(self, env: Env[E], t: IdElim) -> E:
        b = self.backend
        a = type_of(self.sig, env.ctx, t.left)
        g = self.obj(env, instantiate(t.motive, t.left, t.right))
        left = self.eval(env, t.left)
        if not b.equal(left, self.eval(env, t.right)):
            return b.zero(g)
        inner, var = env.bind_int(t.z, a, left)
        return b.scale(g, self.eval(env, t.proof), self.eval(inner, open_many(t.branch, [var])))

    def _if(self, env: Env[E], t: If) -> E:
        """Sum of the branches selected by the scrutinee's coordinates.

        At a point of 2 other than tt and ff (the basepoint, or tt + ff over GF(2)) the
        branches only add up when the motive gives them the same object.
        """
        b = self.backend
        g = self.obj(env, instantiate(t.motive, t.scrut))
        parts: list[E] = []
        for k in b.coords(2, self.eval(env, t.scrut)):
            branch, value = (t.then, Tt()) if k == 0 else (t.orelse, Ff())
            if self.obj(env, instantiate(t.motive, value)) != g:
                raise ModelError(f"branches of a dependent if do not share an object at {env.point()}")
            parts.append(self.eval(env, branch))
        return b.add(g, parts)

    # Morphism families

    def interp_term(self, d: Derivation) -> list[tuple[Env[E], Morphism[E]]]:
        """At each point, the morphism from the tensor of the linear context."""
        b = self.backend
        family: list[tuple[Env[E], Morphism[E]]] = []
        for env in self.interp_ctx(d.ctx):
            ctx = env.ctx
            gs: list[int] = []
            for entry in d.ctx.lin_region:
                gs.append(self.obj(env, entry.ty))
                ctx = ctx.with_lin(entry.name, entry.ty)
            base = Env(ctx, env.ints, {}, env.label)
            cod = self.obj(env, d.ty)
            images: list[E] = []
            for digits in itertools.product(*(range(g) for g in gs)):
                lins = {e.name: b.gen(g, i) for e, g, i in zip(d.ctx.lin_region, gs, digits, strict=True)}
                images.append(self.eval(Env(ctx, env.ints, lins, env.label), d.term))
            family.append((base, Morphism(math.prod(gs), cod, tuple(images))))
        return family

    def denot_equal(self, t: Derivation, u: Derivation) -> bool:
        left, right = self.interp_term(t), self.interp_term(u)
        return all(self.backend.same(f, g) for (_, f), (_, g) in zip(left, right, strict=True))

    def check_iso_denot(self, fwd: Derivation, bwd: Derivation) -> bool:
        """Both composites of the witnesses are identities at every point."""
        if len(fwd.ctx.lin_region) != 1 or len(bwd.ctx.lin_region) != 1:
            raise ModelError("isomorphism witnesses must each take exactly one linear argument")
        b = self.backend
        for (_, f), (_, g) in zip(self.interp_term(fwd), self.interp_term(bwd), strict=True):
            if not (b.same(b.compose(g, f), b.identity(f.dom)) and b.same(b.compose(f, g), b.identity(g.dom))):
                return False
        return True


# Model-level constructions checked on small instances


def frobenius_map[E](backend: SmcBackend[E], f: Sequence[int], xi: Sequence[int], fam: Sequence[int]) -> list[Morphism[E]]:
    """Canonical maps Σ_f(Ξ'{f} ⊗ B) → Ξ' ⊗ Σ_f B, one per point of the base.

    `f` maps points of S to points of S'; `xi` is a family over S' and `fam` one over S.
    """
    maps: list[Morphism[E]] = []
    for target, g_xi in enumerate(xi):
        gs = [fam[s] for s, image in enumerate(f) if image == target]
        total = backend.coproduct(gs)
        images: list[E] = []
        for k, g in enumerate(gs):
            for i in range(g_xi):
                for j in range(g):
                    images.append(backend.pair(g_xi, total, backend.gen(g_xi, i), backend.inject(gs, k, backend.gen(g, j))))
        dom = backend.coproduct([backend.tensor(g_xi, g) for g in gs])
        maps.append(Morphism(dom, backend.tensor(g_xi, total), tuple(images)))
    return maps


def count_sections[E](backend: SmcBackend[E], f: Sequence[int], fam: Sequence[int]) -> tuple[int, int]:
    """Maps over S' from `f` into the comprehension of `fam`: by enumeration, and by the product formula."""
    total = [(s, k) for s, g in enumerate(fam) for k in range(backend.count_points(g))]
    if len(total) ** len(f) > POINT_LIMIT:
        raise ModelLimitError("too many maps to enumerate")
    brute = sum(
        1 for choice in itertools.product(total, repeat=len(f)) if all(s == f[i] for i, (s, _) in enumerate(choice))
    )
    formula = math.prod(backend.count_points(fam[image]) for image in f)
    return brute, formula


def seely_witnesses[E](backend: SmcBackend[E], a: int, c: int) -> tuple[Morphism[E], Morphism[E]]:
    """The maps !(A & C) → !A ⊗ !C and back, sending a point to the pair of its projections."""
    pa, pc = backend.points(a), backend.points(c)
    ba, bc = backend.bang(a), backend.bang(c)
    product = backend.product([a, c])
    bp = backend.bang(product)
    fwd: list[E] = []
    for p in backend.points(product):
        i = backend.point_index(a, backend.project([a, c], p, 0))
        j = backend.point_index(c, backend.project([a, c], p, 1))
        fwd.append(backend.pair(ba, bc, backend.gen(ba, i), backend.gen(bc, j)))
    bwd = [backend.gen(bp, backend.point_index(product, backend.tuple_([a, c], [x, y]))) for x in pa for y in pc]
    return Morphism(bp, backend.tensor(ba, bc), tuple(fwd)), Morphism(backend.tensor(ba, bc), bp, tuple(bwd))


def seely_top[E](backend: SmcBackend[E]) -> tuple[Morphism[E], Morphism[E]]:
    """!⊤ ≅ I: the single point of ⊤ gives !⊤ exactly one generator."""
    bang_top = backend.bang(backend.initial())
    unit = backend.unit()
    return (
        backend.morphism(bang_top, unit, lambda _: backend.unit_point()),
        backend.morphism(unit, bang_top, lambda _: backend.gen(bang_top, 0)),
    )


def bang_size_law[E](backend: SmcBackend[E], g: int) -> tuple[int, int]:
    """Size of !A next to the closed formula: |A| + 1 for pointed sets, 2^dim A over GF(2)."""
    size = backend.size(g)
    expected = size + 1 if backend.name == BackendName.PSET else 2**size
    return backend.size(backend.bang(g)), expected
