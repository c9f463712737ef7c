"""Presented affine algebras, ideals in them, and ring maps.

A :class:`RingPresentation` is ``k[x1..xn]/I``; elements are represented by
polynomials of the cover ring reduced to normal form modulo a Groebner basis of
``I``.  There is no separate residue-class type.
"""

from __future__ import annotations

import hashlib
from functools import cached_property
from typing import Iterable, Sequence

from .errors import AmbientMismatch, InvalidInput
from .fields import QQ, Field
from .groebner import Reducer, from_vec, groebner_dicts, ideal_key, to_vec
from .poly import DEGREVLEX, MonomialOrder, PolyRing, Polynomial, block_order


class RingPresentation:
    """``field[names] / (relations)`` with a lazily computed, write-once Groebner basis."""

    def __init__(self, names: Sequence[str], field: Field = QQ,
                 relations: Iterable = (), order: MonomialOrder = DEGREVLEX,
                 name: str | None = None):
        self.cover = PolyRing(names, field)
        rels = []
        for r in relations:
            r = self.cover(r)
            if r and r not in rels:
                rels.append(r)
        self.relations = tuple(rels)
        self.order = order
        self.name = name

    @property
    def field(self) -> Field:
        return self.cover.field

    @property
    def names(self) -> tuple:
        return self.cover.names

    @property
    def nvars(self) -> int:
        return self.cover.nvars

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, RingPresentation) and self.cover == other.cover
                and set(self.relations) == set(other.relations))

    def __hash__(self):
        return hash((self.cover, frozenset(self.relations)))

    def __repr__(self):
        base = f"{self.field}[{','.join(self.names)}]"
        if self.relations:
            base += "/(" + ", ".join(str(r) for r in self.relations) + ")"
        return base

    @cached_property
    def gb(self) -> list[Polynomial]:
        G = groebner_dicts((r.terms for r in self.relations), self.order,
                           self.field.characteristic)
        return [Polynomial(self.cover, g) for g in G]

    @cached_property
    def _reducer(self) -> Reducer:
        return Reducer([to_vec(g.terms) for g in self.gb], ideal_key(self.order),
                       self.field.characteristic)

    def reduce(self, f) -> Polynomial:
        f = self.cover(f)
        if not self.relations or not f:
            return f
        return Polynomial(self.cover, from_vec(self._reducer.reduce(to_vec(f.terms))))

    def __call__(self, f) -> Polynomial:
        return self.reduce(f)

    def is_zero_ring(self) -> bool:
        return any(g.is_constant() for g in self.gb)

    def is_polynomial_ring(self) -> bool:
        return not self.gb

    def is_graded(self) -> bool:
        return all(r.is_homogeneous() for r in self.relations)

    def var(self, name) -> Polynomial:
        return self.cover.var(name)

    @property
    def gens(self) -> list[Polynomial]:
        return self.cover.gens

    def ideal(self, *gens) -> IdealHandle:
        if len(gens) == 1 and isinstance(gens[0], (list, tuple)):
            gens = gens[0]
        return IdealHandle(self, gens)

    def maximal_graded(self) -> IdealHandle:
        return IdealHandle(self, self.gens)

    def with_field(self, field: Field) -> RingPresentation:
        if field == self.field:
            return self
        cover = PolyRing(self.names, field)
        return RingPresentation(self.names, field, [r.change_ring(cover) for r in self.relations],
                                self.order, self.name)


def polynomial_ring(names, field: Field = QQ) -> RingPresentation:
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    return RingPresentation(names, field)


def same_ambient(a: RingPresentation, b: RingPresentation) -> None:
    if a != b:
        raise AmbientMismatch(f"different rings: {a} vs {b}")


class IdealHandle:
    """A finitely generated ideal of a presented ring."""

    def __init__(self, ring: RingPresentation, gens: Iterable = ()):
        self.ring = ring
        out = []
        for g in gens:
            if isinstance(g, Polynomial) and g.ring != ring.cover:
                raise AmbientMismatch(f"generator {g} is not in {ring}")
            g = ring.reduce(g)
            if g and g not in out:
                out.append(g)
        self.gens = tuple(out)

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")" if self.gens else "(0)"

    __str__ = __repr__

    @cached_property
    def gb(self) -> list[Polynomial]:
        """Reduced Groebner basis of gens + defining ideal, in the cover ring."""
        return groebner_basis(self, self.ring.order)

    @cached_property
    def _reducer(self) -> Reducer:
        return Reducer([to_vec(g.terms) for g in self.gb], ideal_key(self.ring.order),
                       self.ring.field.characteristic)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.gb)

    def is_zero(self) -> bool:
        return not self.gens

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gb)

    def normal_form(self, f) -> Polynomial:
        f = self.ring.cover(f)
        return Polynomial(self.ring.cover, from_vec(self._reducer.reduce(to_vec(f.terms))))

    def contains(self, f) -> bool:
        return not self.normal_form(f)

    def __contains__(self, f):
        return self.contains(f)

    def issubset(self, other: IdealHandle) -> bool:
        same_ambient(self.ring, other.ring)
        return all(other.contains(g) for g in self.gens)

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return self.ring == other.ring and self.gb == other.gb

    def __hash__(self):
        return hash((self.ring, tuple(self.gb)))

    def fingerprint(self) -> str:
        text = repr(self.ring.names) + ";" + ";".join(str(g) for g in self.gb)
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def with_gens(self, gens) -> IdealHandle:
        return IdealHandle(self.ring, gens)


# -- operations -------------------------------------------------------------------

def groebner_basis(I: IdealHandle, order: MonomialOrder | None = None) -> list[Polynomial]:
    """Reduced Groebner basis of ``I`` plus the defining ideal, lifted to the cover ring."""
    order = order or I.ring.order
    R = I.ring
    polys = [g.terms for g in I.gens] + [r.terms for r in R.relations]
    G = groebner_dicts(polys, order, R.field.characteristic)
    return [Polynomial(R.cover, g) for g in G]


def normal_form(f, I: IdealHandle, order: MonomialOrder | None = None) -> Polynomial:
    if order is None or order == I.ring.order:
        return I.normal_form(f)
    G = groebner_basis(I, order)
    red = Reducer([to_vec(g.terms) for g in G], ideal_key(order), I.ring.field.characteristic)
    f = I.ring.cover(f)
    return Polynomial(I.ring.cover, from_vec(red.reduce(to_vec(f.terms))))


def ideal_sum(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    same_ambient(I.ring, J.ring)
    return IdealHandle(I.ring, I.gens + J.gens)


def ideal_product(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    same_ambient(I.ring, J.ring)
    return IdealHandle(I.ring, [f * g for f in I.gens for g in J.gens])


def _shift(terms: dict, before: int, after: int) -> dict:
    """Embed exponent tuples into a ring with extra variables around them."""
    pre, post = (0,) * before, (0,) * after
    return {pre + e + post: c for e, c in terms.items()}


def eliminate_dicts(polys: Iterable[dict], nvars: int, k: int, p: int) -> list[dict]:
    """Generators of ``(polys) ∩ k[x_{k+1}..x_n]`` (first ``k`` variables eliminated)."""
    if k > nvars:
        raise InvalidInput(f"elimination block {k} exceeds {nvars} variables")
    G = groebner_dicts(polys, block_order(k), p)
    return [{e[k:]: c for e, c in g.items()} for g in G if all(not any(e[:k]) for e in g)]


def intersection(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """``I ∩ J`` via ``t·I + (1-t)·J`` and elimination of ``t``."""
    same_ambient(I.ring, J.ring)
    R = I.ring
    p = R.field.characteristic
    n = R.nvars
    polys = []
    for f in I.gens:
        polys.append({(1,) + e: c for e, c in f.terms.items()})
    for g in J.gens:
        d: dict = {}
        for e, c in g.terms.items():
            d[(0,) + e] = c
            d[(1,) + e] = (-c) % p if p else -c
        polys.append(d)
    for r in R.relations:
        polys.append(_shift(r.terms, 1, 0))
    G = eliminate_dicts(polys, n + 1, 1, p)
    return IdealHandle(R, [Polynomial(R.cover, g) for g in G])


def eliminate(I: IdealHandle, names: Sequence[str]) -> IdealHandle:
    """``(I + defining ideal) ∩ k[remaining variables]`` as an ideal of a polynomial ring."""
    R = I.ring
    names = list(names)
    for n in names:
        if n not in R.names:
            raise InvalidInput(f"cannot eliminate unknown variable {n!r}")
    if len(set(names)) > R.nvars:
        raise InvalidInput("elimination block exceeds variable count")
    rest = [n for n in R.names if n not in names]
    order_names = names + rest
    W = PolyRing(order_names, R.field)
    polys = [g.change_ring(W).terms for g in I.gens] + [r.change_ring(W).terms for r in R.relations]
    G = eliminate_dicts(polys, W.nvars, len(names), R.field.characteristic)
    S = RingPresentation(rest, R.field)
    return IdealHandle(S, [Polynomial(S.cover, g) for g in G])


class RingMap:
    """A homomorphism ``source -> target`` given by images of the source variables."""

    def __init__(self, source: RingPresentation, target: RingPresentation, images: Sequence,
                 check: bool = True, name: str | None = None):
        if len(images) != source.nvars:
            raise InvalidInput(f"map needs {source.nvars} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = tuple(target.reduce(target.cover(im)) for im in images)
        self.name = name
        if source.field != target.field:
            raise AmbientMismatch("ring maps must preserve the coefficient field")
        if check:
            for r in source.relations:
                if self(r):
                    raise InvalidInput(f"map is not well defined: {r} maps to {self(r)}")

    def __call__(self, f) -> Polynomial:
        f = self.source.cover(f)
        if not self.images:
            return self.target.cover.constant(f.constant_term()) if f else self.target.cover.zero
        return self.target.reduce(f.substitute(self.images, self.target.cover))

    def __repr__(self):
        pairs = ", ".join(f"{n}->{im}" for n, im in zip(self.source.names, self.images))
        return f"RingMap({pairs})"

    def is_identity(self) -> bool:
        return (self.source == self.target
                and all(im == v for im, v in zip(self.images, self.target.gens)))

    def compose(self, other: RingMap) -> RingMap:
        """``self ∘ other``."""
        return RingMap(other.source, self.target, [self(im) for im in other.images], check=False)

    def image_ideal(self, I: IdealHandle) -> IdealHandle:
        """The extended ideal ``φ(I)·target``."""
        return IdealHandle(self.target, [self(g) for g in I.gens])


def _graph_polys(phi: RingMap, extra_target: Iterable[Polynomial] = ()) -> tuple[list[dict], int, int]:
    """Graph ideal in ``k[target vars, source vars]`` (target block first)."""
    m, n = phi.target.nvars, phi.source.nvars
    p = phi.source.field.characteristic
    polys = [_shift(r.terms, 0, n) for r in phi.target.relations]
    polys += [_shift(q.terms, 0, n) for q in extra_target]
    for i, im in enumerate(phi.images):
        d = {}
        for e, c in im.terms.items():
            d[e + (0,) * n] = (-c) % p if p else -c
        xi = tuple([0] * m + [1 if j == i else 0 for j in range(n)])
        d[xi] = phi.source.field(d.get(xi, 0) + 1)
        if not d[xi]:
            del d[xi]
        polys.append(d)
    return polys, m, n


def map_kernel(phi: RingMap) -> IdealHandle:
    """Kernel of ``phi`` by eliminating the target variables from the graph ideal."""
    polys, m, n = _graph_polys(phi)
    G = eliminate_dicts(polys, m + n, m, phi.source.field.characteristic)
    return IdealHandle(phi.source, [Polynomial(phi.source.cover, g) for g in G])


def contract_ideal(phi: RingMap, Q: IdealHandle) -> IdealHandle:
    """``phi^{-1}(Q)``."""
    same_ambient(Q.ring, phi.target)
    polys, m, n = _graph_polys(phi, Q.gens)
    G = eliminate_dicts(polys, m + n, m, phi.source.field.characteristic)
    return IdealHandle(phi.source, [Polynomial(phi.source.cover, g) for g in G])


def radical_contains(I: IdealHandle, b) -> bool:
    """``b ∈ √I`` by the Rabinowitsch trick: ``1 ∈ I + (1 - w·b)``."""
    R = I.ring
    b = R.cover(b)
    if not b:
        return True
    p = R.field.characteristic
    polys = [_shift(g.terms, 0, 1) for g in I.gens]
    polys += [_shift(r.terms, 0, 1) for r in R.relations]
    d = {e + (1,): (-c) % p if p else -c for e, c in b.terms.items()}
    one = (0,) * (R.nvars + 1)
    d[one] = (d.get(one, 0) + 1) % p if p else d.get(one, 0) + 1
    if not d[one]:
        del d[one]
    polys.append(d)
    G = groebner_dicts(polys, DEGREVLEX, p)
    return any(len(g) == 1 and not any(next(iter(g))) for g in G)


def is_nilpotent(b, B: RingPresentation) -> bool:
    """True iff ``b`` lies in the nilradical of ``B``."""
    return radical_contains(IdealHandle(B, []), b)


def identity_map(R: RingPresentation) -> RingMap:
    return RingMap(R, R, R.gens, check=False)
