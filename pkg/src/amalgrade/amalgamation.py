"""Amalgamated algebras ``A ⋈^f J`` as presented rings.

The amalgam is the image of ``k[x, T1..Tm] -> A × B`` with ``x -> (x, f(x))`` and
``Tu -> (0, ju)``; its defining ideal is ``ker(φ_A) ∩ ker(φ_B)``.  It is always
computed, never taken from the user.

Several questions about ``J`` as an ``A``-module (relations among chosen
elements, membership in their ``A``-span) are answered by one elimination: in
``k[y, x]`` modulo the graph ideal of ``f``, eliminate ``y`` and the value
component of a module of rank ``1 + r``.
"""

from __future__ import annotations

import math

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import InvalidInput, NotDecidable
from .groebner import Reducer, from_vec, groebner_dicts, groebner_vectors, ideal_key, to_vec
from .invariants import (_minimalize, _zero_minimal_primes, height_of_prime, is_prime, koszul_grade,
                         minimal_primes, verify_decomposition)
from .modules import FPModule, ideal_as_module, reduce_mod_ring, syzygy_vectors, vector
from .poly import Polynomial, _drl, block_order
from .rings import (IdealHandle, RingMap, RingPresentation, contract_ideal, intersection,
                    is_nilpotent, map_kernel)

MODES = ("module_finite", "algebra", "nilpotent")


# -- A-linear algebra inside B ------------------------------------------------------


def a_linear_relations(f: RingMap, elems: Sequence[Polynomial]) -> list[dict]:
    """Generators of ``{a ∈ A^r : Σ f(a_i)·elems_i = 0 in B}`` as vectors over ``A``."""
    A, B = f.source, f.target
    r = len(elems)
    if r == 0:
        return []
    nB, nA = B.nvars, A.nvars
    p = A.field.characteristic
    one = A.field(1)
    zero_x = (0,) * nA
    zero_y = (0,) * nB

    def key(t):
        pos, e = t
        return (1 if pos == 0 else 0,) + _drl(e[:nB]) + (-pos,) + _drl(e[nB:])

    gens = []
    for i, b in enumerate(elems):
        g = {(0, e + zero_x): c for e, c in B.cover(b).terms.items()}
        g[(i + 1, zero_y + zero_x)] = one
        gens.append(g)
    for rel in B.relations:
        gens.append({(0, e + zero_x): c for e, c in rel.terms.items()})
    for i, im in enumerate(f.images):
        g = {(0, e + zero_x): (-c) % p if p else -c for e, c in im.terms.items()}
        g[(0, zero_y + tuple(1 if j == i else 0 for j in range(nA)))] = one
        gens.append(g)
    G = groebner_vectors(gens, key, p)
    out = []
    for g in G:
        lead = max(g, key=key)
        if lead[0] == 0 or any(lead[1][:nB]):
            continue
        v = reduce_mod_ring({(pos - 1, e[nB:]): c for (pos, e), c in g.items()}, A)
        if v and v not in out:
            out.append(v)
    return out


def in_a_span(f: RingMap, elems: Sequence[Polynomial], b: Polynomial) -> bool:
    """Is ``b`` an ``f(A)``-linear combination of ``elems``?"""
    A = f.source
    rels = a_linear_relations(f, list(elems) + [b])
    last = len(elems)
    coords = [Polynomial(A.cover, {e: c for (pos, e), c in v.items() if pos == last})
              for v in rels]
    return A.ideal(coords).is_unit()


# -- A x B ------------------------------------------------------------------------------


def product_ring(A: RingPresentation, B: RingPresentation) -> RingPresentation:
    """``A × B`` as ``k[x', y, eps]`` with ``eps`` the idempotent (1, 0)."""
    names = [f"a_{n}" for n in A.names] + [f"b_{n}" for n in B.names] + ["eps_"]
    R = RingPresentation(names, A.field)
    P = R.cover
    eps = P.var("eps_")
    xa = [P.var(f"a_{n}") for n in A.names]
    yb = [P.var(f"b_{n}") for n in B.names]
    rels = [eps * eps - eps]
    rels += [eps * y for y in yb]
    rels += [(1 - eps) * x for x in xa]
    rels += [eps * r.substitute(xa, P) for r in A.relations] if A.nvars else \
        [eps * P.constant(r.constant_term()) for r in A.relations]
    rels += [(1 - eps) * r.substitute(yb, P) for r in B.relations] if B.nvars else \
        [(1 - eps) * P.constant(r.constant_term()) for r in B.relations]
    return RingPresentation(names, A.field, rels)


def _lift_to_product(D: RingPresentation, B: RingPresentation, b: Polynomial) -> Polynomial:
    P = D.cover
    yb = [P.var(f"b_{n}") for n in B.names]
    if B.nvars:
        return b.substitute(yb, P)
    return P.constant(b.constant_term())


# -- data -----------------------------------------------------------------------------


@dataclass
class AmalgamDatum:
    """Input package ``(A, B, f, J)`` plus the chosen generators of ``J``."""

    A: RingPresentation
    B: RingPresentation
    f: RingMap
    J: IdealHandle
    subring_gens: tuple
    modes: frozenset = frozenset({"algebra"})
    module_gens: tuple | None = None
    module_relations: list | None = None
    trust: str = "verify"
    free_basis: tuple | None = None
    label: str = ""
    checked: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.modes = frozenset(self.modes)
        bad = self.modes - set(MODES)
        if bad:
            raise InvalidInput(f"unknown amalgam modes {sorted(bad)}")
        if self.f.source is not self.A and self.f.source != self.A:
            raise InvalidInput("f must start at A")
        if self.f.target != self.B or self.J.ring != self.B:
            raise InvalidInput("f and J must live in B")
        self.subring_gens = tuple(self.B.reduce(self.B.cover(g)) for g in self.subring_gens)
        self.subring_gens = tuple(g for g in self.subring_gens if g)
        if self.module_gens is not None:
            self.module_gens = tuple(self.B.reduce(self.B.cover(g)) for g in self.module_gens)
        if self.free_basis is not None:
            self.free_basis = tuple(self.B.reduce(self.B.cover(g)) for g in self.free_basis)
        if self.trust not in ("verify", "attested"):
            raise InvalidInput("trust must be 'verify' or 'attested'")
        self.validate()

    def validate(self) -> None:
        for j in self.subring_gens:
            if not self.J.contains(j):
                raise InvalidInput(f"subring generator {j} is not in J")
        for j in self.module_gens or ():
            if not self.J.contains(j):
                raise InvalidInput(f"module generator {j} is not in J")
        if "nilpotent" in self.modes:
            for j in self.J.gens:
                if not is_nilpotent(j, self.B):
                    raise InvalidInput(f"J generator {j} is not nilpotent")
        if "module_finite" in self.modes and self.module_relations is not None:
            gens = self.A_module_gens
            for rel in self.module_relations:
                comps = rel if not isinstance(rel, dict) else _unvec(rel, len(gens), self.A)
                total = self.B.cover.zero
                for a, g in zip(comps, gens):
                    total = total + self.f(self.A.cover(a)) * g
                if self.B.reduce(total):
                    raise InvalidInput(f"supplied relation {comps} of J is not a relation in B")
        self.checked = True

    @property
    def A_module_gens(self) -> tuple:
        return self.module_gens if self.module_gens is not None else self.subring_gens

    def is_module_finite(self) -> bool:
        return "module_finite" in self.modes

    def is_nilpotent(self) -> bool:
        return "nilpotent" in self.modes

    @cached_property
    def J_module(self) -> FPModule:
        """``J`` as a presented ``A``-module on ``A_module_gens`` (relations computed)."""
        if not self.is_module_finite():
            raise NotDecidable("J has no A-module presentation outside module_finite mode")
        gens = self.A_module_gens
        if not self.J_generated_by_module_gens():
            raise InvalidInput("module generators do not span J over A")
        rels = a_linear_relations(self.f, gens)
        M = FPModule(self.A, len(gens), rels)
        if self.module_relations is not None:
            supplied = FPModule(self.A, len(gens), self.module_relations)
            for v in M.relations:
                if not supplied.relation_gb.contains(v):
                    raise InvalidInput("supplied presentation of J misses relations")
        return M

    def J_generated_by_module_gens(self) -> bool:
        gens = list(self.A_module_gens)
        targets = list(self.J.gens)
        for y in self.B.gens:
            targets.extend(self.B.reduce(y * g) for g in gens)
        return all(not t or in_a_span(self.f, gens, t) for t in targets)

    @cached_property
    def amalgam(self) -> "AmalgamRing":
        """The built ring, computed once per datum."""
        return build_amalgamation(self)

    @cached_property
    def J_B_module(self) -> FPModule:
        """``J`` as a presented ``B``-module on its ideal generators."""
        return ideal_as_module(self.J)


def _unvec(v: dict, r: int, A: RingPresentation) -> tuple:
    comps: list[dict] = [{} for _ in range(r)]
    for (i, e), c in v.items():
        comps[i][e] = c
    return tuple(Polynomial(A.cover, d) for d in comps)


def grade_on_J(a: IdealHandle, d: AmalgamDatum, route: str = "auto"):
    """``kgr_A(a, J)``.

    ``route="A"`` uses the ``A``-module presentation (module_finite only);
    ``route="B"`` runs the Koszul complex on ``f(a)`` over the ``B``-module
    ``J``, which has the same cohomology and works for any ``J``.
    """
    if route == "auto":
        route = "A" if d.is_module_finite() else "B"
    if route == "A":
        return koszul_grade(a, d.J_module)
    return koszul_grade(d.f.image_ideal(a), d.J_B_module)


# -- built ring -------------------------------------------------------------------------


@dataclass
class AmalgamRing:
    presentation: RingPresentation
    iota: RingMap
    proj_A: RingMap
    proj_B: RingMap
    datum: AmalgamDatum
    T_names: tuple

    @property
    def ring(self) -> RingPresentation:
        return self.presentation

    def T(self) -> list[Polynomial]:
        return [self.presentation.var(n) for n in self.T_names]

    def extend_ideal(self, a: IdealHandle) -> IdealHandle:
        return extend_ideal(a, self)

    def prime_p_prime(self, p: IdealHandle) -> IdealHandle:
        return prime_p_prime(p, self)

    def prime_q_bar(self, q: IdealHandle) -> IdealHandle:
        return prime_q_bar(q, self)

    def maximal_graded(self) -> IdealHandle:
        return self.presentation.maximal_graded()

    def as_A_module(self) -> FPModule:
        return amalgam_as_A_module(self)


def _fresh_names(taken: Sequence[str], m: int, stem: str = "T") -> tuple:
    names = []
    k = 1
    while len(names) < m:
        cand = f"{stem}{k}"
        if cand not in taken:
            names.append(cand)
        k += 1
    return tuple(names)


def _cover_maps(d: AmalgamDatum, W: RingPresentation) -> tuple[RingMap, RingMap]:
    A, B = d.A, d.B
    m = len(d.subring_gens)
    phi_A = RingMap(W, A, list(A.gens) + [A.cover.zero] * m, check=False)
    phi_B = RingMap(W, B, [d.f(x) for x in A.gens] + list(d.subring_gens), check=False)
    return phi_A, phi_B


def build_amalgamation(d: AmalgamDatum) -> AmalgamRing:
    """Present ``A ⋈^f J`` as ``k[x, T]/(ker φ_A ∩ ker φ_B)``."""
    A = d.A
    m = len(d.subring_gens)
    T_names = _fresh_names(A.names, m)
    names = list(A.names) + list(T_names)
    W = RingPresentation(names, A.field)
    phi_A, phi_B = _cover_maps(d, W)
    K = intersection(map_kernel(phi_A), map_kernel(phi_B))
    R = RingPresentation(names, A.field, K.gb, name=d.label or None)
    iota = RingMap(A, R, [R.var(n) for n in A.names], check=True)
    proj_A = RingMap(R, A, phi_A.images, check=True)
    proj_B = RingMap(R, d.B, phi_B.images, check=True)
    return AmalgamRing(R, iota, proj_A, proj_B, d, T_names)


def amalgam_kernel_via_product(d: AmalgamDatum) -> list[Polynomial]:
    """Defining ideal recomputed as the kernel of one map into a presentation of ``A × B``."""
    A, B = d.A, d.B
    m = len(d.subring_gens)
    names = list(A.names) + list(_fresh_names(A.names, m))
    W = RingPresentation(names, A.field)
    D = product_ring(A, B)
    P = D.cover
    eps = P.var("eps_")
    imgs = []
    for n, x in zip(A.names, A.gens):
        imgs.append(eps * P.var(f"a_{n}") + (1 - eps) * _lift_to_product(D, B, d.f(x)))
    for j in d.subring_gens:
        imgs.append((1 - eps) * _lift_to_product(D, B, j))
    K = map_kernel(RingMap(W, D, imgs, check=False))
    return K.gb


def verify_generation(d: AmalgamDatum) -> str:
    """``verified`` if the subring generators provably give all of ``0 × J``."""
    if d.trust == "attested":
        return "attested"
    B = d.B
    gens = d.subring_gens
    jideal = B.ideal(gens)
    if not all(jideal.contains(g) for g in d.J.gens):
        return "failed"
    if not gens:
        return "verified"
    if d.f.is_identity():
        return "verified"
    A = d.A
    D = product_ring(A, B)
    P = D.cover
    eps = P.var("eps_")
    m = len(gens)
    nD = D.nvars
    imgs = []
    for i, n in enumerate(A.names):
        imgs.append(eps * P.var(f"a_{n}") + (1 - eps) * _lift_to_product(D, B, d.f(A.gens[i])))
    for j in gens:
        imgs.append((1 - eps) * _lift_to_product(D, B, j))
    # graph of k[x, T] -> D inside k[D vars, x, T], D vars eliminated first
    p = A.field.characteristic
    nW = A.nvars + m
    polys = [{e + (0,) * nW: c for e, c in r.terms.items()} for r in D.relations]
    for i, im in enumerate(imgs):
        g = {e + (0,) * nW: ((-c) % p if p else -c) for e, c in im.terms.items()}
        xi = (0,) * nD + tuple(1 if k == i else 0 for k in range(nW))
        g[xi] = A.field(1)
        polys.append(g)
    order = block_order(nD)
    G = groebner_dicts(polys, order, p)
    red = Reducer([to_vec(g) for g in G], ideal_key(order), p)
    for y in B.gens:
        for j in gens:
            b = B.reduce(y * j)
            if not b:
                continue
            target = (1 - eps) * _lift_to_product(D, B, b)
            nf = from_vec(red.reduce(to_vec({e + (0,) * nW: c for e, c in target.terms.items()})))
            if any(any(e[:nD]) for e in nf):
                return "failed"
            # membership in the image of (T): the x-only part of a preimage must vanish in A
            h = {e[nD:]: c for e, c in nf.items()}
            hx = {e[:A.nvars]: c for e, c in h.items() if not any(e[A.nvars:])}
            if hx and A.reduce(Polynomial(A.cover, hx)):
                return "failed"
    return "verified"


# -- ideals of the amalgam ------------------------------------------------------------


def extend_ideal(a: IdealHandle, R: AmalgamRing) -> IdealHandle:
    if a.ring != R.datum.A:
        raise InvalidInput("ideal does not live in A")
    return R.iota.image_ideal(a)


def prime_p_prime(p: IdealHandle, R: AmalgamRing) -> IdealHandle:
    """``p ⋈^f J`` generated by ``ι(p)`` and the ``T`` variables."""
    if p.ring != R.datum.A:
        raise InvalidInput("ideal does not live in A")
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    gens = [R.iota(g) for g in p.gens] + R.T()
    return R.presentation.ideal(gens)


def prime_q_bar(q: IdealHandle, R: AmalgamRing) -> IdealHandle:
    """Contraction of ``q`` along ``A ⋈^f J -> B``; requires ``J ⊄ q``."""
    d = R.datum
    if q.ring != d.B:
        raise InvalidInput("ideal does not live in B")
    if all(q.contains(j) for j in d.J.gens):
        raise InvalidInput(f"J is contained in {q}: this prime is of type p'_f, not q-bar")
    return contract_ideal(R.proj_B, q)


# -- primes of the amalgam ---------------------------------------------------------------
# Every prime of A ⋈^f J is p'_f for a prime p of A, or q-bar for a prime q of B
# with J ⊄ q; the quotients are A/p and a subring of B/q, so both kinds are prime
# whenever p, q are.  That gives candidate lists which verify_decomposition then
# confirms (containment, incomparability, intersection inside the radical).


def _structural_primes(a: IdealHandle, R: AmalgamRing) -> list[IdealHandle]:
    d = R.datum
    E = R.extend_ideal(a)
    cands = [R.prime_p_prime(p) for p in minimal_primes(a)]
    for q in minimal_primes(d.f.image_ideal(a)):
        if not all(q.contains(j) for j in d.J.gens):
            cands.append(R.prime_q_bar(q))
    return verify_decomposition(E, _minimalize(cands), trusted=True)


def extension_minimal_primes(a: IdealHandle, R: AmalgamRing) -> list[IdealHandle]:
    """``Min(a^e)``, falling back to the structural candidates when splitting fails."""
    try:
        return minimal_primes(R.extend_ideal(a))
    except NotDecidable:
        return _structural_primes(a, R)


def zero_minimal_primes(R: AmalgamRing) -> list[IdealHandle]:
    P = R.presentation
    try:
        return _zero_minimal_primes(P)
    except NotDecidable:
        found = _structural_primes(R.datum.A.ideal(), R)
        P.__dict__["_min_zero"] = found
        return found


def extension_height(a: IdealHandle, R: AmalgamRing):
    """``ht a^e`` in the amalgam."""
    E = R.extend_ideal(a)
    if E.is_unit():
        return math.inf
    base = zero_minimal_primes(R)
    return min(height_of_prime(P, base) for P in extension_minimal_primes(a, R))


def p_prime_height(p: IdealHandle, R: AmalgamRing):
    """``ht p'_f``; ``p'_f`` is prime, so it is its own unique minimal prime."""
    return height_of_prime(R.prime_p_prime(p), zero_minimal_primes(R))


def amalgam_as_A_module(R: AmalgamRing) -> FPModule:
    """``A ⊕ J`` with the computed presentation of ``J``."""
    d = R.datum
    if not d.is_module_finite():
        raise NotDecidable("A-module structure needs module_finite mode")
    J = d.J_module
    rels = [{(i + 1, e): c for (i, e), c in v.items()} for v in J.relations]
    return FPModule(d.A, 1 + J.rank, rels)


# -- standard constructions ---------------------------------------------------------


def trivial_extension(A: RingPresentation, M: FPModule, label: str = "") -> AmalgamDatum:
    """Datum with ``B = A ⋉ M``, ``J = 0 ⋉ M`` and ``f`` the natural embedding."""
    if M.ring != A:
        raise InvalidInput("module must live over A")
    r = M.rank
    T_names = _fresh_names(A.names, r)
    names = list(A.names) + list(T_names)
    B0 = RingPresentation(names, A.field)
    P = B0.cover
    T = [P.var(n) for n in T_names]
    xs = [P.var(n) for n in A.names]
    rels = [rel.change_ring(P) for rel in A.relations]
    for v in M.relations:
        total = P.zero
        for (i, e), c in v.items():
            total = total + T[i] * Polynomial(P, {e + (0,) * r: c})
        rels.append(total)
    rels += [T[i] * T[j] for i in range(r) for j in range(i, r)]
    B = RingPresentation(names, A.field, rels)
    f = RingMap(A, B, xs, check=True)
    J = B.ideal(T)
    return AmalgamDatum(A, B, f, J, tuple(T), frozenset({"module_finite", "nilpotent"}),
                        module_gens=tuple(T), module_relations=list(M.relations),
                        label=label or "trivial_extension")


def duplication(A: RingPresentation, I: IdealHandle, label: str = "") -> AmalgamDatum:
    """Datum ``(A, A, id, I)`` for the amalgamated duplication ``A ⋈ I``."""
    if I.ring != A:
        raise InvalidInput("ideal must live in A")
    f = RingMap(A, A, A.gens, check=False)
    gens = I.gens
    rels = syzygy_vectors(A, 1, [vector([g]) for g in gens])
    modes = {"module_finite"}
    if gens and all(is_nilpotent(g, A) for g in gens):
        modes.add("nilpotent")
    return AmalgamDatum(A, A, f, I, tuple(gens), frozenset(modes), module_gens=tuple(gens),
                        module_relations=rels, label=label or "duplication")
