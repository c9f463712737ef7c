"""Buchberger's algorithm over sparse vectors of polynomials.

Every object handed to the engine is a dict mapping a *term* ``(pos, exps)`` to
a nonzero coefficient.  An ideal is simply a rank-one module (``pos == 0``), so
ideal bases, module bases over a position-over-term order and the mixed
elimination orders used for subalgebra and linear-relation problems all run
through the same code.  A term order is any function mapping a term to a flat
tuple of ints that is a well-order compatible with multiplication.

Budgets and statistics live in a :class:`KernelSession` held in a context
variable, so threads computing different instances never share counters.
"""

from __future__ import annotations

import heapq
import os
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Callable, Iterable

from gmpy2 import mpq

from .errors import ResourceError
from .poly import MonomialOrder

Term = tuple  # (pos, exps)
Vec = dict  # Term -> coefficient
TermKey = Callable[[Term], tuple]

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    env = os.environ.get("AMALGRADE_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


@dataclass
class KernelSession:
    """Step budget (per Groebner computation) plus cumulative statistics."""

    budget: int = field(default_factory=default_budget)
    spairs: int = 0
    reductions: int = 0
    bases: int = 0
    max_coeff_bits: int = 0

    def stats(self) -> dict:
        return {
            "groebner_bases": self.bases,
            "spairs_processed": self.spairs,
            "reduction_steps": self.reductions,
            "max_coefficient_bits": self.max_coeff_bits,
        }


_session: ContextVar[KernelSession | None] = ContextVar("amalgrade_kernel_session", default=None)
_fallback = KernelSession(budget=0)


def session() -> KernelSession:
    s = _session.get()
    if s is None:
        _fallback.budget = default_budget()
        return _fallback
    return s


@contextmanager
def kernel_session(budget: int | None = None):
    """Run a block with a fresh budget/statistics record."""
    s = KernelSession(budget=budget if budget is not None else default_budget())
    token = _session.set(s)
    try:
        yield s
    finally:
        _session.reset(token)


# -- term orders ----------------------------------------------------------------

def ideal_key(order: MonomialOrder) -> TermKey:
    k = order.key
    return lambda t: k(t[1])


def pot_key(order: MonomialOrder) -> TermKey:
    """Position over term; lower positions are larger."""
    k = order.key
    return lambda t: (-t[0],) + k(t[1])


# -- helpers ----------------------------------------------------------------------

def _coeff_bits(c, p: int) -> int:
    if p:
        return int(c).bit_length()
    return max(c.numerator.bit_length(), c.denominator.bit_length())


class _Basis:
    """Working basis with lead-term index; every element is monic."""

    def __init__(self, key: TermKey, p: int, sess: KernelSession, budget: int):
        self.key = key
        self.p = p
        self.polys: list[Vec] = []
        self.lms: list[Term] = []
        self.by_pos: dict[int, list[tuple[tuple, int]]] = {}
        self.alive: list[bool] = []
        self._nk: dict = {}
        self.sess = sess
        self.budget = budget
        self.steps = 0

    def nkey(self, t: Term) -> tuple:
        v = self._nk.get(t)
        if v is None:
            v = tuple(-x for x in self.key(t))
            self._nk[t] = v
        return v

    def lead(self, f: Vec) -> Term:
        return min(f, key=self.nkey)

    def divisor(self, t: Term, skip: int = -1) -> int:
        pos, e = t
        for m, i in self.by_pos.get(pos, ()):
            if i != skip and self.alive[i] and all(a <= b for a, b in zip(m, e)):
                return i
        return -1

    def append(self, g: Vec) -> int:
        lm = self.lead(g)
        idx = len(self.polys)
        self.polys.append(g)
        self.lms.append(lm)
        self.alive.append(True)
        self.by_pos.setdefault(lm[0], []).append((lm[1], idx))
        return idx

    def monic(self, f: Vec) -> Vec:
        lt = self.lead(f)
        c = f[lt]
        p = self.p
        if p:
            if c == 1:
                return f
            inv = pow(c, -1, p)
            return {t: v * inv % p for t, v in f.items()}
        if c == 1:
            return f
        inv = mpq(1) / c
        return {t: v * inv for t, v in f.items()}

    def reduce(self, f: Vec, skip: int = -1) -> Vec:
        """Full reduction of ``f``; ``skip`` excludes one basis element."""
        if not f:
            return {}
        p = self.p
        nkey = self.nkey
        f = dict(f)
        heap = [(nkey(t), t) for t in f]
        heapq.heapify(heap)
        rem: Vec = {}
        polys, lms = self.polys, self.lms
        steps = 0
        while heap:
            _, t = heapq.heappop(heap)
            c = f.get(t)
            if c is None:
                continue
            i = self.divisor(t, skip)
            del f[t]
            if i < 0:
                rem[t] = c
                continue
            steps += 1
            g = polys[i]
            lm = lms[i]
            shift = tuple(a - b for a, b in zip(t[1], lm[1]))
            for (gp, ge), gc in g.items():
                if gp == lm[0] and ge == lm[1]:
                    continue
                t2 = (gp, tuple(a + b for a, b in zip(ge, shift)))
                old = f.get(t2)
                if old is None:
                    v = -c * gc
                    if p:
                        v %= p
                    if v:
                        f[t2] = v
                        heapq.heappush(heap, (nkey(t2), t2))
                else:
                    v = old - c * gc
                    if p:
                        v %= p
                    if v:
                        f[t2] = v
                    else:
                        del f[t2]
        self.steps += steps
        self.sess.reductions += steps
        if self.budget and self.steps > self.budget:
            raise ResourceError(f"Groebner step budget {self.budget} exhausted")
        return rem


def _spoly(b: _Basis, i: int, j: int, lcm: tuple) -> Vec:
    p = b.p
    out: Vec = {}
    for idx, sign in ((i, 1), (j, -1)):
        g = b.polys[idx]
        lm = b.lms[idx]
        shift = tuple(a - c for a, c in zip(lcm, lm[1]))
        for (gp, ge), gc in g.items():
            t = (gp, tuple(a + c for a, c in zip(ge, shift)))
            v = out.get(t, 0) + (gc if sign > 0 else -gc)
            if p:
                v %= p
            if v:
                out[t] = v
            else:
                out.pop(t, None)
    return out


def groebner_vectors(gens: Iterable[Vec], key: TermKey, p: int, *, ideal: bool = False,
                     budget: int | None = None) -> list[Vec]:
    """Reduced Groebner basis of the submodule generated by ``gens``.

    ``ideal=True`` enables the coprime-leading-monomial criterion, which is
    only valid when all elements live in a single position.
    """
    sess = session()
    if budget is None:
        budget = sess.budget
    sess.bases += 1
    b = _Basis(key, p, sess, budget)
    pairs: list = []
    pending: set = set()

    def add(h: Vec) -> None:
        h = b.monic(h)
        bits = max((_coeff_bits(c, p) for c in h.values()), default=0)
        if bits > sess.max_coeff_bits:
            sess.max_coeff_bits = bits
        j = b.append(h)
        pos, e = b.lms[j]
        for i in range(j):
            pi, ei = b.lms[i]
            if pi != pos:
                continue
            if ideal and all(x == 0 or y == 0 for x, y in zip(ei, e)):
                continue
            lcm = tuple(x if x > y else y for x, y in zip(ei, e))
            heapq.heappush(pairs, (sum(lcm), key((pos, lcm)), i, j, lcm))
            pending.add((i, j))

    for f in gens:
        if not f:
            continue
        r = b.reduce(f)
        if r:
            add(r)

    while pairs:
        _, _, i, j, lcm = heapq.heappop(pairs)
        pending.discard((i, j))
        pos = b.lms[i][0]
        skip = False
        for m, k in b.by_pos.get(pos, ()):
            if k == i or k == j:
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            if all(a <= c for a, c in zip(m, lcm)):
                skip = True
                break
        if skip:
            continue
        sess.spairs += 1
        s = _spoly(b, i, j, lcm)
        r = b.reduce(s)
        if r:
            add(r)
    return _interreduce(b)


def _interreduce(b: _Basis) -> list[Vec]:
    n = len(b.polys)
    keep = []
    for i in range(n):
        pos, e = b.lms[i]
        redundant = False
        for m, k in b.by_pos.get(pos, ()):
            if k == i:
                continue
            if all(a <= c for a, c in zip(m, e)) and (m != e or k < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    keep_set = set(keep)
    for i in range(n):
        b.alive[i] = i in keep_set
    out = []
    for i in keep:
        g = b.polys[i]
        lm = b.lms[i]
        tail = {t: c for t, c in g.items() if t != lm}
        r = b.reduce(tail, skip=i)
        r[lm] = g[lm]
        out.append(r)
    out.sort(key=lambda g: b.nkey(b.lead(g)))
    return out


def normal_form_vector(f: Vec, basis: list[Vec], key: TermKey, p: int) -> Vec:
    """Remainder of ``f`` modulo a (monic) Groebner basis."""
    b = _Basis(key, p, session(), 0)
    for g in basis:
        b.append(g)
    return b.reduce(f)


class Reducer:
    """Reusable normal-form engine for a fixed Groebner basis."""

    def __init__(self, basis: list[Vec], key: TermKey, p: int):
        self._b = _Basis(key, p, session(), 0)
        for g in basis:
            self._b.append(g)
        self.basis = basis
        self.key = key
        self.p = p

    def reduce(self, f: Vec) -> Vec:
        self._b.sess = session()
        return self._b.reduce(f)

    def lead(self, f: Vec) -> Term:
        return self._b.lead(f)

    def is_unit(self) -> bool:
        return any(not any(t[1]) for g in self.basis for t in g if len(g) == 1)


# -- ideal-level conveniences (dicts exps -> coeff) -------------------------------

def to_vec(terms: dict, pos: int = 0) -> Vec:
    return {(pos, e): c for e, c in terms.items()}


def from_vec(v: Vec) -> dict:
    return {e: c for (_, e), c in v.items()}


def groebner_dicts(polys: Iterable[dict], order: MonomialOrder, p: int,
                   budget: int | None = None) -> list[dict]:
    """Reduced Groebner basis of an ideal given as exponent dicts."""
    G = groebner_vectors((to_vec(f) for f in polys), ideal_key(order), p, ideal=True,
                         budget=budget)
    return [from_vec(g) for g in G]
