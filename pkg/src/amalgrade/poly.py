"""Exact multivariate polynomials with dense exponent tuples.

A monomial is a tuple of non-negative ints whose length is the number of ring
variables.  A polynomial is an immutable map monomial -> nonzero coefficient.
Monomial orders are expressed as key functions returning flat int tuples, so
that ``max(terms, key=order.key)`` is the leading monomial and the keys can be
negated elementwise for use in a heap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import AmbientMismatch, ParseError, ZeroPolynomialError
from .fields import QQ, Field

Monomial = tuple


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``degrevlex`` or ``block`` (degrevlex on each block, first block dominant)."""

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.block < 0:
            raise ValueError("block size must be non-negative")

    def key(self, e: Monomial) -> tuple:
        if self.kind == "lex":
            return e
        if self.kind == "degrevlex":
            return _drl(e)
        k = self.block
        if k > len(e):
            raise ValueError(f"elimination block {k} exceeds {len(e)} variables")
        return _drl(e[:k]) + _drl(e[k:])

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def _drl(e: Monomial) -> tuple:
    return (sum(e),) + tuple(-x for x in reversed(e))


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def block_order(first_block: int) -> MonomialOrder:
    return MonomialOrder("block", first_block)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class PolyRing:
    """The polynomial ring ``field[names]``; a factory for polynomials."""

    def __init__(self, names: Sequence[str], field: Field = QQ):
        names = tuple(names)
        for n in names:
            if not _IDENT.match(n):
                raise ValueError(f"invalid variable name {n!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.field = field
        self.nvars = len(names)
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.names == other.names
                and self.field == other.field)

    def __hash__(self):
        return hash((self.names, self.field))

    def __repr__(self):
        return f"{self.field}[{','.join(self.names)}]"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no variable {name!r} in {self}") from None

    @property
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    @property
    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c) -> Polynomial:
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name_or_index) -> Polynomial:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field(1)})

    @property
    def gens(self) -> list[Polynomial]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Monomial, coeff=1) -> Polynomial:
        if len(exps) != self.nvars:
            raise AmbientMismatch(f"monomial {exps} has wrong length for {self}")
        c = self.field(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def from_terms(self, terms: dict) -> Polynomial:
        """Build from a trusted dict of already-normalized coefficients."""
        return Polynomial(self, {e: c for e, c in terms.items() if c})

    def __call__(self, value) -> Polynomial:
        if isinstance(value, Polynomial):
            if value.ring == self:
                return value
            return value.change_ring(self)
        if isinstance(value, str):
            return parse_polynomial(value, self)
        return self.constant(value)


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field(0))

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> tuple:
        if not self.terms:
            raise ZeroPolynomialError("leading term of the zero polynomial")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = DEGREVLEX) -> Polynomial:
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self.scalar_mul(self.ring.field.inv(c))

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: Polynomial) -> None:
        if self.ring != other.ring:
            raise AmbientMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.field.characteristic
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {e: (p - c) % p for e, c in self.terms.items()})
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scalar_mul(self, c) -> Polynomial:
        c = self.ring.field(c)
        if not c:
            return self.ring.zero
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()})
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scalar_mul(other)
        self._check(other)
        p = self.ring.field.characteristic
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self.scalar_mul(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, str)) or hasattr(other, "denominator"):
            return self == self.ring(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- substitution ------------------------------------------------------
    def substitute(self, images: Sequence[Polynomial], target: PolyRing | None = None) -> Polynomial:
        """Evaluate at ``images`` (one polynomial per variable)."""
        if len(images) != self.ring.nvars:
            raise AmbientMismatch("one image per variable required")
        if target is None:
            target = images[0].ring if images else self.ring
        powers: dict = {}
        result: dict = {}
        p = target.field.characteristic
        conv = target.field
        for e, c in self.terms.items():
            term = {(0,) * target.nvars: conv(self.ring.field.to_fraction(c))}
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    term = _dict_mul(term, powers[key].terms, p)
            for m, v in term.items():
                w = result.get(m, 0) + v
                if p:
                    w %= p
                if w:
                    result[m] = w
                else:
                    result.pop(m, None)
        return Polynomial(target, result)

    def change_ring(self, ring: PolyRing) -> Polynomial:
        """Re-express in a ring whose variables include all variables used here."""
        idx = []
        for i in range(self.ring.nvars):
            idx.append(ring.index(self.ring.names[i]))
        used = self.variables()
        conv = ring.field
        out = {}
        for e, c in self.terms.items():
            f = [0] * ring.nvars
            for i in used:
                f[idx[i]] = e[i]
            v = conv(self.ring.field.to_fraction(c))
            if v:
                out[tuple(f)] = v
        return Polynomial(ring, out)

    # -- printing ----------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def _dict_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


def format_monomial(e: Monomial, names: Sequence[str]) -> str:
    parts = []
    for n, k in zip(names, e):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_polynomial(f: Polynomial, order: MonomialOrder = DEGREVLEX) -> str:
    if not f.terms:
        return "0"
    field = f.ring.field
    out = []
    for e, c in f.sorted_terms(order):
        s = field.format(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        m = format_monomial(e, f.ring.names)
        if m:
            body = m if s == "1" else f"{s}*{m}"
        else:
            body = s
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# -- text grammar -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("id", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return tokens


class _PolyParser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def error(self, msg):
        col = self.toks[self.i][2] + 1 if self.i < len(self.toks) else len(self.text) + 1
        raise ParseError(f"{msg} in polynomial {self.text!r}", 1, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None)

    def parse(self) -> Polynomial:
        if not self.toks:
            self.error("empty expression")
        p = self.expr()
        if self.i != len(self.toks):
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.i += 1
                t = self.term()
                p = p + t if val == "+" else p - t
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.i += 1
                p = p * self.factor()
            elif kind == "op" and val == "/":
                self.i += 1
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    self.error("division only by nonzero constants")
                p = p.scalar_mul(self.ring.field.inv(d.constant_term()))
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            # unary sign binds looser than ^: -x^2 is -(x^2)
            self.i += 1
            f = self.factor()
            return -f if val == "-" else f
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.i += 1
            kind, val, _ = self.peek()
            if kind != "num":
                self.error("exponent must be a non-negative integer")
            self.i += 1
            return base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val, _ = self.peek()
        if kind == "num":
            self.i += 1
            return self.ring.constant(int(val))
        if kind == "id":
            self.i += 1
            if val not in self.ring._index:
                self.i -= 1
                self.error(f"unknown variable {val!r}")
            return self.ring.var(val)
        if kind == "op" and val == "(":
            self.i += 1
            p = self.expr()
            kind, val, _ = self.peek()
            if val != ")":
                self.error("expected ')'")
            self.i += 1
            return p
        self.error("expected a number, variable or '('")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse text like ``x^2*y - 3/2*z`` (``*`` optional) into ``ring``."""
    return _PolyParser(text, ring).parse()


def as_polys(ring: PolyRing, items: Iterable) -> list[Polynomial]:
    return [ring(x) for x in items]
