"""Numerical invariants: Koszul grade, Ext grade, Krull dimension, minimal primes, height.

Grades and heights are ints, with ``math.inf`` standing for the empty infimum
(unit ideal, ``aM = M``, empty support).  Minimal primes are only returned when
every prime carries a certificate; anything else raises :class:`NotDecidable`.

Primality certificates (all on the reduced lex basis of the ideal in the
cover ring): every leading monomial is a single variable, so the quotient is a
polynomial ring; or exactly one basis element has a non-variable leading
monomial, it lives in the remaining free variables, and it is irreducible over
the coefficient field, so the quotient is ``k[free]/(g)``.
"""

from __future__ import annotations

import math
from typing import Sequence

import sympy

from .errors import AmbientMismatch, InvalidInput, NotDecidable
from .modules import (FPModule, SubmoduleGB, homology, hom_complex, koszul_hom_complex,
                      quotient_module, syzygy_vectors, transpose, unit_vector)
from .poly import LEX, Polynomial
from .rings import (IdealHandle, RingPresentation, groebner_basis, intersection,
                    radical_contains, same_ambient)

INF = math.inf
NEG_INF = -math.inf


def format_value(v) -> int | str:
    if v == INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return int(v)


# -- grades ---------------------------------------------------------------------------


def _default_module(a: IdealHandle, M: FPModule | None) -> FPModule:
    if M is None:
        return FPModule(a.ring, 1)
    same_ambient(a.ring, M.ring)
    return M


def _is_aM_everything(xs: Sequence[Polynomial], M: FPModule) -> bool:
    gens = list(M.relations)
    for x in xs:
        for t in range(M.rank):
            gens.append({(t, e): c for e, c in x.terms.items()})
    return SubmoduleGB(M.ring, M.rank, gens).is_everything()


def koszul_grade(a: IdealHandle, M: FPModule | None = None):
    """Least ``i`` with ``H^i(Hom(K(x), M)) != 0`` for the given generators ``x`` of ``a``."""
    M = _default_module(a, M)
    xs = list(a.gens)
    if M.is_zero() or _is_aM_everything(xs, M):
        return INF
    C = koszul_hom_complex(xs, M)
    # H^l = M/aM is already known to be nonzero
    for i in range(len(xs)):
        if not homology(C, i).is_zero:
            return i
    return len(xs)


def koszul_cohomology_flags(a: IdealHandle, M: FPModule | None = None) -> list[bool]:
    """``[H^i != 0 for i in 0..l]`` computed without shortcuts."""
    M = _default_module(a, M)
    C = koszul_hom_complex(list(a.gens), M)
    return [not homology(C, i).is_zero for i in range(len(a.gens) + 1)]


def ext_grade(a: IdealHandle, M: FPModule | None = None, depth_limit: int | None = None):
    """Least ``i`` with ``Ext^i(R/a, M) != 0``, from a free resolution of ``R/a``."""
    M = _default_module(a, M)
    R = a.ring
    if a.is_unit():
        raise InvalidInput("ext_grade needs a proper ideal")
    if M.is_zero():
        raise InvalidInput("ext_grade needs a nonzero module")
    if depth_limit is None:
        depth_limit = 2 * R.nvars + 1
    Q = quotient_module(a)
    # d[k] maps F_{k+1} -> F_k, stored as columns in R^{rank F_k}
    ranks = [1]
    d: list[list] = []
    pending = list(Q.relations)
    for i in range(depth_limit + 1):
        while len(d) < i + 1:
            if pending:
                ranks.append(len(pending))
                d.append(pending)
                pending = syzygy_vectors(R, ranks[-2], pending)
            else:
                ranks.append(0)
                d.append([])
        if ranks[i] == 0:
            return INF
        # Hom(F_{i-1},M) -> Hom(F_i,M) -> Hom(F_{i+1},M)
        mats = []
        if i > 0:
            mats.append((ranks[i - 1], ranks[i], transpose(d[i - 1], ranks[i - 1])))
        mats.append((ranks[i], ranks[i + 1], transpose(d[i], ranks[i])))
        C = hom_complex(mats, M)
        if not homology(C, 1 if i > 0 else 0).is_zero:
            return i
    return INF


# -- dimension ------------------------------------------------------------------------


def minimal_transversals(sets: Sequence[frozenset]) -> list[frozenset]:
    """Minimal sets meeting every member of ``sets`` (Berge's algorithm)."""
    sets = _minimal_sets([frozenset(s) for s in sets])
    result = [frozenset()]
    for s in sorted(sets, key=lambda x: (len(x), sorted(x))):
        new = set()
        for T in result:
            if T & s:
                new.add(T)
            else:
                for v in s:
                    new.add(T | {v})
        result = _minimal_sets(list(new))
    return sorted(result, key=lambda x: (len(x), sorted(x)))


def _minimal_sets(sets: list[frozenset]) -> list[frozenset]:
    sets = sorted(set(sets), key=len)
    out: list[frozenset] = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def _lm_supports(gb: Sequence[Polynomial], order) -> list[frozenset]:
    return [frozenset(i for i, k in enumerate(g.leading_monomial(order)) if k) for g in gb]


def _dim_from_gb(gb: Sequence[Polynomial], nvars: int, order):
    if any(g.is_constant() for g in gb):
        return NEG_INF
    sups = _lm_supports(gb, order)
    if not sups:
        return nvars
    return nvars - min(len(T) for T in minimal_transversals(sups))


def krull_dim(R: RingPresentation):
    """Dimension of ``R`` from the leading-term ideal of its defining ideal."""
    return _dim_from_gb(R.gb, R.nvars, R.order)


def quotient_dim(I: IdealHandle):
    """``dim R/I``."""
    return _dim_from_gb(I.gb, I.ring.nvars, I.ring.order)


# -- primality --------------------------------------------------------------------------


def _to_sympy(f: Polynomial):
    gens = sympy.symbols(f.ring.names) if f.ring.nvars else ()
    p = f.ring.field.characteristic
    terms = {}
    for e, c in f.terms.items():
        fr = f.ring.field.to_fraction(c)
        terms[e] = sympy.Rational(fr.numerator, fr.denominator) if not p else int(c)
    if not gens:
        return None, gens
    if p:
        return sympy.Poly.from_dict(terms, *gens, modulus=p), gens
    return sympy.Poly.from_dict(terms, *gens, domain="QQ"), gens


def _from_sympy(h, ring, p: int) -> Polynomial:
    terms = {}
    for mon, c in h.as_dict().items():
        e = [0] * ring.nvars
        for g, m in zip(h.gens, mon):
            e[ring.names.index(str(g))] = m
        terms[tuple(e)] = ring.field(int(c)) if p else ring.field(str(sympy.Rational(c)))
    return Polynomial(ring, {e: c for e, c in terms.items() if c})


def factor_polynomial(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Irreducible factors (monic, with multiplicity) of a nonconstant polynomial.

    Over ``F_p`` several variables are handled by lifting to the integers,
    factoring there and certifying every reduced factor irreducible; a factor
    without a certificate raises :class:`NotDecidable`.
    """
    if f.is_constant():
        return []
    p = f.ring.field.characteristic
    if p and len(f.variables()) > 1:
        return _factor_mod_p_lifted(f)
    P, gens = _to_sympy(f)
    if p:
        used = sorted(f.variables())
        x = gens[used[0]]
        P = sympy.Poly(P.as_expr(), x, modulus=p)
    _, facs = P.factor_list()
    return [(_from_sympy(h, f.ring, p).monic(), k) for h, k in facs]


def _factor_mod_p_lifted(f: Polynomial) -> list[tuple[Polynomial, int]]:
    ring, field = f.ring, f.ring.field
    p = field.characteristic
    gens = sympy.symbols(ring.names)
    lifted = {e: sympy.Integer(int(field.format(c))) for e, c in f.terms.items()}
    Z = sympy.Poly.from_dict(lifted, *gens, domain="ZZ")
    _, facs = Z.factor_list()
    merged: dict = {}
    order: list = []
    for h, k in facs:
        hp = Polynomial(ring, {e: field(int(c)) for e, c in
                               ((tuple(_expand(h, m, ring)), c) for m, c in h.as_dict().items())
                               if field(int(c))})
        if hp.is_constant():
            continue
        hp = hp.monic()
        if not _certified_irreducible_mod_p(hp):
            raise NotDecidable(f"cannot certify irreducibility of {hp} over F_{p}")
        if hp not in merged:
            order.append(hp)
            merged[hp] = 0
        merged[hp] += k
    return [(h, merged[h]) for h in order]


def _expand(h, mon, ring) -> list[int]:
    e = [0] * ring.nvars
    for g, m in zip(h.gens, mon):
        e[ring.names.index(str(g))] = m
    return e


def _certified_irreducible_mod_p(h: Polynomial) -> bool:
    """Univariate check, or ``h = a*v + b`` with ``gcd(a, b) = 1``."""
    vs = sorted(h.variables())
    if len(vs) == 1:
        facs = factor_polynomial(h)
        return len(facs) == 1 and facs[0][1] == 1
    ring = h.ring
    p = ring.field.characteristic
    for v in vs:
        if max(e[v] for e in h.terms) != 1:
            continue
        a = Polynomial(ring, {e[:v] + (0,) + e[v + 1:]: c for e, c in h.terms.items() if e[v]})
        b = Polynomial(ring, {e: c for e, c in h.terms.items() if not e[v]})
        if not b or a.is_constant():
            if not b:
                continue  # h = a*v is reducible unless a is a unit
            return True
        A, gens = _to_sympy(a)
        B, _ = _to_sympy(b)
        g = sympy.gcd(A, B)
        if g.total_degree() == 0:
            return True
    return False


def is_irreducible(f: Polynomial) -> bool:
    facs = factor_polynomial(f)
    return len(facs) == 1 and facs[0][1] == 1


def prime_certificate(P: IdealHandle) -> str | None:
    """Name of a certificate proving ``P`` prime, or ``None`` if none applies."""
    G = groebner_basis(P, LEX)
    if not G:
        return "zero-ideal-of-polynomial-ring"
    if any(g.is_constant() for g in G):
        return None
    pivots = set()
    others = []
    for g in G:
        lm = g.leading_monomial(LEX)
        if sum(lm) == 1:
            pivots.add(lm.index(1))
        else:
            others.append(g)
    if not others:
        return "linear-triangular"
    if len(others) == 1:
        g = others[0]
        if g.variables() & pivots:
            return None
        try:
            if is_irreducible(g):
                return "hypersurface-irreducible"
        except NotDecidable:
            return None
    return None


def is_prime(P: IdealHandle) -> bool:
    """Certified primality; raises :class:`NotDecidable` when no certificate applies."""
    if P.is_unit():
        return False
    if prime_certificate(P):
        return True
    for g in P.gb:
        try:
            facs = factor_polynomial(g)
        except NotDecidable:
            continue
        if len(facs) > 1 or (facs and facs[0][1] > 1):
            # g = h1*h2 with neither factor in P (reduced basis) -> not prime;
            # g = h^k with h outside P -> not prime
            for h, _ in facs:
                if not P.contains(h):
                    return False
    raise NotDecidable(f"no primality certificate for {P}")


# -- minimal primes --------------------------------------------------------------------


def _monomial_minimal_primes(I: IdealHandle) -> list[IdealHandle]:
    R = I.ring
    sups = [frozenset(i for i, k in enumerate(next(iter(g.terms))) if k) for g in I.gb]
    return [R.ideal([R.gens[i] for i in sorted(T)]) for T in minimal_transversals(sups)]


def _minimalize(primes: list[IdealHandle]) -> list[IdealHandle]:
    uniq: list[IdealHandle] = []
    for P in primes:
        if not any(P == Q for Q in uniq):
            uniq.append(P)
    out = []
    for P in uniq:
        if not any(Q is not P and Q.issubset(P) for Q in uniq):
            out.append(P)
    return sorted(out, key=lambda P: (len(P.gb), [str(g) for g in P.gb]))


def _split_primes(I: IdealHandle, depth: int = 0) -> list[IdealHandle]:
    if I.is_unit():
        return []
    if I.is_monomial():
        return _monomial_minimal_primes(I)
    if prime_certificate(I):
        return [I]
    if depth > 64:
        raise NotDecidable("prime splitting did not terminate")
    for g in I.gb:
        try:
            facs = factor_polynomial(g)
        except NotDecidable:
            continue
        if len(facs) > 1 or (facs and facs[0][1] > 1):
            found = []
            for h, _ in facs:
                found.extend(_split_primes(I.with_gens(I.gens + (h,)), depth + 1))
            return _minimalize(found)
    raise NotDecidable(f"cannot certify the minimal primes of {I}")


def verify_decomposition(I: IdealHandle, claimed: Sequence[IdealHandle],
                         trusted: bool = False) -> list[IdealHandle]:
    """Check that ``claimed`` is exactly ``Min(I)``; return it or raise.

    ``trusted=True`` skips the primality certificates (for ideals that are
    prime by construction); containment, incomparability and the radical
    check still run.
    """
    claimed = list(claimed)
    if not claimed:
        raise NotDecidable("empty decomposition claimed")
    for P in claimed:
        same_ambient(P.ring, I.ring)
        if not I.issubset(P):
            raise InvalidInput(f"claimed prime {P} does not contain {I}")
        if not trusted and not prime_certificate(P):
            raise NotDecidable(f"claimed prime {P} has no primality certificate")
    for i, P in enumerate(claimed):
        for j, Q in enumerate(claimed):
            if i != j and P.issubset(Q):
                raise InvalidInput(f"claimed primes {P} and {Q} are comparable")
    inter = claimed[0]
    for P in claimed[1:]:
        inter = intersection(inter, P)
    for g in inter.gens:
        if not radical_contains(I, g):
            raise InvalidInput("claimed primes miss a component: their intersection "
                               "is not contained in the radical")
    return claimed


def minimal_primes(a: IdealHandle, decomposition: Sequence[IdealHandle] | None = None
                   ) -> list[IdealHandle]:
    """Minimal primes of ``a`` (as ideals of ``a.ring``), each one certified."""
    if a.is_unit():
        return []
    if decomposition is not None:
        return verify_decomposition(a, decomposition)
    if a.is_monomial():
        return _monomial_minimal_primes(a)
    return _split_primes(a)


def _zero_minimal_primes(R: RingPresentation) -> list[IdealHandle]:
    cached = R.__dict__.get("_min_zero")
    if cached is None:
        decomposition = R.__dict__.get("zero_decomposition")
        cached = minimal_primes(R.ideal(), decomposition)
        R.__dict__["_min_zero"] = cached
    return cached


def height_of_prime(P: IdealHandle, base: Sequence[IdealHandle]):
    """``max dim(R/Q) - dim(R/P)`` over ``Q`` in ``base`` below ``P``."""
    dP = quotient_dim(P)
    vals = [quotient_dim(Q) - dP for Q in base if Q.issubset(P)]
    if not vals:
        raise InvalidInput(f"{P} lies over no minimal prime")
    return max(vals)


def height(a: IdealHandle, decomposition: Sequence[IdealHandle] | None = None):
    """``ht a`` via minimal primes and the dimension formula in affine domains."""
    if a.is_unit():
        return INF
    primes = minimal_primes(a, decomposition)
    base = _zero_minimal_primes(a.ring)
    return min(height_of_prime(P, base) for P in primes)


def annihilator(M: FPModule) -> IdealHandle:
    R = M.ring
    if M.rank == 0:
        return R.ideal(1)
    one = R.field(1)
    ann = None
    for t in range(M.rank):
        syz = syzygy_vectors(R, M.rank, [unit_vector(t, R.nvars, one)], M.relations)
        gens = [Polynomial(R.cover, {e: c for (_, e), c in s.items()}) for s in syz]
        J = R.ideal(gens)
        ann = J if ann is None else intersection(ann, J)
    return ann


def height_on_module(a: IdealHandle, M: FPModule):
    """``ht_M a``: inf of ``dim M_p`` over ``p`` in ``Supp M ∩ V(a)``."""
    if a.ring != M.ring:
        raise AmbientMismatch("ideal and module over different rings")
    ann = annihilator(M)
    total = a.with_gens(a.gens + ann.gens)
    if total.is_unit():
        return INF
    primes = minimal_primes(total)
    base = minimal_primes(ann)
    return min(height_of_prime(P, base) for P in primes)
