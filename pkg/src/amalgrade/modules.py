"""Finitely presented modules, module maps, complexes and their homology.

Module elements are sparse vectors ``{(pos, exps): coeff}`` over the cover
ring, interpreted modulo the defining ideal of the base ring and the relation
submodule.  Submodule bases use a position-over-term extension of the ring
order; syzygies come from the usual trick of appending unit vectors in extra
positions and eliminating the original ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .errors import AmbientMismatch, InvalidInput
from .groebner import Reducer, Vec, groebner_vectors, pot_key
from .poly import Polynomial
from .rings import IdealHandle, RingPresentation, same_ambient

# -- vector helpers -----------------------------------------------------------------


def vector(polys: Sequence[Polynomial]) -> Vec:
    """Sparse vector from a sequence of cover-ring polynomials."""
    out = {}
    for i, f in enumerate(polys):
        for e, c in f.terms.items():
            out[(i, e)] = c
    return out


def unit_vector(i: int, nvars: int, one) -> Vec:
    return {(i, (0,) * nvars): one}


def vector_to_polys(v: Vec, rank: int, R: RingPresentation) -> tuple:
    comps: list[dict] = [{} for _ in range(rank)]
    for (i, e), c in v.items():
        comps[i][e] = c
    return tuple(Polynomial(R.cover, d) for d in comps)


def vec_add(a: Vec, b: Vec, p: int, scale=1) -> Vec:
    out = dict(a)
    for t, c in b.items():
        v = out.get(t, 0) + scale * c
        if p:
            v %= p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def vec_mul_poly(v: Vec, f: dict, p: int) -> Vec:
    out: dict = {}
    for (i, e), c in v.items():
        for e2, c2 in f.items():
            t = (i, tuple(a + b for a, b in zip(e, e2)))
            out[t] = out.get(t, 0) + c * c2
    if p:
        return {t: c % p for t, c in out.items() if c % p}
    return {t: c for t, c in out.items() if c}


def vec_reindex(v: Vec, fn) -> Vec:
    return {(fn(i), e): c for (i, e), c in v.items()}


def combine(columns: Sequence[Vec], coeffs: Vec, p: int) -> Vec:
    """``Σ coeffs_j · columns_j`` where ``coeffs`` is a vector indexed by column."""
    by_col: dict[int, dict] = {}
    for (j, e), c in coeffs.items():
        by_col.setdefault(j, {})[e] = c
    out: Vec = {}
    for j, f in by_col.items():
        out = vec_add(out, vec_mul_poly(columns[j], f, p), p)
    return out


def reduce_mod_ring(v: Vec, R: RingPresentation) -> Vec:
    """Reduce every component modulo the defining ideal."""
    if not R.relations or not v:
        return v
    comps: dict[int, dict] = {}
    for (i, e), c in v.items():
        comps.setdefault(i, {})[(0, e)] = c
    out = {}
    for i, d in comps.items():
        for (_, e), c in R._reducer.reduce(d).items():
            out[(i, e)] = c
    return out


# -- submodules ---------------------------------------------------------------------


class SubmoduleGB:
    """Groebner basis of ``span(gens) + I·R^rank`` with a normal-form reducer."""

    def __init__(self, R: RingPresentation, rank: int, gens: Sequence[Vec]):
        self.ring = R
        self.rank = rank
        key = pot_key(R.order)
        p = R.field.characteristic
        allgens = [g for g in gens if g]
        for g in R.gb:
            for i in range(rank):
                allgens.append({(i, e): c for e, c in g.terms.items()})
        self.basis = groebner_vectors(allgens, key, p)
        self._red = Reducer(self.basis, key, p)

    def reduce(self, v: Vec) -> Vec:
        return self._red.reduce(v)

    def contains(self, v: Vec) -> bool:
        return not self._red.reduce(v)

    def is_everything(self) -> bool:
        units = {next(iter(g))[0] for g in self.basis if len(g) == 1 and not any(next(iter(g))[1])}
        return len(units) == self.rank


def syzygy_vectors(R: RingPresentation, rank: int, columns: Sequence[Vec],
                   relations: Sequence[Vec] = ()) -> list[Vec]:
    """Generators of ``{a ∈ R^k : Σ a_j columns_j ∈ span(relations)}`` (k = len(columns))."""
    k = len(columns)
    if k == 0:
        return []
    p = R.field.characteristic
    nv = R.nvars
    one = R.field(1)
    gens = []
    for j, col in enumerate(columns):
        g = dict(col)
        g[(rank + j, (0,) * nv)] = one
        gens.append(g)
    gens.extend(r for r in relations if r)
    for g in R.gb:
        for i in range(rank):
            gens.append({(i, e): c for e, c in g.terms.items()})
    G = groebner_vectors(gens, pot_key(R.order), p)
    key = pot_key(R.order)
    out = []
    for g in G:
        lead = max(g, key=key)
        if lead[0] < rank:
            continue
        s = reduce_mod_ring({(i - rank, e): c for (i, e), c in g.items()}, R)
        if s and s not in out:
            out.append(s)
    return out


# -- finitely presented modules -----------------------------------------------------


class FPModule:
    """``R^rank / span(relations)`` over a presented ring."""

    def __init__(self, ring: RingPresentation, rank: int, relations: Sequence = (),
                 name: str | None = None):
        if rank < 0:
            raise InvalidInput("rank must be non-negative")
        self.ring = ring
        self.rank = rank
        self.name = name
        rels = []
        for r in relations:
            v = r if isinstance(r, dict) else vector([ring.cover(x) for x in r])
            if any(i >= rank for i, _ in v):
                raise AmbientMismatch(f"relation has more than {rank} components")
            v = reduce_mod_ring(v, ring)
            if v and v not in rels:
                rels.append(v)
        self.relations = rels

    def __repr__(self):
        if not self.relations:
            return f"FPModule({self.ring}^{self.rank})"
        cols = ["(" + ", ".join(str(x) for x in vector_to_polys(r, self.rank, self.ring)) + ")"
                for r in self.relations]
        return f"FPModule({self.ring}^{self.rank} / <{', '.join(cols)}>)"

    def is_free(self) -> bool:
        return not self.relations

    @cached_property
    def relation_gb(self) -> SubmoduleGB:
        return SubmoduleGB(self.ring, self.rank, self.relations)

    def is_zero(self) -> bool:
        return self.rank == 0 or self.relation_gb.is_everything()

    def relation_columns(self) -> list[tuple]:
        return [vector_to_polys(r, self.rank, self.ring) for r in self.relations]

    def element(self, polys) -> Vec:
        if len(polys) != self.rank:
            raise AmbientMismatch(f"expected {self.rank} components")
        return vector([self.ring.cover(x) for x in polys])

    def generator(self, i: int) -> Vec:
        return unit_vector(i, self.ring.nvars, self.ring.field(1))


def free_module(R: RingPresentation, rank: int) -> FPModule:
    return FPModule(R, rank)


def quotient_module(I: IdealHandle) -> FPModule:
    """``R/I`` as a cyclic module."""
    return FPModule(I.ring, 1, [[g] for g in I.gens])


def ideal_as_module(I: IdealHandle) -> FPModule:
    """``I`` presented on its generators by their syzygies."""
    R = I.ring
    cols = [vector([g]) for g in I.gens]
    return FPModule(R, len(cols), syzygy_vectors(R, 1, cols))


def direct_sum(*mods: FPModule) -> FPModule:
    if not mods:
        raise InvalidInput("direct sum of nothing")
    R = mods[0].ring
    rels = []
    offset = 0
    for M in mods:
        same_ambient(M.ring, R)
        rels.extend(vec_reindex(r, lambda i, o=offset: i + o) for r in M.relations)
        offset += M.rank
    return FPModule(R, offset, rels)


def module_power(M: FPModule, a: int) -> FPModule:
    """``M^a``; block ``j`` occupies positions ``j*rank .. j*rank+rank-1``."""
    r = M.rank
    rels = [vec_reindex(n, lambda i, j=j: j * r + i) for j in range(a) for n in M.relations]
    return FPModule(M.ring, a * r, rels)


class ModuleMap:
    """Homomorphism given by the images (columns) of the source generators."""

    def __init__(self, source: FPModule, target: FPModule, columns: Sequence, check: bool = True):
        same_ambient(source.ring, target.ring)
        if len(columns) != source.rank:
            raise AmbientMismatch(f"need {source.rank} columns, got {len(columns)}")
        cols = []
        for c in columns:
            v = c if isinstance(c, dict) else target.element(c)
            if any(i >= target.rank for i, _ in v):
                raise AmbientMismatch("column exceeds target rank")
            cols.append(reduce_mod_ring(v, source.ring))
        self.source = source
        self.target = target
        self.columns = cols
        if check:
            for n in source.relations:
                if not target.relation_gb.contains(self.apply(n)):
                    raise InvalidInput("module map is not well defined on relations")

    def apply(self, v: Vec) -> Vec:
        return reduce_mod_ring(combine(self.columns, v, self.source.ring.field.characteristic),
                               self.source.ring)

    def kernel_generators(self) -> list[Vec]:
        """Elements of the source cover whose image vanishes in the target."""
        return syzygy_vectors(self.source.ring, self.target.rank, self.columns,
                              self.target.relations)

    def is_zero(self) -> bool:
        return all(self.target.relation_gb.contains(c) for c in self.columns)


def tensor_matrix(columns: Sequence[Vec], M: FPModule) -> list[Vec]:
    """Columns of ``A ⊗ id_M`` for an R-matrix ``A`` given by its columns."""
    r = M.rank
    out = []
    for col in columns:
        for t in range(r):
            out.append({(q * r + t, e): c for (q, e), c in col.items()})
    return out


# -- complexes ----------------------------------------------------------------------


@dataclass
class FiniteComplex:
    """Modules ``C_0..C_l`` with maps between neighbours.

    ``cohomological=True``: ``maps[i]: C_i -> C_{i+1}``; otherwise
    ``maps[i]: C_{i+1} -> C_i``.
    """

    modules: list
    maps: list
    cohomological: bool = True

    def __post_init__(self):
        if len(self.maps) != max(len(self.modules) - 1, 0):
            raise InvalidInput("a complex with l+1 modules needs l maps")
        for i, f in enumerate(self.maps):
            src, tgt = (i, i + 1) if self.cohomological else (i + 1, i)
            if f.source is not self.modules[src] or f.target is not self.modules[tgt]:
                raise InvalidInput(f"map {i} does not connect the right modules")

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def outgoing(self, i: int):
        if self.cohomological:
            return self.maps[i] if i < len(self.maps) else None
        return self.maps[i - 1] if i > 0 else None

    def incoming(self, i: int):
        if self.cohomological:
            return self.maps[i - 1] if i > 0 else None
        return self.maps[i] if i < len(self.maps) else None

    def check(self) -> bool:
        """True iff consecutive composites are zero maps."""
        for i in range(len(self.maps) - 1):
            first, second = (self.maps[i], self.maps[i + 1]) if self.cohomological \
                else (self.maps[i + 1], self.maps[i])
            for c in first.columns:
                if not second.target.relation_gb.contains(second.apply(c)):
                    return False
        return True


@dataclass
class Homology:
    is_zero: bool
    kernel: list
    nonzero_classes: list
    boundaries: list = field(default_factory=list)
    ambient: FPModule | None = None

    def module(self) -> FPModule:
        """Presentation of ker/im on the kernel generators."""
        M = self.ambient
        R = M.ring
        rels = syzygy_vectors(R, M.rank, self.kernel, list(self.boundaries) + M.relations)
        return FPModule(R, len(self.kernel), rels)


def homology(C: FiniteComplex, i: int) -> Homology:
    """Homology at ``C_i``; zero-ness decided by image membership of kernel generators."""
    if not 0 <= i < len(C.modules):
        raise IndexError(f"index {i} outside 0..{C.length}")
    M = C.modules[i]
    out = C.outgoing(i)
    inc = C.incoming(i)
    if M.rank == 0:
        return Homology(True, [], [], [], M)
    one = M.ring.field(1)
    if out is None:
        kernel = [unit_vector(t, M.ring.nvars, one) for t in range(M.rank)]
    else:
        kernel = out.kernel_generators()
    boundaries = list(inc.columns) if inc is not None else []
    if not kernel:
        return Homology(True, [], [], boundaries, M)
    U = SubmoduleGB(M.ring, M.rank, boundaries + M.relations)
    nonzero = [k for k in kernel if not U.contains(k)]
    return Homology(not nonzero, kernel, nonzero, boundaries, M)


# -- constructions ------------------------------------------------------------------


def koszul_matrices(xs: Sequence[Polynomial]) -> list[tuple[int, int, list[Vec]]]:
    """Cohomological Koszul differentials ``R^{C(l,i)} -> R^{C(l,i+1)}`` as columns."""
    l = len(xs)
    subsets = [list(combinations(range(l), i)) for i in range(l + 1)]
    index = [{S: n for n, S in enumerate(level)} for level in subsets]
    mats = []
    for i in range(l):
        cols = []
        for S in subsets[i]:
            col: Vec = {}
            for j in range(l):
                if j in S:
                    continue
                sign = -1 if sum(1 for s in S if s < j) % 2 else 1
                T = tuple(sorted(S + (j,)))
                pos = index[i + 1][T]
                for e, c in xs[j].terms.items():
                    col[(pos, e)] = c if sign > 0 else -c
            cols.append(col)
        mats.append((len(subsets[i]), len(subsets[i + 1]), cols))
    return mats


def hom_complex(mats: Sequence[tuple[int, int, list[Vec]]], M: FPModule,
                rank0: int | None = None) -> FiniteComplex:
    """Cochain complex ``M^{a_0} -> M^{a_1} -> ...`` from R-matrices ``a_i -> a_{i+1}``."""
    p = M.ring.field.characteristic
    if mats:
        ranks = [mats[0][0]] + [m[1] for m in mats]
    else:
        ranks = [rank0 if rank0 is not None else 1]
    modules = [module_power(M, a) for a in ranks]
    maps = []
    for i, (_, _, cols) in enumerate(mats):
        tcols = tensor_matrix([_normalize(c, p) for c in cols], M)
        maps.append(ModuleMap(modules[i], modules[i + 1], tcols, check=False))
    return FiniteComplex(modules, maps, cohomological=True)


def _normalize(v: Vec, p: int) -> Vec:
    if p:
        return {t: c % p for t, c in v.items() if c % p}
    return v


def koszul_hom_complex(xs: Sequence[Polynomial], M: FPModule) -> FiniteComplex:
    """``Hom(K_•(x), M)`` written as ``M^{C(l,0)} -> M^{C(l,1)} -> ...``."""
    for x in xs:
        if x.ring != M.ring.cover:
            raise AmbientMismatch("Koszul generators must live in the module's ring")
    return hom_complex(koszul_matrices(xs), M, rank0=1)


def free_resolution_steps(M: FPModule, depth_limit: int) -> FiniteComplex:
    """Free resolution ``F_0 <- F_1 <- ...`` truncated after ``depth_limit`` maps."""
    if depth_limit < 1:
        raise InvalidInput("depth_limit must be at least 1")
    R = M.ring
    mods = [FPModule(R, M.rank)]
    maps = []
    cols = list(M.relations)
    rank = M.rank
    while cols and len(maps) < depth_limit:
        F = FPModule(R, len(cols))
        maps.append(ModuleMap(F, mods[-1], cols, check=False))
        mods.append(F)
        cols = syzygy_vectors(R, rank, cols)
        rank = F.rank
    return FiniteComplex(mods, maps, cohomological=False)


def transpose(cols: Sequence[Vec], nrows: int) -> list[Vec]:
    """Columns of the transpose of a matrix with ``nrows`` rows given by columns."""
    out: list[Vec] = [{} for _ in range(nrows)]
    for j, col in enumerate(cols):
        for (i, e), c in col.items():
            out[i][(j, e)] = c
    return out


def syzygies(gens: Sequence, M: FPModule) -> FPModule:
    """Kernel of ``R^k -> M`` sending ``e_j`` to ``gens[j]``, presented on its generators.

    The generators themselves (as vectors of ``R^k``) are kept in ``.embedding``.
    """
    cols = [g if isinstance(g, dict) else M.element(g) for g in gens]
    for c in cols:
        if any(i >= M.rank for i, _ in c):
            raise AmbientMismatch("element outside the module's free cover")
    K = syzygy_vectors(M.ring, M.rank, cols, M.relations)
    second = syzygy_vectors(M.ring, len(cols), K) if K else []
    S = FPModule(M.ring, len(K), second)
    S.embedding = [vector_to_polys(k, len(cols), M.ring) for k in K]
    return S
