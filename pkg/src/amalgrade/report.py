"""Build parsed instances into objects, run their checks, and serialize reports."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .amalgamation import AmalgamDatum, duplication, trivial_extension
from .checkers import (CMReport, IdealFamily, INAPPLICABLE, RESOURCE, UNDECIDED,
                       check_dimension_transfer, check_generation, check_height_transfer, check_hypotheses,
                       check_integral_flat_corollaries, check_lemma_grade_min, check_oracle,
                       check_theorem_maximal, check_theorem_nilpotent, cm_in_sense_of, reverify)
from .dsl import Decl, InstanceFile, parse_instance
from .errors import AmalgradeError, ParseError, ResourceError
from .fields import field_from_tag
from .groebner import kernel_session
from .modules import FPModule, free_module, ideal_as_module, quotient_module, vector
from .rings import IdealHandle, RingMap, RingPresentation

SCHEMA = 1
DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_RESOURCE = 3
EXIT_PARSE = 4


class InstanceError(AmalgradeError):
    """A declaration could not be built; carries the declaration's position."""

    def __init__(self, decl: Decl, err: Exception):
        self.decl = decl
        self.cause = err
        super().__init__(f"{decl.line}:{decl.column}: {decl.kind} {decl.name}: {err}")


@dataclass
class Env:
    objects: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.objects[name]

    def ring(self, name) -> RingPresentation:
        obj = self.objects[name]
        if isinstance(obj, AmalgamDatum):
            return obj.amalgam.presentation
        return obj


def _build_decl(d: Decl, env: Env, field_override, seed: int):
    g = d.get
    if d.kind == "ring":
        fld = field_override or field_from_tag(g("field"))
        return RingPresentation(g("vars"), fld, [_poly(p, g("vars"), fld) for p in g("relations")],
                                name=d.name)
    if d.kind == "ideal":
        R = env.ring(g("ring"))
        return R.ideal([R.cover(p) for p in g("gens")])
    if d.kind == "map":
        S, T = env[g("source")], env[g("target")]
        return RingMap(S, T, [T.cover(p) for p in g("images")], name=d.name)
    if d.kind == "module":
        R = env[g("ring")]
        ctor = g("ctor")
        if ctor == "free":
            return free_module(R, int(g("rank")))
        if ctor == "ideal":
            return ideal_as_module(env[g("ideal")])
        if ctor == "quotient":
            return quotient_module(env[g("ideal")])
        rels = [vector([R.cover(p) for p in v]) for v in g("relations")]
        return FPModule(R, int(g("rank")), rels, name=d.name)
    if d.kind == "amalgam":
        ctor = g("ctor")
        args = [env[a] for a in g("args")]
        if ctor == "duplication":
            return duplication(args[0], args[1], label=d.name)
        if ctor == "trivial_extension":
            return trivial_extension(args[0], args[1], label=d.name)
        A, B, f, J = args
        modes = g("mode") or ("algebra",)
        return AmalgamDatum(
            A, B, f, J, tuple(B.cover(p) for p in g("gens")), frozenset(modes),
            module_gens=tuple(B.cover(p) for p in g("module_gens")) if g("module_gens") else None,
            trust=g("trust") or "verify",
            free_basis=tuple(B.cover(p) for p in g("basis")) if g("basis") else None,
            label=d.name)
    if d.kind == "family":
        R = env.ring(g("ring"))
        kind = g("kind")
        if kind == "maximal":
            return IdealFamily.maximal_graded(R)
        if kind == "monomial_sample":
            nums = [int(x) for x in g("params")]
            defaults = [25, 3, seed]
            nums = nums + defaults[len(nums):]
            return IdealFamily.monomial_sample(R, nums[0], nums[1], nums[2])
        members = []
        for m in g("members"):
            if m and m[0].startswith("@"):
                members.append(env[m[0][1:]])
            else:
                members.append(R.ideal([R.cover(p) for p in m]))
        return IdealFamily.explicit(R, members)
    raise InstanceError(d, ValueError(f"unknown declaration kind {d.kind}"))


def _poly(text, names, fld):
    from .poly import PolyRing
    return PolyRing(names, fld)(text)


def build_instance(inst: InstanceFile, field=None, seed: int = DEFAULT_SEED) -> Env:
    env = Env()
    for d in inst.declarations:
        if d.kind == "check":
            continue
        try:
            env.objects[d.name] = _build_decl(d, env, field, seed)
        except ResourceError:
            raise
        except AmalgradeError as e:
            if isinstance(e, InstanceError):
                raise
            raise InstanceError(d, e) from e
    return env


def _as_family(obj, ring: RingPresentation) -> IdealFamily:
    if isinstance(obj, IdealFamily):
        return obj
    return IdealFamily.explicit(ring, [obj])


def run_check(d: Decl, env: Env, seed: int = DEFAULT_SEED) -> CMReport:
    kind = d.get("check")
    args = d.get("args")
    objs = [env[a] for a in args]
    if kind in ("cm", "oracle"):
        R = env.ring(args[0])
        F = _as_family(objs[1], R)
        fn = cm_in_sense_of if kind == "cm" else check_oracle
        rep = fn(R, F, subject=args[0])
    elif kind == "hypotheses":
        rep = check_hypotheses(objs[0], _as_family(objs[1], objs[0].A))
    elif kind == "theorem_maximal":
        rep = check_theorem_maximal(objs[0])
    elif kind == "theorem_nilpotent":
        rep = check_theorem_nilpotent(objs[0], _as_family(objs[1], objs[0].A))
    elif kind == "grade_min":
        rep = _grade_min_family(objs[0], _as_family(objs[1], objs[0].A))
    elif kind == "flat_integral":
        rep = check_integral_flat_corollaries(objs[0], _as_family(objs[1], objs[0].A))
    elif kind == "height_transfer":
        rep = check_height_transfer(objs[0], _as_family(objs[1], objs[0].A))
    elif kind == "dimension":
        rep = check_dimension_transfer(objs[0])
    elif kind == "generation":
        rep = check_generation(objs[0])
    else:
        raise InstanceError(d, ValueError(f"unknown check {kind}"))
    return reverify(rep, seed)


def _grade_min_family(d: AmalgamDatum, F: IdealFamily) -> CMReport:
    parts = [check_lemma_grade_min(d, b) for b in F.members]
    rows = [r for p in parts for r in p.rows]
    verdicts = [p.verdict for p in parts]
    for v in ("fails", RESOURCE, UNDECIDED, INAPPLICABLE):
        if v in verdicts:
            verdict = v
            break
    else:
        verdict = "holds"
    witness = next((p.witness for p in parts if p.witness), None)
    notes = sorted({n for p in parts for n in p.notes})
    return CMReport("grade_min", d.label, rows, verdict, witness=witness, notes=notes)


# -- instance runs -----------------------------------------------------------------------


@dataclass
class InstanceResult:
    name: str
    path: str
    checks: list = field(default_factory=list)
    status: str = "ok"  # ok | mismatch | resource | parse-error | error
    error: str = ""
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        return {"ok": EXIT_OK, "mismatch": EXIT_MISMATCH, "resource": EXIT_RESOURCE,
                "parse-error": EXIT_PARSE, "error": EXIT_MISMATCH}[self.status]

    def to_dict(self) -> dict:
        out = {"instance": self.name, "file": Path(self.path).name if self.path else "",
               "status": self.status, "checks": self.checks, "kernel": self.stats}
        if self.error:
            out["error"] = self.error
        return out


def run_instance(text: str, path: str = "", field=None, seed: int = DEFAULT_SEED,
                 budget: int | None = None) -> InstanceResult:
    t0 = time.perf_counter()
    name = Path(path).stem if path else "instance"
    try:
        inst = parse_instance(text, path)
    except ParseError as e:
        return InstanceResult(name, path, status="parse-error", error=str(e))
    name = inst.name or name
    res = InstanceResult(name, path)
    with kernel_session(budget) as sess:
        try:
            env = build_instance(inst, field, seed)
            for d in inst.checks:
                try:
                    rep = run_check(d, env, seed)
                except ResourceError as e:
                    rep = CMReport(d.get("check"), ",".join(d.get("args")), [], RESOURCE,
                                   notes=[str(e)])
                entry = rep.to_dict()
                entry["line"] = d.line
                want = d.get("expect")
                if want is not None:
                    entry["expect"] = want
                    entry["matched"] = rep.verdict == want
                res.checks.append(entry)
        except ResourceError as e:
            res.status = "resource"
            res.error = str(e)
        except AmalgradeError as e:
            res.status = "error"
            res.error = str(e)
        res.stats = sess.stats()
    if res.status == "ok":
        if any(c["verdict"] == RESOURCE for c in res.checks):
            res.status = "resource"
        elif any(c.get("matched") is False or c["verdict"] == "inconsistent" for c in res.checks):
            res.status = "mismatch"
    res.seconds = time.perf_counter() - t0
    return res


@dataclass
class RunReport:
    results: list
    seed: int
    field: str
    total_seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        codes = {r.exit_code for r in self.results}
        for c in (EXIT_PARSE, EXIT_RESOURCE, EXIT_MISMATCH):
            if c in codes:
                return c
        return EXIT_OK

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "tool": "amalgrade",
            "version": __version__,
            "seed": self.seed,
            "field": self.field,
            "instances": [r.to_dict() for r in self.results],
            "timing": {"total_seconds": round(self.total_seconds, 4),
                       "instances": {r.name: round(r.seconds, 4) for r in self.results}},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def run_files(paths, field_tag: str | None = None, seed: int = DEFAULT_SEED,
              budget: int | None = None, jobs: int = 1) -> RunReport:
    fld = field_from_tag(field_tag) if field_tag else None
    items = []
    for p in paths:
        p = Path(p)
        items.append((p.read_text(encoding="utf-8"), str(p)))
    return _run_items(items, fld, field_tag or "as-declared", seed, budget, jobs)


def _run_items(items, fld, field_label, seed, budget, jobs) -> RunReport:
    t0 = time.perf_counter()

    def one(item):
        text, path = item
        return run_instance(text, path, fld, seed, budget)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(one, items))
    else:
        results = [one(it) for it in items]
    results.sort(key=lambda r: (r.name, r.path))
    return RunReport(results, seed, field_label, time.perf_counter() - t0)


def corpus_paths() -> list[Path]:
    root = resources.files("amalgrade") / "corpus"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".amg"))


def run_corpus(field_tag: str | None = None, seed: int = DEFAULT_SEED, budget: int | None = None,
               jobs: int = 1) -> RunReport:
    return run_files(corpus_paths(), field_tag, seed, budget, jobs)


def strip_timing(doc: dict) -> dict:
    """Report without its timing block, for determinism comparisons."""
    return {k: v for k, v in doc.items() if k != "timing"}
