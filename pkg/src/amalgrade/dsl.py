"""Instance files: one experiment per file.

Statements end with ``;``; ``#`` starts a comment.  Example::

    name "line duplication";
    ring A = QQ[x];
    ideal I in A = (x);
    amalgam R = duplication(A, I);
    family F in A = (0), (x), (x^2);
    check flat_integral(R, F) expect cm-over-family;

Statement forms::

    name "text";
    ring N = QQ[x, y] / (rel, ...);          # or Fp(32003)[...]; relations optional
    ideal N in RING = (poly, ...);
    map N : SRC -> TGT = (image, ...);
    module N over RING = free(r) | ideal(I) | quotient(I) | coker(r; (v1..vr), ...);
    amalgam N = duplication(A, I) | trivial_extension(A, M)
              | amalgam(A, B, f, J; gens=(...); mode=m1,m2; module_gens=(...);
                        basis=(...); trust=attested);
    family N in RING = maximal | monomial_sample(count, degree, seed) | (gens), (gens), ...;
    check KIND(arg, ...) expect VERDICT;

``RING`` may name an amalgam, meaning its built presentation.  Names must be
declared before use.  Parsing checks names, kinds and polynomial syntax;
building the objects happens in :func:`build_instance`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .fields import QQ, field_from_tag
from .poly import PolyRing, parse_polynomial

CHECK_KINDS = {
    # kind: argument kinds
    "cm": ("ring", "family"),
    "oracle": ("ring", "family"),
    "hypotheses": ("amalgam", "family"),
    "theorem_maximal": ("amalgam",),
    "theorem_nilpotent": ("amalgam", "family"),
    "grade_min": ("amalgam", "family"),
    "flat_integral": ("amalgam", "family"),
    "height_transfer": ("amalgam", "family"),
    "dimension": ("amalgam",),
    "generation": ("amalgam",),
}
AMALGAM_OPTIONS = ("gens", "mode", "module_gens", "basis", "trust")
_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"


@dataclass(frozen=True)
class Decl:
    kind: str
    name: str
    data: tuple  # sorted (key, value) pairs; values are str or tuples of str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def get(self, key, default=None):
        for k, v in self.data:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class InstanceFile:
    declarations: tuple
    name: str = ""
    path: str = field(default="", compare=False)

    @property
    def checks(self) -> list[Decl]:
        return [d for d in self.declarations if d.kind == "check"]

    def find(self, name: str) -> Decl:
        for d in self.declarations:
            if d.name == name and d.kind != "check":
                return d
        raise KeyError(name)


# -- lexical helpers ---------------------------------------------------------------------


def _strip_comments(text: str) -> str:
    out = []
    for line in text.split("\n"):
        in_str = False
        cut = len(line)
        for i, ch in enumerate(line):
            if ch == '"':
                in_str = not in_str
            elif ch == "#" and not in_str:
                cut = i
                break
        out.append(line[:cut] + " " * (len(line) - cut))
    return "\n".join(out)


def _statements(text: str) -> list[tuple[str, int, bool]]:
    """Split at top-level ``;``; returns (statement, start offset, terminated)."""
    out = []
    depth = 0
    in_str = False
    start = 0
    for i, ch in enumerate(text):
        if ch == '"':
            in_str = not in_str
        elif in_str:
            continue
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == ";" and depth == 0:
            out.append((text[start:i], start, True))
            start = i + 1
    tail = text[start:]
    if tail.strip():
        out.append((tail, start, False))
    return out


def _split_top(s: str, sep: str = ",") -> list[tuple[str, int]]:
    """Split ``s`` at top-level separators, keeping offsets of each (stripped) piece."""
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((s[start:i], start))
            start = i + 1
    parts.append((s[start:], start))
    out = []
    for piece, off in parts:
        lead = len(piece) - len(piece.lstrip())
        out.append((piece.strip(), off + lead))
    return out


def _norm(poly_text: str) -> str:
    return " ".join(poly_text.split())


class _Parser:
    def __init__(self, text: str, path: str = ""):
        self.src = text
        self.text = _strip_comments(text)
        self.path = path
        self.symbols: dict[str, Decl] = {}
        self.decls: list[Decl] = []
        self.meta_name = ""

    # positions
    def pos(self, offset: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def error(self, msg: str, offset: int):
        line, col = self.pos(offset)
        raise ParseError(msg, line, col)

    def parse(self) -> InstanceFile:
        for stmt, off, terminated in _statements(self.text):
            lead = len(stmt) - len(stmt.lstrip())
            body = stmt.strip()
            if not body:
                continue
            self.statement(body, off + lead)
            if not terminated:
                self.error("missing ';' after statement", off + len(stmt.rstrip()))
        if self.text.count("(") != self.text.count(")"):
            self.error("unbalanced parentheses", len(self.text.rstrip()))
        return InstanceFile(tuple(self.decls), self.meta_name, self.path)

    def statement(self, s: str, off: int) -> None:
        m = re.match(r"(\w+)\b", s)
        if not m:
            self.error(f"expected a statement, found {s[:20]!r}", off)
        kw = m.group(1)
        handler = getattr(self, f"st_{kw}", None)
        if handler is None:
            self.error(f"unknown statement {kw!r}", off)
        handler(s, off)

    # references
    def ref(self, name: str, kinds: tuple, off: int) -> Decl:
        d = self.symbols.get(name)
        if d is None:
            self.error(f"unknown name {name!r} (names must be declared before use)", off)
        if d.kind not in kinds:
            self.error(f"{name!r} is a {d.kind}, expected {' or '.join(kinds)}", off)
        return d

    def declare(self, kind: str, name: str, data: dict, off: int) -> Decl:
        if name in self.symbols:
            self.error(f"{name!r} is already declared", off)
        line, col = self.pos(off)
        d = Decl(kind, name, tuple(sorted(data.items())), line, col)
        self.symbols[name] = d
        self.decls.append(d)
        return d

    def ring_vars(self, ring_decl: Decl) -> PolyRing | None:
        if ring_decl.kind == "ring":
            return PolyRing(ring_decl.get("vars"), QQ)
        return None  # amalgam rings are only known after building

    def polys(self, s: str, off: int, ring: PolyRing | None) -> tuple:
        """Parse ``( p, ... )``; returns normalized texts."""
        s_strip = s.strip()
        lead = len(s) - len(s.lstrip())
        if not (s_strip.startswith("(") and s_strip.endswith(")")):
            self.error("expected a parenthesized list", off + lead)
        inner = s_strip[1:-1]
        if not inner.strip():
            return ()
        out = []
        for piece, poff in _split_top(inner):
            if not piece:
                self.error("empty list entry", off + lead + 1 + poff)
            if ring is not None:
                try:
                    parse_polynomial(piece, ring)
                except ParseError as e:
                    self.error(e.message, off + lead + 1 + poff + max(e.column - 1, 0))
            out.append(_norm(piece))
        return tuple(out)

    # statements
    def st_name(self, s: str, off: int) -> None:
        m = re.fullmatch(r'name\s+"([^"]*)"', s)
        if not m:
            self.error('expected: name "text"', off)
        self.meta_name = m.group(1)

    def st_ring(self, s: str, off: int) -> None:
        m = re.fullmatch(rf"ring\s+({_IDENT})\s*=\s*(QQ|Fp\(\s*\d+\s*\))\s*\[([^\]]*)\]\s*(?:/\s*(.*))?",
                         s, re.S)
        if not m:
            self.error("expected: ring NAME = QQ[vars] / (relations)", off)
        name, fld, vs, rels = m.groups()
        fld = fld.replace(" ", "")
        try:
            field_from_tag(fld)
        except Exception as e:  # bad prime
            self.error(str(e), off + m.start(2))
        names = tuple(v for v, _ in _split_top(vs)) if vs.strip() else ()
        for v, voff in _split_top(vs) if vs.strip() else []:
            if not re.fullmatch(_IDENT, v):
                self.error(f"bad variable name {v!r}", off + m.start(3) + voff)
        if len(set(names)) != len(names):
            self.error("duplicate variable names", off + m.start(3))
        relations = ()
        if rels is not None:
            relations = self.polys(rels, off + m.start(4), PolyRing(names, QQ))
        self.declare("ring", name, {"field": fld, "vars": names, "relations": relations}, off)

    def st_ideal(self, s: str, off: int) -> None:
        m = re.fullmatch(rf"ideal\s+({_IDENT})\s+in\s+({_IDENT})\s*=\s*(.*)", s, re.S)
        if not m:
            self.error("expected: ideal NAME in RING = (gens)", off)
        name, ring, gens = m.groups()
        rd = self.ref(ring, ("ring", "amalgam"), off + m.start(2))
        polys = self.polys(gens, off + m.start(3), self.ring_vars(rd))
        self.declare("ideal", name, {"ring": ring, "gens": polys}, off)

    def st_map(self, s: str, off: int) -> None:
        m = re.fullmatch(rf"map\s+({_IDENT})\s*:\s*({_IDENT})\s*->\s*({_IDENT})\s*=\s*(.*)", s, re.S)
        if not m:
            self.error("expected: map NAME : SRC -> TGT = (images)", off)
        name, src, tgt, ims = m.groups()
        sd = self.ref(src, ("ring",), off + m.start(2))
        td = self.ref(tgt, ("ring",), off + m.start(3))
        images = self.polys(ims, off + m.start(4), self.ring_vars(td))
        if len(images) != len(sd.get("vars")):
            self.error(f"map needs {len(sd.get('vars'))} images, got {len(images)}", off + m.start(4))
        self.declare("map", name, {"source": src, "target": tgt, "images": images}, off)

    def st_module(self, s: str, off: int) -> None:
        m = re.fullmatch(rf"module\s+({_IDENT})\s+over\s+({_IDENT})\s*=\s*(\w+)\s*\((.*)\)", s, re.S)
        if not m:
            self.error("expected: module NAME over RING = free(r) | ideal(I) | quotient(I) | coker(...)",
                       off)
        name, ring, ctor, args = m.groups()
        rd = self.ref(ring, ("ring",), off + m.start(2))
        aoff = off + m.start(4)
        data: dict = {"ring": ring, "ctor": ctor}
        if ctor == "free":
            if not args.strip().isdigit():
                self.error("free(r) needs a rank", aoff)
            data["rank"] = args.strip()
        elif ctor in ("ideal", "quotient"):
            d = self.ref(args.strip(), ("ideal",), aoff)
            if d.get("ring") != ring:
                self.error(f"ideal {args.strip()!r} is not in {ring!r}", aoff)
            data["ideal"] = args.strip()
        elif ctor == "coker":
            parts = _split_top(args, ";")
            if len(parts) != 2 or not parts[0][0].isdigit():
                self.error("coker(r; (v1, ..., vr), ...) expected", aoff)
            rank = int(parts[0][0])
            vecs = []
            if parts[1][0]:
                for piece, poff in _split_top(parts[1][0]):
                    v = self.polys(piece, aoff + parts[1][1] + poff, self.ring_vars(rd))
                    if len(v) != rank:
                        self.error(f"relation needs {rank} entries", aoff + parts[1][1] + poff)
                    vecs.append(v)
            data["rank"] = str(rank)
            data["relations"] = tuple(vecs)
        else:
            self.error(f"unknown module constructor {ctor!r}", off + m.start(3))
        self.declare("module", name, data, off)

    def st_amalgam(self, s: str, off: int) -> None:
        m = re.fullmatch(rf"amalgam\s+({_IDENT})\s*=\s*(\w+)\s*\((.*)\)", s, re.S)
        if not m:
            self.error("expected: amalgam NAME = duplication(...) | trivial_extension(...) | amalgam(...)",
                       off)
        name, ctor, args = m.groups()
        aoff = off + m.start(3)
        data: dict = {"ctor": ctor}
        if ctor in ("duplication", "trivial_extension"):
            parts = _split_top(args)
            if len(parts) != 2:
                self.error(f"{ctor}(A, X) takes two arguments", aoff)
            a = self.ref(parts[0][0], ("ring",), aoff + parts[0][1])
            second = "ideal" if ctor == "duplication" else "module"
            x = self.ref(parts[1][0], (second,), aoff + parts[1][1])
            if x.get("ring") != a.name:
                self.error(f"{x.name!r} does not live over {a.name!r}", aoff + parts[1][1])
            data["args"] = (parts[0][0], parts[1][0])
        elif ctor == "amalgam":
            sections = _split_top(args, ";")
            pos = _split_top(sections[0][0])
            if len(pos) != 4:
                self.error("amalgam(A, B, f, J; ...) takes four positional arguments", aoff)
            kinds = (("ring",), ("ring",), ("map",), ("ideal",))
            decls = [self.ref(p, k, aoff + po) for (p, po), k in zip(pos, kinds)]
            A, B, f, J = decls
            if f.get("source") != A.name or f.get("target") != B.name:
                self.error(f"map {f.name!r} must go from {A.name!r} to {B.name!r}", aoff + pos[2][1])
            if J.get("ring") != B.name:
                self.error(f"ideal {J.name!r} must live in {B.name!r}", aoff + pos[3][1])
            data["args"] = tuple(p for p, _ in pos)
            Bvars = self.ring_vars(B)
            for sec, soff in sections[1:]:
                mm = re.fullmatch(r"(\w+)\s*=\s*(.*)", sec, re.S)
                if not mm or mm.group(1) not in AMALGAM_OPTIONS:
                    self.error(f"unknown amalgam option {sec[:20]!r}", aoff + soff)
                key, val = mm.groups()
                voff = aoff + soff + mm.start(2)
                if key in ("gens", "module_gens", "basis"):
                    data[key] = self.polys(val, voff, Bvars)
                elif key == "mode":
                    modes = tuple(sorted(v for v, _ in _split_top(val)))
                    for v in modes:
                        if v not in ("module_finite", "algebra", "nilpotent"):
                            self.error(f"unknown mode {v!r}", voff)
                    data[key] = modes
                else:
                    if val.strip() not in ("verify", "attested"):
                        self.error("trust must be verify or attested", voff)
                    data[key] = val.strip()
            if "gens" not in data:
                self.error("amalgam(...) needs gens=(...)", aoff)
        else:
            self.error(f"unknown amalgam constructor {ctor!r}", off + m.start(2))
        self.declare("amalgam", name, data, off)

    def st_family(self, s: str, off: int) -> None:
        m = re.fullmatch(rf"family\s+({_IDENT})\s+in\s+({_IDENT})\s*=\s*(.*)", s, re.S)
        if not m:
            self.error("expected: family NAME in RING = ...", off)
        name, ring, body = m.groups()
        rd = self.ref(ring, ("ring", "amalgam"), off + m.start(2))
        boff = off + m.start(3)
        body = body.strip()
        data: dict = {"ring": ring}
        if body == "maximal":
            data["kind"] = "maximal"
        elif body.startswith("monomial_sample"):
            mm = re.fullmatch(r"monomial_sample\s*\(\s*([\d\s,]*)\)", body)
            if not mm:
                self.error("monomial_sample(count, degree, seed) expected", boff)
            nums = tuple(x.strip() for x in mm.group(1).split(",") if x.strip())
            if len(nums) > 3:
                self.error("monomial_sample takes at most three numbers", boff)
            data["kind"] = "monomial_sample"
            data["params"] = nums
        else:
            members = []
            for piece, poff in _split_top(body):
                if re.fullmatch(_IDENT, piece):
                    d = self.ref(piece, ("ideal",), boff + poff)
                    if d.get("ring") != ring:
                        self.error(f"ideal {piece!r} is not in {ring!r}", boff + poff)
                    members.append(("@" + piece,))
                else:
                    members.append(self.polys(piece, boff + poff, self.ring_vars(rd)))
            if not members:
                self.error("a family needs at least one ideal", boff)
            data["kind"] = "list"
            data["members"] = tuple(members)
        self.declare("family", name, data, off)

    def st_check(self, s: str, off: int) -> None:
        m = re.fullmatch(r"check\s+(\w+)\s*\(([^)]*)\)\s*(?:expect\s+([\w\-]+))?", s, re.S)
        if not m:
            self.error("expected: check KIND(args) expect VERDICT", off)
        kind, args, expect = m.groups()
        if kind not in CHECK_KINDS:
            self.error(f"unknown check {kind!r}", off + m.start(1))
        want = CHECK_KINDS[kind]
        parts = _split_top(args) if args.strip() else []
        if len(parts) != len(want):
            self.error(f"check {kind} takes {len(want)} arguments", off + m.start(2))
        aoff = off + m.start(2)
        for (p, po), w in zip(parts, want):
            kinds = {"ring": ("ring", "amalgam"), "family": ("family", "ideal"),
                     "amalgam": ("amalgam",)}[w]
            self.ref(p, kinds, aoff + po)
        line, col = self.pos(off)
        data = {"check": kind, "args": tuple(p for p, _ in parts)}
        if expect:
            data["expect"] = expect
        d = Decl("check", f"{kind}#{len(self.decls)}", tuple(sorted(data.items())), line, col)
        self.decls.append(d)


def parse_instance(text: str, path: str = "") -> InstanceFile:
    return _Parser(text, path).parse()


def parse_file(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), str(path))


# -- pretty printing -------------------------------------------------------------------


def _plist(items) -> str:
    return "(" + ", ".join(items) + ")"


def format_decl(d: Decl) -> str:
    g = d.get
    if d.kind == "ring":
        s = f"ring {d.name} = {g('field')}[{', '.join(g('vars'))}]"
        if g("relations"):
            s += " / " + _plist(g("relations"))
        return s + ";"
    if d.kind == "ideal":
        return f"ideal {d.name} in {g('ring')} = {_plist(g('gens'))};"
    if d.kind == "map":
        return f"map {d.name} : {g('source')} -> {g('target')} = {_plist(g('images'))};"
    if d.kind == "module":
        ctor = g("ctor")
        if ctor == "free":
            arg = g("rank")
        elif ctor == "coker":
            arg = g("rank") + "; " + ", ".join(_plist(v) for v in g("relations"))
        else:
            arg = g("ideal")
        return f"module {d.name} over {g('ring')} = {ctor}({arg});"
    if d.kind == "amalgam":
        ctor = g("ctor")
        args = ", ".join(g("args"))
        if ctor == "amalgam":
            for key in AMALGAM_OPTIONS:
                v = g(key)
                if v is None:
                    continue
                if key in ("gens", "module_gens", "basis"):
                    args += f"; {key}={_plist(v)}"
                elif key == "mode":
                    args += f"; mode={','.join(v)}"
                else:
                    args += f"; trust={v}"
        return f"amalgam {d.name} = {ctor}({args});"
    if d.kind == "family":
        kind = g("kind")
        if kind == "maximal":
            body = "maximal"
        elif kind == "monomial_sample":
            body = f"monomial_sample({', '.join(g('params'))})"
        else:
            body = ", ".join(m[0][1:] if m and m[0].startswith("@") else _plist(m)
                             for m in g("members"))
        return f"family {d.name} in {g('ring')} = {body};"
    s = f"check {g('check')}({', '.join(g('args'))})"
    if g("expect"):
        s += f" expect {g('expect')}"
    return s + ";"


def format_instance(inst: InstanceFile) -> str:
    lines = []
    if inst.name:
        lines.append(f'name "{inst.name}";')
    lines.extend(format_decl(d) for d in inst.declarations)
    return "\n".join(lines) + "\n"
