"""Line-oriented problem description files.

A file is a sequence of sections; a section header is a bracketed kind
plus names, entries are ``key = value, value, ...`` lines.  Expression
values are double-quoted strings in the coefficient grammar; indices are
1-based.  ``#`` starts a comment.  Example::

    [base]
    vars = x, y

    [algebroid TM]
    rank = 2
    anchor 1 = "1", "0"
    anchor 2 = "0", "1"

    [bivector pi on TM]
    entry 1,2 = "x"

    [top-form lam on TM]
    coeff = "1"

Section kinds: base, algebroid, lie-algebra, subalgebra NAME of PARENT,
bivector/threeform/top-multivector/top-form NAME on ALGEBROID, volume,
morphism NAME from SRC to DST, cochain NAME on ALGEBROID, meta.  Unset
brackets and anchor entries default to zero; lie-algebra and subalgebra
entries must be rational constants.  Structural problems (syntax, unknown
names, dimension clashes) raise ProblemFileError with the line number;
mathematical failures (Jacobi, closure) are collected as issues so a
caller can report them as failed checks rather than unreadable input.

The full grammar is spelled out in docs/FILEFORMAT.md.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (CalculusError, ClosureError, ExprError, JacobiError,
                     ProblemFileError)
from .core import BundleMorphism, LieAlgebroid, tangent_algebroid
from .expr import parse_expr
from .exterior import FORM, MULTIVECTOR, GradedElement
from .liealg import LieAlgebraPresentation, SubalgebraInclusion, check_jacobi
from .modular import Cochain1
from .ratfunc import BaseContext, RatFunc

_GRADED_KINDS = ("bivector", "threeform", "top-multivector", "top-form")


@dataclass
class _Entry:
    line: int
    key: str
    indices: tuple[int, ...]
    values: list[str]


@dataclass
class _Section:
    line: int
    kind: str
    name: str = ""
    of: str = ""
    on: str = ""
    source: str = ""
    target: str = ""
    entries: list[_Entry] = field(default_factory=list)


def _parse_header(text: str, line: int) -> _Section:
    words = text.split()
    if not words:
        raise ProblemFileError("empty section header", line)
    kind = words[0]
    sec = _Section(line=line, kind=kind)
    rest = words[1:]
    if kind in ("base", "meta"):
        if rest:
            raise ProblemFileError(f"[{kind}] takes no name", line)
        return sec
    if kind in ("algebroid", "lie-algebra", "volume", "cochain") + _GRADED_KINDS:
        if not rest:
            raise ProblemFileError(f"[{kind}] needs a name", line)
        sec.name = rest[0]
        rest = rest[1:]
        if kind in _GRADED_KINDS + ("cochain",):
            if len(rest) != 2 or rest[0] != "on":
                raise ProblemFileError(f"[{kind} NAME on ALGEBROID] expected", line)
            sec.on = rest[1]
        elif rest:
            raise ProblemFileError(f"unexpected tokens after [{kind} {sec.name}]", line)
        return sec
    if kind == "subalgebra":
        if len(rest) != 3 or rest[1] != "of":
            raise ProblemFileError("[subalgebra NAME of PARENT] expected", line)
        sec.name, sec.of = rest[0], rest[2]
        return sec
    if kind == "morphism":
        if len(rest) != 5 or rest[1] != "from" or rest[3] != "to":
            raise ProblemFileError("[morphism NAME from SRC to DST] expected", line)
        sec.name, sec.source, sec.target = rest[0], rest[2], rest[4]
        return sec
    raise ProblemFileError(f"unknown section kind {kind!r}", line)


def _parse_entry(text: str, line: int) -> _Entry:
    if "=" not in text:
        raise ProblemFileError("entry needs '='", line)
    left, right = text.split("=", 1)
    words = left.split()
    if not words:
        raise ProblemFileError("entry needs a key", line)
    key = words[0]
    indices: tuple[int, ...] = ()
    if len(words) == 2:
        try:
            indices = tuple(int(tok) for tok in words[1].split(","))
        except ValueError:
            raise ProblemFileError(f"bad index list {words[1]!r}", line) from None
    elif len(words) > 2:
        raise ProblemFileError("too many tokens before '='", line)
    values = []
    for piece in _split_values(right.strip(), line):
        values.append(piece)
    return _Entry(line=line, key=key, indices=indices, values=values)


def _split_values(text: str, line: int) -> list[str]:
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace() or ch == ",":
            i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ProblemFileError("unterminated quoted value", line)
            out.append(text[i + 1:j])
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in ', \t':
                j += 1
            out.append(text[i:j])
            i = j
    return out


def parse_sections(text: str) -> list[_Section]:
    sections: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ProblemFileError("section header must end with ']'", lineno)
            sections.append(_parse_header(stripped[1:-1].strip(), lineno))
        else:
            if not sections:
                raise ProblemFileError("entry before any section header", lineno)
            sections[-1].entries.append(_parse_entry(stripped, lineno))
    return sections


@dataclass
class ProblemFile:
    """Fully resolved problem description."""

    ctx: BaseContext
    algebroids: dict[str, LieAlgebroid] = field(default_factory=dict)
    lie_algebras: dict[str, LieAlgebraPresentation] = field(default_factory=dict)
    subalgebras: dict[str, SubalgebraInclusion] = field(default_factory=dict)
    bivectors: dict[str, tuple[str, GradedElement]] = field(default_factory=dict)
    threeforms: dict[str, tuple[str, GradedElement]] = field(default_factory=dict)
    top_multivectors: dict[str, tuple[str, GradedElement]] = field(default_factory=dict)
    top_forms: dict[str, tuple[str, GradedElement]] = field(default_factory=dict)
    volumes: dict[str, GradedElement] = field(default_factory=dict)
    morphisms: dict[str, BundleMorphism] = field(default_factory=dict)
    morphism_endpoints: dict[str, tuple[str, str]] = field(default_factory=dict)
    cochains: dict[str, tuple[str, Cochain1]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)
    issues: list[tuple[str, str, str]] = field(default_factory=list)
    order: list[tuple[str, str]] = field(default_factory=list)

    def algebroid_like(self, name: str, line: int | None = None) -> LieAlgebroid:
        if name in self.algebroids:
            return self.algebroids[name]
        if name in self.lie_algebras:
            return self.lie_algebras[name].as_algebroid()
        if name in self.subalgebras:
            return self.subalgebras[name].induced.as_algebroid()
        raise ProblemFileError(f"unknown algebroid {name!r}", line)


def _expr(text: str, ctx: BaseContext, line: int) -> RatFunc:
    try:
        return parse_expr(text, ctx)
    except ExprError as ex:
        raise ProblemFileError(f"{ex} in expression {text!r}", line) from None


def _constant(text: str, line: int) -> Fraction:
    value = _expr(text, BaseContext(()), line)
    return value.constant_value()


def _unique(problem: ProblemFile, name: str, line: int):
    for table in (problem.algebroids, problem.lie_algebras, problem.subalgebras,
                  problem.bivectors, problem.threeforms, problem.top_multivectors,
                  problem.top_forms, problem.volumes, problem.morphisms,
                  problem.cochains):
        if name in table:
            raise ProblemFileError(f"name {name!r} is already in use", line)
    if any(name == broken for _, broken, _ in problem.issues):
        raise ProblemFileError(f"name {name!r} is already in use", line)


def build(sections: list[_Section]) -> ProblemFile:
    ctx = BaseContext(())
    base_seen = False
    for sec in sections:
        if sec.kind == "base":
            if base_seen:
                raise ProblemFileError("duplicate [base] section", sec.line)
            base_seen = True
            names: list[str] = []
            for entry in sec.entries:
                if entry.key != "vars":
                    raise ProblemFileError(f"unknown base key {entry.key!r}", entry.line)
                names.extend(entry.values)
            try:
                ctx = BaseContext(tuple(names))
            except ValueError as ex:
                raise ProblemFileError(str(ex), sec.line) from None
    problem = ProblemFile(ctx=ctx)

    for sec in sections:
        if sec.kind in ("base", "meta"):
            if sec.kind == "meta":
                for entry in sec.entries:
                    problem.meta[entry.key] = " ".join(entry.values)
            continue
        builder = _BUILDERS.get(sec.kind)
        builder(problem, sec)
        problem.order.append((sec.kind, sec.name))
    return problem


def _check_keys(sec: _Section, allowed: tuple[str, ...]):
    for entry in sec.entries:
        if entry.key not in allowed:
            raise ProblemFileError(
                f"unknown key {entry.key!r} in [{sec.kind} {sec.name}]", entry.line)


def _build_algebroid(problem: ProblemFile, sec: _Section):
    _unique(problem, sec.name, sec.line)
    _check_keys(sec, ("rank", "anchor", "bracket"))
    rank = None
    for entry in sec.entries:
        if entry.key == "rank":
            rank = int(entry.values[0])
    if rank is None or rank < 0:
        raise ProblemFileError(f"[algebroid {sec.name}] needs rank = <n>", sec.line)
    ctx = problem.ctx
    zero = RatFunc.zero(ctx)
    anchor = [[zero] * ctx.dim for _ in range(rank)]
    structure: dict[tuple[int, int], tuple] = {}
    for entry in sec.entries:
        if entry.key == "anchor":
            if len(entry.indices) != 1 or not 1 <= entry.indices[0] <= rank:
                raise ProblemFileError("anchor needs a frame index in 1..rank",
                                       entry.line)
            if len(entry.values) != ctx.dim:
                raise ProblemFileError(
                    f"anchor row needs {ctx.dim} entries, got {len(entry.values)}",
                    entry.line)
            anchor[entry.indices[0] - 1] = [
                _expr(v, ctx, entry.line) for v in entry.values]
        elif entry.key == "bracket":
            if len(entry.indices) != 2:
                raise ProblemFileError("bracket needs indices i,j", entry.line)
            i, j = entry.indices
            if not 1 <= i < j <= rank:
                raise ProblemFileError("bracket indices must satisfy 1 <= i < j <= rank",
                                       entry.line)
            if len(entry.values) != rank:
                raise ProblemFileError(
                    f"bracket needs {rank} components, got {len(entry.values)}",
                    entry.line)
            structure[(i - 1, j - 1)] = tuple(
                _expr(v, ctx, entry.line) for v in entry.values)
    problem.algebroids[sec.name] = LieAlgebroid(
        ctx, rank, tuple(tuple(row) for row in anchor), structure, name=sec.name)


def _build_lie_algebra(problem: ProblemFile, sec: _Section):
    _unique(problem, sec.name, sec.line)
    _check_keys(sec, ("dim", "bracket"))
    dim = None
    for entry in sec.entries:
        if entry.key == "dim":
            dim = int(entry.values[0])
    if dim is None or dim < 0:
        raise ProblemFileError(f"[lie-algebra {sec.name}] needs dim = <n>", sec.line)
    constants: dict[tuple[int, int], tuple[Fraction, ...]] = {}
    for entry in sec.entries:
        if entry.key != "bracket":
            continue
        if len(entry.indices) != 2:
            raise ProblemFileError("bracket needs indices i,j", entry.line)
        i, j = entry.indices
        if not 1 <= i < j <= dim:
            raise ProblemFileError("bracket indices must satisfy 1 <= i < j <= dim",
                                   entry.line)
        if len(entry.values) != dim:
            raise ProblemFileError(
                f"bracket needs {dim} components, got {len(entry.values)}", entry.line)
        constants[(i - 1, j - 1)] = tuple(_constant(v, entry.line)
                                          for v in entry.values)
    failures = check_jacobi(constants, dim)
    if failures:
        i, j, k, res = failures[0]
        problem.issues.append(
            ("lie-algebra", sec.name,
             f"Jacobi identity fails on triple ({i + 1},{j + 1},{k + 1}) with "
             f"residual {[str(r) for r in res]}"))
        return
    problem.lie_algebras[sec.name] = LieAlgebraPresentation(dim, constants,
                                                            name=sec.name)


def _build_subalgebra(problem: ProblemFile, sec: _Section):
    _unique(problem, sec.name, sec.line)
    _check_keys(sec, ("vector",))
    parent = None
    if sec.of in problem.lie_algebras:
        parent = problem.lie_algebras[sec.of]
    elif sec.of in problem.subalgebras:
        parent = problem.subalgebras[sec.of].induced
    elif any(sec.of == broken for _, broken, _ in problem.issues):
        problem.issues.append(("subalgebra", sec.name,
                               f"parent {sec.of!r} failed to build"))
        return
    else:
        raise ProblemFileError(f"unknown lie algebra {sec.of!r}", sec.line)
    vectors = []
    for entry in sec.entries:
        if len(entry.values) != parent.n:
            raise ProblemFileError(
                f"vector needs {parent.n} entries, got {len(entry.values)}",
                entry.line)
        vectors.append([_constant(v, entry.line) for v in entry.values])
    if not vectors:
        raise ProblemFileError(f"[subalgebra {sec.name}] needs vector entries",
                               sec.line)
    try:
        problem.subalgebras[sec.name] = SubalgebraInclusion(parent, vectors,
                                                            name=sec.name)
    except ClosureError as ex:
        problem.issues.append(("subalgebra", sec.name, str(ex)))


def _graded_degree(kind: str, rank: int) -> tuple[int, str]:
    if kind == "bivector":
        return 2, MULTIVECTOR
    if kind == "threeform":
        return 3, FORM
    if kind == "top-multivector":
        return rank, MULTIVECTOR
    return rank, FORM


def _build_graded(problem: ProblemFile, sec: _Section):
    _unique(problem, sec.name, sec.line)
    host = problem.algebroid_like(sec.on, sec.line)
    rank = host.rank
    degree, role = _graded_degree(sec.kind, rank)
    if degree > rank:
        raise ProblemFileError(
            f"[{sec.kind}] needs rank >= {degree}, algebroid {sec.on!r} has rank "
            f"{rank}", sec.line)
    terms = {}
    for entry in sec.entries:
        if sec.kind in ("bivector", "threeform"):
            if entry.key != "entry":
                raise ProblemFileError(f"unknown key {entry.key!r}", entry.line)
            idx = entry.indices
            if len(idx) != degree or sorted(set(idx)) != list(idx) \
                    or not all(1 <= i <= rank for i in idx):
                raise ProblemFileError(
                    f"entry needs {degree} strictly increasing indices in 1..{rank}",
                    entry.line)
            key = tuple(i - 1 for i in idx)
        else:
            if entry.key != "coeff":
                raise ProblemFileError(f"unknown key {entry.key!r}", entry.line)
            key = tuple(range(rank))
        if len(entry.values) != 1:
            raise ProblemFileError("exactly one expression expected", entry.line)
        terms[key] = _expr(entry.values[0], problem.ctx, entry.line)
    elem = GradedElement.from_terms(problem.ctx, rank, degree, role, terms)
    table = {"bivector": problem.bivectors, "threeform": problem.threeforms,
             "top-multivector": problem.top_multivectors,
             "top-form": problem.top_forms}[sec.kind]
    table[sec.name] = (sec.on, elem)


def _build_volume(problem: ProblemFile, sec: _Section):
    _unique(problem, sec.name, sec.line)
    _check_keys(sec, ("coeff",))
    tm = tangent_algebroid(problem.ctx)
    coeff = RatFunc.one(problem.ctx)
    for entry in sec.entries:
        if len(entry.values) != 1:
            raise ProblemFileError("exactly one expression expected", entry.line)
        coeff = _expr(entry.values[0], problem.ctx, entry.line)
    if tm.rank == 0:
        elem = GradedElement.scalar(problem.ctx, 0, FORM, coeff)
    else:
        elem = tm.dual_top_form(coeff)
    problem.volumes[sec.name] = elem


def _build_morphism(problem: ProblemFile, sec: _Section):
    _unique(problem, sec.name, sec.line)
    _check_keys(sec, ("col",))
    src = problem.algebroid_like(sec.source, sec.line)
    dst = problem.algebroid_like(sec.target, sec.line)
    zero = RatFunc.zero(problem.ctx)
    matrix = [[zero] * src.rank for _ in range(dst.rank)]
    for entry in sec.entries:
        if len(entry.indices) != 1 or not 1 <= entry.indices[0] <= src.rank:
            raise ProblemFileError("col needs a source frame index", entry.line)
        if len(entry.values) != dst.rank:
            raise ProblemFileError(
                f"col needs {dst.rank} entries, got {len(entry.values)}", entry.line)
        c = entry.indices[0] - 1
        for r, v in enumerate(entry.values):
            matrix[r][c] = _expr(v, problem.ctx, entry.line)
    problem.morphisms[sec.name] = BundleMorphism(
        src, dst, tuple(tuple(row) for row in matrix))
    problem.morphism_endpoints[sec.name] = (sec.source, sec.target)


def _build_cochain(problem: ProblemFile, sec: _Section):
    _unique(problem, sec.name, sec.line)
    _check_keys(sec, ("components",))
    host = problem.algebroid_like(sec.on, sec.line)
    comps = None
    for entry in sec.entries:
        if len(entry.values) != host.rank:
            raise ProblemFileError(
                f"components needs {host.rank} entries, got {len(entry.values)}",
                entry.line)
        comps = tuple(_expr(v, problem.ctx, entry.line) for v in entry.values)
    if comps is None:
        raise ProblemFileError(f"[cochain {sec.name}] needs components", sec.line)
    problem.cochains[sec.name] = (sec.on, Cochain1(host, comps))


_BUILDERS = {
    "algebroid": _build_algebroid,
    "lie-algebra": _build_lie_algebra,
    "subalgebra": _build_subalgebra,
    "bivector": _build_graded,
    "threeform": _build_graded,
    "top-multivector": _build_graded,
    "top-form": _build_graded,
    "volume": _build_volume,
    "morphism": _build_morphism,
    "cochain": _build_cochain,
}


def parse_problem(text: str) -> ProblemFile:
    return build(parse_sections(text))


def load_problem(path) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_problem(handle.read())


def render_problem(problem: ProblemFile) -> str:
    """Canonical text for a built problem; parse(render(p)) rebuilds p."""
    out = ["[base]", "vars = " + ", ".join(problem.ctx.vars), ""]
    if problem.meta:
        out.append("[meta]")
        for key in problem.meta:
            out.append(f"{key} = {problem.meta[key]}")
        out.append("")
    for kind, name in problem.order:
        if kind == "algebroid" and name in problem.algebroids:
            E = problem.algebroids[name]
            out.append(f"[algebroid {name}]")
            out.append(f"rank = {E.rank}")
            for i in range(E.rank):
                if E.ctx.dim:
                    row = ", ".join(f'"{c}"' for c in E.anchor[i])
                    out.append(f"anchor {i + 1} = {row}")
            for (i, j) in sorted(E.structure):
                row = ", ".join(f'"{c}"' for c in E.structure[(i, j)])
                out.append(f"bracket {i + 1},{j + 1} = {row}")
        elif kind == "lie-algebra" and name in problem.lie_algebras:
            g = problem.lie_algebras[name]
            out.append(f"[lie-algebra {name}]")
            out.append(f"dim = {g.n}")
            for (i, j) in sorted(g.constants):
                row = ", ".join(f'"{c}"' for c in g.constants[(i, j)])
                out.append(f"bracket {i + 1},{j + 1} = {row}")
        elif kind == "subalgebra" and name in problem.subalgebras:
            inc = problem.subalgebras[name]
            parent = next((pname for pname, p in problem.lie_algebras.items()
                           if p is inc.ambient),
                          next((pname for pname, s in problem.subalgebras.items()
                                if s.induced is inc.ambient), "?"))
            out.append(f"[subalgebra {name} of {parent}]")
            for vec in inc.basis:
                out.append("vector = " + ", ".join(f'"{v}"' for v in vec))
        elif kind in _GRADED_KINDS:
            table = {"bivector": problem.bivectors, "threeform": problem.threeforms,
                     "top-multivector": problem.top_multivectors,
                     "top-form": problem.top_forms}[kind]
            if name not in table:
                continue
            host, elem = table[name]
            out.append(f"[{kind} {name} on {host}]")
            if kind in ("bivector", "threeform"):
                for tup in sorted(elem.coeffs):
                    idx = ",".join(str(i + 1) for i in tup)
                    out.append(f'entry {idx} = "{elem.coeffs[tup]}"')
            else:
                coeff = elem.coefficient(tuple(range(elem.rank)))
                out.append(f'coeff = "{coeff}"')
        elif kind == "volume" and name in problem.volumes:
            elem = problem.volumes[name]
            out.append(f"[volume {name}]")
            full = tuple(range(elem.rank))
            coeff = elem.coefficient(full) if elem.rank else elem.as_scalar()
            out.append(f'coeff = "{coeff}"')
        elif kind == "morphism" and name in problem.morphisms:
            phi = problem.morphisms[name]
            src, dst = problem.morphism_endpoints[name]
            out.append(f"[morphism {name} from {src} to {dst}]")
            for c in range(phi.source.rank):
                col = ", ".join(f'"{phi.matrix[r][c]}"'
                                for r in range(phi.target.rank))
                out.append(f"col {c + 1} = {col}")
        elif kind == "cochain" and name in problem.cochains:
            host, xi = problem.cochains[name]
            out.append(f"[cochain {name} on {host}]")
            out.append("components = " +
                       ", ".join(f'"{c}"' for c in xi.components))
        else:
            continue
        out.append("")
    return "\n".join(out).rstrip() + "\n"
