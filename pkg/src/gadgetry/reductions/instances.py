"""Problem-instance types and their text formats.

Five input languages are supported.  All are line-based; blank lines and
lines starting with ``c`` or ``#`` are comments.  Parse errors raise
:class:`~gadgetry.errors.MalformedDocument` with a 1-based line number;
structural violations (bad degrees, unknown ids, wrong color counts)
raise :class:`~gadgetry.errors.InvalidInstance`.

Constraint-graph format (``parse_ncl``)::

    vertex <id> <and|or|free>
    edge <id> <u> <v> <red|blue> <head>
    target <edge-id>

An edge points at its ``head`` endpoint.  ``and`` vertices must have
exactly one incident blue and two incident red edges, ``or`` vertices
exactly three incident blue edges; ``free`` vertices are unconstrained
and carry no legality requirement.  Parallel edges and self-loops are
permitted (the graph is a multigraph).

Two-player constraint-graph format (``parse_2cl``) is identical except
every edge line carries an owner color and there are two targets::

    edge <id> <u> <v> <red|blue> <head> <white|black>
    target white <edge-id>
    target black <edge-id>

CNF (``parse_dimacs``) is standard DIMACS: a ``p cnf <vars> <clauses>``
header followed by zero-terminated clauses.

QBF (``parse_qdimacs``) is QDIMACS: DIMACS plus ``e``/``a`` quantifier
lines between the header and the clauses.  Every variable must be
quantified exactly once.

DQBF (``parse_dqbf``) accepts only the two-block dependency form::

    p dqbf <vars> <clauses>
    a <x1 vars> 0
    a <x2 vars> 0
    e <y1 vars> 0
    e <y2 vars> 0
    <clauses>

where the first existential block depends on the first universal block
only and the second on the second only.  Any other quantifier shape
raises :class:`~gadgetry.errors.WrongForm`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..errors import InvalidInstance, MalformedDocument, WrongForm

RED, BLUE = "red", "blue"
VERTEX_KINDS = ("and", "or", "free")


def _weight(color: str) -> int:
    return 1 if color == RED else 2


@dataclass(frozen=True)
class NCLEdge:
    """An edge of a constraint graph, directed at ``head``."""

    id: str
    u: str
    v: str
    color: str
    head: str

    def __post_init__(self) -> None:
        if self.color not in (RED, BLUE):
            raise InvalidInstance(
                f"edge {self.id!r}: color must be red or blue, got {self.color!r}")
        if self.head not in (self.u, self.v):
            raise InvalidInstance(
                f"edge {self.id!r}: head {self.head!r} is not an endpoint")

    @property
    def weight(self) -> int:
        return _weight(self.color)

    @property
    def tail(self) -> str:
        return self.v if self.head == self.u else self.u

    def reversed(self) -> "NCLEdge":
        return NCLEdge(self.id, self.u, self.v, self.color, self.tail)


def _check_typed_vertices(vertices: Mapping[str, str],
                          edges: Sequence[NCLEdge]) -> None:
    for vid, kind in vertices.items():
        if kind not in VERTEX_KINDS:
            raise InvalidInstance(
                f"vertex {vid!r}: kind must be one of {VERTEX_KINDS}, got {kind!r}")
    by_vertex: Dict[str, List[NCLEdge]] = {v: [] for v in vertices}
    for e in edges:
        for end in (e.u, e.v):
            if end not in vertices:
                raise InvalidInstance(
                    f"edge {e.id!r}: unknown endpoint {end!r}")
        by_vertex[e.u].append(e)
        if e.v != e.u:
            by_vertex[e.v].append(e)
    for vid, kind in vertices.items():
        if kind == "free":
            continue
        incident = by_vertex[vid]
        blues = sum(1 for e in incident if e.color == BLUE)
        reds = len(incident) - blues
        if len(incident) != 3:
            raise InvalidInstance(
                f"{kind} vertex {vid!r} must have degree 3, has {len(incident)}")
        if kind == "and" and (blues, reds) != (1, 2):
            raise InvalidInstance(
                f"and vertex {vid!r} needs 1 blue + 2 red edges, "
                f"has {blues} blue + {reds} red")
        if kind == "or" and blues != 3:
            raise InvalidInstance(
                f"or vertex {vid!r} needs 3 blue edges, has {blues} blue")


@dataclass(frozen=True)
class NCLGraph:
    """A constraint graph with a target edge to reverse.

    ``vertices`` maps vertex id to kind (``and``/``or``/``free``).  The
    legality rule (incoming weight at least 2) applies at ``and`` and
    ``or`` vertices only.
    """

    vertices: Mapping[str, str]
    edges: Tuple[NCLEdge, ...]
    target: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", dict(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise InvalidInstance("duplicate edge ids")
        _check_typed_vertices(self.vertices, self.edges)
        if self.target not in ids:
            raise InvalidInstance(f"target edge {self.target!r} does not exist")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge(self, eid: str) -> NCLEdge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise InvalidInstance(f"no edge {eid!r}")

    def incident(self, vid: str) -> List[NCLEdge]:
        out = []
        for e in self.edges:
            if e.u == vid or e.v == vid:
                out.append(e)
        return out


@dataclass(frozen=True)
class TwoCLEdge(NCLEdge):
    """A constraint-graph edge owned by one of the two players."""

    owner: str = "white"

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.owner not in ("white", "black"):
            raise InvalidInstance(
                f"edge {self.id!r}: owner must be white or black, got {self.owner!r}")

    def reversed(self) -> "TwoCLEdge":
        return TwoCLEdge(self.id, self.u, self.v, self.color, self.tail,
                         self.owner)


@dataclass(frozen=True)
class TwoCLGraph:
    """A two-player constraint graph with one target edge per player."""

    vertices: Mapping[str, str]
    edges: Tuple[TwoCLEdge, ...]
    target_white: str
    target_black: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", dict(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise InvalidInstance("duplicate edge ids")
        _check_typed_vertices(self.vertices, self.edges)
        by_id = {e.id: e for e in self.edges}
        for target, owner in ((self.target_white, "white"),
                              (self.target_black, "black")):
            if target not in by_id:
                raise InvalidInstance(f"target edge {target!r} does not exist")
            if by_id[target].owner != owner:
                raise InvalidInstance(
                    f"target edge {target!r} must be owned by {owner}")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge(self, eid: str) -> TwoCLEdge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise InvalidInstance(f"no edge {eid!r}")


@dataclass(frozen=True)
class CNFFormula:
    """A CNF formula over variables 1..num_vars, DIMACS literal signs."""

    num_vars: int
    clauses: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses",
                           tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise InvalidInstance("num_vars must be nonnegative")
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InvalidInstance(f"literal {lit} out of range")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class QBFFormula:
    """A prenex QBF: quantifier blocks over a CNF matrix.

    ``prefix`` is a sequence of ``("e"|"a", (vars...))`` blocks.  Every
    variable of the matrix must appear in exactly one block.
    """

    prefix: Tuple[Tuple[str, Tuple[int, ...]], ...]
    matrix: CNFFormula

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "prefix",
            tuple((q, tuple(vs)) for q, vs in self.prefix))
        seen: List[int] = []
        for q, vs in self.prefix:
            if q not in ("e", "a"):
                raise InvalidInstance(f"quantifier must be e or a, got {q!r}")
            seen.extend(vs)
        if sorted(seen) != sorted(set(seen)):
            raise InvalidInstance("a variable is quantified twice")
        if set(seen) != set(range(1, self.matrix.num_vars + 1)):
            raise InvalidInstance(
                "prefix must quantify exactly the matrix variables "
                f"1..{self.matrix.num_vars}")

    @property
    def flat_prefix(self) -> Tuple[Tuple[str, int], ...]:
        """The prefix flattened to one (quantifier, variable) per entry."""
        return tuple((q, v) for q, vs in self.prefix for v in vs)


@dataclass(frozen=True)
class DQBFFormula:
    """A dependency QBF in the restricted two-block form.

    Universals split into blocks ``x1`` and ``x2``; existential block
    ``y1`` depends on ``x1`` only and ``y2`` on ``x2`` only.  Shapes
    outside this form raise :class:`~gadgetry.errors.WrongForm`.
    """

    x1: Tuple[int, ...]
    x2: Tuple[int, ...]
    y1: Tuple[int, ...]
    y2: Tuple[int, ...]
    matrix: CNFFormula

    def __post_init__(self) -> None:
        for name in ("x1", "x2", "y1", "y2"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        blocks = self.x1 + self.x2 + self.y1 + self.y2
        if sorted(blocks) != sorted(set(blocks)):
            raise WrongForm("a variable appears in two blocks")
        if set(blocks) != set(range(1, self.matrix.num_vars + 1)):
            raise WrongForm(
                "blocks must partition the matrix variables "
                f"1..{self.matrix.num_vars}")


# ---------------------------------------------------------------------------
# Line-based parsing helpers.

def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.split()[0] == "c":
            continue
        out.append((i, line.split()))
    return out


def _where(i: int) -> str:
    return f"line {i}"


def parse_ncl(text: str) -> NCLGraph:
    """Parse the constraint-graph format documented in this module."""
    vertices: Dict[str, str] = {}
    edges: List[NCLEdge] = []
    target: Optional[str] = None
    for i, tok in _content_lines(text):
        if tok[0] == "vertex":
            if len(tok) != 3:
                raise MalformedDocument(
                    "vertex lines take: vertex <id> <and|or|free>", _where(i))
            if tok[1] in vertices:
                raise MalformedDocument(f"duplicate vertex {tok[1]!r}", _where(i))
            vertices[tok[1]] = tok[2]
        elif tok[0] == "edge":
            if len(tok) != 6:
                raise MalformedDocument(
                    "edge lines take: edge <id> <u> <v> <red|blue> <head>",
                    _where(i))
            try:
                edges.append(NCLEdge(tok[1], tok[2], tok[3], tok[4], tok[5]))
            except InvalidInstance as exc:
                raise MalformedDocument(str(exc), _where(i)) from exc
        elif tok[0] == "target":
            if len(tok) != 2:
                raise MalformedDocument("target lines take: target <edge-id>",
                                        _where(i))
            if target is not None:
                raise MalformedDocument("duplicate target line", _where(i))
            target = tok[1]
        else:
            raise MalformedDocument(f"unknown directive {tok[0]!r}", _where(i))
    if target is None:
        raise MalformedDocument("missing target line", "end of document")
    return NCLGraph(vertices, tuple(edges), target)


def format_ncl(g: NCLGraph) -> str:
    lines = [f"vertex {v} {k}" for v, k in g.vertices.items()]
    lines += [f"edge {e.id} {e.u} {e.v} {e.color} {e.head}" for e in g.edges]
    lines.append(f"target {g.target}")
    return "\n".join(lines) + "\n"


def parse_2cl(text: str) -> TwoCLGraph:
    """Parse the two-player constraint-graph format."""
    vertices: Dict[str, str] = {}
    edges: List[TwoCLEdge] = []
    targets: Dict[str, str] = {}
    for i, tok in _content_lines(text):
        if tok[0] == "vertex":
            if len(tok) != 3:
                raise MalformedDocument(
                    "vertex lines take: vertex <id> <and|or|free>", _where(i))
            if tok[1] in vertices:
                raise MalformedDocument(f"duplicate vertex {tok[1]!r}", _where(i))
            vertices[tok[1]] = tok[2]
        elif tok[0] == "edge":
            if len(tok) != 7:
                raise MalformedDocument(
                    "edge lines take: edge <id> <u> <v> <red|blue> <head> "
                    "<white|black>", _where(i))
            try:
                edges.append(TwoCLEdge(tok[1], tok[2], tok[3], tok[4], tok[5],
                                       tok[6]))
            except InvalidInstance as exc:
                raise MalformedDocument(str(exc), _where(i)) from exc
        elif tok[0] == "target":
            if len(tok) != 3 or tok[1] not in ("white", "black"):
                raise MalformedDocument(
                    "target lines take: target <white|black> <edge-id>",
                    _where(i))
            if tok[1] in targets:
                raise MalformedDocument(f"duplicate {tok[1]} target", _where(i))
            targets[tok[1]] = tok[2]
        else:
            raise MalformedDocument(f"unknown directive {tok[0]!r}", _where(i))
    for color in ("white", "black"):
        if color not in targets:
            raise MalformedDocument(f"missing {color} target line",
                                    "end of document")
    return TwoCLGraph(vertices, tuple(edges), targets["white"],
                      targets["black"])


def format_2cl(g: TwoCLGraph) -> str:
    lines = [f"vertex {v} {k}" for v, k in g.vertices.items()]
    lines += [f"edge {e.id} {e.u} {e.v} {e.color} {e.head} {e.owner}"
              for e in g.edges]
    lines.append(f"target white {g.target_white}")
    lines.append(f"target black {g.target_black}")
    return "\n".join(lines) + "\n"


def _parse_clause_tokens(tokens: Sequence[str], i: int,
                         clause_open: List[int],
                         clauses: List[Tuple[int, ...]]) -> None:
    for t in tokens:
        try:
            lit = int(t)
        except ValueError as exc:
            raise MalformedDocument(f"bad literal {t!r}", _where(i)) from exc
        if lit == 0:
            clauses.append(tuple(clause_open))
            clause_open.clear()
        else:
            clause_open.append(lit)


def parse_dimacs(text: str) -> CNFFormula:
    """Parse a DIMACS CNF document."""
    header: Optional[Tuple[int, int]] = None
    clauses: List[Tuple[int, ...]] = []
    open_clause: List[int] = []
    for i, tok in _content_lines(text):
        if tok[0] == "p":
            if header is not None:
                raise MalformedDocument("duplicate p line", _where(i))
            if len(tok) != 4 or tok[1] != "cnf":
                raise MalformedDocument("header must be: p cnf <vars> <clauses>",
                                        _where(i))
            try:
                header = (int(tok[2]), int(tok[3]))
            except ValueError as exc:
                raise MalformedDocument("non-numeric header counts",
                                        _where(i)) from exc
        else:
            if header is None:
                raise MalformedDocument("clause before p line", _where(i))
            _parse_clause_tokens(tok, i, open_clause, clauses)
    if header is None:
        raise MalformedDocument("missing p line", "end of document")
    if open_clause:
        raise MalformedDocument("unterminated clause", "end of document")
    n, m = header
    if len(clauses) != m:
        raise MalformedDocument(
            f"header declares {m} clauses, found {len(clauses)}",
            "end of document")
    try:
        return CNFFormula(n, tuple(clauses))
    except InvalidInstance as exc:
        raise MalformedDocument(str(exc), "end of document") from exc


def format_dimacs(f: CNFFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QBFFormula:
    """Parse a QDIMACS document (quantifier lines then clauses)."""
    header: Optional[Tuple[int, int]] = None
    prefix: List[Tuple[str, Tuple[int, ...]]] = []
    clauses: List[Tuple[int, ...]] = []
    open_clause: List[int] = []
    in_clauses = False
    for i, tok in _content_lines(text):
        if tok[0] == "p":
            if header is not None:
                raise MalformedDocument("duplicate p line", _where(i))
            if len(tok) != 4 or tok[1] != "cnf":
                raise MalformedDocument("header must be: p cnf <vars> <clauses>",
                                        _where(i))
            header = (int(tok[2]), int(tok[3]))
        elif tok[0] in ("e", "a"):
            if header is None:
                raise MalformedDocument("quantifier line before p line",
                                        _where(i))
            if in_clauses:
                raise MalformedDocument("quantifier line after clauses",
                                        _where(i))
            if tok[-1] != "0":
                raise MalformedDocument("quantifier lines must end with 0",
                                        _where(i))
            try:
                vs = tuple(int(t) for t in tok[1:-1])
            except ValueError as exc:
                raise MalformedDocument("non-numeric variable", _where(i)) from exc
            if not vs or any(v <= 0 for v in vs):
                raise MalformedDocument("quantifier lines need positive "
                                        "variables", _where(i))
            prefix.append((tok[0], vs))
        else:
            if header is None:
                raise MalformedDocument("clause before p line", _where(i))
            in_clauses = True
            _parse_clause_tokens(tok, i, open_clause, clauses)
    if header is None:
        raise MalformedDocument("missing p line", "end of document")
    if open_clause:
        raise MalformedDocument("unterminated clause", "end of document")
    n, m = header
    if len(clauses) != m:
        raise MalformedDocument(
            f"header declares {m} clauses, found {len(clauses)}",
            "end of document")
    try:
        return QBFFormula(tuple(prefix), CNFFormula(n, tuple(clauses)))
    except InvalidInstance as exc:
        raise MalformedDocument(str(exc), "end of document") from exc


def format_qdimacs(f: QBFFormula) -> str:
    lines = [f"p cnf {f.matrix.num_vars} {f.matrix.num_clauses}"]
    lines += [q + " " + " ".join(str(v) for v in vs) + " 0"
              for q, vs in f.prefix]
    lines += [" ".join(str(l) for l in c) + " 0" for c in f.matrix.clauses]
    return "\n".join(lines) + "\n"


def parse_dqbf(text: str) -> DQBFFormula:
    """Parse the restricted two-block DQBF format."""
    header: Optional[Tuple[int, int]] = None
    a_blocks: List[Tuple[int, ...]] = []
    e_blocks: List[Tuple[int, ...]] = []
    clauses: List[Tuple[int, ...]] = []
    open_clause: List[int] = []
    in_clauses = False
    for i, tok in _content_lines(text):
        if tok[0] == "p":
            if header is not None:
                raise MalformedDocument("duplicate p line", _where(i))
            if len(tok) != 4 or tok[1] != "dqbf":
                raise MalformedDocument(
                    "header must be: p dqbf <vars> <clauses>", _where(i))
            header = (int(tok[2]), int(tok[3]))
        elif tok[0] in ("e", "a"):
            if header is None:
                raise MalformedDocument("quantifier line before p line",
                                        _where(i))
            if in_clauses:
                raise MalformedDocument("quantifier line after clauses",
                                        _where(i))
            if tok[-1] != "0":
                raise MalformedDocument("quantifier lines must end with 0",
                                        _where(i))
            try:
                vs = tuple(int(t) for t in tok[1:-1])
            except ValueError as exc:
                raise MalformedDocument("non-numeric variable", _where(i)) from exc
            (a_blocks if tok[0] == "a" else e_blocks).append(vs)
        else:
            if header is None:
                raise MalformedDocument("clause before p line", _where(i))
            in_clauses = True
            _parse_clause_tokens(tok, i, open_clause, clauses)
    if header is None:
        raise MalformedDocument("missing p line", "end of document")
    if open_clause:
        raise MalformedDocument("unterminated clause", "end of document")
    n, m = header
    if len(clauses) != m:
        raise MalformedDocument(
            f"header declares {m} clauses, found {len(clauses)}",
            "end of document")
    if len(a_blocks) != 2 or len(e_blocks) != 2:
        raise WrongForm(
            "the restricted form takes exactly two universal blocks then "
            f"two existential blocks, got {len(a_blocks)} and {len(e_blocks)}")
    return DQBFFormula(a_blocks[0], a_blocks[1], e_blocks[0], e_blocks[1],
                       CNFFormula(n, tuple(clauses)))


def format_dqbf(f: DQBFFormula) -> str:
    lines = [f"p dqbf {f.matrix.num_vars} {f.matrix.num_clauses}"]
    for q, vs in (("a", f.x1), ("a", f.x2), ("e", f.y1), ("e", f.y2)):
        lines.append(q + " " + " ".join(str(v) for v in vs) + " 0")
    lines += [" ".join(str(l) for l in c) + " 0" for c in f.matrix.clauses]
    return "\n".join(lines) + "\n"
