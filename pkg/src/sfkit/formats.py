"""Plain-text file formats: diagrams, partial open books, handle scripts and matrices.

Diagram files (``.sfd``) are sectioned::

    ORIENT standard
    REGIONS
    c0 0 v0:e0+ v1:a0- v2:g0+
    GLUE
    g0 c0 c1
    CURVES
    a0 alpha a0e0 a0e1
    BOUNDARY
    b0 e0 e1 tag=w

A REGIONS line is a polygon: its name, genus, and counterclockwise sides,
each written ``vertex:edge`` plus the sign of the edge along the side.
GLUE lists every interior edge that is not part of a curve together with
the two polygons it joins.  CURVES lists each closed curve by its edges in
order of travel, BOUNDARY each boundary circle by its edges.  Blank lines
and ``#`` comments (at line start or after a space) are ignored.

Positions are ``edge@t`` with ``t`` a fraction, or ``cell#corner``.  A
path is ``start;crossing,crossing,...;end`` where a crossing is
``edge@t`` or ``edge@t^sign``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .contact_handles import CompoundStab, ContactHandle, F1Attach, F3Collapse, HandleScript
from .diagram_core import Cell, DiagramError, Edge, SuturedDiagram, check
from .drawing import Route
from .flinalg import F2Matrix
from .open_book import ArcBasis, PartialOpenBook

SECTIONS = ("ORIENT", "REGIONS", "GLUE", "CURVES", "BOUNDARY")


class FormatError(DiagramError):
    def __init__(self, line: int, message: str, source: str = "<text>"):
        super().__init__(f"{source}:{line}: {message}")
        self.line = line


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        # a comment starts a line or follows whitespace; cell#corner is not one
        line = re.split(r"(?:^|\s)#", raw, maxsplit=1)[0].strip()
        if line:
            yield number, line


# ------------------------------------------------------------ diagrams
def _side_token(token: str, number: int, source: str) -> tuple[str, str, int]:
    vertex, sep, rest = token.partition(":")
    if not sep or not vertex or len(rest) < 2 or rest[-1] not in "+-":
        raise FormatError(number, f"bad side {token!r}; expected vertex:edge+ or vertex:edge-", source)
    return vertex, rest[:-1], 1 if rest[-1] == "+" else -1


def _diagram_from_sections(sections: dict, source: str, last_line: int) -> SuturedDiagram:
    orient = "standard"
    for number, words in sections.get("ORIENT", []):
        if len(words) != 1 or words[0] not in ("standard", "reversed"):
            raise FormatError(number, "ORIENT takes 'standard' or 'reversed'", source)
        orient = words[0]
    if "REGIONS" not in sections:
        raise FormatError(last_line, "missing REGIONS section", source)

    cells, seen_cells = [], set()
    for number, words in sections["REGIONS"]:
        if len(words) < 3:
            raise FormatError(number, "a polygon needs a name, a genus and at least one side", source)
        name, genus = words[0], words[1]
        if not genus.isdigit():
            raise FormatError(number, f"genus {genus!r} is not a non-negative integer", source)
        if name in seen_cells:
            raise FormatError(number, f"polygon {name} defined twice", source)
        seen_cells.add(name)
        sides = [_side_token(w, number, source) for w in words[2:]]
        cells.append(Cell(name, tuple(v for v, _, _ in sides), tuple((e, s) for _, e, s in sides), int(genus)))

    used = {e for c in cells for e, _ in c.sides}
    users: dict = {}
    for c in cells:
        for e, _ in c.sides:
            users.setdefault(e, []).append(c.name)

    declared: dict = {}
    edges = []

    def declare(edge: Edge, number: int):
        if edge.name in declared:
            raise FormatError(number, f"edge {edge.name} declared twice", source)
        if edge.name not in used:
            raise FormatError(number, f"edge {edge.name} is not a side of any polygon", source)
        declared[edge.name] = number
        edges.append(edge)

    for number, words in sections.get("GLUE", []):
        if len(words) != 3:
            raise FormatError(number, "GLUE lines are: edge polygon polygon", source)
        e, c1, c2 = words
        if sorted(users.get(e, [])) != sorted([c1, c2]):
            raise FormatError(number, f"edge {e} does not join {c1} and {c2}", source)
        declare(Edge(e, "ghost"), number)
    for number, words in sections.get("CURVES", []):
        if len(words) < 3 or words[1] not in ("alpha", "beta", "gamma"):
            raise FormatError(number, "CURVES lines are: curve kind edge...", source)
        for e in words[2:]:
            declare(Edge(e, words[1], curve=words[0]), number)
    for number, words in sections.get("BOUNDARY", []):
        tag = None
        names = words[1:]
        if names and names[-1].startswith("tag="):
            tag = names[-1][4:]
            names = names[:-1]
            if tag not in ("w", "z"):
                raise FormatError(number, f"unknown tag {tag!r}", source)
        if not names:
            raise FormatError(number, "a boundary circle needs edges", source)
        for e in names:
            declare(Edge(e, "boundary", tag=tag), number)
    missing = sorted(used - set(declared))
    if missing:
        raise FormatError(last_line, f"edges never declared: {' '.join(missing)}", source)
    d = SuturedDiagram(tuple(cells), tuple(edges), orient)
    # circles must be listed as they actually close up
    listed = {}
    for number, words in sections.get("BOUNDARY", []):
        names = [w for w in words[1:] if not w.startswith("tag=")]
        listed[frozenset(names)] = number
    actual = {frozenset(cyc) for cyc, _ in _circles(d)}
    for group, number in listed.items():
        if group not in actual:
            raise FormatError(number, "edges do not form one boundary circle", source)
    return d


def _circles(d: SuturedDiagram) -> tuple:
    try:
        return d.boundary_circles
    except (KeyError, IndexError) as exc:
        raise DiagramError(f"boundary does not close up: {exc}") from exc


def _split_sections(text: str, names, source: str) -> tuple[dict, int]:
    sections: dict = {}
    current = None
    last = 0
    for number, line in _lines(text):
        last = number
        words = line.split()
        if words[0] in names:
            current = words[0]
            if current in sections:
                raise FormatError(number, f"section {current} appears twice", source)
            sections[current] = []
            if len(words) > 1:
                sections[current].append((number, words[1:]))
            continue
        if current is None:
            raise FormatError(number, f"expected a section header, got {words[0]!r}", source)
        sections[current].append((number, words))
    return sections, last


def parse_diagram(text: str, source: str = "<text>", validate: bool = True) -> SuturedDiagram:
    sections, last = _split_sections(text, SECTIONS, source)
    d = _diagram_from_sections(sections, source, last + 1)
    return check(d, balanced=False) if validate else d


def parse_diagram_file(path, validate: bool = True) -> SuturedDiagram:
    path = Path(path)
    return parse_diagram(path.read_text(), source=str(path), validate=validate)


def _sign(s: int) -> str:
    return "+" if s > 0 else "-"


def serialize_diagram(d: SuturedDiagram) -> str:
    """Canonical text: polygons in diagram order, curves sorted, circles in boundary order."""
    out = [f"ORIENT {d.orientation}", "REGIONS"]
    for c in d.cells:
        sides = " ".join(f"{v}:{e}{_sign(s)}" for v, (e, s) in zip(c.verts, c.sides))
        out.append(f"{c.name} {c.genus} {sides}")
    out.append("GLUE")
    for e in d.edges:
        if e.kind == "ghost":
            joined = sorted(c for c, _, _ in d.uses[e.name])
            out.append(f"{e.name} {' '.join(joined)}")
    out.append("CURVES")
    for kind in ("alpha", "beta", "gamma"):
        for cid in d.curve_ids[kind]:
            out.append(f"{cid} {kind} {' '.join(d.curve_edges(cid))}")
    out.append("BOUNDARY")
    for i, (cyc, tag) in enumerate(_circles(d)):
        out.append(f"b{i} {' '.join(cyc)}" + (f" tag={tag}" if tag else ""))
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ positions and paths
def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad fraction {text!r}") from exc


def parse_position(text: str) -> tuple:
    if "#" in text:
        cell, corner = text.split("#", 1)
        return cell, int(corner)
    edge, sep, t = text.partition("@")
    if not sep or not edge:
        raise ValueError(f"bad position {text!r}; expected edge@t or cell#corner")
    return edge, _fraction(t)


def format_position(pos: tuple) -> str:
    if isinstance(pos[1], int) and not isinstance(pos[1], bool):
        return f"{pos[0]}#{pos[1]}"
    return f"{pos[0]}@{pos[1]}"


def parse_route(text: str) -> Route:
    parts = text.split(";")
    if len(parts) != 3:
        raise ValueError(f"bad path {text!r}; expected start;crossings;end")
    start, middle, end = parts
    crossings = []
    for item in filter(None, middle.split(",")):
        place, sep, sign = item.partition("^")
        edge, t = parse_position(place)
        if sep:
            if sign not in ("1", "+1", "-1"):
                raise ValueError(f"bad crossing sign {sign!r}")
            crossings.append((edge, t, int(sign)))
        else:
            crossings.append((edge, t))
    return Route(parse_position(start), tuple(crossings), parse_position(end))


def format_route(route: Route) -> str:
    items = []
    for item in route.crossings:
        text = f"{item[0]}@{Fraction(item[1])}"
        if len(item) > 2:
            text += f"^{int(item[2]):+d}"
        items.append(text)
    return f"{format_position(route.start)};{','.join(items)};{format_position(route.end)}"


# ------------------------------------------------------------ handle scripts
def _options(words: list[str]) -> tuple[list[str], dict]:
    plain, opts = [], {}
    for w in words:
        if "=" in w:
            k, v = w.split("=", 1)
            opts[k] = v
        else:
            plain.append(w)
    return plain, opts


def parse_step(line: str):
    words = line.split()
    op, rest = words[0].upper(), words[1:]
    plain, opts = _options(rest)
    if op == "H0":
        return ContactHandle(0, sides=int(opts.get("sides", 4)))
    if op == "H1":
        if len(plain) != 2:
            raise ValueError("H1 takes two positions")
        return ContactHandle(1, positions=tuple(parse_position(p) for p in plain))
    if op == "H2":
        if "plus" not in opts or "minus" not in opts:
            raise ValueError("H2 needs plus=PATH and minus=PATH")
        return ContactHandle(2, lam_plus=parse_route(opts["plus"]), lam_minus=parse_route(opts["minus"]))
    if op == "H3":
        if len(plain) != 1:
            raise ValueError("H3 takes one boundary edge of the circle")
        return ContactHandle(3, circle=plain[0])
    if op == "F1":
        if len(plain) != 2:
            raise ValueError("F1 takes two positions")
        return F1Attach(parse_position(plain[0]), parse_position(plain[1]))
    if op == "F3":
        if len(plain) != 2:
            raise ValueError("F3 takes an alpha curve and a beta curve")
        return F3Collapse(plain[0], plain[1])
    if op == "CSTAB":
        if len(plain) != 1 or "path" not in opts:
            raise ValueError("CSTAB takes a side (alpha or beta) and path=PATH")
        return CompoundStab(parse_route(opts["path"]), plain[0])
    raise ValueError(f"unknown step {words[0]!r}")


def format_step(step) -> str:
    if isinstance(step, ContactHandle):
        if step.index == 0:
            return "H0" if step.sides == 4 else f"H0 sides={step.sides}"
        if step.index == 1:
            return "H1 " + " ".join(format_position(p) for p in step.positions)
        if step.index == 2:
            return f"H2 plus={format_route(step.lam_plus)} minus={format_route(step.lam_minus)}"
        if step.index == 3:
            return f"H3 {step.circle}"
    if isinstance(step, F1Attach):
        return f"F1 {format_position(step.p1)} {format_position(step.p2)}"
    if isinstance(step, F3Collapse):
        return f"F3 {step.alpha} {step.beta}"
    if isinstance(step, CompoundStab):
        return f"CSTAB {step.side} path={format_route(step.path)}"
    raise ValueError(f"cannot write step {step!r}")


def parse_script(text: str, source: str = "<text>") -> HandleScript:
    steps = []
    for number, line in _lines(text):
        try:
            steps.append(parse_step(line))
        except ValueError as exc:
            raise FormatError(number, str(exc), source) from exc
    return HandleScript(tuple(steps))


def format_script(steps) -> str:
    steps = steps.steps if isinstance(steps, HandleScript) else steps
    return "".join(format_step(s) + "\n" for s in steps)


# ------------------------------------------------------------ open books
BOOK_SECTIONS = SECTIONS + ("NAME", "SUBPAGE", "ARCS", "MONODROMY")


def parse_open_book(text: str, source: str = "<text>") -> PartialOpenBook:
    """A page in diagram sections, plus NAME, SUBPAGE (polygons of P), ARCS and MONODROMY.

    ARCS and MONODROMY lines are ``arc-name path``; every arc needs an image.
    """
    sections, last = _split_sections(text, BOOK_SECTIONS, source)
    page = _diagram_from_sections(sections, source, last + 1)
    name = ""
    for number, words in sections.get("NAME", []):
        name = " ".join(words)
    sub = [w for _, words in sections.get("SUBPAGE", []) for w in words]
    arcs, images = {}, {}
    for key, target in (("ARCS", arcs), ("MONODROMY", images)):
        for number, words in sections.get(key, []):
            if len(words) != 2:
                raise FormatError(number, f"{key} lines are: name path", source)
            if words[0] in target:
                raise FormatError(number, f"{words[0]} listed twice", source)
            try:
                target[words[0]] = (number, parse_route(words[1]))
            except ValueError as exc:
                raise FormatError(number, str(exc), source) from exc
    if set(arcs) != set(images):
        raise FormatError(last + 1, "every basis arc needs exactly one monodromy image", source)
    order = sorted(arcs, key=lambda k: arcs[k][0])
    return PartialOpenBook(page, frozenset(sub), ArcBasis(tuple(arcs[k][1] for k in order)),
                           tuple(images[k][1] for k in order), name=name)


def parse_open_book_file(path) -> PartialOpenBook:
    path = Path(path)
    return parse_open_book(path.read_text(), source=str(path))


def serialize_open_book(pob: PartialOpenBook) -> str:
    out = [f"NAME {pob.name}"] if pob.name else []
    out.append(serialize_diagram(pob.page).rstrip("\n"))
    out.append("SUBPAGE" + "".join(f" {c}" for c in sorted(pob.sub_page)))
    out.append("ARCS")
    out += [f"a{i} {format_route(r)}" for i, r in enumerate(pob.arcs)]
    out.append("MONODROMY")
    out += [f"a{i} {format_route(r)}" for i, r in enumerate(pob.images)]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ matrices
def _parse_label(text: str):
    if text.startswith("(") and text.endswith(")"):
        inner = text[1:-1]
        parts, depth, cur = [], 0, ""
        for ch in inner:
            if ch == "|" and depth == 0:
                parts.append(cur)
                cur = ""
                continue
            depth += ch in "({"
            depth -= ch in ")}"
            cur += ch
        parts.append(cur)
        return tuple(_parse_label(p) for p in parts)
    if text.startswith("{") and text.endswith("}"):
        inner = text[1:-1]
        return tuple(inner.split(",")) if inner else ()
    return text


def format_matrix(m: F2Matrix) -> str:
    return m.triplets()


def parse_matrix(text: str, source: str = "<text>") -> F2Matrix:
    """Inverse of :meth:`F2Matrix.triplets`."""
    domain = codomain = None
    entries = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# domain:"):
            domain = tuple(_parse_label(w) for w in line[len("# domain:"):].split())
        elif line.startswith("# codomain:"):
            codomain = tuple(_parse_label(w) for w in line[len("# codomain:"):].split())
        elif line.startswith("#"):
            continue
        else:
            words = line.split()
            if len(words) != 2 or not all(w.isdigit() for w in words):
                raise FormatError(number, "entries are written 'row column'", source)
            entries ^= {(int(words[0]), int(words[1]))}
    if domain is None or codomain is None:
        raise FormatError(0, "missing '# domain:' or '# codomain:' header", source)
    try:
        return F2Matrix(domain, codomain, frozenset(entries))
    except IndexError as exc:
        raise FormatError(0, str(exc), source) from exc


def parse_matrix_file(path) -> F2Matrix:
    path = Path(path)
    return parse_matrix(path.read_text(), source=str(path))

