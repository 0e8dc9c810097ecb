"""Line-oriented instance files.

::

    boys: u1 u2
    girls: w1 w2
    edge u1w1 u1 w1
    pref u1: u1w1 u1w2
    cost u1w1 3
    weight u1w1 2
    level u1 u1w1 4
    h u1w1 1

Blank lines and ``#`` comments are ignored.  Line kinds must appear in the
order shown; the four value kinds may be mixed after the ``pref`` lines.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Edge, PreferenceSystem
from .errors import InputError


class InstanceParseError(InputError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class DuplicateEdgeError(InstanceParseError):
    pass


class IncompletePreferenceError(InstanceParseError):
    pass


class TieError(InstanceParseError):
    pass


@dataclass
class Instance:
    system: PreferenceSystem
    cost: dict = field(default_factory=dict)
    weight: dict = field(default_factory=dict)
    level: dict = field(default_factory=dict)
    h: dict = field(default_factory=dict)


_ORDER = {"boys:": 0, "girls:": 1, "edge": 2, "pref": 3, "cost": 4, "weight": 4, "level": 4, "h": 4}


def _int(token, lineno, col, minimum=None):
    try:
        value = int(token)
    except ValueError:
        raise InstanceParseError(f"expected an integer, got {token!r}", lineno, col) from None
    if minimum is not None and value < minimum:
        raise InstanceParseError(f"value {value} is below {minimum}", lineno, col)
    return value


def _tokens(line):
    """Split on whitespace, keeping 1-based column numbers."""
    out, col = [], 0
    for piece in line.split():
        col = line.index(piece, col)
        out.append((piece, col + 1))
        col += len(piece)
    return out


def parse(text: str, values_only: bool = False) -> Instance:
    """Parse an instance file.  With ``values_only`` only value lines are
    accepted and the system is left empty (for separate cost files)."""
    boys, girls, edges, prefs = [], [], [], {}
    edge_line = {}
    edge_obj = {}
    out = Instance(PreferenceSystem([], [], [], {}))
    stage = 4 if values_only else 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, hcol = toks[0]
        kind = "pref" if head == "pref" else head
        if kind not in _ORDER:
            raise InstanceParseError(f"unknown line kind {head!r}", lineno, hcol)
        if values_only and _ORDER[kind] < 4:
            raise InstanceParseError(f"only value lines are allowed here, not {head!r}", lineno, hcol)
        if _ORDER[kind] < stage:
            raise InstanceParseError(f"{head!r} line out of order", lineno, hcol)
        stage = _ORDER[kind]
        args = toks[1:]
        if kind == "boys:":
            if boys:
                raise InstanceParseError("second boys line", lineno, hcol)
            boys = [t for t, _ in args]
        elif kind == "girls:":
            if girls:
                raise InstanceParseError("second girls line", lineno, hcol)
            girls = [t for t, _ in args]
        elif kind == "edge":
            if len(args) != 3:
                raise InstanceParseError("edge needs <eid> <boy> <girl>", lineno, hcol)
            (eid, ecol), (u, ucol), (w, wcol) = args
            if eid in edge_line:
                raise DuplicateEdgeError(f"edge id {eid!r} already defined on line {edge_line[eid]}", lineno, ecol)
            if u not in boys:
                raise InstanceParseError(f"unknown boy {u!r}", lineno, ucol)
            if w not in girls:
                raise InstanceParseError(f"unknown girl {w!r}", lineno, wcol)
            edge_line[eid] = lineno
            edges.append(Edge(eid, u, w))
            edge_obj[eid] = edges[-1]
        elif kind == "pref":
            if not args or not args[0][0].endswith(":"):
                raise InstanceParseError("pref needs '<node>:'", lineno, hcol)
            node, ncol = args[0][0][:-1], args[0][1]
            if node not in boys and node not in girls:
                raise InstanceParseError(f"unknown node {node!r}", lineno, ncol)
            if node in prefs:
                raise InstanceParseError(f"second pref line for {node!r}", lineno, ncol)
            order = []
            for tok, col in args[1:]:
                if "=" in tok:
                    raise TieError(f"tie {tok!r} in the list of {node!r}; preferences must be strict", lineno, col)
                if tok not in edge_line:
                    raise InstanceParseError(f"unknown edge {tok!r}", lineno, col)
                if node not in (edge_obj[tok].boy, edge_obj[tok].girl):
                    raise IncompletePreferenceError(f"edge {tok!r} is not incident to {node!r}", lineno, col)
                if tok in order:
                    raise InstanceParseError(f"edge {tok!r} repeated in the list of {node!r}", lineno, col)
                order.append(tok)
            prefs[node] = (order, lineno)
        else:
            _value_line(out, kind, args, lineno, hcol, edge_line if not values_only else None)
    if values_only:
        return out
    incident = {v: set() for v in boys + girls}
    for e in edges:
        incident[e.boy].add(e.id)
        incident[e.girl].add(e.id)
    for v in boys + girls:
        if v not in prefs:
            if incident[v]:
                raise IncompletePreferenceError(f"node {v!r} has no pref line")
            continue
        order, lineno = prefs[v]
        missing = incident[v] - set(order)
        if missing:
            raise IncompletePreferenceError(
                f"pref line of {v!r} omits incident edges {sorted(missing)}", lineno, 1
            )
    system = PreferenceSystem(boys, girls, edges, {v: order for v, (order, _) in prefs.items()})
    out.system = system
    for key in list(out.level):
        v, e = key
        if v not in system.ends(e):
            raise InstanceParseError(f"level for {v!r} on non-incident edge {e!r}")
    return out


def _value_line(out, kind, args, lineno, hcol, known):
    def check_edge(eid, col):
        if known is not None and eid not in known:
            raise InstanceParseError(f"unknown edge {eid!r}", lineno, col)

    if kind == "level":
        if len(args) != 3:
            raise InstanceParseError("level needs <node> <eid> <positive-int>", lineno, hcol)
        (v, _), (eid, ecol), (val, vcol) = args
        check_edge(eid, ecol)
        target, key, value = out.level, (v, eid), _int(val, lineno, vcol, 1)
    else:
        if len(args) != 2:
            raise InstanceParseError(f"{kind} needs <eid> <integer>", lineno, hcol)
        (eid, ecol), (val, vcol) = args
        check_edge(eid, ecol)
        target, key = getattr(out, kind), eid
        value = _int(val, lineno, vcol, None if kind == "cost" else 0)
    if key in target:
        raise InstanceParseError(f"second {kind} line for {key!r}", lineno, hcol)
    target[key] = value


def write(inst: Instance | PreferenceSystem) -> str:
    """Canonical text: fixed line order, single spaces, no comments."""
    if isinstance(inst, PreferenceSystem):
        inst = Instance(inst)
    g = inst.system
    lines = []
    if g.boys or g.girls or g.edges:
        lines.append(" ".join(["boys:", *g.boys]))
        lines.append(" ".join(["girls:", *g.girls]))
    lines += [f"edge {e.id} {e.boy} {e.girl}" for e in g.edges]
    for v in g.boys + g.girls:
        if g.prefs[v]:
            lines.append(" ".join([f"pref {v}:", *g.prefs[v]]))
    order = [e.id for e in g.edges]
    for kind in ("cost", "weight"):
        table = getattr(inst, kind)
        lines += [f"{kind} {e} {table[e]}" for e in order if e in table]
    for v in g.boys + g.girls:
        lines += [f"level {v} {e} {inst.level[(v, e)]}" for e in g.prefs[v] if (v, e) in inst.level]
    lines += [f"h {e} {inst.h[e]}" for e in order if e in inst.h]
    return "".join(line + "\n" for line in lines)


def read_file(path: str, values_only: bool = False) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), values_only=values_only)
