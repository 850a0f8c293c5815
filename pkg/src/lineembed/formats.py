"""Text formats for instances, certificates and reduction mappings.

All formats are line-based.  Lines starting with `c` are comments and blank
lines are ignored.  Instance files open with a `p <kind> ...` header (kinds
sg, cnf, ss, dg); certificate files are headerless.  Serializers emit a
canonical form that parses back to an equal object.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional, Union

from .core import Ordering, SignedGraph, build_signed_graph
from .errors import LineEmbedError, ParseError
from .intervals import IntervalModel
from .reductions import (
    AdpToLceMapping,
    Assignment,
    CnfFormula,
    Digraph,
    Partition,
    SatToLceMapping,
    SatToSsMapping,
    SetSystem,
    SplitterSolution,
    SsToAdpMapping,
    build_cnf,
    build_digraph,
    build_partition,
    build_set_system,
)

AnyMapping = Union[SatToSsMapping, SsToAdpMapping, AdpToLceMapping, SatToLceMapping]


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """(1-based line number, tokens) for every non-blank non-comment line."""
    for no, raw in enumerate(text.split("\n"), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        yield no, tokens


def _int(token: str, source: Optional[str], line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", source, line)


def _header(
    lines: list[tuple[int, list[str]]],
    kind: str,
    count: int,
    source: Optional[str],
) -> tuple[int, list[int]]:
    """Check `p <kind>` with `count` integer fields; return (line, fields)."""
    if not lines:
        raise ParseError("empty input", source, None)
    no, tokens = lines[0]
    if tokens[0] != "p" or len(tokens) < 2 or tokens[1] != kind:
        raise ParseError(f"expected 'p {kind}' header", source, no)
    if len(tokens) != 2 + count:
        raise ParseError(
            f"'p {kind}' header wants {count} fields, got {len(tokens) - 2}",
            source,
            no,
        )
    return no, [_int(t, source, no) for t in tokens[2:]]


def instance_kind(text: str, source: Optional[str] = None) -> str:
    """Kind tag from the first header line: sg, cnf, ss, dg or map."""
    for no, tokens in _content_lines(text):
        if tokens[0] != "p" or len(tokens) < 2:
            raise ParseError("first content line must be a 'p' header", source, no)
        return tokens[1]
    raise ParseError("empty input", source, None)


# ---------------------------------------------------------------------------
# Signed graphs
# ---------------------------------------------------------------------------


def serialize_signed_graph(g: SignedGraph) -> str:
    out = [f"p sg {g.n} {g.m_pos} {g.m_neg}"]
    out.extend(f"e + {u} {v}" for u, v in g.pos_edges)
    out.extend(f"e - {u} {v}" for u, v in g.neg_edges)
    return "\n".join(out) + "\n"


def parse_signed_graph(text: str, source: Optional[str] = None) -> SignedGraph:
    lines = list(_content_lines(text))
    hdr_no, (n, m_pos, m_neg) = _header(lines, "sg", 3, source)
    pos: list[tuple[int, int]] = []
    neg: list[tuple[int, int]] = []
    for no, tokens in lines[1:]:
        if tokens[0] != "e" or len(tokens) != 4:
            raise ParseError("expected 'e <sign> <u> <v>'", source, no)
        sign = tokens[1]
        if sign not in "+-":
            raise ParseError(f"edge sign must be + or -, got {sign!r}", source, no)
        u = _int(tokens[2], source, no)
        v = _int(tokens[3], source, no)
        (pos if sign == "+" else neg).append((u, v))
    if (len(pos), len(neg)) != (m_pos, m_neg):
        raise ParseError(
            f"header declares {m_pos}+/{m_neg}- edges, found {len(pos)}+/{len(neg)}-",
            source,
            hdr_no,
        )
    try:
        return build_signed_graph(n, pos, neg)
    except LineEmbedError as exc:
        raise ParseError(str(exc), source, hdr_no) from exc


# ---------------------------------------------------------------------------
# CNF formulas
# ---------------------------------------------------------------------------


def serialize_cnf(cnf: CnfFormula) -> str:
    out = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    out.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in cnf.clauses)
    return "\n".join(out) + "\n"


def parse_cnf(text: str, source: Optional[str] = None) -> CnfFormula:
    lines = list(_content_lines(text))
    hdr_no, (num_vars, num_clauses) = _header(lines, "cnf", 2, source)
    clauses: list[tuple[int, ...]] = []
    for no, tokens in lines[1:]:
        lits = [_int(t, source, no) for t in tokens]
        if not lits or lits[-1] != 0:
            raise ParseError("clause line must end with 0", source, no)
        if 0 in lits[:-1]:
            raise ParseError("literal 0 inside a clause", source, no)
        clauses.append(tuple(lits[:-1]))
    if len(clauses) != num_clauses:
        raise ParseError(
            f"header declares {num_clauses} clauses, found {len(clauses)}",
            source,
            hdr_no,
        )
    try:
        return build_cnf(num_vars, clauses)
    except LineEmbedError as exc:
        raise ParseError(str(exc), source, hdr_no) from exc


# ---------------------------------------------------------------------------
# Set systems
# ---------------------------------------------------------------------------


def serialize_set_system(sys: SetSystem) -> str:
    out = [f"p ss {sys.universe_size} {len(sys.sets)}"]
    if sys.special is not None:
        out.append(f"x special {sys.special}")
    out.extend(
        f"s {len(members)} " + " ".join(str(e) for e in members)
        for members in sys.sets
    )
    return "\n".join(out) + "\n"


def parse_set_system(text: str, source: Optional[str] = None) -> SetSystem:
    lines = list(_content_lines(text))
    hdr_no, (universe, num_sets) = _header(lines, "ss", 2, source)
    special: Optional[int] = None
    sets: list[tuple[int, ...]] = []
    for no, tokens in lines[1:]:
        if tokens[0] == "x":
            if len(tokens) != 3 or tokens[1] != "special":
                raise ParseError("expected 'x special <element>'", source, no)
            if special is not None:
                raise ParseError("duplicate 'x special' line", source, no)
            special = _int(tokens[2], source, no)
        elif tokens[0] == "s":
            if len(tokens) < 2:
                raise ParseError("expected 's <size> <elements...>'", source, no)
            size = _int(tokens[1], source, no)
            members = tuple(_int(t, source, no) for t in tokens[2:])
            if len(members) != size:
                raise ParseError(
                    f"set declares {size} elements, lists {len(members)}",
                    source,
                    no,
                )
            sets.append(members)
        else:
            raise ParseError(f"unexpected line kind {tokens[0]!r}", source, no)
    if len(sets) != num_sets:
        raise ParseError(
            f"header declares {num_sets} sets, found {len(sets)}", source, hdr_no
        )
    try:
        return build_set_system(universe, sets, special=special)
    except LineEmbedError as exc:
        raise ParseError(str(exc), source, hdr_no) from exc


# ---------------------------------------------------------------------------
# Digraphs
# ---------------------------------------------------------------------------


def serialize_digraph(digraph: Digraph) -> str:
    out = [f"p dg {digraph.n} {len(digraph.arcs)}"]
    out.extend(f"a {a} {b}" for a, b in digraph.arcs)
    return "\n".join(out) + "\n"


def parse_digraph(text: str, source: Optional[str] = None) -> Digraph:
    lines = list(_content_lines(text))
    hdr_no, (n, m) = _header(lines, "dg", 2, source)
    arcs: list[tuple[int, int]] = []
    for no, tokens in lines[1:]:
        if tokens[0] != "a" or len(tokens) != 3:
            raise ParseError("expected 'a <from> <to>'", source, no)
        arcs.append((_int(tokens[1], source, no), _int(tokens[2], source, no)))
    if len(arcs) != m:
        raise ParseError(
            f"header declares {m} arcs, found {len(arcs)}", source, hdr_no
        )
    try:
        return build_digraph(n, arcs)
    except LineEmbedError as exc:
        raise ParseError(str(exc), source, hdr_no) from exc


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def serialize_ordering_cert(ordering: Optional[Ordering]) -> str:
    if ordering is None:
        return "o INFEASIBLE\n"
    return ("o " + " ".join(str(v) for v in ordering)).rstrip() + "\n"


def parse_ordering_cert(
    text: str, source: Optional[str] = None
) -> Optional[Ordering]:
    lines = list(_content_lines(text))
    if len(lines) != 1 or lines[0][1][0] != "o":
        raise ParseError("expected a single 'o ...' line", source, None)
    no, tokens = lines[0]
    if tokens[1:] == ["INFEASIBLE"]:
        return None
    seq = [_int(t, source, no) for t in tokens[1:]]
    try:
        return Ordering.from_seq(seq)
    except LineEmbedError as exc:
        raise ParseError(str(exc), source, no) from exc


def _fraction(token: str, source: Optional[str], line: int) -> Fraction:
    num, sep, den = token.partition("/")
    if not sep:
        raise ParseError(f"expected <num>/<den>, got {token!r}", source, line)
    d = _int(den, source, line)
    if d <= 0:
        raise ParseError(f"denominator must be positive, got {d}", source, line)
    return Fraction(_int(num, source, line), d)


def serialize_model_cert(model: IntervalModel) -> str:
    out = []
    for v in sorted(model.intervals):
        lo, hi = model.intervals[v]
        out.append(
            f"i {v} {lo.numerator}/{lo.denominator} {hi.numerator}/{hi.denominator}"
        )
    return "\n".join(out) + "\n"


def parse_model_cert(text: str, source: Optional[str] = None) -> IntervalModel:
    intervals: dict[int, tuple[Fraction, Fraction]] = {}
    for no, tokens in _content_lines(text):
        if tokens[0] != "i" or len(tokens) != 4:
            raise ParseError("expected 'i <v> <lo> <hi>'", source, no)
        v = _int(tokens[1], source, no)
        if v in intervals:
            raise ParseError(f"duplicate interval for vertex {v}", source, no)
        intervals[v] = (
            _fraction(tokens[2], source, no),
            _fraction(tokens[3], source, no),
        )
    model = IntervalModel(intervals)
    try:
        model.validate()
    except LineEmbedError as exc:
        raise ParseError(str(exc), source, None) from exc
    return model


def serialize_partition_cert(part: Partition) -> str:
    one = " ".join(str(v) for v in sorted(part.part1))
    two = " ".join(str(v) for v in sorted(part.part2))
    return f"part 1 {one}".rstrip() + "\n" + f"part 2 {two}".rstrip() + "\n"


def parse_partition_cert(text: str, source: Optional[str] = None) -> Partition:
    parts: dict[int, list[int]] = {}
    for no, tokens in _content_lines(text):
        if tokens[0] != "part" or len(tokens) < 2:
            raise ParseError("expected 'part <1|2> <vertices...>'", source, no)
        which = _int(tokens[1], source, no)
        if which not in (1, 2):
            raise ParseError(f"part number must be 1 or 2, got {which}", source, no)
        if which in parts:
            raise ParseError(f"duplicate 'part {which}' line", source, no)
        parts[which] = [_int(t, source, no) for t in tokens[2:]]
    if sorted(parts) != [1, 2]:
        raise ParseError("certificate must list part 1 and part 2", source, None)
    one, two = set(parts[1]), set(parts[2])
    n = len(parts[1]) + len(parts[2])
    if one & two or one | two != set(range(1, n + 1)):
        raise ParseError(
            "parts must be disjoint and cover 1..n exactly once", source, None
        )
    return build_partition(n, one)


def serialize_splitter_cert(x: SplitterSolution) -> str:
    body = " ".join(str(e) for e in sorted(x.chosen))
    return f"x {body}".rstrip() + "\n"


def parse_splitter_cert(
    text: str, source: Optional[str] = None
) -> SplitterSolution:
    lines = list(_content_lines(text))
    if len(lines) != 1 or lines[0][1][0] != "x":
        raise ParseError("expected a single 'x ...' line", source, None)
    no, tokens = lines[0]
    elems = [_int(t, source, no) for t in tokens[1:]]
    if len(set(elems)) != len(elems):
        raise ParseError("chosen elements repeat", source, no)
    return SplitterSolution(frozenset(elems))


def serialize_assignment_cert(assignment: Assignment) -> str:
    lits = [
        str(i if value else -i)
        for i, value in enumerate(assignment.values, start=1)
    ]
    return "v " + " ".join(lits + ["0"]) + "\n"


def parse_assignment_cert(text: str, source: Optional[str] = None) -> Assignment:
    lines = list(_content_lines(text))
    if len(lines) != 1 or lines[0][1][0] != "v":
        raise ParseError("expected a single 'v ...' line", source, None)
    no, tokens = lines[0]
    lits = [_int(t, source, no) for t in tokens[1:]]
    if not lits or lits[-1] != 0:
        raise ParseError("assignment line must end with 0", source, no)
    lits = lits[:-1]
    values: dict[int, bool] = {}
    for lit in lits:
        var = abs(lit)
        if lit == 0 or var in values:
            raise ParseError(f"bad or repeated literal {lit}", source, no)
        values[var] = lit > 0
    if sorted(values) != list(range(1, len(values) + 1)):
        raise ParseError(
            "assignment must cover variables 1..n exactly once", source, no
        )
    return Assignment(tuple(values[i] for i in range(1, len(values) + 1)))


# ---------------------------------------------------------------------------
# Reduction mappings
# ---------------------------------------------------------------------------


def _serialize_sat2ss(m: SatToSsMapping) -> list[str]:
    out = ["p map sat2ss"]
    out.append(f"x vars {m.num_vars}")
    out.append(f"x clauses {len(m.clauses)}")
    out.append(f"x special {m.special}")
    for i in range(1, m.num_vars + 1):
        out.append(f"map {m.element_of(i)} lit {i}")
        out.append(f"map {m.element_of(-i)} lit {-i}")
    for idx, (kind, ref) in enumerate(m.set_origins, start=1):
        out.append(f"map {idx} {kind}set {ref}")
    for clause in m.clauses:
        out.append("src " + " ".join(str(lit) for lit in clause) + " 0")
    return out


def _serialize_ss2adp(m: SsToAdpMapping) -> list[str]:
    out = ["p map ss2adp"]
    out.append(f"x universe {m.universe_size}")
    for u in range(1, m.universe_size + 1):
        out.append(f"map {u} d {u}")
    for (set_idx, elem), vertex in sorted(m.c_of.items(), key=lambda kv: kv[1]):
        out.append(f"map {vertex} c {set_idx} {elem}")
    return out


def _serialize_adp2lce(m: AdpToLceMapping) -> list[str]:
    out = ["p map adp2lce"]
    out.append(f"x digraph {m.digraph_n} {len(m.arcs)}")
    out.append("map 1 s")
    for idx, (a, b) in enumerate(m.arcs):
        out.append(f"map {m.checker_of(idx)} checker {a} {b}")
    for v in range(1, m.digraph_n + 1):
        out.append(f"map {m.align_of(v)} align {v}")
    return out


def serialize_mapping(mapping: AnyMapping) -> str:
    if isinstance(mapping, SatToSsMapping):
        lines = _serialize_sat2ss(mapping)
    elif isinstance(mapping, SsToAdpMapping):
        lines = _serialize_ss2adp(mapping)
    elif isinstance(mapping, AdpToLceMapping):
        lines = _serialize_adp2lce(mapping)
    elif isinstance(mapping, SatToLceMapping):
        lines = (
            _serialize_sat2ss(mapping.sat2ss)
            + _serialize_ss2adp(mapping.ss2adp)
            + _serialize_adp2lce(mapping.adp2lce)
        )
    else:
        raise TypeError(f"not a mapping object: {mapping!r}")
    return "\n".join(lines) + "\n"


def _parse_sat2ss(
    lines: list[tuple[int, list[str]]], source: Optional[str]
) -> SatToSsMapping:
    num_vars = num_clauses = special = None
    origins: dict[int, tuple[str, int]] = {}
    lit_of_elem: dict[int, int] = {}
    clauses: list[tuple[int, ...]] = []
    for no, tokens in lines:
        if tokens[0] == "x" and len(tokens) == 3:
            key, value = tokens[1], _int(tokens[2], source, no)
            if key == "vars":
                num_vars = value
            elif key == "clauses":
                num_clauses = value
            elif key == "special":
                special = value
            else:
                raise ParseError(f"unknown meta key {key!r}", source, no)
        elif tokens[0] == "map" and len(tokens) == 4 and tokens[2] == "lit":
            lit_of_elem[_int(tokens[1], source, no)] = _int(tokens[3], source, no)
        elif tokens[0] == "map" and len(tokens) == 4 and tokens[2] in (
            "varset",
            "clauseset",
        ):
            idx = _int(tokens[1], source, no)
            if idx in origins:
                raise ParseError(f"duplicate origin for set {idx}", source, no)
            origins[idx] = (tokens[2][:-3], _int(tokens[3], source, no))
        elif tokens[0] == "src":
            lits = [_int(t, source, no) for t in tokens[1:]]
            if not lits or lits[-1] != 0:
                raise ParseError("src clause must end with 0", source, no)
            clauses.append(tuple(lits[:-1]))
        else:
            raise ParseError("unexpected line in sat2ss mapping", source, no)
    if num_vars is None or num_clauses is None or special is None:
        raise ParseError("sat2ss mapping misses an 'x' meta line", source, None)
    if len(clauses) != num_clauses:
        raise ParseError(
            f"mapping declares {num_clauses} clauses, has {len(clauses)} src lines",
            source,
            None,
        )
    if sorted(origins) != list(range(1, num_vars + num_clauses + 1)):
        raise ParseError("set origins are not contiguous from 1", source, None)
    mapping = SatToSsMapping(
        num_vars=num_vars,
        clauses=tuple(clauses),
        special=special,
        set_origins=tuple(origins[i] for i in sorted(origins)),
    )
    for elem, lit in lit_of_elem.items():
        if mapping.element_of(lit) != elem:
            raise ParseError(
                f"literal line maps {lit} to element {elem}, expected "
                f"{mapping.element_of(lit)}",
                source,
                None,
            )
    if special != 2 * num_vars + 1:
        raise ParseError("special element does not match the scheme", source, None)
    return mapping


def _parse_ss2adp(
    lines: list[tuple[int, list[str]]], source: Optional[str]
) -> SsToAdpMapping:
    universe = None
    c_of: dict[tuple[int, int], int] = {}
    d_seen: set[int] = set()
    for no, tokens in lines:
        if tokens[0] == "x" and len(tokens) == 3 and tokens[1] == "universe":
            universe = _int(tokens[2], source, no)
        elif tokens[0] == "map" and len(tokens) == 4 and tokens[2] == "d":
            vertex = _int(tokens[1], source, no)
            elem = _int(tokens[3], source, no)
            if vertex != elem:
                raise ParseError(
                    f"element vertex {vertex} must equal element {elem}", source, no
                )
            d_seen.add(elem)
        elif tokens[0] == "map" and len(tokens) == 5 and tokens[2] == "c":
            vertex = _int(tokens[1], source, no)
            key = (_int(tokens[3], source, no), _int(tokens[4], source, no))
            if key in c_of:
                raise ParseError(f"duplicate membership vertex for {key}", source, no)
            c_of[key] = vertex
        else:
            raise ParseError("unexpected line in ss2adp mapping", source, no)
    if universe is None:
        raise ParseError("ss2adp mapping misses 'x universe'", source, None)
    if d_seen != set(range(1, universe + 1)):
        raise ParseError("element vertex lines do not cover 1..universe", source, None)
    return SsToAdpMapping(universe_size=universe, c_of=c_of)


def _parse_adp2lce(
    lines: list[tuple[int, list[str]]], source: Optional[str]
) -> AdpToLceMapping:
    digraph_n = digraph_m = None
    checkers: dict[int, tuple[int, int]] = {}
    aligns: dict[int, int] = {}
    saw_s = False
    for no, tokens in lines:
        if tokens[0] == "x" and len(tokens) == 4 and tokens[1] == "digraph":
            digraph_n = _int(tokens[2], source, no)
            digraph_m = _int(tokens[3], source, no)
        elif tokens[0] == "map" and len(tokens) == 3 and tokens[2] == "s":
            if _int(tokens[1], source, no) != 1:
                raise ParseError("special vertex must be 1", source, no)
            saw_s = True
        elif tokens[0] == "map" and len(tokens) == 5 and tokens[2] == "checker":
            vertex = _int(tokens[1], source, no)
            checkers[vertex] = (
                _int(tokens[3], source, no),
                _int(tokens[4], source, no),
            )
        elif tokens[0] == "map" and len(tokens) == 4 and tokens[2] == "align":
            aligns[_int(tokens[1], source, no)] = _int(tokens[3], source, no)
        else:
            raise ParseError("unexpected line in adp2lce mapping", source, no)
    if digraph_n is None or digraph_m is None:
        raise ParseError("adp2lce mapping misses 'x digraph'", source, None)
    if not saw_s:
        raise ParseError("adp2lce mapping misses 'map 1 s'", source, None)
    if sorted(checkers) != list(range(2, digraph_m + 2)):
        raise ParseError("checker vertices are not 2..|A|+1", source, None)
    arcs = tuple(checkers[v] for v in sorted(checkers))
    mapping = AdpToLceMapping(digraph_n=digraph_n, arcs=arcs)
    want_aligns = {mapping.align_of(v): v for v in range(1, digraph_n + 1)}
    if aligns != want_aligns:
        raise ParseError("alignment vertex lines do not match the scheme", source, None)
    return mapping


def parse_mapping(text: str, source: Optional[str] = None) -> AnyMapping:
    sections: list[tuple[str, list[tuple[int, list[str]]]]] = []
    for no, tokens in _content_lines(text):
        if tokens[0] == "p":
            if len(tokens) != 3 or tokens[1] != "map":
                raise ParseError("expected 'p map <stage>' header", source, no)
            sections.append((tokens[2], []))
        elif not sections:
            raise ParseError("content before the first 'p map' header", source, no)
        else:
            sections[-1][1].append((no, tokens))
    parsers = {"sat2ss": _parse_sat2ss, "ss2adp": _parse_ss2adp, "adp2lce": _parse_adp2lce}
    parsed = []
    for stage, lines in sections:
        if stage not in parsers:
            raise ParseError(f"unknown mapping stage {stage!r}", source, None)
        parsed.append((stage, parsers[stage](lines, source)))
    stages = [stage for stage, _ in parsed]
    if stages in (["sat2ss"], ["ss2adp"], ["adp2lce"]):
        return parsed[0][1]
    if stages == ["sat2ss", "ss2adp", "adp2lce"]:
        return SatToLceMapping(parsed[0][1], parsed[1][1], parsed[2][1])
    raise ParseError(
        "mapping file must hold one stage or the full sat2ss, ss2adp, adp2lce chain",
        source,
        None,
    )
