"""Line-oriented text formats for graphs, schemas, rules and count queries.

Every parser raises :class:`~ontodp.errors.ParseError` carrying the 1-based
line number of the first offending line.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import ParseError, RuleError, SchemaError
from .graph import TOKEN_RE, Cardinality, Graph, Schema, Signature, Triple
from .rules import Atom, Rule, RuleSet
from .sensitivity import CountQuery

_TERM = r"\??[A-Za-z0-9_:]+"
ATOM_RE = re.compile(rf"^\s*([A-Za-z0-9_:]+)\s*\(\s*({_TERM})\s*,\s*({_TERM})\s*\)\s*$")
QUERY_RE = re.compile(r"^\s*COUNT\s+DISTINCT\s+(\?[A-Za-z0-9_:]+)\s+WHERE\s+(.+)$", re.IGNORECASE)
_COMPARATORS = {"exactly": "exactly", "atmost": "atMost", "atleast": "atLeast"}


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_triples(text: str, path: str | None = None) -> Graph:
    triples = []
    for lineno, line in _lines(text):
        tokens = line.split()
        if tokens and tokens[-1] == ".":
            tokens.pop()
        elif tokens and tokens[-1].endswith("."):
            tokens[-1] = tokens[-1][:-1]
        if len(tokens) != 3:
            raise ParseError(f"expected 3 tokens, found {len(tokens)}: {line!r}", lineno, path)
        bad = [t for t in tokens if not TOKEN_RE.match(t)]
        if bad:
            raise ParseError(f"invalid identifier {bad[0]!r}", lineno, path)
        triples.append(Triple(*tokens))
    return Graph(triples)


def format_triples(g: Graph) -> str:
    return g.canonical()


def parse_atom(text: str) -> Atom:
    m = ATOM_RE.match(text)
    if not m:
        raise ValueError(f"malformed atom {text.strip()!r}")
    pred, s, o = m.groups()
    return Atom(pred, s, o)


def parse_rules(text: str, path: str | None = None) -> RuleSet:
    rules = []
    for lineno, line in _lines(text):
        if line.count("=>") != 1:
            raise ParseError("a rule needs exactly one '=>'", lineno, path)
        body_text, head_text = line.split("=>")
        try:
            body = [parse_atom(a) for a in body_text.split("&")]
            head = parse_atom(head_text)
            rules.append(Rule(tuple(body), head))
        except (ValueError, RuleError) as exc:
            raise ParseError(str(exc), lineno, path) from None
    return RuleSet(tuple(rules))


def format_rules(rules: RuleSet) -> str:
    return "".join(f"{r}\n" for r in rules)


def parse_schema(text: str, path: str | None = None) -> Schema:
    predicates: dict[str, Signature] = {}
    mutable: dict[str, bool] = {}
    constraints: list[tuple[int, Cardinality]] = []
    type_predicate = "hasType"
    for lineno, line in _lines(text):
        parts = line.split()
        kind = parts[0]
        if kind == "predicate":
            if len(parts) != 5 or parts[4] not in ("mutable", "immutable"):
                raise ParseError("expected: predicate <name> <subjType> <objType> <mutable|immutable>", lineno, path)
            _, name, st, ot, flag = parts
            if name in predicates:
                raise ParseError(f"predicate {name!r} declared twice", lineno, path)
            predicates[name] = Signature(st, ot)
            mutable[name] = flag == "mutable"
        elif kind == "cardinality":
            if len(parts) != 5:
                raise ParseError("expected: cardinality <type> <predicate> <exactly|atMost|atLeast> <n>", lineno, path)
            _, ty, pred, comp, n = parts
            comparator = _COMPARATORS.get(comp.lower())
            if comparator is None:
                raise ParseError(f"unknown comparator {comp!r}", lineno, path)
            if not n.isdigit():
                raise ParseError(f"bound must be a natural number, got {n!r}", lineno, path)
            incoming = pred.startswith("^")
            constraints.append((lineno, Cardinality(ty, pred.lstrip("^"), comparator, int(n), incoming)))
        elif kind == "typePredicate":
            if len(parts) != 2:
                raise ParseError("expected: typePredicate <name>", lineno, path)
            type_predicate = parts[1]
        else:
            raise ParseError(f"unknown schema directive {kind!r}", lineno, path)
    for lineno, c in constraints:
        if c.predicate not in predicates:
            raise ParseError(f"constraint names undeclared predicate {c.predicate!r}", lineno, path)
    try:
        return Schema(predicates, mutable, tuple(c for _, c in constraints), type_predicate)
    except SchemaError as exc:
        raise ParseError(str(exc), None, path) from None


def format_schema(schema: Schema) -> str:
    lines = [f"typePredicate {schema.type_predicate}"]
    for name in sorted(schema.predicates):
        sig = schema.predicates[name]
        flag = "mutable" if schema.is_mutable(name) else "immutable"
        lines.append(f"predicate {name} {sig.subject_type} {sig.object_type} {flag}")
    for c in schema.cardinalities:
        pred = f"^{c.predicate}" if c.incoming else c.predicate
        lines.append(f"cardinality {c.type} {pred} {c.comparator} {c.bound}")
    return "\n".join(lines) + "\n"


def parse_query(text: str, path: str | None = None) -> CountQuery:
    lines = list(_lines(text))
    if len(lines) != 1:
        raise ParseError(f"expected exactly one query line, found {len(lines)}", None, path)
    lineno, line = lines[0]
    m = QUERY_RE.match(line)
    if not m:
        raise ParseError("expected: COUNT DISTINCT ?var WHERE atom & atom ...", lineno, path)
    var, where = m.groups()
    try:
        atoms = tuple(parse_atom(a) for a in where.split("&"))
        return CountQuery(atoms, var)
    except (ValueError, RuleError) as exc:
        raise ParseError(str(exc), lineno, path) from None


def format_query(q: CountQuery) -> str:
    return f"COUNT DISTINCT {q.counted_variable} WHERE " + " & ".join(map(str, q.pattern)) + "\n"


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, str(path)) from None


def load_triples(path: str | Path) -> Graph:
    return parse_triples(_read(path), str(path))


def load_rules(path: str | Path) -> RuleSet:
    return parse_rules(_read(path), str(path))


def load_schema(path: str | Path) -> Schema:
    return parse_schema(_read(path), str(path))


def load_query(path: str | Path) -> CountQuery:
    return parse_query(_read(path), str(path))
