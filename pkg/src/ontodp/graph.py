"""Triple-set graphs, schemas, edge distances and neighbor generation."""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Mapping, NamedTuple

from .errors import SchemaError, SchemaViolation

TOKEN_RE = re.compile(r"^[A-Za-z0-9_:]+$")


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: str

    @classmethod
    def checked(cls, subject: str, predicate: str, obj: str) -> "Triple":
        for tok in (subject, predicate, obj):
            if not TOKEN_RE.match(tok):
                raise ValueError(f"invalid identifier {tok!r}")
        return cls(subject, predicate, obj)

    def __str__(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} ."


class Graph:
    """An immutable finite set of triples.

    Equality and hashing are set-based, so graphs can be members of sets and
    dictionary keys, which is how every space in this package is represented.
    """

    __slots__ = ("_triples",)

    def __init__(self, triples: Iterable[Triple | tuple[str, str, str]] = ()):
        self._triples = frozenset(t if isinstance(t, Triple) else Triple(*t) for t in triples)

    @classmethod
    def _wrap(cls, triples: frozenset) -> "Graph":
        g = cls.__new__(cls)
        g._triples = triples
        return g

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Graph):
            return self._triples == other._triples
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._triples)

    def __le__(self, other: "Graph") -> bool:
        return self._triples <= other._triples

    def __or__(self, other: "Graph | Iterable[Triple]") -> "Graph":
        return Graph._wrap(self._triples | _as_set(other))

    def __sub__(self, other: "Graph | Iterable[Triple]") -> "Graph":
        return Graph._wrap(self._triples - _as_set(other))

    def __and__(self, other: "Graph | Iterable[Triple]") -> "Graph":
        return Graph._wrap(self._triples & _as_set(other))

    def add(self, t: Triple) -> "Graph":
        return Graph._wrap(self._triples | {t})

    def remove(self, t: Triple) -> "Graph":
        return Graph._wrap(self._triples - {t})

    def nodes(self) -> frozenset[str]:
        return frozenset(x for t in self._triples for x in (t.subject, t.object))

    def sorted(self) -> list[Triple]:
        return sorted(self._triples)

    def canonical(self) -> str:
        """Sorted ``s p o .`` lines; byte-stable across runs."""
        return "".join(f"{t}\n" for t in self.sorted())

    def __repr__(self) -> str:
        inner = ", ".join(f"{t.subject} {t.predicate} {t.object}" for t in self.sorted())
        return f"Graph({{{inner}}})"


def _as_set(x) -> frozenset:
    if isinstance(x, Graph):
        return x.triples
    return frozenset(x)


EMPTY = Graph()


@dataclass(frozen=True)
class Signature:
    subject_type: str
    object_type: str


Comparator = Literal["exactly", "atMost", "atLeast"]


@dataclass(frozen=True)
class Cardinality:
    """Bound on how many ``predicate`` edges each node of ``type`` has.

    With ``incoming`` set, edges are counted where the node is the object,
    e.g. every patient has exactly one ``hasPatient`` edge pointing at it.
    """

    type: str
    predicate: str
    comparator: Comparator
    bound: int
    incoming: bool = False

    def holds(self, n: int) -> bool:
        if self.comparator == "exactly":
            return n == self.bound
        if self.comparator == "atMost":
            return n <= self.bound
        return n >= self.bound

    def __str__(self) -> str:
        pred = f"^{self.predicate}" if self.incoming else self.predicate
        return f"({self.type}, {pred}, {self.comparator}, {self.bound})"


@dataclass(frozen=True)
class Schema:
    predicates: Mapping[str, Signature] = field(default_factory=dict)
    mutable: Mapping[str, bool] = field(default_factory=dict)
    cardinalities: tuple[Cardinality, ...] = ()
    type_predicate: str = "hasType"

    def __post_init__(self):
        object.__setattr__(self, "predicates", dict(self.predicates))
        object.__setattr__(self, "mutable", {p: bool(self.mutable.get(p, False)) for p in self.predicates})
        object.__setattr__(self, "cardinalities", tuple(self.cardinalities))
        for c in self.cardinalities:
            if c.predicate not in self.predicates:
                raise SchemaError(f"constraint {c} names undeclared predicate {c.predicate!r}")
            if c.bound < 0:
                raise SchemaError(f"constraint {c} has a negative bound")
        if self.mutable.get(self.type_predicate, False):
            raise SchemaError(f"type predicate {self.type_predicate!r} cannot be mutable")

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.predicates.items(), key=lambda kv: kv[0])),
                     tuple(sorted(self.mutable.items())), self.cardinalities, self.type_predicate))

    def is_mutable(self, predicate: str) -> bool:
        return self.mutable.get(predicate, False)

    def types_of(self, g: Graph) -> dict[str, set[str]]:
        out: dict[str, set[str]] = defaultdict(set)
        for t in g:
            if t.predicate == self.type_predicate:
                out[t.subject].add(t.object)
        return out


@dataclass(frozen=True)
class Violation:
    kind: Literal["undeclared", "signature", "cardinality"]
    node: str
    detail: str
    constraint: Cardinality | None = None


def contains(inner: Graph, outer: Graph) -> bool:
    return inner.triples <= outer.triples


def edge_distance(g1: Graph, g2: Graph) -> int:
    """Edit distance between triple sets where replacing one edge by another costs 1.

    On equally sized graphs this is the bounded (swap) distance: the hospital
    true database and the plausible neighbor are 3 apart even though their
    symmetric difference has 6 triples. Use :func:`unbounded_distance` for the
    add/delete count.
    """
    a, b = g1.triples, g2.triples
    return max(len(a - b), len(b - a))


def unbounded_distance(g1: Graph, g2: Graph) -> int:
    """Size of the symmetric difference: every addition or deletion costs 1."""
    return len(g1.triples ^ g2.triples)


def edge_universe(g: Graph, schema: Schema) -> frozenset[Triple]:
    """All well-typed triples over the nodes of ``g`` for every mutable predicate."""
    for t in g:
        if t.predicate != schema.type_predicate and t.predicate not in schema.predicates:
            raise SchemaViolation(f"predicate {t.predicate!r} is not declared (in {t})")
    by_type: dict[str, list[str]] = defaultdict(list)
    for node, types in schema.types_of(g).items():
        for ty in types:
            by_type[ty].append(node)
    out = set()
    for p, sig in schema.predicates.items():
        if not schema.is_mutable(p):
            continue
        for s in by_type.get(sig.subject_type, ()):
            for o in by_type.get(sig.object_type, ()):
                out.add(Triple(s, p, o))
    return frozenset(out)


def unbounded_neighbors(
    g: Graph, universe: Iterable[Triple], direction: Literal["add", "remove", "both"] = "both"
) -> frozenset[Graph]:
    universe = frozenset(universe)
    out: set[Graph] = set()
    if direction in ("add", "both"):
        out.update(g.add(e) for e in universe - g.triples)
    if direction in ("remove", "both"):
        out.update(g.remove(e) for e in g.triples & universe)
    if direction not in ("add", "remove", "both"):
        raise ValueError(f"unknown direction {direction!r}")
    return frozenset(out)


def bounded_neighbors(g: Graph, universe: Iterable[Triple]) -> frozenset[Graph]:
    """Graphs obtained by swapping one mutable edge of ``g`` for one absent universe edge.

    An edge of ``g`` counts as mutable when it belongs to ``universe``.
    """
    universe = frozenset(universe)
    present = g.triples & universe
    absent = universe - g.triples
    base = g.triples
    return frozenset(Graph._wrap((base - {e}) | {f}) for e in present for f in absent)


def validate(g: Graph, schema: Schema) -> list[Violation]:
    violations: list[Violation] = []
    types = schema.types_of(g)
    for t in sorted(g):
        if t.predicate == schema.type_predicate:
            continue
        sig = schema.predicates.get(t.predicate)
        if sig is None:
            violations.append(Violation("undeclared", t.subject, f"undeclared predicate in {t}"))
            continue
        if sig.subject_type not in types.get(t.subject, ()):
            violations.append(Violation("signature", t.subject, f"{t}: subject is not a {sig.subject_type}"))
        if sig.object_type not in types.get(t.object, ()):
            violations.append(Violation("signature", t.object, f"{t}: object is not a {sig.object_type}"))

    if schema.cardinalities:
        out_count: Counter = Counter()
        in_count: Counter = Counter()
        for t in g:
            out_count[t.subject, t.predicate] += 1
            in_count[t.object, t.predicate] += 1
        typed = sorted((node, ty) for node, tys in types.items() for ty in tys)
        for c in schema.cardinalities:
            counts = in_count if c.incoming else out_count
            for node, ty in typed:
                if ty != c.type:
                    continue
                n = counts[node, c.predicate]
                if not c.holds(n):
                    violations.append(
                        Violation("cardinality", node, f"{node} has {n} {c.predicate} edges, expected {c}", c)
                    )
    return violations


def is_valid(g: Graph, schema: Schema) -> bool:
    return not validate(g, schema)
