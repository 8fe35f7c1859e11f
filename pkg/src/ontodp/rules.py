"""Positive Horn rules over triples: matching, saturation and antecedents."""

from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import AntecedentBudgetExceeded, FixpointBudgetExceeded, NotSaturated, RuleError
from .graph import Graph, Triple

DEFAULT_TRIPLE_CAP = 1_000_000
DEFAULT_ANTECEDENT_CAP = 20

Substitution = Mapping[str, str]


def is_var(term: str) -> bool:
    return term.startswith("?")


@dataclass(frozen=True)
class Atom:
    predicate: str
    subject: str
    object: str

    def variables(self) -> set[str]:
        return {t for t in (self.subject, self.object) if is_var(t)}

    def instantiate(self, sigma: Substitution) -> Triple:
        s = sigma[self.subject] if is_var(self.subject) else self.subject
        o = sigma[self.object] if is_var(self.object) else self.object
        return Triple(s, self.predicate, o)

    def unifies(self, t: Triple) -> bool:
        if t.predicate != self.predicate:
            return False
        if not is_var(self.subject) and self.subject != t.subject:
            return False
        if not is_var(self.object) and self.object != t.object:
            return False
        if is_var(self.subject) and self.subject == self.object and t.subject != t.object:
            return False
        return True

    def __str__(self) -> str:
        return f"{self.predicate}({self.subject},{self.object})"


@dataclass(frozen=True)
class Rule:
    body: tuple[Atom, ...]
    head: Atom

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        if not self.body:
            raise RuleError("rule body must contain at least one atom")
        bound = set().union(*(a.variables() for a in self.body))
        missing = self.head.variables() - bound
        if missing:
            raise RuleError(f"unsafe rule {self}: head variables {sorted(missing)} do not occur in the body")

    def variables(self) -> set[str]:
        return set().union(*(a.variables() for a in self.body))

    def __str__(self) -> str:
        return " & ".join(map(str, self.body)) + f" => {self.head}"


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def head_unifiable(self, t: Triple) -> bool:
        return any(r.head.unifies(t) for r in self.rules)


EMPTY_RULES = RuleSet()


class _Index:
    """Triples grouped by predicate, and by (predicate, subject) / (predicate, object)."""

    def __init__(self, triples: Iterable[Triple] = ()):
        self.by_p: dict[str, set[Triple]] = defaultdict(set)
        self.by_ps: dict[tuple[str, str], set[Triple]] = defaultdict(set)
        self.by_po: dict[tuple[str, str], set[Triple]] = defaultdict(set)
        for t in triples:
            self.add(t)

    def add(self, t: Triple) -> None:
        self.by_p[t.predicate].add(t)
        self.by_ps[t.predicate, t.subject].add(t)
        self.by_po[t.predicate, t.object].add(t)

    def candidates(self, atom: Atom, sigma: dict[str, str]) -> Iterable[Triple]:
        s = sigma.get(atom.subject, None) if is_var(atom.subject) else atom.subject
        o = sigma.get(atom.object, None) if is_var(atom.object) else atom.object
        if s is not None:
            return self.by_ps.get((atom.predicate, s), ())
        if o is not None:
            return self.by_po.get((atom.predicate, o), ())
        return self.by_p.get(atom.predicate, ())


def _bind(atom: Atom, t: Triple, sigma: dict[str, str]) -> dict[str, str] | None:
    if not atom.unifies(t):
        return None
    out = sigma
    for term, value in ((atom.subject, t.subject), (atom.object, t.object)):
        if not is_var(term):
            continue
        bound = out.get(term)
        if bound is None:
            if out is sigma:
                out = dict(sigma)
            out[term] = value
        elif bound != value:
            return None
    return out


def _join(atoms: list[Atom], indexes: list[_Index], sigma: dict[str, str]) -> Iterator[dict[str, str]]:
    if not atoms:
        yield sigma
        return
    atom, rest = atoms[0], atoms[1:]
    for t in indexes[0].candidates(atom, sigma):
        nxt = _bind(atom, t, sigma)
        if nxt is not None:
            yield from _join(rest, indexes[1:], nxt)


def match_atoms(atoms: Iterable[Atom], g: Graph) -> list[dict[str, str]]:
    """Every substitution over the atoms' variables that maps each atom into ``g``."""
    atoms = list(atoms)
    idx = _Index(g)
    seen = {tuple(sorted(s.items())) for s in _join(atoms, [idx] * len(atoms), {})}
    return [dict(items) for items in sorted(seen)]


def match(rule: Rule, g: Graph) -> list[dict[str, str]]:
    """Substitutions making every body atom of ``rule`` a triple of ``g``, in sorted order."""
    return match_atoms(rule.body, g)


@functools.lru_cache(maxsize=1 << 16)
def saturate(g: Graph, rules: RuleSet = EMPTY_RULES, triple_cap: int = DEFAULT_TRIPLE_CAP) -> Graph:
    """Least fixpoint of ``rules`` containing ``g``, by semi-naive evaluation.

    Each round only joins rule bodies where at least one atom is matched
    against the triples derived in the previous round.
    """
    if not rules.rules:
        return g
    total = set(g.triples)
    full = _Index(total)
    delta = _Index(total)
    while True:
        derived: set[Triple] = set()
        for rule in rules:
            body = list(rule.body)
            for i in range(len(body)):
                if body[i].predicate not in delta.by_p:
                    continue
                order = [body[i]] + body[:i] + body[i + 1:]
                idxs = [delta] + [full] * (len(body) - 1)
                for sigma in _join(order, idxs, {}):
                    t = rule.head.instantiate(sigma)
                    if t not in total:
                        derived.add(t)
        if not derived:
            break
        total |= derived
        if len(total) > triple_cap:
            raise FixpointBudgetExceeded(f"saturation exceeded {triple_cap} triples")
        delta = _Index(derived)
        for t in derived:
            full.add(t)
    return Graph(total) if len(total) != len(g) else g


def is_saturated(g: Graph, rules: RuleSet = EMPTY_RULES) -> bool:
    return saturate(g, rules) == g


def antecedents(g: Graph, rules: RuleSet = EMPTY_RULES, cap: int = DEFAULT_ANTECEDENT_CAP) -> frozenset[Graph]:
    """All sub-graphs of ``g`` whose saturation is ``g``.

    Only triples unifying with a rule head can be dropped; anything else would
    never come back. Removal sets are tried smallest first, and a set that
    fails poisons all of its supersets, because a smaller sub-graph can only
    derive less.
    """
    if not is_saturated(g, rules):
        raise NotSaturated("antecedents are only defined for saturated graphs")
    candidates = sorted(t for t in g if rules.head_unifiable(t))
    if len(candidates) > cap:
        raise AntecedentBudgetExceeded(
            f"{len(candidates)} removable triples exceed the antecedent cap of {cap}"
        )
    out = {g}
    failed: list[int] = []
    n = len(candidates)
    for k in range(1, n + 1):
        for combo in combinations(range(n), k):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if any(f & mask == f for f in failed):
                continue
            removed = [candidates[i] for i in combo]
            a = g - removed
            # a is a sub-graph of a saturated g, so saturate(a) ⊆ g already.
            back = saturate(a, rules)
            if all(t in back for t in removed):
                out.add(a)
            else:
                failed.append(mask)
    return frozenset(out)
