"""Defense spaces, up-to-one attack spaces and onto-neighborhoods.

Every space is a finite ``frozenset`` of :class:`~ontodp.graph.Graph`. The
edge universe is closed: neighbor generation never introduces nodes that the
graph (or the attacker's prior) does not already contain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

from .errors import NotSaturated
from .graph import Graph, Schema, Triple, bounded_neighbors, edge_universe, is_valid
from .rules import DEFAULT_ANTECEDENT_CAP, EMPTY_RULES, RuleSet, antecedents, is_saturated, saturate

Semantics = Literal["classical", "onto"]


@dataclass(frozen=True)
class SpaceConfig:
    """Where neighbors live.

    ``restrict_to_valid`` keeps only graphs that satisfy the schema constraints
    and are saturated under ``rules``.
    """

    schema: Schema = field(default_factory=Schema)
    rules: RuleSet = EMPTY_RULES
    universe_override: frozenset[Triple] | None = None
    restrict_to_valid: bool = False

    def __post_init__(self):
        if self.universe_override is not None:
            object.__setattr__(self, "universe_override", frozenset(self.universe_override))

    def universe(self, g: Graph) -> frozenset[Triple]:
        if self.universe_override is not None:
            return self.universe_override
        return edge_universe(g, self.schema)

    def admits(self, g: Graph, rules: RuleSet | None = None) -> bool:
        if not self.restrict_to_valid:
            return True
        rules = self.rules if rules is None else rules
        return is_saturated(g, rules) and is_valid(g, self.schema)


@dataclass(frozen=True)
class AttackerInstance:
    prior: Graph
    rules: RuleSet = EMPTY_RULES


def defense_space(d: Graph, cfg: SpaceConfig) -> frozenset[Graph]:
    """``d`` plus its bounded neighbors that pass membership."""
    return frozenset({d} | {g for g in bounded_neighbors(d, cfg.universe(d)) if cfg.admits(g)})


def attack_space(attacker: AttackerInstance, cfg: SpaceConfig) -> frozenset[Graph]:
    """Saturations of the prior plus one candidate edge that pass membership."""
    prior, rules = attacker.prior, attacker.rules
    out = set()
    for e in cfg.universe(prior) - prior.triples:
        c = saturate(prior.add(e), rules)
        if cfg.admits(c, rules):
            out.add(c)
    return frozenset(out)


def require_saturated(d: Graph, rules: RuleSet) -> None:
    if not is_saturated(d, rules):
        raise NotSaturated("the anchor database must be saturated")


def onto_neighbors(d: Graph, cfg: SpaceConfig, cap: int = DEFAULT_ANTECEDENT_CAP) -> frozenset[Graph]:
    """Saturated graphs other than ``d`` having an antecedent one swap away from an antecedent of ``d``."""
    require_saturated(d, cfg.rules)
    out = set()
    for a in antecedents(d, cfg.rules, cap):
        for a2 in bounded_neighbors(a, cfg.universe(a)):
            c = saturate(a2, cfg.rules)
            if c != d and c not in out and cfg.admits(c):
                out.add(c)
    return frozenset(out)


def priors_considering(d: Graph, cfg: SpaceConfig, cap: int = DEFAULT_ANTECEDENT_CAP) -> frozenset[Graph]:
    """Every up-to-one prior whose attack space contains ``d``.

    Such a prior is an antecedent of ``d`` with one mutable edge removed. None
    exists when ``d`` itself fails membership.
    """
    require_saturated(d, cfg.rules)
    if not cfg.admits(d):
        return frozenset()
    out = set()
    for a in antecedents(d, cfg.rules, cap):
        for e in a.triples & cfg.universe(a):
            out.add(a.remove(e))
    return frozenset(out)


def attacker_union(d: Graph, cfg: SpaceConfig, cap: int = DEFAULT_ANTECEDENT_CAP) -> frozenset[Graph]:
    out: set[Graph] = set()
    for prior in priors_considering(d, cfg, cap):
        out |= attack_space(AttackerInstance(prior, cfg.rules), cfg)
    return frozenset(out)


def protected_space(
    d: Graph, cfg: SpaceConfig, semantics: Semantics, cap: int = DEFAULT_ANTECEDENT_CAP
) -> frozenset[Graph]:
    """The curator's defense space under either neighborhood notion."""
    if semantics == "classical":
        return defense_space(d, cfg)
    if semantics == "onto":
        return frozenset({d}) | onto_neighbors(d, cfg, cap)
    raise ValueError(f"unknown semantics {semantics!r}")


def _canonical_list(graphs: Iterable[Graph]) -> list[list[str]]:
    rendered = [[f"{t.subject} {t.predicate} {t.object}" for t in g.sorted()] for g in graphs]
    return sorted(rendered)


@dataclass(frozen=True)
class WellSuitedReport:
    semantics: Semantics
    defense: frozenset[Graph]
    attack_union: frozenset[Graph]

    @property
    def equal(self) -> bool:
        return self.defense == self.attack_union

    @property
    def leakage(self) -> frozenset[Graph]:
        """Graphs some attacker considers but the curator does not protect."""
        return self.attack_union - self.defense

    @property
    def overprotection(self) -> frozenset[Graph]:
        return self.defense - self.attack_union

    def to_dict(self) -> dict:
        return {
            "semantics": self.semantics,
            "equal": self.equal,
            "defense_size": len(self.defense),
            "attack_union_size": len(self.attack_union),
            "leakage": _canonical_list(self.leakage),
            "overprotection": _canonical_list(self.overprotection),
        }


def check_well_suited(
    d: Graph, cfg: SpaceConfig, semantics: Semantics = "onto", cap: int = DEFAULT_ANTECEDENT_CAP
) -> WellSuitedReport:
    require_saturated(d, cfg.rules)
    return WellSuitedReport(semantics, protected_space(d, cfg, semantics, cap), attacker_union(d, cfg, cap))
