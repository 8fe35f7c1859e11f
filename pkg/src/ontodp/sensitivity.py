"""Count queries and sensitivity under classical, onto and attacker-perceived semantics.

The main functions are anchored at one database ``d``: they maximize the
answer gap over the neighborhood of ``d`` rather than over every pair in the
whole space. :func:`global_sensitivity` does the full pairwise maximization
over an explicitly enumerated space, which is only feasible for tiny
universes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Literal

from .errors import RuleError
from .graph import Graph, Triple, bounded_neighbors
from .rules import DEFAULT_ANTECEDENT_CAP, Atom, is_var, match_atoms
from .spaces import (
    AttackerInstance,
    SpaceConfig,
    require_saturated,
    attack_space,
    defense_space,
    onto_neighbors,
    priors_considering,
)

SensitivitySemantics = Literal["classical", "onto", "perceived"]


@dataclass(frozen=True)
class CountQuery:
    pattern: tuple[Atom, ...]
    counted_variable: str
    distinct: bool = True

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        if not self.pattern:
            raise RuleError("a count query needs at least one pattern atom")
        if not is_var(self.counted_variable):
            raise RuleError(f"counted term {self.counted_variable!r} is not a variable")
        if not any(self.counted_variable in a.variables() for a in self.pattern):
            raise RuleError(f"{self.counted_variable} does not occur in the pattern")
        if not self.distinct:
            raise RuleError("only COUNT DISTINCT is supported")

    def __str__(self) -> str:
        return f"COUNT DISTINCT {self.counted_variable} WHERE " + " & ".join(map(str, self.pattern))


def evaluate(q: CountQuery, g: Graph) -> int:
    return len({s[q.counted_variable] for s in match_atoms(q.pattern, g)})


@dataclass(frozen=True)
class SensitivityReport:
    """A sensitivity value with the pair of graphs that achieves it.

    ``empty_neighborhood`` flags the degenerate case where the anchor has no
    admissible neighbor at all, so the value 0 carries no information.
    """

    semantics: SensitivitySemantics
    value: int
    witness: tuple[Graph, Graph] | None
    neighborhood_size: int
    empty_neighborhood: bool

    def to_dict(self, verbose: bool = False) -> dict:
        out = {
            "semantics": self.semantics,
            "sensitivity": self.value,
            "neighborhood_size": self.neighborhood_size,
            "empty_neighborhood": self.empty_neighborhood,
        }
        if verbose and self.witness is not None:
            out["witness"] = [[f"{t.subject} {t.predicate} {t.object}" for t in g.sorted()] for g in self.witness]
        return out


def _anchored(q: CountQuery, d: Graph, neighbors: Iterable[Graph], semantics) -> SensitivityReport:
    base = evaluate(q, d)
    best, witness, n = 0, None, 0
    for g in neighbors:
        n += 1
        gap = abs(base - evaluate(q, g))
        if witness is None or gap > best:
            best, witness = gap, (d, g)
    return SensitivityReport(semantics, best, witness, n, n == 0)


def classical_report(q: CountQuery, d: Graph, cfg: SpaceConfig) -> SensitivityReport:
    return _anchored(q, d, sorted(defense_space(d, cfg) - {d}, key=Graph.sorted), "classical")


def onto_report(q: CountQuery, d: Graph, cfg: SpaceConfig, cap: int = DEFAULT_ANTECEDENT_CAP) -> SensitivityReport:
    return _anchored(q, d, sorted(onto_neighbors(d, cfg, cap), key=Graph.sorted), "onto")


def perceived_report(
    q: CountQuery, d: Graph, cfg: SpaceConfig, cap: int = DEFAULT_ANTECEDENT_CAP
) -> SensitivityReport:
    """Largest answer gap one up-to-one attacker sees inside its own attack space.

    Priors range over those whose attack space contains ``d``.
    """
    require_saturated(d, cfg.rules)
    best, witness, n = 0, None, 0
    for prior in sorted(priors_considering(d, cfg, cap), key=Graph.sorted):
        space = sorted(attack_space(AttackerInstance(prior, cfg.rules), cfg), key=Graph.sorted)
        n += 1
        scored = [(evaluate(q, g), g) for g in space]
        lo = min(scored, key=lambda x: x[0])
        hi = max(scored, key=lambda x: x[0])
        gap = hi[0] - lo[0]
        if witness is None or gap > best:
            best, witness = gap, (lo[1], hi[1])
    return SensitivityReport("perceived", best, witness, n, n == 0)


def classical_sensitivity(q: CountQuery, d: Graph, cfg: SpaceConfig) -> int:
    return classical_report(q, d, cfg).value


def onto_sensitivity(q: CountQuery, d: Graph, cfg: SpaceConfig, cap: int = DEFAULT_ANTECEDENT_CAP) -> int:
    return onto_report(q, d, cfg, cap).value


def perceived_sensitivity(q: CountQuery, d: Graph, cfg: SpaceConfig, cap: int = DEFAULT_ANTECEDENT_CAP) -> int:
    return perceived_report(q, d, cfg, cap).value


def sensitivity_report(
    q: CountQuery, d: Graph, cfg: SpaceConfig, semantics: SensitivitySemantics, cap: int = DEFAULT_ANTECEDENT_CAP
) -> SensitivityReport:
    if semantics == "classical":
        return classical_report(q, d, cfg)
    if semantics == "onto":
        return onto_report(q, d, cfg, cap)
    if semantics == "perceived":
        return perceived_report(q, d, cfg, cap)
    raise ValueError(f"unknown semantics {semantics!r}")


def enumerate_space(base: Graph, universe: Iterable[Triple], cfg: SpaceConfig) -> frozenset[Graph]:
    """Every admissible graph ``base ∪ S`` for ``S`` ranging over subsets of ``universe``.

    Exponential in ``len(universe)``; intended for universes of a dozen or so triples.
    """
    free = sorted(set(universe) - base.triples)
    out = set()
    for k in range(len(free) + 1):
        for combo in combinations(free, k):
            g = base | combo
            if cfg.admits(g):
                out.add(g)
    return frozenset(out)


def global_sensitivity(
    q: CountQuery,
    space: Iterable[Graph],
    cfg: SpaceConfig,
    semantics: Literal["classical", "onto"] = "classical",
    cap: int = DEFAULT_ANTECEDENT_CAP,
) -> int:
    """Max answer gap over all neighbor pairs of an explicitly given space."""
    space = frozenset(space)
    values = {g: evaluate(q, g) for g in space}
    best = 0
    for g in space:
        if semantics == "classical":
            nbrs = bounded_neighbors(g, cfg.universe(g)) & space
        else:
            nbrs = onto_neighbors(g, cfg, cap)
        for h in nbrs:
            best = max(best, abs(values[g] - (values[h] if h in values else evaluate(q, h))))
    return best
