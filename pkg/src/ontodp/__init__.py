"""Ontology-aware differential privacy over knowledge graphs."""

from .errors import (
    AntecedentBudgetExceeded,
    DegenerateGame,
    FixpointBudgetExceeded,
    InvalidEpsilon,
    NotSaturated,
    OntoDPError,
    ParseError,
    SchemaError,
    SchemaViolation,
)
from .graph import (
    Cardinality,
    Graph,
    Schema,
    Signature,
    Triple,
    bounded_neighbors,
    contains,
    edge_distance,
    edge_universe,
    unbounded_distance,
    unbounded_neighbors,
    validate,
)
from .adversary import GameConfig, GameReport, run_game
from .fixtures import load_hospital
from .mechanism import ReleaseSpec, release, release_record
from .rules import Atom, Rule, RuleSet, antecedents, is_saturated, match, saturate
from .sensitivity import (
    CountQuery,
    classical_sensitivity,
    evaluate,
    onto_sensitivity,
    perceived_sensitivity,
)
from .spaces import (
    AttackerInstance,
    SpaceConfig,
    attack_space,
    attacker_union,
    check_well_suited,
    defense_space,
    onto_neighbors,
)

__version__ = "0.1.0"
