"""The bundled hospital example, loaded from package data."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .formats import load_query, load_rules, load_schema, load_triples
from .graph import Graph, Schema
from .rules import RuleSet
from .sensitivity import CountQuery
from .spaces import SpaceConfig


def data_dir() -> Path:
    return Path(str(resources.files("ontodp") / "data"))


def hospital_dir() -> Path:
    return data_dir() / "hospital"


@dataclass(frozen=True)
class Hospital:
    antecedent: Graph
    true_db: Graph
    prior: Graph
    plausible: Graph
    rules: RuleSet
    schema: Schema
    query: CountQuery

    def space(self, restrict_to_valid: bool = True) -> SpaceConfig:
        return SpaceConfig(self.schema, self.rules, restrict_to_valid=restrict_to_valid)


def load_hospital() -> Hospital:
    d = hospital_dir()
    return Hospital(
        antecedent=load_triples(d / "antecedent.triples"),
        true_db=load_triples(d / "true.triples"),
        prior=load_triples(d / "prior.triples"),
        plausible=load_triples(d / "plausible.triples"),
        rules=load_rules(d / "rules.txt"),
        schema=load_schema(d / "schema.txt"),
        query=load_query(d / "query.txt"),
    )
