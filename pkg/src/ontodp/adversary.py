"""Up-to-one attacker versus a Laplace curator, simulated trial by trial.

The attacker knows the prior, the rules, the query, epsilon and the
sensitivity the curator used (the mechanism is public). Given a noisy answer
it picks a maximum-likelihood candidate from its attack space, uniformly at
random among ties.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Literal, TextIO

import numpy as np

from .errors import DegenerateGame
from .graph import Graph
from .mechanism import ReleaseSpec, rng_for, sample_laplace
from .rules import DEFAULT_ANTECEDENT_CAP
from .sensitivity import CountQuery, classical_sensitivity, evaluate, onto_sensitivity, perceived_sensitivity
from .spaces import AttackerInstance, SpaceConfig, attack_space


@dataclass(frozen=True)
class GameConfig:
    true_db: Graph
    prior: Graph
    query: CountQuery
    space: SpaceConfig
    epsilon: float
    semantics: Literal["classical", "onto"] = "classical"
    trials: int = 10_000
    seed: int = 0
    antecedent_cap: int = DEFAULT_ANTECEDENT_CAP


@dataclass(frozen=True)
class TrialRow:
    trial: int
    noisy_value: float
    guess: int
    correct: bool


@dataclass
class GameReport:
    semantics: str
    epsilon: float
    sensitivity: int
    trials: int
    successes: int
    attack_space_size: int
    candidate_answers: list[int]
    true_index: int
    classical_sensitivity: int
    perceived_sensitivity: int
    rows: list[TrialRow] = field(default_factory=list, repr=False)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def baseline(self) -> float:
        return 1.0 / self.attack_space_size

    @property
    def stderr(self) -> float:
        p = self.success_rate
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def two_candidate_bound(self) -> float | None:
        """e^eps / (1 + e^eps): best possible success for two eps-indistinguishable candidates."""
        if self.attack_space_size != 2:
            return None
        return math.exp(self.epsilon) / (1 + math.exp(self.epsilon))

    def to_dict(self) -> dict:
        return {
            "semantics": self.semantics,
            "epsilon": self.epsilon,
            "sensitivity": self.sensitivity,
            "trials": self.trials,
            "success_rate": self.success_rate,
            "stderr": self.stderr,
            "baseline": self.baseline,
            "two_candidate_bound": self.two_candidate_bound,
            "attack_space_size": self.attack_space_size,
            "candidate_answers": self.candidate_answers,
            "classical_sensitivity": self.classical_sensitivity,
            "perceived_sensitivity": self.perceived_sensitivity,
        }

    def write_csv(self, fh: TextIO) -> None:
        w = csv.writer(fh)
        w.writerow(["trial", "noisy_value", "guess", "correct"])
        for r in self.rows:
            w.writerow([r.trial, repr(r.noisy_value), r.guess, int(r.correct)])


def _guess(observed: float, answers: np.ndarray, exact: bool, rng: np.random.Generator) -> int:
    if exact:
        ties = np.flatnonzero(answers == observed)
        if ties.size == 0:
            ties = np.arange(answers.size)
    else:
        dist = np.abs(answers - observed)
        ties = np.flatnonzero(dist == dist.min())
    if ties.size == 1:
        return int(ties[0])
    return int(ties[rng.integers(ties.size)])


def run_game(cfg: GameConfig, keep_rows: bool = False) -> GameReport:
    if cfg.trials < 1:
        raise DegenerateGame("a game needs at least one trial")
    candidates = sorted(attack_space(AttackerInstance(cfg.prior, cfg.space.rules), cfg.space), key=Graph.sorted)
    if len(candidates) < 2:
        raise DegenerateGame(f"attack space has {len(candidates)} graph(s); nothing to distinguish")
    if cfg.true_db not in candidates:
        raise DegenerateGame("the true database is not in the attacker's space")
    true_index = candidates.index(cfg.true_db)
    answers = np.array([evaluate(cfg.query, g) for g in candidates], dtype=float)

    cap = cfg.antecedent_cap
    classical = classical_sensitivity(cfg.query, cfg.true_db, cfg.space)
    perceived = perceived_sensitivity(cfg.query, cfg.true_db, cfg.space, cap)
    if cfg.semantics == "classical":
        sens = classical
    elif cfg.semantics == "onto":
        sens = onto_sensitivity(cfg.query, cfg.true_db, cfg.space, cap)
    else:
        raise ValueError(f"unknown semantics {cfg.semantics!r}")
    spec = ReleaseSpec(cfg.epsilon, sens, cfg.seed)

    truth = answers[true_index]
    successes = 0
    rows = []
    for i in range(cfg.trials):
        rng = rng_for(cfg.seed, i)
        if sens == 0:
            observed = float(truth)
        else:
            observed = float(truth) + sample_laplace(spec.scale, rng)
        guess = _guess(observed, answers, sens == 0, rng)
        ok = guess == true_index
        successes += ok
        if keep_rows:
            rows.append(TrialRow(i, observed, guess, ok))

    return GameReport(
        semantics=cfg.semantics,
        epsilon=cfg.epsilon,
        sensitivity=sens,
        trials=cfg.trials,
        successes=successes,
        attack_space_size=len(candidates),
        candidate_answers=[int(a) for a in answers],
        true_index=true_index,
        classical_sensitivity=classical,
        perceived_sensitivity=perceived,
        rows=rows,
    )
