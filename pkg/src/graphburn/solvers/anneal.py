"""Single-bit-flip simulated annealing for QUBO models."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import ParameterError
from ..qubo import QuboModel, energy, scaled_form


@dataclass(frozen=True)
class SaParams:
    initial_temperature: float = 0.8
    cooling: float = 0.97
    steps_per_temperature: int | None = None  # None: 10 sweeps of dim flips
    restarts: int = 8
    seed: int = 0
    final_temperature: float = 0.05

    def __post_init__(self):
        if not 0 < self.cooling < 1:
            raise ParameterError("cooling factor must lie in (0, 1)")
        if self.initial_temperature <= 0 or self.final_temperature <= 0:
            raise ParameterError("temperatures must be positive")
        if self.final_temperature > self.initial_temperature:
            raise ParameterError("final temperature exceeds initial temperature")
        if self.restarts < 1:
            raise ParameterError("restarts must be >= 1")
        if self.steps_per_temperature is not None and self.steps_per_temperature < 1:
            raise ParameterError("steps per temperature must be >= 1")


def simulated_annealing(m: QuboModel, p: SaParams = SaParams()) -> tuple[list[int], Fraction]:
    """Best assignment seen over all restarts and its exact energy.

    Moves are scored in the integer-scaled form, so acceptance decisions
    depend only on the seed and the model. Each restart starts from a
    uniformly random assignment drawn from its own child stream of ``seed``.
    """
    if m.dim < 1:
        raise ParameterError("annealing needs dim >= 1")
    scale, Q, off = scaled_form(m)
    dim = m.dim
    diag = [int(Q[i, i]) for i in range(dim)]
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(dim)]
    for (i, j), _ in m.q.items():
        if i != j:
            w = int(Q[i, j])
            nbrs[i].append((j, w))
            nbrs[j].append((i, w))
    steps = p.steps_per_temperature or 10 * dim
    temps = []
    t = p.initial_temperature
    while t >= p.final_temperature:
        temps.append(t)
        t *= p.cooling
    best_x, best_e = None, None
    for child in np.random.SeedSequence(p.seed).spawn(p.restarts):
        rng = np.random.default_rng(child)
        x = rng.integers(0, 2, dim).tolist()
        field = [0] * dim
        for i in range(dim):
            if x[i]:
                for j, w in nbrs[i]:
                    field[j] += w
        e = sum(diag[i] for i in range(dim) if x[i]) + sum(
            w for i in range(dim) if x[i] for j, w in nbrs[i] if j > i and x[j]
        )
        run_best, run_e = x[:], e
        for T in temps:
            Ts = T * scale
            picks = rng.integers(0, dim, steps).tolist()
            draws = rng.random(steps).tolist()
            for i, u in zip(picks, draws):
                delta = (diag[i] + field[i]) * (1 - 2 * x[i])
                if delta > 0 and u >= math.exp(-delta / Ts):
                    continue
                sign = 1 - 2 * x[i]
                x[i] ^= 1
                for j, w in nbrs[i]:
                    field[j] += sign * w
                e += delta
                if e < run_e:
                    run_best, run_e = x[:], e
        if best_e is None or run_e < best_e:
            best_x, best_e = run_best, run_e
    exact = energy(m, best_x)
    assert exact == Fraction(best_e + off, scale)
    return best_x, exact
