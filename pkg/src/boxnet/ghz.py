"""Floating-point three-qubit GHZ measurement simulator.

The only float-typed module.  Measurements are +/-1-valued projective
measurements in the X-Z plane, ``cos(t)*Z + sin(t)*X``; behaviors are
computed from the state vector ``(|000> + |111>)/sqrt(2)`` and checked
for normalization (1e-12 per column) and nonsignaling (1e-10) before
use.  ``search_max_violation`` scans a deterministic angle grid and
refines by coordinate descent, scoring strategies with the closed-form
GHZ correlators (pair ``cos*cos``, triple ``sin*sin*sin``, singles 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence, Union

import numpy as np

from .inequality import InequalityError, LinearInequality
from .resource import Alphabet, SignalingError

GHZ_PARTIES = ("A", "B", "C")

_GHZ = np.zeros(8)
_GHZ[0] = _GHZ[7] = 1 / math.sqrt(2)


@dataclass(frozen=True)
class MeasurementSetting:
    """One projective qubit measurement along cos(angle)*Z + sin(angle)*X."""

    angle: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.angle):
            raise ValueError(f"measurement angle must be finite, got {self.angle}")


@dataclass(frozen=True)
class QuantumStrategy:
    """One MeasurementSetting per (party, setting)."""

    settings: dict[str, tuple[MeasurementSetting, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "settings",
            {p: tuple(ms) for p, ms in self.settings.items()})
        for p, per_setting in self.settings.items():
            if not per_setting:
                raise ValueError(f"party {p!r} has no measurement settings")

    @classmethod
    def from_angles(cls, angles: Mapping[str, Sequence[float]]) -> "QuantumStrategy":
        return cls({p: tuple(MeasurementSetting(float(a)) for a in per)
                    for p, per in angles.items()})

    def angle(self, party: str, setting: int) -> float:
        return self.settings[party][setting].angle

    def angles(self) -> dict[str, tuple[float, ...]]:
        return {p: tuple(ms.angle for ms in per)
                for p, per in self.settings.items()}


class FloatBehavior:
    """Behavior with float probabilities, validated at construction.

    Mirrors the exact-resource surface that correlator evaluation needs
    (parties, alphabets, table, ``require_nonsignaling``), so the
    inequality module accepts either kind.
    """

    __slots__ = ("id", "parties", "input_alphabets", "output_alphabets",
                 "table", "nonsignaling_checked")

    def __init__(self, id: str, parties: Sequence[str],
                 input_alphabets: Sequence[Alphabet],
                 output_alphabets: Sequence[Alphabet],
                 table: Mapping[tuple, Mapping[tuple, float]],
                 *, atol_norm: float = 1e-12, atol_ns: float = 1e-10) -> None:
        self.id = str(id)
        self.parties = tuple(parties)
        self.input_alphabets = tuple(input_alphabets)
        self.output_alphabets = tuple(output_alphabets)
        outs_space = list(product(*(a.values for a in self.output_alphabets)))
        full = {}
        for ctx in product(*(a.values for a in self.input_alphabets)):
            col = table[ctx]
            full[ctx] = {o: float(col.get(o, 0.0)) for o in outs_space}
            for o, v in full[ctx].items():
                if v < -atol_norm or v > 1 + atol_norm:
                    raise ValueError(f"probability {v} out of range at {ctx} {o}")
            s = sum(full[ctx].values())
            if abs(s - 1) > atol_norm:
                raise ValueError(f"column {ctx} sums to {s}, not 1")
        self.table = full
        self._check_nonsignaling(atol_ns)
        self.nonsignaling_checked = True

    def _check_nonsignaling(self, atol: float) -> None:
        n = len(self.parties)
        for j in range(n):
            others_in = [a.values for k, a in enumerate(self.input_alphabets)
                         if k != j]
            outs_rest = list(product(*(a.values for k, a in
                                       enumerate(self.output_alphabets) if k != j)))
            for rest in product(*others_in):
                reference = None
                for xj in self.input_alphabets[j].values:
                    ctx = rest[:j] + (xj,) + rest[j:]
                    marg = {o: 0.0 for o in outs_rest}
                    for outs, v in self.table[ctx].items():
                        marg[outs[:j] + outs[j + 1:]] += v
                    if reference is None:
                        reference = marg
                    else:
                        for o in outs_rest:
                            if abs(marg[o] - reference[o]) > atol:
                                raise SignalingError(
                                    f"float behavior {self.id!r} signals to "
                                    f"party {self.parties[j]!r} at context "
                                    f"{rest}: marginal differs by "
                                    f"{abs(marg[o] - reference[o])}")

    def party_index(self, party: str) -> int:
        try:
            return self.parties.index(party)
        except ValueError:
            raise KeyError(f"party {party!r} is not part of behavior "
                           f"{self.id!r}") from None

    def input_alphabet(self, party: str) -> Alphabet:
        return self.input_alphabets[self.party_index(party)]

    def output_alphabet(self, party: str) -> Alphabet:
        return self.output_alphabets[self.party_index(party)]

    def require_nonsignaling(self, operation: str) -> None:
        if not self.nonsignaling_checked:
            raise SignalingError(f"{operation} needs a nonsignaling behavior")

    def prob(self, inputs: tuple, outputs: tuple) -> float:
        return self.table[tuple(inputs)][tuple(outputs)]

    def to_json_dict(self) -> dict:
        return {
            "float": True,
            "id": self.id,
            "parties": list(self.parties),
            "inputs": {p: list(a.values)
                       for p, a in zip(self.parties, self.input_alphabets)},
            "outputs": {p: list(a.values)
                        for p, a in zip(self.parties, self.output_alphabets)},
            "table": {
                ",".join(map(str, ctx)): {
                    ",".join(map(str, outs)): v
                    for outs, v in col.items() if v != 0.0}
                for ctx, col in self.table.items()},
        }

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "FloatBehavior":
        def key(s: str) -> tuple:
            return tuple(int(x) for x in s.split(","))

        parties = tuple(d["parties"])
        return cls(
            d["id"], parties,
            [Alphabet(tuple(d["inputs"][p])) for p in parties],
            [Alphabet(tuple(d["outputs"][p])) for p in parties],
            {key(ctx): {key(o): float(v) for o, v in col.items()}
             for ctx, col in d["table"].items()})


def _observable(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


def ghz_behavior(strategy: QuantumStrategy, *, id: str = "ghz") -> FloatBehavior:
    """Outcome probabilities for measuring (|000> + |111>)/sqrt(2) with
    the strategy's product projective measurements.  Outcome symbol 0 is
    the +1 result, symbol 1 the -1 result."""
    if set(strategy.settings) != set(GHZ_PARTIES):
        raise ValueError(f"a GHZ strategy names parties {GHZ_PARTIES}, got "
                         f"{sorted(strategy.settings)}")
    projectors = {}
    for p in GHZ_PARTIES:
        per = []
        for ms in strategy.settings[p]:
            m = _observable(ms.angle)
            eye = np.eye(2)
            per.append(((eye + m) / 2, (eye - m) / 2))
        projectors[p] = per

    in_alphas = [Alphabet(tuple(range(len(strategy.settings[p]))))
                 for p in GHZ_PARTIES]
    bits = Alphabet((0, 1))
    table = {}
    for ctx in product(*(a.values for a in in_alphas)):
        col = {}
        for outs in product((0, 1), repeat=3):
            op = np.kron(np.kron(projectors["A"][ctx[0]][outs[0]],
                                 projectors["B"][ctx[1]][outs[1]]),
                         projectors["C"][ctx[2]][outs[2]])
            col[outs] = float(_GHZ @ op @ _GHZ)
        table[ctx] = col
    return FloatBehavior(id, GHZ_PARTIES, in_alphas, [bits] * 3, table)


def _closed_form_value(ineq: LinearInequality,
                       angle_of: Mapping[tuple, float]) -> float:
    """LHS of the inequality on the GHZ behavior of the given angles,
    via the closed-form correlators."""
    total = 0.0
    for t in ineq.terms:
        if len(t.parties) == 1:
            continue
        f = math.cos if len(t.parties) == 2 else math.sin
        prod = float(t.coefficient)
        for p, s in zip(t.parties, t.settings):
            prod *= f(angle_of[(p, s)])
        total += prod
    return total


@dataclass(frozen=True)
class SearchResult:
    strategy: QuantumStrategy
    value: float


def search_max_violation(ineq: LinearInequality, *, grid: int = 16,
                         step_floor: float = 1e-4) -> SearchResult:
    """Deterministic maximization of the inequality's LHS over X-Z-plane
    GHZ strategies: a full grid of ``grid`` points per angle, then
    coordinate descent halving the step down to ``step_floor``.  Ties on
    the grid break toward the lexicographically smallest angle tuple."""
    parties = sorted(ineq.settings_counts)
    if len(parties) != 3:
        raise InequalityError("GHZ search needs a three-party inequality")
    axes = [(p, s) for p in parties for s in range(ineq.settings_counts[p])]
    if len(axes) > 6:
        raise InequalityError(
            f"GHZ search handles at most 6 angles, scenario needs {len(axes)}")

    thetas = np.arange(grid) * (2 * math.pi / grid)
    landscape = np.zeros((grid,) * len(axes))
    for t in ineq.terms:
        if len(t.parties) == 1:
            continue
        f = np.cos if len(t.parties) == 2 else np.sin
        term = np.array(float(t.coefficient))
        for p, s in zip(t.parties, t.settings):
            i = axes.index((p, s))
            shape = [1] * len(axes)
            shape[i] = grid
            term = term * f(thetas).reshape(shape)
        landscape += term
    best_idx = np.unravel_index(np.argmax(landscape), landscape.shape)
    angle_of = {axis: float(thetas[k]) for axis, k in zip(axes, best_idx)}

    best = _closed_form_value(ineq, angle_of)
    step = 2 * math.pi / grid
    while step >= step_floor:
        improved = False
        for axis in axes:
            for delta in (step, -step):
                candidate = dict(angle_of)
                candidate[axis] += delta
                v = _closed_form_value(ineq, candidate)
                if v > best:
                    best, angle_of, improved = v, candidate, True
        if not improved:
            step /= 2

    by_party = {p: tuple(angle_of[(p, s)]
                         for s in range(ineq.settings_counts[p]))
                for p in parties}
    return SearchResult(strategy=QuantumStrategy.from_angles(by_party),
                        value=best)
