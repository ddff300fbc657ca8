"""Correlator inequalities for binary-outcome parties.

Correlators use the sign convention outcome symbol 0 -> +1, symbol
1 -> -1.  A ``LinearInequality`` is an exact-rational combination of
correlator terms with an upper bound.  The module ships the named
tripartite inequalities (``mao``, the two Chao-Reichardt forms, ``cao``
and its three-setting conditional variant ``cao-s14``), the
outcome-relabeling and party-swap transforms that connect them, and
``verify_derivation_chain``, which re-derives each inequality from the
previous one and checks the results agree as linear functionals on the
deterministic spanning set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence, Union

from .resource import Alphabet, NonsignalingResource, frac, make_local_deterministic

Behavior = NonsignalingResource

#: Outcome symbol -> the +/-1 value it stands for in correlators.
SIGN = {0: 1, 1: -1}


class InequalityError(ValueError):
    """An inequality and a behavior (or two inequalities) do not fit together."""


@dataclass(frozen=True)
class CorrelatorTerm:
    """One ``coefficient * <P_s Q_t ...>`` summand.

    ``parties`` and ``settings`` are aligned and stored sorted by party
    name, so terms that mean the same product compare equal.
    """

    coefficient: Fraction
    parties: tuple[str, ...]
    settings: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parties:
            raise ValueError("a correlator term involves at least one party")
        if len(set(self.parties)) != len(self.parties):
            raise ValueError(f"repeated party in correlator term {self.parties}")
        if len(self.settings) != len(self.parties):
            raise ValueError("need exactly one setting per involved party")
        order = sorted(range(len(self.parties)), key=lambda i: self.parties[i])
        object.__setattr__(self, "coefficient", frac(self.coefficient))
        object.__setattr__(self, "parties", tuple(self.parties[i] for i in order))
        object.__setattr__(self, "settings", tuple(self.settings[i] for i in order))

    @property
    def support(self) -> tuple[tuple[str, ...], tuple[int, ...]]:
        return (self.parties, self.settings)


def _term(coefficient: Union[int, Fraction], **setting_by_party: int) -> CorrelatorTerm:
    return CorrelatorTerm(frac(coefficient), tuple(setting_by_party),
                          tuple(setting_by_party.values()))


@dataclass(frozen=True)
class LinearInequality:
    """``sum(coefficient * correlator) <= bound`` over a fixed scenario.

    ``settings_counts`` pins the scenario (number of settings per party,
    binary outcomes), so inequalities for different scenarios cannot be
    evaluated, added, or compared by accident.
    """

    name: str
    terms: tuple[CorrelatorTerm, ...]
    bound: Fraction
    settings_counts: dict[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "bound", frac(self.bound))
        object.__setattr__(self, "settings_counts", dict(self.settings_counts))
        for t in self.terms:
            for p, s in zip(t.parties, t.settings):
                if p not in self.settings_counts:
                    raise InequalityError(f"term names unknown party {p!r}")
                if not 0 <= s < self.settings_counts[p]:
                    raise InequalityError(
                        f"setting {s} out of range for party {p!r} "
                        f"(has {self.settings_counts[p]} settings)")

    def coefficient_of(self, **setting_by_party: int) -> Fraction:
        """Coefficient of the term with exactly this support (0 if absent)."""
        probe = _term(1, **setting_by_party)
        for t in self.terms:
            if t.support == probe.support:
                return t.coefficient
        return Fraction(0)


@dataclass(frozen=True)
class Evaluation:
    """Left-hand-side value of an inequality on one behavior."""

    value: Union[Fraction, float]
    bound: Fraction
    direction: str  # "<=" or ">="
    satisfied: bool


def _check_scenario(b: Behavior, settings_counts: Mapping[str, int]) -> None:
    if set(b.parties) != set(settings_counts):
        raise InequalityError(
            f"behavior parties {sorted(b.parties)} do not match the "
            f"inequality's parties {sorted(settings_counts)}")
    for p, count in settings_counts.items():
        have = b.input_alphabet(p).values
        if have != tuple(range(count)):
            raise InequalityError(
                f"party {p!r} has settings {have}, inequality needs "
                f"{tuple(range(count))}")
        if not set(b.output_alphabet(p).values) <= {0, 1}:
            raise InequalityError(
                f"party {p!r} outcomes {b.output_alphabet(p).values} are not "
                "within {0, 1}; correlators need binary +/-1 outcomes")


def correlator(b: Behavior, parties: Sequence[str],
               settings: Sequence[int]) -> Union[Fraction, float]:
    """Expected product of the named parties' +/-1 outcomes at the given
    settings.

    Parties not named are summed out, with their settings pinned to the
    first value of their alphabet -- immaterial for a nonsignaling
    behavior, which is why signaling behaviors are refused (the marginal
    would be ambiguous).  Works for exact tables and for float tables
    that passed a nonsignaling check at construction.
    """
    b.require_nonsignaling("correlator")
    if len(set(parties)) != len(parties):
        raise ValueError(f"repeated party in correlator {tuple(parties)}")
    if len(settings) != len(parties):
        raise ValueError("need exactly one setting per involved party")
    setting_of = dict(zip(parties, settings))
    indices = []
    for p, s in zip(parties, settings):
        if s not in b.input_alphabet(p):
            raise KeyError(f"party {p!r} has no setting {s}")
        if not set(b.output_alphabet(p).values) <= {0, 1}:
            raise InequalityError(
                f"party {p!r} outcomes {b.output_alphabet(p).values} are not "
                "within {0, 1}; correlators need binary +/-1 outcomes")
        indices.append(b.party_index(p))
    inputs = tuple(setting_of.get(p, b.input_alphabet(p).first) for p in b.parties)
    total = 0
    for outs, v in b.table[inputs].items():
        if v:
            sign = 1
            for i in indices:
                sign = sign if outs[i] == 0 else -sign
            total += sign * v
    return total


def evaluate(ineq: LinearInequality, b: Behavior, *,
             atol: Union[Fraction, float] = 0) -> Evaluation:
    """Value of the inequality's left side on ``b`` and whether the bound
    holds.  ``atol`` loosens the satisfaction test (``value <= bound +
    atol``) for floating-point behaviors; leave it 0 for exact ones."""
    _check_scenario(b, ineq.settings_counts)
    value = sum(t.coefficient * correlator(b, t.parties, t.settings)
                for t in ineq.terms)
    return Evaluation(value=value, bound=ineq.bound, direction="<=",
                      satisfied=value <= ineq.bound + atol)


# ---------------------------------------------------------------------------
# The named tripartite inequalities.  Every party has binary outcomes;
# A and C have two settings, B has two (or, for the cao-s14 forms, three).


def mao_inequality() -> LinearInequality:
    """<A0B0> + <A0B1> + <A1B0C1> - <A1B1C1> + 2<A0C0> <= 4."""
    return LinearInequality(
        name="mao",
        terms=(
            _term(1, A=0, B=0),
            _term(1, A=0, B=1),
            _term(1, A=1, B=0, C=1),
            _term(-1, A=1, B=1, C=1),
            _term(2, A=0, C=0),
        ),
        bound=frac(4),
        settings_counts={"A": 2, "B": 2, "C": 2},
    )


def chao_reichardt_correlator() -> LinearInequality:
    """<A0B0> + <A0B1> + <A1B0C1> - <A1B1C1> + 4<A0C0> <= 6."""
    return LinearInequality(
        name="cr-corr",
        terms=(
            _term(1, A=0, B=0),
            _term(1, A=0, B=1),
            _term(1, A=1, B=0, C=1),
            _term(-1, A=1, B=1, C=1),
            _term(4, A=0, C=0),
        ),
        bound=frac(6),
        settings_counts={"A": 2, "B": 2, "C": 2},
    )


def cao_inequality() -> LinearInequality:
    """<A0B0> + <B0C0> - <A0B1> - <B1C0> + 4<A0C0> + 2<A1B0C1> +
    2<A1B1C1> <= 8."""
    return LinearInequality(
        name="cao",
        terms=(
            _term(1, A=0, B=0),
            _term(1, B=0, C=0),
            _term(-1, A=0, B=1),
            _term(-1, B=1, C=0),
            _term(4, A=0, C=0),
            _term(2, A=1, B=0, C=1),
            _term(2, A=1, B=1, C=1),
        ),
        bound=frac(8),
        settings_counts={"A": 2, "B": 2, "C": 2},
    )


def cao_s14_linearized() -> LinearInequality:
    """Fully linear twin of ``evaluate_cao_s14``: <A0B0> + <A0B1> +
    <A1B0C1> - <A1B1C1> + <A0B2> + <B2C0> <= 6, for B with a third
    setting."""
    return LinearInequality(
        name="cao-s14-linear",
        terms=(
            _term(1, A=0, B=0),
            _term(1, A=0, B=1),
            _term(1, A=1, B=0, C=1),
            _term(-1, A=1, B=1, C=1),
            _term(1, A=0, B=2),
            _term(1, B=2, C=0),
        ),
        bound=frac(6),
        settings_counts={"A": 2, "B": 3, "C": 2},
    )


def chao_reichardt_probability_form(b: Behavior, *,
                                    atol: Union[Fraction, float] = 0) -> Evaluation:
    """4 P(A!=C|00) + P(A!=B|00) + P(A!=B|01) + P(ABC=-1|101) +
    P(ABC=+1|111) >= 1, evaluated directly from probabilities.

    The correlator form is the same statement under
    P(equal) = (1 + correlator)/2; the affine identity
    ``value = 4 - correlator_value/2`` is re-checked on every call.
    """
    _check_scenario(b, {"A": 2, "B": 2, "C": 2})
    half = Fraction(1, 2)
    value = (4 * (1 - correlator(b, ("A", "C"), (0, 0))) * half
             + (1 - correlator(b, ("A", "B"), (0, 0))) * half
             + (1 - correlator(b, ("A", "B"), (0, 1))) * half
             + (1 - correlator(b, ("A", "B", "C"), (1, 0, 1))) * half
             + (1 + correlator(b, ("A", "B", "C"), (1, 1, 1))) * half)
    corr = evaluate(chao_reichardt_correlator(), b).value
    expected = 4 - corr * half
    if isinstance(value, float) or isinstance(expected, float):
        if abs(value - expected) > 1e-9:
            raise AssertionError(
                f"probability and correlator forms disagree: {value} vs "
                f"4 - {corr}/2")
    elif value != expected:
        raise AssertionError(
            f"probability and correlator forms disagree: {value} vs 4 - {corr}/2")
    return Evaluation(value=value, bound=frac(1), direction=">=",
                      satisfied=value >= 1 - atol)


def evaluate_cao_s14(b: Behavior, *,
                     atol: Union[Fraction, float] = 0) -> Evaluation:
    """Conditional two-group form of the seven-term inequality, for B
    with a third setting:

        (1 - <C1>)/2 * (<A0B0> + <A0B1> - <A1B0> + <A1B1> | C=-1, z=1)
      + (1 + <C1>)/2 * (<A0B0> + <A0B1> + <A1B0> - <A1B1> | C=+1, z=1)
      + <A0B2> + <B2C0>  <=  6

    The conditional correlators are computed by honest division by the
    conditioning probability in each context; a group whose conditioning
    event has probability zero contributes zero (its prefactor
    vanishes).  ``cao_s14_linearized`` evaluates the same functional
    without any conditioning.
    """
    _check_scenario(b, {"A": 2, "B": 3, "C": 2})
    ia, ib, ic = (b.party_index(p) for p in ("A", "B", "C"))

    def column(x: int, y: int, z: int) -> Mapping:
        inputs: list[int] = [0] * len(b.parties)
        inputs[ia], inputs[ib], inputs[ic] = x, y, z
        return b.table[tuple(inputs)]

    c1 = correlator(b, ("C",), (1,))
    half = Fraction(1, 2)
    # Group patterns over the (x, y) settings pairs, keyed by C's outcome
    # symbol (symbol 1 stands for C=-1, symbol 0 for C=+1).
    patterns = {
        1: {(0, 0): 1, (0, 1): 1, (1, 0): -1, (1, 1): 1},
        0: {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1},
    }
    prefactor = {1: (1 - c1) * half, 0: (1 + c1) * half}
    value = 0
    for c, pattern in patterns.items():
        if prefactor[c] == 0:
            continue
        group = 0
        for (x, y), sign in pattern.items():
            col = column(x, y, 1)
            num = 0
            den = 0
            for outs, v in col.items():
                if outs[ic] == c and v:
                    den += v
                    num += SIGN[outs[ia]] * SIGN[outs[ib]] * v
            if den == 0:
                raise AssertionError(
                    "conditioning probability vanished in one context but "
                    "not in the single-party marginal; behavior is signaling")
            group += sign * (num / den)
        value += prefactor[c] * group
    value = value + correlator(b, ("A", "B"), (0, 2)) \
        + correlator(b, ("B", "C"), (2, 0))
    return Evaluation(value=value, bound=frac(6), direction="<=",
                      satisfied=value <= 6 + atol)


# ---------------------------------------------------------------------------
# Transforms.


def relabel_output(ineq: LinearInequality, party: str,
                   setting: int) -> LinearInequality:
    """Flip the +/-1 labeling of one party's outcomes at one setting:
    every term consulting that (party, setting) changes sign.  Applying
    the same relabeling twice restores the original inequality."""
    if party not in ineq.settings_counts:
        raise KeyError(f"unknown party {party!r}")
    if not 0 <= setting < ineq.settings_counts[party]:
        raise KeyError(f"party {party!r} has no setting {setting}")
    terms = []
    for t in ineq.terms:
        if party in t.parties and t.settings[t.parties.index(party)] == setting:
            terms.append(CorrelatorTerm(-t.coefficient, t.parties, t.settings))
        else:
            terms.append(t)
    return LinearInequality(name=f"{ineq.name}~{party}{setting}",
                            terms=tuple(terms), bound=ineq.bound,
                            settings_counts=dict(ineq.settings_counts))


def swap_parties(ineq: LinearInequality, p: str, q: str) -> LinearInequality:
    """Exchange the roles of two parties in every term; each setting
    follows its party through the swap."""
    for x in (p, q):
        if x not in ineq.settings_counts:
            raise KeyError(f"unknown party {x!r}")
    rename = {p: q, q: p}
    counts = dict(ineq.settings_counts)
    counts[p], counts[q] = counts[q], counts[p]
    terms = tuple(
        CorrelatorTerm(t.coefficient,
                       tuple(rename.get(x, x) for x in t.parties),
                       t.settings)
        for t in ineq.terms)
    return LinearInequality(name=f"{ineq.name}[{p}<->{q}]", terms=terms,
                            bound=ineq.bound, settings_counts=counts)


def add(first: LinearInequality, second: LinearInequality) -> LinearInequality:
    """Sum two inequalities over the same scenario: equal-support terms
    merge (coefficients add, zeros drop) and the bounds add."""
    if first.settings_counts != second.settings_counts:
        raise InequalityError(
            f"cannot add inequalities over different scenarios "
            f"{first.settings_counts} vs {second.settings_counts}")
    merged: dict[tuple, Fraction] = {}
    order: list[tuple] = []
    for t in first.terms + second.terms:
        if t.support not in merged:
            merged[t.support] = Fraction(0)
            order.append(t.support)
        merged[t.support] += t.coefficient
    terms = tuple(CorrelatorTerm(merged[s], s[0], s[1])
                  for s in order if merged[s] != 0)
    return LinearInequality(name=f"({first.name})+({second.name})",
                            terms=terms, bound=first.bound + second.bound,
                            settings_counts=dict(first.settings_counts))


# ---------------------------------------------------------------------------
# The derivation chain.


def deterministic_behaviors(settings_counts: Mapping[str, int]) -> list[Behavior]:
    """Every deterministic behavior for the given scenario: one local
    function (setting -> outcome bit) per party.  These points affinely
    span the behavior space, so two linear functionals that agree on all
    of them agree everywhere."""
    parties = tuple(sorted(settings_counts))
    bits = Alphabet((0, 1))
    in_alphas = [Alphabet(tuple(range(settings_counts[p]))) for p in parties]
    spaces = [list(product((0, 1), repeat=settings_counts[p])) for p in parties]
    behaviors = []
    for combo in product(*spaces):
        functions = {p: dict(enumerate(bits_for_p))
                     for p, bits_for_p in zip(parties, combo)}
        label = ",".join(f"{p}:" + "".join(map(str, c))
                         for p, c in zip(parties, combo))
        behaviors.append(make_local_deterministic(
            parties, in_alphas, [bits] * len(parties), functions, id=label))
    return behaviors


@dataclass(frozen=True)
class ChainStep:
    name: str
    description: str
    passed: bool
    witness: Union[str, None] = None


@dataclass(frozen=True)
class ChainReport:
    steps: tuple[ChainStep, ...]

    @property
    def all_passed(self) -> bool:
        return all(s.passed for s in self.steps)

    def __str__(self) -> str:
        lines = []
        for s in self.steps:
            status = "PASS" if s.passed else "FAIL"
            suffix = f"  [{s.witness}]" if s.witness and not s.passed else ""
            lines.append(f"{s.name}: {status}  {s.description}{suffix}")
        return "\n".join(lines)


def functional_difference(first: LinearInequality, second: LinearInequality,
                          behaviors: Sequence[Behavior]) -> Union[str, None]:
    """First behavior where the two left-hand sides differ (as a witness
    string), or None when they agree on all of them.  Bounds are compared
    too.  Agreement on a deterministic spanning set extends to every
    behavior by linearity."""
    if first.settings_counts != second.settings_counts:
        return (f"scenario mismatch: {first.settings_counts} vs "
                f"{second.settings_counts}")
    if first.bound != second.bound:
        return f"bounds differ: {first.bound} vs {second.bound}"
    for b in behaviors:
        v1 = evaluate(first, b).value
        v2 = evaluate(second, b).value
        if v1 != v2:
            return f"behavior {b.id}: {v1} != {v2}"
    return None


def _functional_step(name: str, description: str, derived: LinearInequality,
                     stated: LinearInequality,
                     behaviors: Sequence[Behavior]) -> ChainStep:
    witness = functional_difference(derived, stated, behaviors)
    return ChainStep(name=name, description=description,
                     passed=witness is None, witness=witness)


def verify_derivation_chain() -> ChainReport:
    """Machine-check each step that connects the named inequalities.

    Each constructor above hard-codes its published coefficients; the
    chain independently re-derives every inequality from the previous
    one via the transforms and confirms the two agree as functionals on
    the deterministic spanning set (64 vertices for two settings each,
    128 when B has three)."""
    v222 = deterministic_behaviors({"A": 2, "B": 2, "C": 2})
    v232 = deterministic_behaviors({"A": 2, "B": 3, "C": 2})
    mao = mao_inequality()

    steps = []

    # (a) relabeling B's outcomes at setting 1 flips exactly two signs.
    relabeled = relabel_output(mao, "B", 1)
    stated_relabeled = LinearInequality(
        name="mao~B1-stated",
        terms=(_term(1, A=0, B=0), _term(-1, A=0, B=1),
               _term(1, A=1, B=0, C=1), _term(1, A=1, B=1, C=1),
               _term(2, A=0, C=0)),
        bound=frac(4), settings_counts={"A": 2, "B": 2, "C": 2})
    steps.append(_functional_step(
        "a", "relabeling B's outcomes at setting 1 gives the stated "
        "sign-flipped inequality", relabeled, stated_relabeled, v222))

    # (b) adding the relabeled inequality to its A<->C swap gives cao.
    derived_cao = add(relabeled, swap_parties(relabeled, "A", "C"))
    steps.append(_functional_step(
        "b", "the relabeled inequality plus its A<->C swap equals the "
        "seven-term inequality with bound 8", derived_cao, cao_inequality(),
        v222))

    # (c) the correlator form is mao plus twice the trivial bound
    # <A0C0> <= 1 (checked to hold on every vertex first).
    trivial = LinearInequality(name="2<A0C0>", terms=(_term(2, A=0, C=0),),
                               bound=frac(2),
                               settings_counts={"A": 2, "B": 2, "C": 2})
    worst = max(correlator(b, ("A", "C"), (0, 0)) for b in v222)
    if worst > 1:
        steps.append(ChainStep(
            "c", "trivial bound <A0C0> <= 1 fails", False,
            f"vertex correlator reached {worst}"))
    else:
        steps.append(_functional_step(
            "c", "mao plus twice the trivial bound <A0C0> <= 1 equals the "
            "correlator form with bound 6", add(mao, trivial),
            chao_reichardt_correlator(), v222))

    # (d) probability and correlator forms are the same statement.
    witness = None
    for b in v222:
        prob = chao_reichardt_probability_form(b)
        corr = evaluate(chao_reichardt_correlator(), b)
        if prob.value != 4 - Fraction(1, 2) * corr.value:
            witness = f"behavior {b.id}: {prob.value} != 4 - ({corr.value})/2"
            break
        if prob.satisfied != corr.satisfied:
            witness = f"behavior {b.id}: satisfaction flags disagree"
            break
    steps.append(ChainStep(
        "d", "probability form = 4 - correlator form / 2, so the two "
        "satisfaction tests coincide", witness is None, witness))

    # (e) the conditional two-group evaluator linearizes exactly.
    witness = None
    linear = cao_s14_linearized()
    for b in v232:
        conditional = evaluate_cao_s14(b).value
        flat = evaluate(linear, b).value
        if conditional != flat:
            witness = f"behavior {b.id}: {conditional} != {flat}"
            break
    steps.append(ChainStep(
        "e", "the conditional two-group form equals its fully linear twin "
        "on every spanning vertex", witness is None, witness))

    # (f) <A0C0> >= <A0B2> + <B2C0> - 1, tight: the slack reaches 0.
    slacks = [correlator(b, ("A", "C"), (0, 0))
              - correlator(b, ("A", "B"), (0, 2))
              - correlator(b, ("B", "C"), (2, 0)) + 1 for b in v232]
    low = min(slacks)
    steps.append(ChainStep(
        "f", "<A0C0> >= <A0B2> + <B2C0> - 1 holds on every vertex and is "
        "tight (minimum slack exactly 0)", low == 0 and all(s >= 0 for s in slacks),
        None if low == 0 else f"minimum slack {low}"))

    return ChainReport(steps=tuple(steps))
