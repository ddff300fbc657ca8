"""Wired networks: the induced joint distribution and its consistency checks.

A network is n parties, m shared resources, and one decision tree per
party.  The probability of a complete transcript (every resource's full
output tuple) under a settings choice is the product of the resource
tables, each evaluated at the inputs its member parties' trees handed it
along the traced paths.  Everything here is exact rational arithmetic;
normalization (sum over all transcripts equals one) is *asserted*, not
assumed, each time a distribution is built — for well-formed networks of
nonsignaling resources it always holds, and a deliberately signaling
counterexample shows up as a total different from one.

The induced behavior regroups transcripts by party and optionally bins
them into coarser outcomes; it is itself a nonsignaling resource over the
parties' settings, and is validated as such on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from boxnet.resource import (
    Alphabet,
    NonsignalingResource,
    Party,
    Symbol,
    ValidationReport,
)
from boxnet.resource import marginal as resource_marginal
from boxnet.wiring import (
    DecisionTree,
    Internal,
    Node,
    PathTrace,
    Terminal,
    trace_path,
    validate_tree,
)

Behavior = NonsignalingResource

Transcript = tuple[Symbol, ...]           # one party's outputs, sorted-resource-id order
OutputAssignment = tuple[Transcript, ...]  # one tuple per resource, resource order


class NetworkError(ValueError):
    """The network is structurally inconsistent (scope mismatches, invalid
    trees, non-total bins) or an operation's precondition failed."""


@dataclass
class JointDistribution:
    """Distribution of complete transcripts for one settings tuple.

    ``table`` maps each output assignment — a tuple with one entry per
    resource (in network resource order), each entry being that resource's
    full output tuple — to its exact probability.  ``total`` is the sum of
    all entries: exactly 1 unless the distribution was built in
    counterexample mode from signaling components.
    """

    settings: tuple[Symbol, ...]
    table: dict[OutputAssignment, Fraction]
    total: Fraction


class Network:
    """Immutable-after-validation assembly of parties, resources, trees.

    Invariants enforced at construction: resource ids unique; party p's
    tree scope is exactly the set of resources p is a member of; every
    tree validates against the shared resources; bins (when given) are
    total over the party's transcript space.
    """

    def __init__(
        self,
        parties: Sequence[Party],
        resources: Sequence[NonsignalingResource],
        trees: Mapping[Party, DecisionTree] | Iterable[DecisionTree],
        settings_alphabets: Mapping[Party, Alphabet | Sequence[Symbol]],
        bins: Mapping[Party, Mapping[Sequence[Symbol], int]] | None = None,
        *,
        name: str = "net",
    ):
        self.name = str(name)
        self.parties = tuple(parties)
        if not self.parties:
            raise NetworkError("network needs at least one party")
        if len(set(self.parties)) != len(self.parties):
            raise NetworkError(f"duplicate parties: {self.parties}")
        self.resources = tuple(resources)
        ids = [r.id for r in self.resources]
        if len(set(ids)) != len(ids):
            raise NetworkError(f"duplicate resource ids: {ids}")
        self.resources_by_id = {r.id: r for r in self.resources}

        if not isinstance(trees, Mapping):
            trees = {t.party: t for t in trees}
        self.trees = dict(trees)
        self.settings_alphabets = {
            p: (a if isinstance(a, Alphabet) else Alphabet(tuple(a)))
            for p, a in dict(settings_alphabets).items()
        }
        for p in self.parties:
            if p not in self.trees:
                raise NetworkError(f"no decision tree for party {p!r}")
            if p not in self.settings_alphabets:
                raise NetworkError(f"no settings alphabet for party {p!r}")

        for r in self.resources:
            for q in r.parties:
                if q not in self.parties:
                    raise NetworkError(
                        f"resource {r.id!r} names {q!r}, which is not a network party")

        # Scope consistency: p consults exactly the resources it shares.
        for p in self.parties:
            member_of = {r.id for r in self.resources if p in r.parties}
            scope = self.trees[p].resource_scope
            if scope != member_of:
                raise NetworkError(
                    f"party {p!r}: tree scope {sorted(scope)} != shared resources "
                    f"{sorted(member_of)} (use append_unused or bottom_encode "
                    f"to cover unconsulted shares)")
            report = validate_tree(self.trees[p], self.settings_alphabets[p],
                                   self.resources_by_id)
            if not report:
                raise NetworkError(f"tree of {p!r} invalid: {report.errors[0]}")

        # Per-party transcript layout: sorted resource ids and, for each,
        # where in the assignment that party's output component lives.
        self._scope_sorted: dict[Party, tuple[str, ...]] = {}
        self._component: dict[Party, tuple[tuple[int, int], ...]] = {}
        res_index = {r.id: i for i, r in enumerate(self.resources)}
        for p in self.parties:
            rids = tuple(sorted(self.trees[p].resource_scope))
            self._scope_sorted[p] = rids
            self._component[p] = tuple(
                (res_index[rid], self.resources_by_id[rid].party_index(p))
                for rid in rids
            )

        self._labeled: dict[Party, bool] = {
            p: self._tree_is_labeled(self.trees[p]) for p in self.parties
        }

        self.bins: dict[Party, dict[Transcript, int]] = {}
        if bins:
            for p, mapping in bins.items():
                if p not in self.parties:
                    raise NetworkError(f"bins name unknown party {p!r}")
                self.bins[p] = {tuple(int(s) for s in k): int(v)
                                for k, v in mapping.items()}

        # Default labeling: index of the transcript in the lexicographic
        # enumeration of the party's product output space.
        self._transcript_index: dict[Party, dict[Transcript, int]] = {}
        for p in self.parties:
            space = list(product(*(
                self.resources_by_id[rid].output_alphabet(p).values
                for rid in self._scope_sorted[p]
            )))
            self._transcript_index[p] = {tr: i for i, tr in enumerate(space)}
            if p in self.bins:
                missing = [tr for tr in space if tr not in self.bins[p]]
                if missing:
                    raise NetworkError(
                        f"bins for {p!r} not total: missing transcript {missing[0]}")

        self._outcome_alphabets: dict[Party, Alphabet] = {
            p: self._compute_outcome_alphabet(p) for p in self.parties
        }
        self._trace_cache: dict[tuple[Party, Symbol, Transcript], PathTrace] = {}

    @staticmethod
    def _tree_is_labeled(t: DecisionTree) -> bool:
        def first_terminal(node: Node) -> Terminal:
            while isinstance(node, Internal):
                node = next(iter(node.children.values()))
            return node

        return first_terminal(next(iter(t.root.values()))).outcome is not None

    def _compute_outcome_alphabet(self, p: Party) -> Alphabet:
        if p in self.bins:
            return Alphabet(tuple(sorted(set(self.bins[p].values()))))
        if self._labeled[p]:
            labels: set[int] = set()

            def collect(node: Node) -> None:
                if isinstance(node, Terminal):
                    labels.add(node.outcome)
                else:
                    for c in node.children.values():
                        collect(c)

            for n in self.trees[p].root.values():
                collect(n)
            return Alphabet(tuple(sorted(labels)))
        return Alphabet.of_size(len(self._transcript_index[p]))

    # -- core evaluation ------------------------------------------------------

    def _party_transcript(self, p: Party, outputs: OutputAssignment) -> Transcript:
        return tuple(outputs[ri][pos] for ri, pos in self._component[p])

    def _trace(self, p: Party, setting: Symbol, transcript: Transcript) -> PathTrace:
        key = (p, setting, transcript)
        hit = self._trace_cache.get(key)
        if hit is None:
            outs = dict(zip(self._scope_sorted[p], transcript))
            hit = trace_path(self.trees[p], setting, outs)
            self._trace_cache[key] = hit
        return hit

    def outcome_of(self, p: Party, setting: Symbol, transcript: Transcript) -> Symbol:
        """The party's final outcome for a transcript: the bin when one is
        supplied, else the terminal label, else the transcript's index."""
        if p in self.bins:
            return self.bins[p][transcript]
        if self._labeled[p]:
            return self._trace(p, setting, transcript).outcome_label
        return self._transcript_index[p][transcript]

    def outcome_alphabet(self, p: Party) -> Alphabet:
        return self._outcome_alphabets[p]

    def _check_settings(self, settings: Sequence[Symbol]) -> tuple[Symbol, ...]:
        settings = tuple(int(s) for s in settings)
        if len(settings) != len(self.parties):
            raise NetworkError(
                f"{len(settings)} settings for {len(self.parties)} parties")
        for p, s in zip(self.parties, settings):
            if s not in self.settings_alphabets[p]:
                raise NetworkError(f"setting {s} outside alphabet of {p!r}")
        return settings

    def settings_space(self) -> Iterable[tuple[Symbol, ...]]:
        return product(*(self.settings_alphabets[p].values for p in self.parties))

    def output_assignments(self) -> Iterable[OutputAssignment]:
        return product(*(
            [tuple(a) for a in r.output_space()] for r in self.resources
        ))


def joint_probability(
    net: Network,
    settings: Sequence[Symbol],
    outputs: OutputAssignment,
) -> Fraction:
    """Probability of one complete transcript: trace every party's path to
    learn the input each resource received, then multiply the resource
    table entries.  Exact."""
    settings = net._check_settings(settings)
    inputs_by_resource: list[list[Symbol]] = [
        [0] * len(r.parties) for r in net.resources
    ]
    for i, p in enumerate(net.parties):
        transcript = net._party_transcript(p, outputs)
        tr = net._trace(p, settings[i], transcript)
        for ri, pos in net._component[p]:
            inputs_by_resource[ri][pos] = tr.inputs[net.resources[ri].id]
    prob = Fraction(1)
    for ri, r in enumerate(net.resources):
        prob *= r.table[tuple(inputs_by_resource[ri])][tuple(outputs[ri])]
        if prob == 0:
            return prob
    return prob


def joint_distribution(
    net: Network,
    settings: Sequence[Symbol],
    *,
    allow_unnormalized: bool = False,
) -> JointDistribution:
    """Full transcript distribution at one settings tuple, by enumeration
    over every resource's output space (exponential in m; intended for
    desk-scale networks).

    Verifies the total is exactly 1.  Networks containing a resource that
    has not passed the nonsignaling check are refused unless
    ``allow_unnormalized`` is set, in which case the total is reported in
    the result instead of asserted — the mode for exhibiting paradoxical
    wirings, whose "distributions" can sum to something else.
    """
    settings = net._check_settings(settings)
    unchecked = [r.id for r in net.resources if not r.nonsignaling_checked]
    if unchecked and not allow_unnormalized:
        raise NetworkError(
            f"resources {unchecked} are not verified nonsignaling; pass "
            f"allow_unnormalized=True to evaluate anyway")
    table: dict[OutputAssignment, Fraction] = {}
    total = Fraction(0)
    for outputs in net.output_assignments():
        v = joint_probability(net, settings, outputs)
        table[outputs] = v
        total += v
    if not allow_unnormalized and total != 1:
        raise NetworkError(
            f"transcript distribution at settings {settings} sums to {total}, "
            f"not 1 — the wiring is inconsistent")
    return JointDistribution(settings=settings, table=table, total=total)


def induced_behavior(net: Network) -> Behavior:
    """The network as seen from outside: settings in, binned outcomes out.

    Enumerates every settings tuple, regroups each transcript by party,
    then bins.  The result is constructed as a full resource over the
    parties, which re-runs the nonsignaling validator — so the theorem
    that wired nonsignaling resources stay nonsignaling is checked, not
    trusted, on every call.
    """
    in_alphas = [net.settings_alphabets[p] for p in net.parties]
    out_alphas = [net.outcome_alphabet(p) for p in net.parties]
    table: dict[tuple[Symbol, ...], dict[tuple[Symbol, ...], Fraction]] = {}
    for settings in net.settings_space():
        jd = joint_distribution(net, settings)
        column: dict[tuple[Symbol, ...], Fraction] = {}
        for outputs, v in jd.table.items():
            if v == 0:
                continue
            outcome = tuple(
                net.outcome_of(p, settings[i], net._party_transcript(p, outputs))
                for i, p in enumerate(net.parties)
            )
            column[outcome] = column.get(outcome, Fraction(0)) + v
        table[settings] = column
    return NonsignalingResource.make(
        f"behavior({net.name})", net.parties, in_alphas, out_alphas, table)


def marginal_without_party(net: Network, p: Party) -> Behavior:
    """Behavior of the other parties, computed two independent ways and
    compared exactly:

    (a) marginalize the full induced behavior over party p;
    (b) delete p from the network itself — resources p shared are replaced
        by their marginals (same ids, so other trees are untouched),
        resources only p held vanish — and induce the behavior of the
        reduced network.

    Route (b) reconnects the remaining parties to physically smaller
    devices; agreement with route (a) is the statement that removing a
    party cannot disturb the rest.  A mismatch raises.
    """
    if p not in net.parties:
        raise NetworkError(f"no party {p!r} in network")
    rest = [q for q in net.parties if q != p]
    if not rest:
        raise NetworkError("cannot marginalize the only party away")

    via_behavior = resource_marginal(induced_behavior(net), rest)

    reduced_resources = []
    for r in net.resources:
        if p not in r.parties:
            reduced_resources.append(r)
            continue
        others = [q for q in r.parties if q != p]
        if others:
            reduced_resources.append(resource_marginal(r, others, id=r.id))
    reduced = Network(
        parties=rest,
        resources=reduced_resources,
        trees={q: net.trees[q] for q in rest},
        settings_alphabets={q: net.settings_alphabets[q] for q in rest},
        bins={q: net.bins[q] for q in rest if q in net.bins},
        name=f"{net.name}-minus-{p}",
    )
    via_network = induced_behavior(reduced)

    if not via_behavior.same_table(via_network):
        raise NetworkError(
            f"marginal over {p!r} differs between direct marginalization and "
            f"the reduced network — nonsignaling consistency is broken")
    return via_behavior


def union_network(a: Network, b: Network, *, name: str | None = None) -> Network:
    """Side-by-side composition of two networks sharing nothing."""
    overlap_p = set(a.parties) & set(b.parties)
    if overlap_p:
        raise NetworkError(f"parties appear in both networks: {sorted(overlap_p)}")
    overlap_r = set(a.resources_by_id) & set(b.resources_by_id)
    if overlap_r:
        raise NetworkError(f"resource ids appear in both networks: {sorted(overlap_r)}")
    return Network(
        parties=a.parties + b.parties,
        resources=a.resources + b.resources,
        trees={**a.trees, **b.trees},
        settings_alphabets={**a.settings_alphabets, **b.settings_alphabets},
        bins={**a.bins, **b.bins},
        name=name or f"{a.name}+{b.name}",
    )


def check_disjoint_factorization(net_a: Network, net_b: Network) -> ValidationReport:
    """Two networks with no common party or resource, run side by side,
    must produce the product of their separate behaviors — exactly, entry
    by entry."""
    union = union_network(net_a, net_b)
    whole = induced_behavior(union)
    part_a = induced_behavior(net_a)
    part_b = induced_behavior(net_b)
    na = len(net_a.parties)
    for x, column in whole.table.items():
        xa, xb = x[:na], x[na:]
        for outcome, v in column.items():
            oa, ob = outcome[:na], outcome[na:]
            expected = part_a.prob(xa, oa) * part_b.prob(xb, ob)
            if v != expected:
                return ValidationReport.fail([
                    f"joint {v} != product {expected} at settings {x}, "
                    f"outcomes {outcome}"])
    return ValidationReport.ok()


def freeze_outcomes(net: Network, p: Party) -> DecisionTree:
    """Rewrite party p's tree with every terminal explicitly labeled by the
    outcome the network currently assigns it (bin value, existing label,
    or default transcript index).

    Useful before surgery that changes the transcript space — appending
    resources, opt-out re-encoding — since explicit labels survive those
    operations while index-based default labeling does not.
    """
    tree = net.trees[p]
    rids = net._scope_sorted[p]

    def walk(node: Node, outs: dict[str, Symbol], setting: Symbol) -> Node:
        if isinstance(node, Terminal):
            transcript = tuple(outs[rid] for rid in rids)
            return Terminal(net.outcome_of(p, setting, transcript))
        rebuilt = {}
        for out, child in node.children.items():
            rebuilt[out] = walk(child, {**outs, node.resource_choice: out}, setting)
        return Internal(node.resource_choice, node.input_choice, rebuilt)

    return DecisionTree(
        party=p,
        root={s: walk(n, {}, s) for s, n in tree.root.items()},
        resource_scope=tree.resource_scope,
    )


def relabel_network(
    net: Network,
    party_map: Mapping[Party, Party] | None = None,
    resource_map: Mapping[str, str] | None = None,
    *,
    name: str | None = None,
) -> Network:
    """Structural clone under renamed parties and/or resource ids; the
    tables are bit-identical.  Replicating a network and checking the
    clone induces the identical behavior (modulo names) is the executable
    form of device replicability."""
    pm = dict(party_map or {})
    rm = dict(resource_map or {})

    def rp(p: Party) -> Party:
        return pm.get(p, p)

    def rr(rid: str) -> str:
        return rm.get(rid, rid)

    resources = []
    for r in net.resources:
        ctor = (NonsignalingResource.make if r.nonsignaling_checked
                else NonsignalingResource.new_unchecked)
        resources.append(ctor(rr(r.id), [rp(q) for q in r.parties],
                              r.input_alphabets, r.output_alphabets, r.table))

    def rebuild(node: Node) -> Node:
        if isinstance(node, Terminal):
            return node
        return Internal(rr(node.resource_choice), node.input_choice,
                        {out: rebuild(c) for out, c in node.children.items()})

    trees = {}
    for q, t in net.trees.items():
        trees[rp(q)] = DecisionTree(
            party=rp(q),
            root={s: rebuild(n) for s, n in t.root.items()},
            resource_scope=frozenset(rr(rid) for rid in t.resource_scope),
        )

    return Network(
        parties=[rp(q) for q in net.parties],
        resources=resources,
        trees=trees,
        settings_alphabets={rp(q): a for q, a in net.settings_alphabets.items()},
        bins={rp(q): m for q, m in net.bins.items()},
        name=name or f"{net.name}-clone",
    )
