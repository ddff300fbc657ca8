"""Per-party decision trees: adaptive wiring of a party's resource shares.

A party holding shares of resources R_k measures them adaptively: which
resource to consult next, and with which input, may depend on the party's
setting and on all outputs seen so far.  That strategy is a finite tree:
one root edge per setting, then internal nodes labeled (resource, input)
whose outgoing edges are labeled by the possible outputs of that resource
as seen by this party, ending in terminals.  Validity requires every
root-to-terminal path to consult every resource in the party's scope
exactly once, so a setting plus a full output assignment determines a
unique maximal path — and hence the input every resource was given.

The tree is stored explicitly, node by node.  No structure sharing is
assumed (though `append_unused` produces it harmlessly), and traversal
never needs the resource tables themselves — only the alphabets, and only
during validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence, Union

from boxnet.resource import (
    Alphabet,
    NonsignalingResource,
    Party,
    Symbol,
    ValidationReport,
)


@dataclass(frozen=True)
class Terminal:
    """Leaf of a decision tree.  ``outcome`` is the party's final outcome
    symbol for this transcript; ``None`` means "use the default labeling"
    (the canonical transcript index — see the network module)."""

    outcome: int | None = None


@dataclass(frozen=True)
class Internal:
    """Consult ``resource_choice`` with ``input_choice``; ``children``
    maps each output symbol this party can see to the next node."""

    resource_choice: str
    input_choice: Symbol
    children: dict[Symbol, "Node"]


Node = Union[Internal, Terminal]


@dataclass(frozen=True)
class DecisionTree:
    party: Party
    root: dict[Symbol, Node]  # setting -> first node
    resource_scope: frozenset[str]

    def settings(self) -> tuple[Symbol, ...]:
        return tuple(sorted(self.root))


@dataclass(frozen=True)
class PathTrace:
    """Result of walking one maximal path: the input each resource was
    given, the order the resources were consulted in, and the terminal's
    outcome label (None when terminals are unlabeled)."""

    inputs: dict[str, Symbol]
    consult_order: tuple[str, ...]
    outcome_label: int | None


def validate_tree(
    t: DecisionTree,
    settings_alphabet: Alphabet | Sequence[Symbol],
    resources: Mapping[str, NonsignalingResource],
) -> ValidationReport:
    """Check the four structural conditions of a decision tree.

    (i)   the root has exactly one edge per setting value;
    (ii)  along every maximal path each resource in scope is consulted
          exactly once (which forces uniform path length |scope| + 1);
    (iii) every internal node's input is in this party's input alphabet
          of the chosen resource, and its outgoing edges are labeled
          bijectively with this party's output alphabet of that resource;
    plus: terminal labels, when used at all, are used on every terminal
          (the party's outcome alphabet is the union of labels over all
          settings; a label can be reachable under some settings only,
          e.g. a party answering deterministically from its setting).

    The first violation is reported with its path from the root.
    """
    if not isinstance(settings_alphabet, Alphabet):
        settings_alphabet = Alphabet(tuple(settings_alphabet))

    for rid in sorted(t.resource_scope):
        if rid not in resources:
            return ValidationReport.fail([f"scope names unknown resource {rid!r}"])
        if t.party not in resources[rid].parties:
            return ValidationReport.fail(
                [f"party {t.party!r} is not a member of resource {rid!r}"])

    if set(t.root) != set(settings_alphabet.values):
        return ValidationReport.fail([
            f"root edges {sorted(t.root)} do not match the settings "
            f"alphabet {list(settings_alphabet.values)}"])

    unlabeled = [0]
    labeled = [0]

    def walk(node: Node, used: frozenset[str], path: str, setting: Symbol) -> list[str]:
        if isinstance(node, Terminal):
            if used != t.resource_scope:
                missing = sorted(t.resource_scope - used)
                return [f"path [{path}] ends without consulting {missing}"]
            if node.outcome is None:
                unlabeled[0] += 1
            else:
                labeled[0] += 1
            return []
        if node.resource_choice not in t.resource_scope:
            return [f"path [{path}] consults {node.resource_choice!r}, "
                    f"which is outside the scope"]
        if node.resource_choice in used:
            return [f"path [{path}] consults {node.resource_choice!r} twice"]
        r = resources[node.resource_choice]
        if node.input_choice not in r.input_alphabet(t.party):
            return [f"path [{path}] gives {node.resource_choice!r} input "
                    f"{node.input_choice}, outside this party's alphabet "
                    f"{list(r.input_alphabet(t.party).values)}"]
        expected = set(r.output_alphabet(t.party).values)
        if set(node.children) != expected:
            return [f"path [{path}] node for {node.resource_choice!r} has output "
                    f"edges {sorted(node.children)}, expected {sorted(expected)}"]
        used = used | {node.resource_choice}
        for out, child in sorted(node.children.items()):
            errs = walk(child, used,
                        f"{path} -> {node.resource_choice}:{out}", setting)
            if errs:
                return errs
        return []

    for setting in settings_alphabet.values:
        errs = walk(t.root[setting], frozenset(), f"setting {setting}", setting)
        if errs:
            return ValidationReport.fail(errs)

    if labeled[0] and unlabeled[0]:
        return ValidationReport.fail(
            ["terminals are partially labeled: label all of them or none"])
    return ValidationReport.ok()


def trace_path(
    t: DecisionTree,
    setting: Symbol,
    outputs: Mapping[str, Symbol],
) -> PathTrace:
    """Walk the unique maximal path selected by a setting and a full
    output assignment; return the inputs it handed each resource.

    Requires a *valid* tree, one output per resource in scope, and a
    setting present at the root.  Under those preconditions the walk is
    total: every consulted resource has an entry in ``outputs`` and every
    output symbol has an edge.
    """
    missing = t.resource_scope - set(outputs)
    if missing:
        raise KeyError(f"outputs missing entries for {sorted(missing)}")
    if setting not in t.root:
        raise KeyError(f"setting {setting} has no root edge (have {sorted(t.root)})")

    inputs: dict[str, Symbol] = {}
    order: list[str] = []
    node = t.root[setting]
    while isinstance(node, Internal):
        rid = node.resource_choice
        inputs[rid] = node.input_choice
        order.append(rid)
        out = outputs[rid]
        if out not in node.children:
            raise KeyError(f"output {out} of {rid!r} has no edge here "
                           f"(have {sorted(node.children)})")
        node = node.children[out]
    return PathTrace(inputs=inputs, consult_order=tuple(order),
                     outcome_label=node.outcome)


def excise_input_free(
    t: DecisionTree,
    k: str,
    a: Symbol | Mapping[Symbol, Symbol],
) -> DecisionTree:
    """Remove resource ``k`` from the tree given its known output.

    Every node consulting ``k`` is replaced by its child along the edge
    for the observed output: pass a single symbol ``a`` when the output
    is input-independent (shared randomness), or a map input -> output
    when ``k`` behaves locally deterministically (the output depends on
    which input the node chose).  All paths shorten by one edge and the
    scope loses ``k``.
    """
    if k not in t.resource_scope:
        raise KeyError(f"resource {k!r} not in scope {sorted(t.resource_scope)}")

    def observed(input_choice: Symbol) -> Symbol:
        if isinstance(a, Mapping):
            if input_choice not in a:
                raise ValueError(f"no known output of {k!r} for input {input_choice}")
            return a[input_choice]
        return a

    def walk(node: Node) -> Node:
        if isinstance(node, Terminal):
            return node
        if node.resource_choice == k:
            out = observed(node.input_choice)
            if out not in node.children:
                raise ValueError(
                    f"output {out} outside {k!r}'s edges {sorted(node.children)}")
            return walk(node.children[out])
        return Internal(node.resource_choice, node.input_choice,
                        {out: walk(c) for out, c in node.children.items()})

    return DecisionTree(
        party=t.party,
        root={s: walk(n) for s, n in t.root.items()},
        resource_scope=t.resource_scope - {k},
    )


def append_unused(
    t: DecisionTree,
    unused: Sequence[str],
    dummy_inputs: Mapping[str, Symbol],
    resources: Mapping[str, NonsignalingResource],
) -> DecisionTree:
    """Extend every path to also consult the ``unused`` resources, in
    order, each with a fixed dummy input, every output leading to the same
    continuation.  The original terminal (label included) survives at the
    bottom.  The party's *behavior* is unchanged up to marginalizing the
    appended outputs away; that equality is checked at the network level.

    ``resources`` supplies the output alphabets needed to fan out each
    appended node.
    """
    unused = list(unused)
    overlap = set(unused) & t.resource_scope
    if overlap:
        raise ValueError(f"resources already consulted: {sorted(overlap)}")
    if len(set(unused)) != len(unused):
        raise ValueError(f"duplicate ids in unused: {unused}")
    for rid in unused:
        r = resources[rid]
        if dummy_inputs[rid] not in r.input_alphabet(t.party):
            raise ValueError(
                f"dummy input {dummy_inputs[rid]} outside {rid!r}'s alphabet "
                f"{list(r.input_alphabet(t.party).values)} for {t.party!r}")

    def chain_below(terminal: Terminal) -> Node:
        node: Node = terminal
        for rid in reversed(unused):
            outs = resources[rid].output_alphabet(t.party).values
            node = Internal(rid, dummy_inputs[rid], {out: node for out in outs})
        return node

    def walk(node: Node) -> Node:
        if isinstance(node, Terminal):
            return chain_below(node)
        return Internal(node.resource_choice, node.input_choice,
                        {out: walk(c) for out, c in node.children.items()})

    return DecisionTree(
        party=t.party,
        root={s: walk(n) for s, n in t.root.items()},
        resource_scope=t.resource_scope | set(unused),
    )


def bottom_encode(r: NonsignalingResource) -> NonsignalingResource:
    """The "opt-out" extension of a resource: every party gains one extra
    input symbol meaning *do not use this resource*, and one extra output
    symbol that is returned (with certainty) exactly when they opt out.
    The parties who do use it see their marginal of the original table.

    This is the alternative to `append_unused` for modeling a party that
    never consults a shared resource; the two encodings induce identical
    behaviors, which the test suite checks by direct comparison.
    """
    r.require_nonsignaling("bottom_encode")
    n = len(r.parties)
    bot_in = [max(a.values) + 1 for a in r.input_alphabets]
    bot_out = [max(a.values) + 1 for a in r.output_alphabets]
    in_alphas = [Alphabet(a.values + (bot_in[i],)) for i, a in enumerate(r.input_alphabets)]
    out_alphas = [Alphabet(a.values + (bot_out[i],)) for i, a in enumerate(r.output_alphabets)]

    from boxnet.resource import marginal as resource_marginal

    table: dict[tuple[Symbol, ...], dict[tuple[Symbol, ...], Fraction]] = {}
    for opted_out in product((False, True), repeat=n):
        active = [i for i in range(n) if not opted_out[i]]
        if active:
            m = (r if len(active) == n
                 else resource_marginal(r, [r.parties[i] for i in active]))
        for x_active in product(*(r.input_alphabets[i].values for i in active)):
            x = [0] * n
            for i in range(n):
                if opted_out[i]:
                    x[i] = bot_in[i]
            for pos, i in enumerate(active):
                x[i] = x_active[pos]
            column: dict[tuple[Symbol, ...], Fraction] = {}
            if active:
                for a_active, v in m.table[x_active].items():
                    a = [0] * n
                    for i in range(n):
                        if opted_out[i]:
                            a[i] = bot_out[i]
                    for pos, i in enumerate(active):
                        a[i] = a_active[pos]
                    column[tuple(a)] = v
            else:
                column[tuple(bot_out)] = Fraction(1)
            table[tuple(x)] = column

    return NonsignalingResource.make(f"{r.id}+optout", r.parties, in_alphas,
                                     out_alphas, table)


# -- serialization ----------------------------------------------------------------


def _node_to_json(node: Node) -> dict:
    if isinstance(node, Terminal):
        return {} if node.outcome is None else {"outcome": str(node.outcome)}
    return {
        "resource": node.resource_choice,
        "input": int(node.input_choice),
        "children": {str(out): _node_to_json(c) for out, c in node.children.items()},
    }


def _node_from_json(data: Mapping) -> Node:
    if "resource" in data:
        return Internal(
            resource_choice=str(data["resource"]),
            input_choice=int(data["input"]),
            children={int(out): _node_from_json(c)
                      for out, c in data["children"].items()},
        )
    if "outcome" in data:
        return Terminal(outcome=int(data["outcome"]))
    return Terminal()


def tree_to_json_dict(t: DecisionTree) -> dict:
    return {
        "party": t.party,
        "settings": {str(s): _node_to_json(n) for s, n in t.root.items()},
    }


def tree_from_json_dict(data: Mapping, *, party: Party | None = None) -> DecisionTree:
    """Load a tree; the scope is inferred from the resources the tree
    actually consults (validation separately enforces that every path
    consults all of them)."""
    root = {int(s): _node_from_json(n) for s, n in data["settings"].items()}

    scope: set[str] = set()

    def collect(node: Node) -> None:
        if isinstance(node, Internal):
            scope.add(node.resource_choice)
            for c in node.children.values():
                collect(c)

    for n in root.values():
        collect(n)
    p = party if party is not None else data["party"]
    return DecisionTree(party=p, root=root, resource_scope=frozenset(scope))
