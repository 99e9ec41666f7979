"""
tself.mdt - monotonic decision trees
====================================

`create_mdt` walks a decision tree once, carrying a forbidden posterior
interval I, the MDT node currently being extended and the conjunction of
tests met since that node. A DT node whose absolute confidence leaves I
spawns a new MDT node (the arc carries the accumulated conjunction); a leaf
that stays inside I is tagged onto the current MDT node.

Prediction descends from the root while some child arc's conjunction holds
and returns the last node's canonical-link value. Along any DT path this is
the deepest node of the greedy strictly-increasing-confidence subsequence,
which `check_invariant_M` verifies by brute force.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, NamedTuple, Optional, Sequence

from tself.data import Value
from tself.errors import DataError
from tself.trees import DecisionTree, Split, canonical_link, confidence
from tself.utils.logutils import log_call

log = getLogger("tself")


class Literal(NamedTuple):
    """One DT test on the way to an MDT node: `source` is the DT node holding the split."""

    source: int
    split: Split
    left: bool

    def holds(self, x: Sequence[Value]) -> bool:
        return self.split.goes_left(x[self.split.feature]) == self.left

    def describe(self) -> str:
        return self.split.describe(self.left)


class Tag(NamedTuple):
    leaf: int
    p_plus: float


@dataclass
class MdtNode:
    id: int
    source: int
    p_plus: float
    prediction: float
    parent: Optional[int] = None
    arc: tuple[Literal, ...] = ()
    children: list[int] = field(default_factory=list)
    tags: list[Tag] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def width(self) -> int:
        return len(self.arc)

    def reached_by(self, x: Sequence[Value]) -> bool:
        return all(lit.holds(x) for lit in self.arc)


@dataclass
class MonotonicDecisionTree:
    nodes: list[MdtNode]
    feature_names: tuple[str, ...] = ()

    @property
    def root(self) -> MdtNode:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> MdtNode:
        return self.nodes[node_id]

    def leaves(self) -> list[MdtNode]:
        return [n for n in self.nodes if n.is_leaf]

    def weighted_depth(self, node_id: int) -> int:
        """Sum of arc widths from the root down to the node."""
        total, node = 0, self.nodes[node_id]
        while node.parent is not None:
            total += node.width
            node = self.nodes[node.parent]
        return total

    @property
    def depth(self) -> int:
        return max(self.weighted_depth(n.id) for n in self.nodes)

    def max_abs_prediction(self) -> float:
        return max(abs(n.prediction) for n in self.nodes)

    def leaf_counts(self) -> dict[int, int]:
        """Number of MDT leaves below (or at) every node."""
        counts: dict[int, int] = {}
        for node in reversed(self.nodes):
            counts[node.id] = 1 if node.is_leaf else sum(counts[c] for c in node.children)
        return counts

    def descendants(self, node_id: int) -> list[int]:
        out, stack = [], [node_id]
        while stack:
            current = stack.pop()
            out.append(current)
            stack.extend(self.nodes[current].children)
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature_names": list(self.feature_names),
            "nodes": [
                {
                    "id": n.id,
                    "source": n.source,
                    "p_plus": n.p_plus,
                    "prediction": n.prediction,
                    "tags": [{"leaf": t.leaf, "p_plus": t.p_plus} for t in n.tags],
                }
                for n in self.nodes
            ],
            "arcs": [
                {
                    "tail": n.parent,
                    "head": n.id,
                    "width": n.width,
                    "tests": [
                        {"source": lit.source, "left": lit.left, "test": lit.split.to_dict()} for lit in n.arc
                    ],
                }
                for n in self.nodes
                if n.parent is not None
            ],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "MonotonicDecisionTree":
        nodes = []
        for i, nd in enumerate(d["nodes"]):
            if nd["id"] != i:
                raise DataError(f"MDT node ids must be 0..n-1 in order, found {nd['id']} at {i}")
            nodes.append(MdtNode(
                i,
                int(nd["source"]),
                float(nd["p_plus"]),
                float(nd["prediction"]),
                tags=[Tag(int(t["leaf"]), float(t["p_plus"])) for t in nd.get("tags", [])],
            ))
        for arc in d.get("arcs", []):
            head, tail = nodes[arc["head"]], arc["tail"]
            head.parent = tail
            head.arc = tuple(
                Literal(int(t["source"]), Split.from_dict(t["test"]), bool(t["left"])) for t in arc["tests"]
            )
            nodes[tail].children.append(head.id)
        for node in nodes:
            node.children.sort()
        return cls(nodes, tuple(d.get("feature_names", ())))


# === Construction ===

@log_call()
def create_mdt(dt: DecisionTree) -> MonotonicDecisionTree:
    root = dt.root
    nodes = [MdtNode(0, root.id, root.p_plus, canonical_link(root.p_plus))]

    def spawn(dt_id: int, parent: int, arc: list[Literal]) -> int:
        src = dt.nodes[dt_id]
        node = MdtNode(len(nodes), dt_id, src.p_plus, canonical_link(src.p_plus), parent, tuple(arc))
        nodes.append(node)
        nodes[parent].children.append(node.id)
        return node.id

    # (dt node, conjunction since the current MDT node, current MDT node, |link| bound of I)
    stack: list[tuple[int, list[Literal], int, float]] = [(root.id, [], 0, confidence(root.p_plus))]
    while stack:
        dt_id, arc, current, bound = stack.pop()
        node = dt.nodes[dt_id]
        key = confidence(node.p_plus)
        inside = key <= bound

        if node.is_leaf:
            if dt_id == nodes[current].source:
                continue  # a single-leaf DT: the MDT root already stands for it
            if inside:
                nodes[current].tags.append(Tag(node.id, node.p_plus))
            else:
                spawn(dt_id, current, arc)
            continue

        if not inside:
            current, bound, arc = spawn(dt_id, current, arc), key, []
        # right first so the left subtree is expanded (and numbered) first
        stack.append((node.right, arc + [Literal(dt_id, node.split, False)], current, bound))
        stack.append((node.left, arc + [Literal(dt_id, node.split, True)], current, bound))

    mdt = MonotonicDecisionTree(nodes, dt.feature_names)
    log.debug("MDT has %d nodes for a %d-node DT", len(mdt), len(dt))
    return mdt


def mdt_predict(mdt: MonotonicDecisionTree, x: Sequence[Value]) -> float:
    node = mdt.root
    while True:
        nxt = next((mdt.nodes[c] for c in node.children if mdt.nodes[c].reached_by(x)), None)
        if nxt is None:
            return node.prediction
        node = nxt


# === Certification ===

def monotone_oracle(dt: DecisionTree, x: Sequence[Value]) -> float:
    """Link value of the deepest node of the greedy increasing-confidence subsequence of x's DT path."""
    path, _ = dt.route(x)
    best = path[0]
    key = confidence(dt.nodes[best].p_plus)
    for node_id in path[1:]:
        k = confidence(dt.nodes[node_id].p_plus)
        if k > key:
            best, key = node_id, k
    return canonical_link(dt.nodes[best].p_plus)


class Mismatch(NamedTuple):
    index: int
    expected: float
    got: float


@dataclass
class InvariantReport:
    checked: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_invariant_M(dt: DecisionTree, mdt: MonotonicDecisionTree, xs) -> InvariantReport:
    report = InvariantReport()
    for i, x in enumerate(xs):
        expected, got = monotone_oracle(dt, x), mdt_predict(mdt, x)
        report.checked += 1
        if expected != got:
            report.mismatches.append(Mismatch(i, expected, got))
    if report.mismatches:
        log.warning("invariant (M) failed on %d of %d observations", len(report.mismatches), report.checked)
    return report


def _exclusive(a: tuple[Literal, ...], b: tuple[Literal, ...]) -> bool:
    branches = {lit.source: lit.left for lit in a}
    return any(lit.source in branches and branches[lit.source] != lit.left for lit in b)


def verify_structure(dt: DecisionTree, mdt: MonotonicDecisionTree) -> list[str]:
    """Structural problems of an MDT against its source DT; empty when sound."""
    problems = []
    if len(mdt) > len(dt):
        problems.append(f"MDT has {len(mdt)} nodes, source DT only {len(dt)}")
    if mdt.depth > dt.depth:
        problems.append(f"MDT weighted depth {mdt.depth} exceeds DT depth {dt.depth}")

    for node in mdt.nodes:
        if node.prediction != canonical_link(dt.nodes[node.source].p_plus):
            problems.append(f"node {node.id}: prediction does not match DT node {node.source}")
        if mdt.weighted_depth(node.id) != dt.nodes[node.source].depth:
            problems.append(f"node {node.id}: weighted depth differs from DT node {node.source}")
        if node.parent is not None:
            if node.width == 0:
                problems.append(f"node {node.id}: empty arc")
            if not abs(node.prediction) > abs(mdt.nodes[node.parent].prediction):
                problems.append(f"node {node.id}: |prediction| does not increase from its parent")
        kids = node.children
        for i, a in enumerate(kids):
            for b in kids[i + 1:]:
                if not _exclusive(mdt.nodes[a].arc, mdt.nodes[b].arc):
                    problems.append(f"siblings {a} and {b}: arc tests are not exclusive")

    covered = [n.source for n in mdt.nodes] + [t.leaf for n in mdt.nodes for t in n.tags]
    for leaf in dt.leaves():
        if covered.count(leaf.id) != 1:
            problems.append(f"DT leaf {leaf.id} is covered {covered.count(leaf.id)} times")
    return problems


__all__ = [
    "Literal", "Tag", "MdtNode", "MonotonicDecisionTree",
    "create_mdt", "mdt_predict", "monotone_oracle",
    "Mismatch", "InvariantReport", "check_invariant_M", "verify_structure",
]
