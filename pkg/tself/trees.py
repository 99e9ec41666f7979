"""
tself.trees - log-loss decision trees
=====================================

Top-down induction with the binary Shannon entropy (the Bayes risk of the
log-loss) as splitting criterion. Growth is leaf-wise: the heaviest non-pure
leaf under the current example weights is split next, and induction stops at
the node budget, when every leaf is pure, or when no leaf has a split that
lowers Σ_leaves mass·cbr_log(p⁺).

Real-valued predictions use the canonical link log(p/(1-p)); the clamp to
[eps, 1-eps] happens only there, never in the stored posteriors.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from logging import getLogger
from typing import Any, NamedTuple, Optional, Sequence

import numpy as np
from scipy import special

from tself.data import Sample, Value, check_weights
from tself.errors import DataError
from tself.utils.logutils import log_call

log = getLogger("tself")

LINK_EPS = 1e-10


# === Losses and links ===

def cbr_log(p):
    """Binary Shannon entropy in nats, with 0·log 0 = 0."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    out = special.entr(p) + special.entr(1.0 - p)
    return float(out) if out.ndim == 0 else out


def canonical_link(p, eps: float = LINK_EPS):
    """log(p/(1-p)) after clamping p to [eps, 1-eps]."""
    p = np.clip(np.asarray(p, dtype=float), eps, 1.0 - eps)
    out = special.logit(p)
    return float(out) if out.ndim == 0 else out


def confidence(p: float) -> float:
    """|canonical_link(p)|: the key every monotonicity test compares on."""
    return abs(canonical_link(p))


# === Tests and nodes ===

@dataclass(frozen=True)
class Split:
    """
    Binary test. Numeric: value <= threshold goes left. Categorical:
    value in `categories` goes left; a value outside `known` is unseen and
    follows `default_left` (the heavier child at induction time).
    """

    feature: int
    name: str = ""
    threshold: Optional[float] = None
    categories: Optional[frozenset] = None
    known: Optional[frozenset] = None
    default_left: bool = True

    @property
    def is_numeric(self) -> bool:
        return self.threshold is not None

    def is_unseen(self, value: Value) -> bool:
        return not self.is_numeric and value not in self.known

    def goes_left(self, value: Value) -> bool:
        if self.is_numeric:
            return float(value) <= self.threshold
        if value in self.known:
            return value in self.categories
        return self.default_left

    def left_mask(self, column: np.ndarray) -> np.ndarray:
        if self.is_numeric:
            return np.asarray(column, dtype=float) <= self.threshold
        return np.fromiter(
            (v in self.categories if v in self.known else self.default_left for v in column),
            dtype=bool,
            count=len(column),
        )

    def describe(self, left: bool = True) -> str:
        label = self.name or f"x{self.feature}"
        if self.is_numeric:
            return f"{label} {'<=' if left else '>'} {self.threshold:g}"
        cats = ",".join(sorted(self.categories))
        return f"{label} {'∈' if left else '∉'} {{{cats}}}"

    def to_dict(self) -> dict[str, Any]:
        if self.is_numeric:
            return {"feature": self.feature, "name": self.name, "threshold": self.threshold}
        return {
            "feature": self.feature,
            "name": self.name,
            "categories": sorted(self.categories),
            "known": sorted(self.known),
            "default_left": self.default_left,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Split":
        if "threshold" in d:
            return cls(int(d["feature"]), d.get("name", ""), threshold=float(d["threshold"]))
        return cls(
            int(d["feature"]),
            d.get("name", ""),
            categories=frozenset(d["categories"]),
            known=frozenset(d["known"]),
            default_left=bool(d["default_left"]),
        )


@dataclass
class Node:
    id: int
    p_plus: float
    mass: float
    depth: int
    parent: Optional[int] = None
    split: Optional[Split] = None
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return self.split is None

    @property
    def children(self) -> tuple[int, ...]:
        return () if self.is_leaf else (self.left, self.right)


class Prediction(NamedTuple):
    posterior: float
    value: float
    unseen_category: bool = False


@dataclass
class DecisionTree:
    nodes: list[Node]
    feature_names: tuple[str, ...] = ()
    feature_kinds: tuple[str, ...] = field(default=())

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    @property
    def depth(self) -> int:
        return max(n.depth for n in self.nodes)

    def leaves(self) -> list[Node]:
        return [n for n in self.nodes if n.is_leaf]

    def max_abs_confidence(self) -> float:
        """(κ)*: largest |canonical_link(p⁺)| over the leaves."""
        return max(confidence(n.p_plus) for n in self.leaves())

    def route(self, x: Sequence[Value]) -> tuple[list[int], bool]:
        """Root-to-leaf node ids for observation x, and whether an unseen category was met."""
        node, path, unseen = self.root, [0], False
        while not node.is_leaf:
            value = x[node.split.feature]
            unseen = unseen or node.split.is_unseen(value)
            node = self.nodes[node.left if node.split.goes_left(value) else node.right]
            path.append(node.id)
        return path, unseen

    def members(self, sample: Sample) -> dict[int, np.ndarray]:
        """Example indices reaching every node."""
        out = {0: np.arange(sample.m)}
        for node in self.nodes:
            if node.is_leaf:
                continue
            idx = out[node.id]
            mask = node.split.left_mask(sample.features[node.split.feature].values[idx])
            out[node.left], out[node.right] = idx[mask], idx[~mask]
        return out

    def leaf_index(self, sample: Sample) -> np.ndarray:
        leaf = np.empty(sample.m, dtype=int)
        for node_id, idx in self.members(sample).items():
            if self.nodes[node_id].is_leaf:
                leaf[idx] = node_id
        return leaf

    def predict_values(self, sample: Sample) -> np.ndarray:
        """Canonical-link output for every example of the sample."""
        links = np.array([canonical_link(n.p_plus) for n in self.nodes])
        return links[self.leaf_index(sample)]

    def reestimate(self, sample: Sample, weights: np.ndarray) -> "DecisionTree":
        """Same tests, posteriors and masses recomputed under new weights."""
        weights = np.asarray(weights, dtype=float)
        check_weights(weights, sample.m)
        positive = sample.labels == 1
        nodes = []
        for node_id, idx in sorted(self.members(sample).items()):
            mass = float(weights[idx].sum())
            pos = float(weights[idx][positive[idx]].sum())
            nodes.append(replace(self.nodes[node_id], mass=mass, p_plus=_posterior(pos, mass)))
        return DecisionTree(nodes, self.feature_names, self.feature_kinds)

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature_names": list(self.feature_names),
            "feature_kinds": list(self.feature_kinds),
            "nodes": [
                {
                    "id": n.id,
                    "p_plus": n.p_plus,
                    "mass": n.mass,
                    "depth": n.depth,
                    "parent": n.parent,
                    "children": list(n.children),
                    "test": None if n.is_leaf else n.split.to_dict(),
                }
                for n in self.nodes
            ],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "DecisionTree":
        nodes = []
        for i, nd in enumerate(d["nodes"]):
            if nd["id"] != i:
                raise DataError(f"tree node ids must be 0..n-1 in order, found {nd['id']} at {i}")
            children = nd.get("children") or [None, None]
            split = None if nd["test"] is None else Split.from_dict(nd["test"])
            nodes.append(Node(i, float(nd["p_plus"]), float(nd["mass"]), int(nd["depth"]),
                              nd["parent"], split, children[0], children[1]))
        return cls(nodes, tuple(d.get("feature_names", ())), tuple(d.get("feature_kinds", ())))


def _posterior(pos: float, mass: float) -> float:
    return min(1.0, max(0.0, pos / mass)) if mass > 0 else 0.5


@log_call()
def dt_predict(tree: DecisionTree, x: Sequence[Value]) -> Prediction:
    path, unseen = tree.route(x)
    p = tree.nodes[path[-1]].p_plus
    if unseen:
        log.warning("unseen category on the path to leaf %d; routed to the heavier child", path[-1])
    return Prediction(p, canonical_link(p), unseen)


# === Induction ===

class _Candidate(NamedTuple):
    risk: float
    split: Split
    left: np.ndarray  # mask over the node's members


def _numeric_candidate(feature: int, name: str, values: np.ndarray, w: np.ndarray, wpos: np.ndarray) -> Optional[_Candidate]:
    order = np.argsort(values, kind="stable")
    v = values[order]
    cuts = np.flatnonzero(np.diff(v) > 0)
    if cuts.size == 0:
        return None
    mass_l = np.cumsum(w[order])[cuts]
    pos_l = np.cumsum(wpos[order])[cuts]
    mass_r, pos_r = w.sum() - mass_l, wpos.sum() - pos_l
    p_l = np.divide(pos_l, mass_l, out=np.zeros_like(mass_l), where=mass_l > 0)
    p_r = np.divide(pos_r, mass_r, out=np.zeros_like(mass_r), where=mass_r > 0)
    risk = mass_l * cbr_log(p_l) + np.maximum(mass_r, 0.0) * cbr_log(p_r)
    best = int(np.argmin(risk))
    lo, hi = v[cuts[best]], v[cuts[best] + 1]
    threshold = 0.5 * (lo + hi)
    if threshold >= hi:  # adjacent floats
        threshold = lo
    split = Split(feature, name, threshold=float(threshold))
    return _Candidate(float(risk[best]), split, values <= threshold)


def _categorical_candidate(feature: int, name: str, values: np.ndarray, w: np.ndarray, wpos: np.ndarray) -> Optional[_Candidate]:
    cats = sorted(set(values.tolist()))
    if len(cats) < 2:
        return None
    masses = np.array([w[values == c].sum() for c in cats])
    pos = np.array([wpos[values == c].sum() for c in cats])
    post = np.array([_posterior(pp, mm) for pp, mm in zip(pos, masses)])
    # for a concave impurity the best subset is a prefix of the posterior order
    order = sorted(range(len(cats)), key=lambda i: (post[i], cats[i]))
    mass_l = np.cumsum(masses[order])[:-1]
    pos_l = np.cumsum(pos[order])[:-1]
    mass_r, pos_r = masses.sum() - mass_l, pos.sum() - pos_l
    p_l = np.divide(pos_l, mass_l, out=np.zeros_like(mass_l), where=mass_l > 0)
    p_r = np.divide(pos_r, mass_r, out=np.zeros_like(mass_r), where=mass_r > 0)
    risk = mass_l * cbr_log(p_l) + np.maximum(mass_r, 0.0) * cbr_log(p_r)
    best = int(np.argmin(risk))
    left = frozenset(cats[i] for i in order[: best + 1])
    split = Split(
        feature,
        name,
        categories=left,
        known=frozenset(cats),
        default_left=bool(mass_l[best] >= mass_r[best]),
    )
    mask = np.fromiter((v in left for v in values), dtype=bool, count=len(values))
    return _Candidate(float(risk[best]), split, mask)


def _best_split(sample: Sample, idx: np.ndarray, w: np.ndarray, wpos: np.ndarray, jobs: int) -> Optional[_Candidate]:
    def evaluate(j: int) -> Optional[_Candidate]:
        feat = sample.features[j]
        values = feat.values[idx]
        if feat.kind == "numeric":
            return _numeric_candidate(j, feat.name, values.astype(float), w, wpos)
        return _categorical_candidate(j, feat.name, values, w, wpos)

    features = range(sample.n_features)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate, features))
    else:
        results = [evaluate(j) for j in features]

    best = None
    for cand in results:  # feature order: ties keep the lowest index
        if cand is not None and (best is None or cand.risk < best.risk):
            best = cand
    return best


@log_call()
def induce_dt(sample: Sample, weights=None, max_nodes: int = 31, jobs: int = 1) -> DecisionTree:
    if max_nodes < 1 or max_nodes % 2 == 0:
        raise ValueError(f"max_nodes must be odd and >= 1, got {max_nodes}")
    weights = sample.weights if weights is None else np.asarray(weights, dtype=float)
    check_weights(weights, sample.m)
    wpos_all = np.where(sample.labels == 1, weights, 0.0)

    total, pos = float(weights.sum()), float(wpos_all.sum())
    nodes = [Node(0, _posterior(pos, total), total, 0)]
    members = {0: np.arange(sample.m)}
    exhausted: set[int] = set()

    while len(nodes) + 2 <= max_nodes:
        open_leaves = [
            n for n in nodes
            if n.is_leaf and n.id not in exhausted and 0.0 < n.p_plus < 1.0 and n.mass > 0
        ]
        if not open_leaves:
            break
        leaf = max(open_leaves, key=lambda n: (n.mass, -n.id))
        idx = members[leaf.id]
        cand = _best_split(sample, idx, weights[idx], wpos_all[idx], jobs)

        current = leaf.mass * cbr_log(leaf.p_plus)
        if cand is None or not cand.risk < current - 1e-12 * max(1.0, current):
            exhausted.add(leaf.id)
            continue

        for side, mask in (("left", cand.left), ("right", ~cand.left)):
            child_idx = idx[mask]
            mass = float(weights[child_idx].sum())
            child = Node(len(nodes), _posterior(float(wpos_all[child_idx].sum()), mass), mass, leaf.depth + 1, leaf.id)
            setattr(leaf, side, child.id)
            members[child.id] = child_idx
            nodes.append(child)
        leaf.split = cand.split
        log.debug("split node %d on %s (risk %.6g -> %.6g)", leaf.id, cand.split.describe(), current, cand.risk)

    return DecisionTree(nodes, sample.feature_names, sample.feature_kinds)


def empirical_risk(tree: DecisionTree, sample: Sample, weights=None) -> tuple[float, float]:
    """
    Weighted log-loss of the tree computed two ways: from leaf posteriors
    (Σ mass·cbr_log(p⁺)/Σ mass) and from real-valued outputs
    (E_w log(1 + exp(-y·H))). Equal up to the link clamp.
    """
    weights = sample.weights if weights is None else np.asarray(weights, dtype=float)
    fitted = tree.reestimate(sample, weights)
    total = weights.sum()
    posterior_form = sum(n.mass * cbr_log(n.p_plus) for n in fitted.leaves()) / total
    margins = sample.labels * fitted.predict_values(sample)
    real_form = float(np.sum(weights * np.logaddexp(0.0, -margins)) / total)
    return float(posterior_form), real_form


def random_tree(rng: np.random.Generator, n_features: int, max_depth: int, split_prob: float = 0.75) -> DecisionTree:
    """
    Random numeric tree over [0, 1]^n_features with uniform posteriors; the
    root is split whenever max_depth > 0.
    """
    nodes = [Node(0, float(rng.uniform()), 1.0, 0)]
    frontier = [0]
    while frontier:
        node = nodes[frontier.pop(0)]
        if node.depth >= max_depth or (node.id > 0 and rng.uniform() > split_prob):
            continue
        feature = int(rng.integers(n_features))
        node.split = Split(feature, f"x{feature}", threshold=float(rng.uniform()))
        for side in ("left", "right"):
            child = Node(len(nodes), float(rng.uniform()), 0.5 * node.mass, node.depth + 1, node.id)
            setattr(node, side, child.id)
            nodes.append(child)
            frontier.append(child.id)
    names = tuple(f"x{j}" for j in range(n_features))
    return DecisionTree(nodes, names, ("numeric",) * n_features)


__all__ = [
    "LINK_EPS", "cbr_log", "canonical_link", "confidence",
    "Split", "Node", "Prediction", "DecisionTree",
    "dt_predict", "induce_dt", "empirical_risk", "random_tree",
]
