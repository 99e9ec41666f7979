"""
tself.layout - Sarkar-style placement of an MDT in the Poincaré disk
====================================================================

Every node ν is placed so that its distance from the origin targets its
absolute confidence |α_ν|. Placement is recursive: move ν to the origin with
a Möbius translation, split ν's fan between its children proportionally to
the number of MDT leaves below each one, put every child on the bisector of
its sector, and map back.

Radial modes
------------
``absolute`` (default)
    The step from ν along the bisector is solved from the hyperbolic law of
    cosines so that d(0, z_child) = |α_child|; the norm is then snapped to
    tanh(|α_child|/2).
``relative``
    The step is |α_child| - |α_ν|, which is exact on chains only.

A child's own fan is centred on the continuation of the ray from its parent
and shrunk to the directions whose geodesic rays stay in the parent's
sector, so every subtree stays inside the sectors of all its ancestors.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field, replace
from logging import getLogger
from typing import Any, Literal as TypingLiteral, Optional

from tself.errors import DomainError
from tself.geometry import (
    DiskPoint,
    embed_t_radius,
    poincare_dist_origin,
    radius_for_distance,
    t_self_origin_dist,
)
from tself.mdt import MonotonicDecisionTree
from tself.tempered import Temper, is_classical
from tself.utils.logutils import log_call

log = getLogger("tself")

RadialMode = TypingLiteral["absolute", "relative"]
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LayoutParams:
    root_fan: float = TWO_PI
    fan: float = math.pi
    min_gap: float = 0.05
    radial: RadialMode = "absolute"

    def __post_init__(self):
        for name in ("root_fan", "fan"):
            value = getattr(self, name)
            if not 0.0 < value <= TWO_PI:
                raise DomainError(f"{name} must lie in (0, 2π], got {value!r}")
        if not 0.0 <= self.min_gap < math.pi:
            raise DomainError(f"min_gap must lie in [0, π), got {self.min_gap!r}")
        if self.radial not in ("absolute", "relative"):
            raise DomainError(f"radial must be 'absolute' or 'relative', got {self.radial!r}")


@dataclass
class DiskLayout:
    points: dict[int, DiskPoint]
    targets: dict[int, float]
    rho: float = 0.0
    t: Temper = 1.0
    params: LayoutParams = field(default_factory=LayoutParams)
    sectors: dict[int, tuple[float, float]] = field(default_factory=dict)
    conflicts: list[int] = field(default_factory=list)
    saturated: list[int] = field(default_factory=list)
    tree: Optional[int] = None

    def realized(self, node_id: int) -> float:
        """d^(t)(0, z_ν) at the layout's t."""
        return t_self_origin_dist(self.points[node_id].r, self.t)

    def to_dict(self) -> dict[str, Any]:
        return {
            "tree": self.tree,
            "t": self.t,
            "rho": self.rho,
            "params": asdict(self.params),
            "points": {str(k): list(p.xy) for k, p in self.points.items()},
            "targets": {str(k): v for k, v in self.targets.items()},
            "sectors": {str(k): list(v) for k, v in self.sectors.items()},
            "conflicts": list(self.conflicts),
            "saturated": list(self.saturated),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "DiskLayout":
        return cls(
            points={int(k): DiskPoint(complex(x, y)) for k, (x, y) in d["points"].items()},
            targets={int(k): float(v) for k, v in d["targets"].items()},
            rho=float(d["rho"]),
            t=float(d["t"]),
            params=LayoutParams(**d["params"]),
            sectors={int(k): (float(lo), float(hi)) for k, (lo, hi) in d.get("sectors", {}).items()},
            conflicts=[int(v) for v in d.get("conflicts", [])],
            saturated=[int(v) for v in d.get("saturated", [])],
            tree=d.get("tree"),
        )


# === Disk maps on raw complex numbers (ideal points included) ===

def _to_frame(z: complex, a: complex) -> complex:
    return (z - a) / (1.0 - a.conjugate() * z)


def _from_frame(w: complex, a: complex) -> complex:
    return (w + a) / (1.0 + a.conjugate() * w)


def _wrap(angle: float) -> float:
    return (angle + math.pi) % TWO_PI - math.pi


def radial_step(a: float, target: float, gamma: float) -> float:
    """
    Length s of the segment leaving a point at distance a from the origin, at
    angle gamma from the ray back to the origin, whose far end lies at
    distance target: cosh(target) = cosh(a)·cosh(s) - sinh(a)·sinh(s)·cos(gamma).
    """
    if a == 0.0:
        return target
    A = math.cosh(a)
    B = -math.sinh(a) * math.cos(gamma)
    R = math.sqrt(A * A - B * B)
    return max(math.acosh(math.cosh(target) / R) - math.atanh(B / A), 0.0)


def allocate_sectors(leaves: list[int], fan: float, min_gap: float) -> tuple[list[float], bool]:
    """Sector widths proportional to leaf counts on top of min_gap each; equal shares on underflow."""
    k = len(leaves)
    if k * min_gap > fan:
        return [fan / k] * k, True
    spare = fan - k * min_gap
    total = sum(leaves)
    return [min_gap + spare * n / total for n in leaves], False


# === Placement ===

@log_call()
def sarkar_layout(mdt: MonotonicDecisionTree, params: LayoutParams | None = None, tree: int | None = None) -> DiskLayout:
    params = params or LayoutParams()
    targets = {n.id: abs(n.prediction) for n in mdt.nodes}
    leaf_counts = mdt.leaf_counts()
    points: dict[int, complex] = {0: complex(radius_for_distance(targets[0]), 0.0)}
    sectors: dict[int, tuple[float, float]] = {}
    conflicts: list[int] = []

    # (node, fan centre and half-width in the node's own frame)
    stack = [(0, 0.0, 0.5 * params.root_fan)]
    while stack:
        node_id, centre, half = stack.pop()
        kids = mdt.nodes[node_id].children
        if not kids:
            continue
        z = points[node_id]
        widths, underflow = allocate_sectors([leaf_counts[c] for c in kids], 2.0 * half, params.min_gap)
        if underflow:
            conflicts.append(node_id)
            log.warning(
                "node %d: %d children do not fit a %.4g rad fan at gap %.4g; sectors compressed",
                node_id, len(kids), 2.0 * half, params.min_gap,
            )

        start = centre - half
        for child, width in zip(kids, widths):
            lo, hi = start, start + width
            start = hi
            mid = 0.5 * (lo + hi)
            if width > math.pi:
                lo, hi = mid - 0.5 * math.pi, mid + 0.5 * math.pi
            sectors[child] = (lo, hi)

            zc = _place_child(z, targets[node_id], targets[child], mid, params.radial)
            if params.radial == "relative" and abs(zc) <= abs(z):
                conflicts.append(child)
                step = targets[child] - targets[node_id]
                zc = cmath.rect(radius_for_distance(poincare_dist_origin(abs(z)) + step), cmath.phase(zc))
                log.warning("node %d: relative step does not move outward; pushed radially", child)
            points[child] = zc

            # fan of the child, expressed in its own frame
            phi = cmath.phase(_to_frame(_from_frame(cmath.rect(1.0, mid), z), zc))
            edges = (_from_frame(cmath.rect(1.0, a), z) for a in (lo, hi))
            allowed = min(abs(_wrap(cmath.phase(_to_frame(e, zc)) - phi)) for e in edges)
            stack.append((child, phi, min(0.5 * params.fan, allowed)))

    layout = DiskLayout(
        {k: DiskPoint.onto_disk(v) for k, v in sorted(points.items())},
        targets,
        params=params,
        sectors=sectors,
        conflicts=sorted(set(conflicts)),
        tree=tree,
    )
    layout.saturated = [k for k, p in layout.points.items() if p.clamped]
    layout.rho = embedding_error(mdt, layout)
    log.info("layout of %d nodes: rho = %.3g, %d conflicts", len(points), layout.rho, len(layout.conflicts))
    return layout


def _place_child(z: complex, parent_target: float, target: float, direction: float, radial: RadialMode) -> complex:
    if radial == "relative":
        step = target - parent_target
    elif z == 0:
        step = target
    else:
        gamma = abs(_wrap(direction - cmath.phase(-z)))
        step = radial_step(poincare_dist_origin(abs(z)), target, gamma)

    zc = _from_frame(cmath.rect(radius_for_distance(step), direction), z)
    if radial == "absolute" and zc != 0:
        zc = cmath.rect(radius_for_distance(target), cmath.phase(zc))
    return zc


# === Quality ===

def _rho(layout: DiskLayout, targets: dict[int, float]) -> float:
    terms = [abs((a - layout.realized(k)) / a) for k, a in targets.items() if a > 0.0]
    return sum(terms) / len(terms) if terms else 0.0


def embedding_error(mdt: MonotonicDecisionTree, layout: DiskLayout) -> float:
    """
    Mean of |(|α_ν| - d^(t)(0, z_ν)) / |α_ν||; nodes with α_ν = 0 are left
    out of the mean.
    """
    missing = {n.id for n in mdt.nodes} - set(layout.points)
    if missing:
        raise DomainError(f"layout has no point for MDT nodes {sorted(missing)}")
    return _rho(layout, {n.id: abs(n.prediction) for n in mdt.nodes})


def sector_violations(mdt: MonotonicDecisionTree, layout: DiskLayout, tol: float = 1e-6) -> list[tuple[int, int]]:
    """(subtree root, node) pairs where the node leaves the sector given to the subtree root."""
    out = []
    for child, (lo, hi) in layout.sectors.items():
        parent = mdt.nodes[child].parent
        z = layout.points[parent].z
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        for u in mdt.descendants(child):
            offset = _wrap(cmath.phase(_to_frame(layout.points[u].z, z)) - mid)
            if abs(offset) > half + tol:
                out.append((child, u))
    return out


# === t-self rescaling ===

@log_call()
def apply_t_self(layout: DiskLayout, t: Temper) -> DiskLayout:
    """
    Remap every norm with embed_t_radius, keeping angles. The embedding
    error is measured against d^(t) afterwards and matches the source.
    """
    if not is_classical(layout.t):
        raise DomainError(f"apply_t_self needs a layout at t=1, this one is at t={layout.t!r}")
    points, saturated = {}, []
    for k, p in layout.points.items():
        mapped = embed_t_radius(p.r, t)
        if mapped.saturated:
            saturated.append(k)
        points[k] = p if p.r == 0.0 else DiskPoint(cmath.rect(mapped.radius, p.angle))

    out = replace(layout, points=points, t=float(t), saturated=sorted(set(layout.saturated) | set(saturated)))
    out.rho = _rho(out, out.targets)
    return out


__all__ = [
    "LayoutParams", "DiskLayout", "radial_step", "allocate_sectors",
    "sarkar_layout", "embedding_error", "sector_violations", "apply_t_self",
]
