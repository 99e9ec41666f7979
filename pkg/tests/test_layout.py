import math

import pytest

from tself.errors import DomainError
from tself.geometry import DiskPoint, radius_for_distance
from tself.layout import (
    DiskLayout,
    LayoutParams,
    allocate_sectors,
    apply_t_self,
    embedding_error,
    radial_step,
    sarkar_layout,
    sector_violations,
)
from tself.mdt import create_mdt
from tself.trees import random_tree

from .builders import build

# root .6 -> .7 -> .8 -> .9, every other leaf tagged: a four-node MDT chain
CHAIN = (0.6, (0.7, (0.8, 0.9, 0.75), 0.65), 0.55)
# the root's left child is skipped, so the MDT root gets three children
FORK = (0.5, (0.5, 0.8, 0.9), 0.3)


def test_single_node_sits_at_the_origin():
    mdt = create_mdt(build(0.5))
    layout = sarkar_layout(mdt)
    assert layout.points[0].z == 0j
    assert layout.rho == 0.0
    assert layout.sectors == {}


def test_chain_is_exact():
    mdt = create_mdt(build(CHAIN))
    assert [len(n.children) for n in mdt.nodes] == [1, 1, 1, 0]
    for radial in ("absolute", "relative"):
        layout = sarkar_layout(mdt, LayoutParams(radial=radial))
        assert layout.rho < 1e-9
        assert not layout.conflicts
        for node in mdt.nodes:
            assert layout.points[node.id].r == pytest.approx(math.tanh(0.5 * abs(node.prediction)), rel=1e-12)


def test_half_distance_layout_has_rho_one_half():
    mdt = create_mdt(build(CHAIN))
    targets = {n.id: abs(n.prediction) for n in mdt.nodes}
    points = {k: DiskPoint.from_polar(radius_for_distance(0.5 * a), 0.3 * k) for k, a in targets.items()}
    assert embedding_error(mdt, DiskLayout(points, targets)) == pytest.approx(0.5, rel=1e-12)


def test_missing_points_are_rejected():
    mdt = create_mdt(build(CHAIN))
    with pytest.raises(DomainError):
        embedding_error(mdt, DiskLayout({0: DiskPoint(0j)}, {0: 0.0}))


def test_random_mdts(rng):
    for _ in range(200):
        mdt = create_mdt(random_tree(rng, n_features=3, max_depth=int(rng.integers(1, 7))))
        layout = sarkar_layout(mdt)
        assert layout.rho < 1e-6
        assert sector_violations(mdt, layout) == []
        for node in mdt.nodes:
            if node.parent is not None:
                assert layout.points[node.id].r > layout.points[node.parent].r


def test_sectors_follow_leaf_counts():
    widths, underflow = allocate_sectors([1, 3], fan=2.0, min_gap=0.1)
    assert not underflow
    assert sum(widths) == pytest.approx(2.0)
    assert widths == pytest.approx([0.1 + 1.8 / 4, 0.1 + 1.8 * 3 / 4])

    widths, underflow = allocate_sectors([5, 1, 1], fan=0.1, min_gap=0.05)
    assert underflow and widths == pytest.approx([0.1 / 3] * 3)


def test_underflow_is_recorded_as_a_conflict():
    mdt = create_mdt(build(FORK))
    assert len(mdt.root.children) == 3
    layout = sarkar_layout(mdt, LayoutParams(root_fan=0.1, min_gap=0.05))
    assert 0 in layout.conflicts
    assert sector_violations(mdt, layout) == []


def test_radial_step_solves_the_law_of_cosines():
    a, target, gamma = 1.2, 2.5, 2.0
    s = radial_step(a, target, gamma)
    lhs = math.cosh(a) * math.cosh(s) - math.sinh(a) * math.sinh(s) * math.cos(gamma)
    assert lhs == pytest.approx(math.cosh(target), rel=1e-12)
    assert radial_step(0.0, 1.5, 0.3) == 1.5
    # straight outward: distances add
    assert radial_step(1.0, 3.0, math.pi) == pytest.approx(2.0)


@pytest.mark.parametrize("t", [0.0, 0.5, 0.9])
def test_t_self_rescaling_keeps_rho_and_angles(rng, t):
    mdt = create_mdt(random_tree(rng, n_features=3, max_depth=5))
    layout = sarkar_layout(mdt, LayoutParams(radial="relative"))
    rescaled = apply_t_self(layout, t)
    assert rescaled.t == t
    assert rescaled.rho == pytest.approx(layout.rho, abs=1e-9)
    for k, p in layout.points.items():
        if p.r > 0:
            assert rescaled.points[k].angle == pytest.approx(p.angle, abs=1e-12)
            assert rescaled.points[k].r <= p.r + 1e-15 or t > 1


def test_t_self_at_one_is_the_identity(rng):
    layout = sarkar_layout(create_mdt(random_tree(rng, n_features=2, max_depth=4)))
    same = apply_t_self(layout, 1.0)
    for k, p in layout.points.items():
        assert same.points[k].z == pytest.approx(p.z, abs=1e-15)


def test_t_self_needs_a_classical_layout():
    layout = apply_t_self(sarkar_layout(create_mdt(build(CHAIN))), 0.5)
    with pytest.raises(DomainError):
        apply_t_self(layout, 0.3)


def test_params_validation():
    with pytest.raises(DomainError):
        LayoutParams(fan=0.0)
    with pytest.raises(DomainError):
        LayoutParams(root_fan=7.0)
    with pytest.raises(DomainError):
        LayoutParams(min_gap=-0.1)
    with pytest.raises(DomainError):
        LayoutParams(radial="polar")


def test_layout_dict_round_trip(rng):
    mdt = create_mdt(random_tree(rng, n_features=3, max_depth=4))
    layout = sarkar_layout(mdt, LayoutParams(fan=2.0), tree=3)
    back = DiskLayout.from_dict(layout.to_dict())
    assert back.to_dict() == layout.to_dict()
    assert back.tree == 3 and back.params.fan == 2.0
