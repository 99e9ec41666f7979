import xml.etree.ElementTree as ET

import pytest

from tself.boosting import Leverage
from tself.errors import ArtifactError, DomainError
from tself.layout import apply_t_self, sarkar_layout
from tself.mdt import create_mdt
from tself.render import SIZE, default_name, geodesic_path, render_svg

from .builders import build

SVG = "{http://www.w3.org/2000/svg}"
TREE = (0.5, (0.7, 0.5, 0.9), (0.2, 0.1, 0.45))


@pytest.fixture
def drawn():
    mdt = create_mdt(build(TREE))
    return mdt, sarkar_layout(mdt, tree=0)


def circles(path):
    return list(ET.parse(path).getroot().iter(f"{SVG}circle"))


def test_svg_parses_and_is_deterministic(tmp_path, drawn):
    mdt, layout = drawn
    a = render_svg(layout, mdt, tmp_path / "a.svg", isolines=(0.6, 0.8, 1.0))
    b = render_svg(layout, mdt, tmp_path / "b.svg", isolines=(0.6, 0.8, 1.0))
    assert a.path.read_bytes() == b.path.read_bytes()
    assert a.nodes == len(mdt)

    root = ET.parse(a.path).getroot()
    assert root.tag == f"{SVG}svg"
    nodes = [c for c in root.iter(f"{SVG}circle") if "data-node" in c.attrib]
    assert sorted(int(c.get("data-node")) for c in nodes) == [n.id for n in mdt.nodes]
    arcs = list(root.iter(f"{SVG}path"))
    assert len(arcs) == len(mdt) - 1
    assert {int(p.get("data-width")) for p in arcs} == {n.width for n in mdt.nodes if n.parent is not None}


def test_isolines(tmp_path, drawn):
    mdt, layout = drawn
    report = render_svg(layout, mdt, tmp_path / "iso.svg", isolines=(0.5, 0.7, 0.9))
    assert report.skipped_isolines == [0.5]
    iso = [c for c in circles(report.path) if "data-p" in c.attrib]
    assert sorted(c.get("data-p") for c in iso) == ["0.7", "0.9"]
    outer = max(iso, key=lambda c: float(c.get("r")))
    assert outer.get("stroke-width") == "2.5"

    bare = render_svg(layout, mdt, tmp_path / "bare.svg")
    assert not [c for c in circles(bare.path) if "data-p" in c.attrib]
    assert ET.parse(bare.path).getroot().find(f"{SVG}g[@id='isolines']") is None


def test_everything_stays_in_the_viewport(tmp_path, drawn):
    mdt, layout = drawn
    report = render_svg(layout, mdt, tmp_path / "v.svg", isolines=(1.0,), leverage=Leverage(1.5, 2.2, 0.6, 0.68))
    for c in circles(report.path):
        cx, cy, r = (float(c.get(k)) for k in ("cx", "cy", "r"))
        assert 0.0 <= cx - r and cx + r <= SIZE
        assert 0.0 <= cy - r and cy + r <= SIZE
    roles = sorted(c.get("data-role") for c in circles(report.path) if "data-role" in c.attrib)
    assert roles == ["kappa", "kappa_star"]


def test_caption_reports_rho_and_t(tmp_path, drawn):
    mdt, layout = drawn
    report = render_svg(layout, mdt, tmp_path / "t.svg", t=0.5)
    texts = [t.text for t in ET.parse(report.path).getroot().iter(f"{SVG}text")]
    assert texts[-1].startswith("ρ = ") and texts[-1].endswith("t = 0.5")
    assert f"{mdt.root.prediction:+.3f}" in texts


def test_rendering_a_rescaled_layout_at_another_t_fails(tmp_path, drawn):
    mdt, layout = drawn
    with pytest.raises(DomainError):
        render_svg(apply_t_self(layout, 0.5), mdt, tmp_path / "x.svg", t=1.0)


def test_layout_and_mdt_must_match(tmp_path, drawn):
    _, layout = drawn
    other = create_mdt(build((0.5, 0.9, 0.1)))
    with pytest.raises(ArtifactError):
        render_svg(layout, other, tmp_path / "x.svg")


def test_geodesic_paths():
    assert " L " in geodesic_path(0.2 + 0j, 0.6 + 0j)
    assert " L " in geodesic_path(0j, 0.3 + 0.3j)
    arc = geodesic_path(0.5 + 0j, 0.5j)
    assert " A " in arc
    # circle orthogonal to the unit circle through 0.5 and 0.5i: centre (1.25, 1.25)
    radius = float(arc.split(" A ")[1].split()[0])
    assert radius == pytest.approx(480.0 * (2 * 1.25 ** 2 - 1) ** 0.5, abs=1e-3)


def test_default_name():
    assert default_name("layout", 3, 0.5) == "layout_tree3_t0.5.svg"
    assert default_name("layout", 0, 1.0) == "layout_tree0_t1.svg"
