"""
tself render - SVG figure of a laid-out MDT
===========================================

Usage
-----
```bash
tself render --layout L.json --mdt M.json
             [--isolines 0.6,0.7,0.8,0.9,0.99,0.999] [--t T] [--leverage] [--out out.svg]
```

Description
-----------
Draws the unit disk, posterior isolines, the MDT's arcs as geodesics (stroke
width follows the number of conjoined tests) and its nodes coloured by the
sign of their prediction, with ρ and t as a caption.

Options
-------
--isolines LIST   Posteriors p whose isoline |2p-1| is drawn; p = 0.5 is skipped.
--t T             Render the t-self of a t=1 layout [the layout's t].
--leverage        Also draw the tree's (κ) and (κ)* circles.
--out PATH        Output file [<layout stem>_tree<j>_t<t>.svg].
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import click

from tself.errors import ArtifactError
from tself.render import default_name, render_svg
from tself.scripts.layout_tself import read_layout
from tself.scripts.mdt import read_mdts
from tself.utils.clicks import float_list, translate_errors
from tself.utils.symbols import ARROW, CHECK, WARN


# === Click command ===
@click.command("render")
@click.option("--layout", "layout_path", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--mdt", "mdt_path", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--isolines", callback=float_list, default="", help="Comma-separated posteriors.")
@click.option("--t", "t", type=float, default=None)
@click.option("--leverage", "with_leverage", is_flag=True)
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), default=None)
def render_cmd(
    layout_path: Path, mdt_path: Path, isolines: tuple[float, ...], t: Optional[float],
    with_leverage: bool, out: Optional[Path],
) -> None:
    """Write one SVG for a layout and the MDT it was built from."""
    with translate_errors():
        layout = read_layout(layout_path)
        mdts, leverages = read_mdts(mdt_path)
        j = layout.tree if layout.tree is not None else 0
        if j >= len(mdts):
            raise ArtifactError(f"layout refers to tree {j}, {mdt_path} holds {len(mdts)} MDTs")
        if out is None:
            shown_t = layout.t if t is None else t
            out = layout_path.with_name(default_name(layout_path.stem, j, shown_t))
        report = render_svg(
            layout, mdts[j], out, isolines, t=t, leverage=leverages[j] if with_leverage else None
        )

    for p in report.skipped_isolines:
        click.secho(f"{WARN} isoline p={p:g} has radius 0; omitted", fg="yellow")
    click.secho(f"{CHECK} rendered {report.nodes} nodes {ARROW} {report.path}", fg="green")
