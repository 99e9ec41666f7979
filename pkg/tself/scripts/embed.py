"""
tself embed - lay out one MDT in the Poincaré disk
==================================================

Usage
-----
```bash
tself embed --mdt mdt.json --tree J --out layout.json
            [--root-fan RAD] [--fan RAD] [--min-gap RAD] [--radial absolute|relative]
```

Description
-----------
Places every node of MDT J at a disk point whose distance from the origin
targets its absolute confidence, with fans split between children
proportionally to their leaf counts. Prints the embedding error ρ and any
node whose children did not fit at the minimum gap.

Options
-------
--root-fan RAD    Fan around the root [2π].
--fan RAD         Fan around every other node [π].
--min-gap RAD     Minimum sector per child [0.05].
--radial MODE     `absolute` hits every node's target exactly; `relative`
                  steps |α_child| - |α_parent| from the parent [absolute].
"""

from __future__ import annotations

import math
from pathlib import Path

import click

from tself.errors import ArtifactError
from tself.layout import LayoutParams, sarkar_layout
from tself.scripts.mdt import read_mdts
from tself.utils import write_artifact
from tself.utils.clicks import translate_errors
from tself.utils.symbols import ARROW, CHECK, WARN

LAYOUT_KIND = "tself.layout"


# === Click command ===
@click.command("embed")
@click.option("--mdt", "mdt_path", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--tree", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), default=Path("layout.json"), show_default=True)
@click.option("--root-fan", type=float, default=2.0 * math.pi, show_default=True)
@click.option("--fan", type=float, default=math.pi, show_default=True)
@click.option("--min-gap", type=float, default=0.05, show_default=True)
@click.option("--radial", type=click.Choice(["absolute", "relative"]), default="absolute", show_default=True)
def embed_cmd(mdt_path: Path, tree: int, out: Path, root_fan: float, fan: float, min_gap: float, radial: str) -> None:
    """Sarkar-style layout of one MDT."""
    try:
        params = LayoutParams(root_fan, fan, min_gap, radial)
    except ValueError as e:
        raise click.BadParameter(str(e))

    with translate_errors():
        mdts, _ = read_mdts(mdt_path)
        if tree >= len(mdts):
            raise ArtifactError(f"{mdt_path} holds {len(mdts)} MDTs; --tree {tree} is out of range")
        layout = sarkar_layout(mdts[tree], params, tree=tree)
        write_artifact(out, LAYOUT_KIND, layout.to_dict())

    if layout.conflicts:
        click.secho(f"{WARN} sectors compressed at nodes {layout.conflicts}", fg="yellow")
    click.secho(f"{CHECK} rho = {layout.rho:.4g} for {len(layout.points)} nodes {ARROW} {out}", fg="green")
