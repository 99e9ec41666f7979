"""
tself layout-tself - rescale a layout to its t-self
===================================================

Usage
-----
```bash
tself layout-tself --layout layout.json --t T --out layout_t.json
```

Description
-----------
Maps every node norm r to the r' whose t-self distance from the origin
equals the plain distance of r, keeping angles. The source layout must be
at t = 1. Nodes pushed to the largest encodable norm are reported.
"""

from __future__ import annotations

from pathlib import Path

import click

from tself.errors import ArtifactError
from tself.layout import DiskLayout, apply_t_self
from tself.scripts.embed import LAYOUT_KIND
from tself.utils import read_artifact, write_artifact
from tself.utils.clicks import translate_errors
from tself.utils.symbols import ARROW, CHECK, WARN


def read_layout(path: Path) -> DiskLayout:
    doc = read_artifact(path, LAYOUT_KIND)
    try:
        return DiskLayout.from_dict(doc)
    except (KeyError, TypeError, ValueError) as e:
        raise ArtifactError(f"{path}: malformed layout document ({e})") from e


# === Click command ===
@click.command("layout-tself")
@click.option("--layout", "layout_path", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--t", "t", type=float, required=True, help="Temperature of the target t-self.")
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), default=Path("layout_t.json"), show_default=True)
def layout_tself_cmd(layout_path: Path, t: float, out: Path) -> None:
    """Apply the t-self radius map to a t=1 layout."""
    with translate_errors():
        layout = apply_t_self(read_layout(layout_path), t)
        write_artifact(out, LAYOUT_KIND, layout.to_dict())

    if layout.saturated:
        click.secho(f"{WARN} saturated nodes {layout.saturated}", fg="yellow")
    click.secho(f"{CHECK} t = {t:g}, rho = {layout.rho:.4g} {ARROW} {out}", fg="green")
