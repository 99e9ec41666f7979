"""
tself mdt - monotonic decision trees of a trained ensemble
==========================================================

Usage
-----
```bash
tself mdt --model model.json --out mdt.json [--fold J]
```

Description
-----------
Runs CREATEMDT on every tree of one fold's ensemble (fold 0 by default),
checks the structural invariants of each result, and writes them together
with the trees' leveraging coefficients.
"""

from __future__ import annotations

from pathlib import Path

import click

from tself.boosting import Leverage
from tself.errors import ArtifactError
from tself.mdt import MonotonicDecisionTree, create_mdt, verify_structure
from tself.scripts.train import read_model
from tself.utils import read_artifact, write_artifact
from tself.utils.clicks import translate_errors
from tself.utils.symbols import ARROW, CHECK, WARN

MDT_KIND = "tself.mdt"


def read_mdts(path: Path) -> tuple[list[MonotonicDecisionTree], list[Leverage]]:
    doc = read_artifact(path, MDT_KIND)
    try:
        mdts = [MonotonicDecisionTree.from_dict(t["mdt"]) for t in doc["trees"]]
        leverages = [Leverage(**t["leverage"]) for t in doc["trees"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ArtifactError(f"{path}: malformed MDT document ({e})") from e
    return mdts, leverages


# === Click command ===
@click.command("mdt")
@click.option("--model", "model", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), default=Path("mdt.json"), show_default=True)
@click.option("--fold", type=click.IntRange(min=0), default=0, show_default=True)
def mdt_cmd(model: Path, out: Path, fold: int) -> None:
    """Convert every tree of a fold ensemble to its MDT."""
    with translate_errors():
        _, ensembles = read_model(model)
        if fold not in ensembles:
            raise ArtifactError(f"model has no fold {fold}; folds are {sorted(ensembles)}")
        ens = ensembles[fold]

        trees = []
        for j, (dt, lev) in enumerate(zip(ens.trees, ens.leverages)):
            mdt = create_mdt(dt)
            for problem in verify_structure(dt, mdt):
                click.secho(f"{WARN} tree {j}: {problem}", fg="yellow")
            trees.append({"tree": j, "mdt": mdt.to_dict(), "leverage": lev._asdict()})
            click.echo(f"tree {j}: {len(dt)} DT nodes {ARROW} {len(mdt)} MDT nodes")

        write_artifact(out, MDT_KIND, {"fold": fold, "trees": trees})
    click.secho(f"{CHECK} wrote {len(trees)} MDTs {ARROW} {out}", fg="green")
