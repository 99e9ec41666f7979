"""
tself train - K-fold cross-validation of LOGISTICBOOST
======================================================

Usage
-----
```bash
tself train --data F.csv --label COL --positive VAL
            [--trees T] [--tree-size N] [--folds K] [--seed S] [--jobs J]
            [--out model.json] [--report cv.yml]
```

Description
-----------
Splits the data into K stratified folds (seeded), boosts T trees of at most
N nodes on every training part and measures each fold's test error twice:
with the decision trees, and with every tree replaced by its monotonic
decision tree under the same leveraging coefficients. Prints mean ± std of
both and the p-value of a paired Student t-test.

`--folds 1` skips cross-validation and trains one ensemble on all rows.

Options
-------
--data F.csv       Comma-separated file with a header row.
--label COL        Name of the class column (exactly two distinct values).
--positive VAL     Value of COL that is the positive class.
--trees T          Boosting iterations [20].
--tree-size N      Node budget of every tree [31].
--folds K          Number of folds; 1 trains on everything [10].
--seed S           Seed of the fold assignment [0].
--jobs J           Folds trained in parallel [logical cores].
--out PATH         Model artifact (all fold ensembles) [model.json].
--report PATH      Also write the CV summary as YAML.
"""

from __future__ import annotations

import os
from logging import getLogger
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.table import Table

from tself.boosting import BoostedEnsemble, boost
from tself.data import load_csv
from tself.experiment import cross_validate
from tself.errors import ArtifactError
from tself.utils import read_artifact, write_artifact, write_text
from tself.utils.clicks import translate_errors
from tself.utils.symbols import ARROW, CHECK, PLUSMINUS, WARN
from tself.utils.yaml_tools import dump_no_wrap

log = getLogger("tself")

MODEL_KIND = "tself.model"


def _fold_table(result) -> Table:
    table = Table(title="test error per fold (%)")
    table.add_column("fold", justify="right")
    table.add_column("DT", justify="right")
    table.add_column("MDT", justify="right")
    table.add_column("trees", justify="right")
    for f in result.folds:
        flag = f" {WARN}" if f.ensemble.stopped_early else ""
        table.add_row(str(f.fold), f"{f.dt_error:.2f}", f"{f.mdt_error:.2f}", f"{len(f.ensemble)}{flag}")
    return table


# === Click command ===
@click.command("train")
@click.option("--data", "data", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--label", required=True, help="Class column.")
@click.option("--positive", required=True, help="Positive class value.")
@click.option("--trees", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--tree-size", type=click.IntRange(min=1), default=31, show_default=True)
@click.option("--folds", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=lambda: os.cpu_count() or 1)
@click.option("--out", type=click.Path(path_type=Path, dir_okay=False), default=Path("model.json"), show_default=True)
@click.option("--report", type=click.Path(path_type=Path, dir_okay=False), default=None)
def train_cmd(
    data: Path, label: str, positive: str, trees: int, tree_size: int, folds: int,
    seed: int, jobs: int, out: Path, report: Optional[Path],
) -> None:
    """Cross-validate boosted log-loss trees and their MDTs."""
    with translate_errors():
        sample = load_csv(data, label, positive)
        header = {
            "label": label, "positive": positive, "seed": seed,
            "folds": folds, "trees": trees, "tree_size": tree_size,
        }

        if folds == 1:
            ens = boost(sample, trees, tree_size, jobs)
            payload = {**header, "assignments": None, "ensembles": [{"fold": 0, "ensemble": ens.to_dict()}]}
            write_artifact(out, MODEL_KIND, payload)
            click.secho(f"{CHECK} trained {len(ens)} trees on {sample.m} rows {ARROW} {out}", fg="green")
            return

        result = cross_validate(sample, folds, seed, trees, tree_size, jobs)
        payload = {
            **header,
            "assignments": result.assignments.tolist(),
            "ensembles": [
                {"fold": f.fold, "ensemble": f.ensemble.to_dict(), "dt_error": f.dt_error, "mdt_error": f.mdt_error}
                for f in result.folds
            ],
        }
        write_artifact(out, MODEL_KIND, payload)
        if report is not None:
            write_text(report, dump_no_wrap({**header, **result.to_report()}))

    Console().print(_fold_table(result))
    (dm, ds), (mm, ms) = result.dt_summary, result.mdt_summary
    click.secho(f"DT  test error: {dm:.2f} {PLUSMINUS} {ds:.2f}", fg="blue")
    click.secho(f"MDT test error: {mm:.2f} {PLUSMINUS} {ms:.2f}", fg="blue")
    click.secho(f"paired t-test p = {result.p_value:.4g}", fg="blue")
    click.secho(f"{CHECK} wrote {folds} fold models {ARROW} {out}", fg="green")
    if report is not None:
        click.secho(f"{CHECK} CV report {ARROW} {report}", fg="green")


def read_model(path: Path) -> tuple[dict, dict[int, BoostedEnsemble]]:
    """Model artifact header and its ensembles keyed by fold."""
    doc = read_artifact(path, MODEL_KIND)
    try:
        ensembles = {int(e["fold"]): BoostedEnsemble.from_dict(e["ensemble"]) for e in doc["ensembles"]}
    except (KeyError, TypeError, ValueError) as e:
        raise ArtifactError(f"{path}: malformed model document ({e})") from e
    return doc, ensembles
