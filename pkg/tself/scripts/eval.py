"""
tself eval - test error of a trained model
==========================================

Usage
-----
```bash
tself eval --data F.csv --model model.json [--as-mdt] [--fold J]
```

Description
-----------
For a cross-validated model every fold ensemble is scored on its own test
fold (the fold assignment stored in the model must match the data's row
count); `--fold J` scores one fold only. A model trained with `--folds 1`
is scored on every row of the data.

With `--as-mdt` every tree is replaced by its monotonic decision tree and
the leveraging coefficients are kept as learned.

The label column and positive class are read from the model.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import click
import numpy as np

from tself.boosting import ensemble_error
from tself.data import load_csv
from tself.errors import ArtifactError
from tself.scripts.train import read_model
from tself.utils.clicks import translate_errors
from tself.utils.symbols import CHECK, PLUSMINUS


# === Click command ===
@click.command("eval")
@click.option("--data", "data", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--model", "model", type=click.Path(path_type=Path, dir_okay=False), required=True)
@click.option("--as-mdt", is_flag=True, help="Replace every tree by its MDT.")
@click.option("--fold", type=click.IntRange(min=0), default=None, help="Score a single fold.")
def eval_cmd(data: Path, model: Path, as_mdt: bool, fold: Optional[int]) -> None:
    """Score a model's ensembles on held-out data."""
    with translate_errors():
        doc, ensembles = read_model(model)
        sample = load_csv(data, doc["label"], doc["positive"])
        any_ens = next(iter(ensembles.values()))
        sample = sample.aligned_to(any_ens.feature_names, any_ens.feature_kinds)

        assignments = doc.get("assignments")
        if assignments is not None and len(assignments) != sample.m:
            raise ArtifactError(f"model was cross-validated on {len(assignments)} rows, data has {sample.m}")
        if fold is not None and fold not in ensembles:
            raise ArtifactError(f"model has no fold {fold}; folds are {sorted(ensembles)}")

        errors = {}
        for j, ens in sorted(ensembles.items()):
            if fold is not None and j != fold:
                continue
            rows = np.arange(sample.m) if assignments is None else np.flatnonzero(np.asarray(assignments) == j)
            errors[j] = ensemble_error(ens, sample.subset(rows), as_mdt=as_mdt)

    kind = "MDT" if as_mdt else "DT"
    for j, err in errors.items():
        click.echo(f"fold {j}: {kind} test error {err:.2f}%")
    values = np.array(list(errors.values()))
    std = values.std(ddof=1) if values.size > 1 else 0.0
    click.secho(f"{CHECK} {kind} test error: {values.mean():.2f} {PLUSMINUS} {std:.2f}", fg="green")
