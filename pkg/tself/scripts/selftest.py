"""
tself selftest - run the invariant suites
=========================================

Usage
-----
```bash
tself selftest [--suite core|geometry|mdt|boost|all] [--seed S]
```

Description
-----------
Runs the named suite and prints one row per check. Exits with code 3 when
any check fails.
"""

from __future__ import annotations

import click
from rich.console import Console
from rich.table import Table

from tself.selftest import SUITES, run_suites
from tself.utils.clicks import SelftestFailure
from tself.utils.symbols import CHECK, FAIL


# === Click command ===
@click.command("selftest")
@click.option("--suite", type=click.Choice([*SUITES, "all"]), default="all", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def selftest_cmd(suite: str, seed: int) -> None:
    """Check tempered calculus, geometry, MDT and boosting invariants."""
    results = run_suites([suite], seed)

    table = Table(title=f"selftest: {suite}")
    for column in ("suite", "check", "", "detail"):
        table.add_column(column)
    for r in results:
        mark = f"[green]{CHECK}[/green]" if r.passed else f"[red]{FAIL}[/red]"
        table.add_row(r.suite, r.name, mark, r.detail)
    Console().print(table)

    failed = [f"{r.suite}.{r.name}" for r in results if not r.passed]
    if failed:
        raise SelftestFailure(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    click.secho(f"{CHECK} {len(results)} checks passed", fg="green")
