#!/usr/bin/env python3
"""
tself.cli  - Top-level command group
====================================

Entrypoint wired in *pyproject.toml*:

```toml
[project.scripts]
tself = "tself.cli:main"
```

Provides a single Click *Group* named `cli` which aggregates all
sub-commands found in `tself.scripts`, and `main`, which runs it with the
exit codes below.

Exit codes
----------
0  success
1  usage error (unknown flag, bad value, unreadable config file)
2  data or artifact error (CSV problems, wrong format, schema mismatch, I/O)
3  selftest failure

Configuration
-------------
`./.tself.yml` (or `--config PATH`) maps command names to option defaults;
flags given on the command line always win:

```yaml
train: {trees: 20, tree_size: 31, folds: 10}
embed: {fan: 3.14159}
```

Adding a new command
-----
1. Create `tself/scripts/<verb>.py` with a `@click.command`.

2. Import and register it here:

   ```python
   from tself.scripts.verb import verb_cmd
   cli.add_command(verb_cmd)
   ```
"""

import sys
from pathlib import Path
from typing import Optional, Sequence

import click
import yaml

from tself import __version__
from tself.scripts.embed import embed_cmd
from tself.scripts.eval import eval_cmd
from tself.scripts.layout_tself import layout_tself_cmd
from tself.scripts.mdt import mdt_cmd
from tself.scripts.render import render_cmd
from tself.scripts.selftest import selftest_cmd
from tself.scripts.train import train_cmd
from tself.utils import load_yaml, resolve_pathish
from tself.utils.clicks import EXIT_USAGE
from tself.utils.log_setup import init as init_logging

DEFAULT_CONFIG = ".tself.yml"


def _default_map(data: dict) -> dict:
    out = {}
    for command, options in data.items():
        if not isinstance(options, dict):
            raise click.UsageError(f"config section {command!r} must be a mapping of option: value")
        out[command] = {str(k).replace("-", "_"): v for k, v in options.items()}
    return out


@click.group(
    context_settings=dict(help_option_names=["-h", "--help"]),
    invoke_without_command=False,
    help="tself CLI. Run `tself <command> -h` for details.",
)
@click.version_option(__version__, "-v", "--version")
@click.option("--config", "config", type=click.Path(path_type=Path, dir_okay=False), default=None,
              help=f"YAML file of per-command option defaults [default: ./{DEFAULT_CONFIG}].")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default="WARNING", show_default=True)
@click.pass_context
def cli(ctx: click.Context, config: Optional[Path], log_level: str) -> None:
    init_logging(log_level.upper())
    path = resolve_pathish(config or DEFAULT_CONFIG)
    if config is not None and not path.exists():
        raise click.UsageError(f"config file {path} does not exist")
    try:
        data = load_yaml(path)
    except yaml.YAMLError as e:
        raise click.UsageError(f"cannot parse config file {path}: {e}")
    ctx.default_map = _default_map(data)


cli.add_command(train_cmd)
cli.add_command(mdt_cmd)
cli.add_command(embed_cmd)
cli.add_command(layout_tself_cmd)
cli.add_command(render_cmd)
cli.add_command(eval_cmd)
cli.add_command(selftest_cmd)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Console entry point: run the group and map errors onto exit codes."""
    try:
        code = cli.main(args=argv, prog_name="tself", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.ClickException as e:
        e.show()
        sys.exit(e.exit_code)
    except click.Abort:
        click.echo("Aborted!", err=True)
        sys.exit(EXIT_USAGE)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()
