from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[2]

def path_to(*subdirs) -> Path:
    """
    Join subpaths to the repository root.
    Example: path_to('pyproject.toml')
    """
    return REPO_ROOT.joinpath(*subdirs).resolve()

def resolve_pathish(pathish, base: Path | None = None) -> Path:
    """
    Accept a Path or string; return absolute Path.
    - Absolute stays absolute.
    - Relative is resolved against `base` (default: the working directory),
      since artifacts and datasets live wherever the user runs `tself`.
    - Windows-y separators ('runs\\model.json') are accepted.
    """
    root = Path.cwd() if base is None else Path(base)
    if isinstance(pathish, Path):
        return pathish if pathish.is_absolute() else (root / pathish).resolve()

    s = str(pathish).strip()
    p = Path(s)
    if p.is_absolute():
        return p.resolve()

    parts = [part for part in s.replace("\\", "/").split("/") if part]
    return root.joinpath(*parts).resolve()
