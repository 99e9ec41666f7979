"""Boosted log-loss trees, their monotonic form, and Poincaré disk pictures on t-selves."""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from importlib.metadata import PackageNotFoundError, version

from tself.utils.path import path_to


def get_version() -> str:
    """Installed distribution version, else the one in a source checkout's pyproject."""
    try:
        return version("tself")
    except PackageNotFoundError:
        pass
    try:
        with open(path_to("pyproject.toml"), "rb") as f:
            return tomllib.load(f)["project"]["version"]
    except (OSError, KeyError, tomllib.TOMLDecodeError):
        return "0.0.0-dev"


__version__ = get_version()
