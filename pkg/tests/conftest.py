"""
Shared fixtures: seeded generators, a polynomial corpus, synthetic samples
and small CSV files written to tmp_path.
"""

from pathlib import Path

import numpy as np
import pytest

from tself.selftest import random_polynomial, synthetic_sample


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def polynomials():
    """25 (polynomial, a, b) triples on random subintervals of [-1, 1]."""
    gen = np.random.default_rng(7)
    out = []
    for _ in range(25):
        a, b = sorted(gen.uniform(-1.0, 1.0, size=2))
        out.append((random_polynomial(gen, int(gen.integers(1, 5))), float(a), float(b)))
    return out


@pytest.fixture
def sample():
    return synthetic_sample(np.random.default_rng(3), m=240, d=3)


def write_csv(path: Path, header, rows) -> Path:
    lines = [",".join(header)] + [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def csv_factory(tmp_path):
    def make(header, rows, name="data.csv"):
        return write_csv(tmp_path / name, header, rows)
    return make


@pytest.fixture
def dataset_csv(tmp_path) -> Path:
    """120 rows, two numeric columns and one categorical, class column `y` in {pos, neg}."""
    gen = np.random.default_rng(11)
    rows = []
    for i in range(120):
        x1, x2 = gen.normal(size=2)
        colour = ("red", "green", "blue")[i % 3]
        score = x1 + 0.5 * x2 + (0.8 if colour == "red" else 0.0) + 0.3 * gen.normal()
        rows.append((f"{x1:.4f}", f"{x2:.4f}", colour, "pos" if score > 0 else "neg"))
    return write_csv(tmp_path / "toy.csv", ("x1", "x2", "colour", "y"), rows)
