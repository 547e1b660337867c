#!/usr/bin/env python3
"""Regenerate the bundled example datasets under data/.

Each dataset is y = 1 + 2*x + noise on a fixed seeded design, written as a
comma-delimited table with the response in the first column.
"""

from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent / "data"


def write(name: str, x: np.ndarray, y: np.ndarray) -> None:
    lines = ["y,x"] + [f"{yi:.10g},{xi:.10g}" for yi, xi in zip(y, x)]
    (ROOT / name).write_text("\n".join(lines) + "\n")
    print(f"wrote data/{name} ({len(x)} rows)")


def main() -> None:
    ROOT.mkdir(exist_ok=True)

    rng = np.random.default_rng(20240601)
    x = rng.uniform(0.0, 10.0, size=5000)
    write("uniform_noise.csv", x, 1.0 + 2.0 * x + rng.uniform(-1.0, 1.0, size=5000))

    rng = np.random.default_rng(20240602)
    x = rng.uniform(0.0, 10.0, size=5000)
    write("normal_noise.csv", x, 1.0 + 2.0 * x + rng.standard_normal(5000))

    rng = np.random.default_rng(20240603)
    x = rng.uniform(0.0, 10.0, size=60)
    write("sample.csv", x, 1.0 + 2.0 * x + rng.uniform(-0.5, 0.5, size=60))


if __name__ == "__main__":
    main()
