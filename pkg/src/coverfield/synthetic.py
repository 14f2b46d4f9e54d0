"""Synthetic bay fixture: an oxygen-like field with a coastline mask.

Stands in for real survey data in tests, demos and the acceptance run.
The field is smooth, spans roughly 5-9 ml/l over a 4 km x 3 km extent,
and the northern shore follows a sine-wave coastline.  Everything is
seeded, so repeated generation is byte-identical.
"""

import sys
from pathlib import Path

import numpy as np

EXTENT_X = 4000.0
EXTENT_Y = 3000.0

_CONFIG_TOML = """\
[grid]
x0 = 0.0
y0 = 0.0
dx = 100.0
dy = 100.0
nx = 41
ny = 31

[sensor]
abs_error = 0.5
r_cap = 800.0

[anomaly]
k = 3.0
lo = 0.0
hi = 12.0
"""


def bay_value(x, y):
    """Smooth dissolved-oxygen-like field over the bay extent (ml/l)."""
    return (
        5.6
        + 3.0 * np.sin(np.pi * x / EXTENT_X) * np.cos(np.pi * y / (2.0 * EXTENT_Y))
        + 0.4 * (y / EXTENT_Y)
    )


def bay_is_water(x, y):
    """True south of the sine-wave coastline."""
    return y < 2400.0 + 300.0 * np.sin(2.0 * np.pi * x / EXTENT_X)


def write_bay_fixture(out_dir, seed: int = 1998, n_samples: int = 250,
                      noise: float = 0.05) -> dict:
    """Write samples.csv, mask.csv and config.toml; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    xs, ys = [], []
    while len(xs) < n_samples:
        x = rng.uniform(0.0, EXTENT_X)
        y = rng.uniform(0.0, EXTENT_Y)
        if bay_is_water(x, y):
            xs.append(x)
            ys.append(y)
    xs = np.array(xs)
    ys = np.array(ys)
    values = bay_value(xs, ys) + rng.normal(0.0, noise, size=n_samples)

    samples_path = out / "samples.csv"
    with open(samples_path, "w", newline="\n") as fh:
        fh.write("x,y,value\n")
        for x, y, v in zip(xs, ys, values):
            fh.write(f"{repr(float(x))},{repr(float(y))},{repr(float(v))}\n")

    nx, ny, dx, dy = 41, 31, 100.0, 100.0
    mask_path = out / "mask.csv"
    with open(mask_path, "w", newline="\n") as fh:
        for i in range(ny):
            row = ["1" if bay_is_water(j * dx, i * dy) else "0" for j in range(nx)]
            fh.write(",".join(row) + "\n")

    config_path = out / "config.toml"
    with open(config_path, "w", newline="\n") as fh:
        fh.write(_CONFIG_TOML)

    return {"samples": samples_path, "mask": mask_path, "config": config_path}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m coverfield.synthetic <out_dir>", file=sys.stderr)
        return 2
    paths = write_bay_fixture(argv[0])
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
