#!/usr/bin/env python3
"""Write the 512x512 grayscale PGM fixtures used by the acceptance tests."""

import pathlib
import sys

import numpy as np
from skimage import color, data


def to_gray8(img):
    if img.ndim == 3:
        img = color.rgb2gray(img) * 255.0
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def write_pgm(path, img):
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
    out.mkdir(parents=True, exist_ok=True)
    for name in ("camera", "astronaut", "moon"):
        img = to_gray8(getattr(data, name)())
        assert img.shape == (512, 512), (name, img.shape)
        write_pgm(out / f"{name}.pgm", img)


if __name__ == "__main__":
    main()
