"""Writes the 512x512 grayscale PGM test images used by the image tests."""
import pathlib
import sys

import numpy as np
from skimage import color, data


def write_pgm(path, img):
    img = np.asarray(img, dtype=np.uint8)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (img.shape[1], img.shape[0]))
        f.write(img.tobytes())


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_pgm(out / "camera.pgm", data.camera())
    gray = color.rgb2gray(data.astronaut())
    write_pgm(out / "astronaut.pgm", np.round(gray * 255.0))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
