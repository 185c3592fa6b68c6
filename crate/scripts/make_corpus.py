#!/usr/bin/env python3
"""Regenerate the bundled natural-image corpus as 8-bit binary PGM files.

Sources are the sample images shipped with scikit-image and matplotlib.
Each entry is converted to grayscale, optionally downscaled, then cropped to
a size that is a multiple of the 8x8 block size.
"""
import os
import sys

import matplotlib
import skimage
from PIL import Image

SK = os.path.join(os.path.dirname(skimage.__file__), "data")
MPL = os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data", "sample_data")

# name, source file, downscale width (or None), crop box (left, top, width, height)
ENTRIES = [
    ("astronaut_face", f"{SK}/astronaut.png", None, (128, 0, 256, 256)),
    ("astronaut_suit", f"{SK}/astronaut.png", None, (128, 256, 384, 256)),
    ("brick", f"{SK}/brick.png", None, (64, 128, 384, 256)),
    ("camera_man", f"{SK}/camera.png", None, (64, 32, 384, 256)),
    ("camera_field", f"{SK}/camera.png", None, (0, 256, 256, 256)),
    ("cell", f"{SK}/cell.png", None, (96, 96, 384, 256)),
    ("chelsea", f"{SK}/chelsea.png", None, (32, 24, 384, 256)),
    ("clock_motion", f"{SK}/clock_motion.png", None, (8, 16, 384, 256)),
    ("coffee", f"{SK}/coffee.png", None, (104, 72, 384, 256)),
    ("coins", f"{SK}/coins.png", None, (0, 24, 384, 256)),
    ("grass", f"{SK}/grass.png", None, (0, 0, 256, 256)),
    ("gravel", f"{SK}/gravel.png", None, (128, 128, 256, 256)),
    ("hubble", f"{SK}/hubble_deep_field.jpg", 512, (64, 96, 384, 256)),
    ("ihc", f"{SK}/ihc.png", None, (64, 128, 384, 256)),
    ("moon", f"{SK}/moon.png", None, (64, 128, 384, 256)),
    ("retina", f"{SK}/retina.jpg", 512, (64, 128, 384, 256)),
    ("rocket", f"{SK}/rocket.jpg", None, (128, 96, 384, 256)),
    ("rocket_sky", f"{SK}/rocket.jpg", None, (0, 0, 256, 256)),
    ("grace_hopper", f"{MPL}/grace_hopper.jpg", None, (64, 96, 384, 256)),
    ("grace_hopper_face", f"{MPL}/grace_hopper.jpg", None, (128, 48, 256, 256)),
    ("coffee_cup", f"{SK}/coffee.png", None, (216, 144, 256, 256)),
    ("chelsea_face", f"{SK}/chelsea.png", None, (96, 16, 256, 256)),
    ("astronaut_flag", f"{SK}/astronaut.png", None, (0, 0, 256, 256)),
    ("hubble_full", f"{SK}/hubble_deep_field.jpg", 384, (0, 48, 384, 256)),
]

# Larger image used for runtime checks.
FIXTURES = [
    ("camera_512", f"{SK}/camera.png", None, (0, 0, 512, 512)),
]


def load(src, scale_width, box):
    im = Image.open(src).convert("L")
    if scale_width is not None and im.width > scale_width:
        h = round(im.height * scale_width / im.width)
        im = im.resize((scale_width, h), Image.LANCZOS)
    left, top, w, h = box
    assert left + w <= im.width and top + h <= im.height, (src, im.size, box)
    assert w % 8 == 0 and h % 8 == 0
    return im.crop((left, top, left + w, top + h))


def write_pgm(path, im):
    with open(path, "wb") as f:
        f.write(f"P5\n{im.width} {im.height}\n255\n".encode())
        f.write(im.tobytes())


def main(root):
    for sub, entries in (("corpus", ENTRIES), ("fixtures", FIXTURES)):
        os.makedirs(os.path.join(root, sub), exist_ok=True)
        for name, src, sw, box in entries:
            write_pgm(os.path.join(root, sub, f"{name}.pgm"), load(src, sw, box))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), ".."))
