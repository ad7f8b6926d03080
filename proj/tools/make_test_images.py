#!/usr/bin/env python3
"""Regenerates the grayscale source images under tests/data/.

The images are scikit-image's bundled sample photographs converted to 8-bit
luma (BT.601 weights) and written as binary PGM. The codec tests synthesize
short panning clips from them, so they only need to be regenerated when the
image set changes.
"""
import argparse
import pathlib

import numpy as np
from skimage import data

IMAGES = {
    "camera": data.camera,
    "astronaut": data.astronaut,
    "coffee": data.coffee,
    "chelsea": data.chelsea,
    "rocket": data.rocket,
    "motorcycle": data.stereo_motorcycle,
}

MAX_SIDE = 384


def to_luma(img):
    if img.ndim == 3:
        img = img[..., :3].astype(np.float64)
        img = 0.299 * img[..., 0] + 0.587 * img[..., 1] + 0.114 * img[..., 2]
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def shrink(img):
    h, w = img.shape
    step = max(1, int(np.ceil(max(h, w) / MAX_SIDE)))
    if step == 1:
        return img
    h2, w2 = h // step, w // step
    blocks = img[: h2 * step, : w2 * step].reshape(h2, step, w2, step)
    return np.rint(blocks.mean(axis=(1, 3))).astype(np.uint8)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).parent.parent / "tests" / "data"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in IMAGES.items():
        img = loader()
        if isinstance(img, tuple):
            img = img[0]
        luma = shrink(to_luma(img))
        h, w = luma.shape
        with open(out / f"{name}.pgm", "wb") as f:
            f.write(f"P5\n{w} {h}\n255\n".encode())
            f.write(luma.tobytes())
        print(f"{name}: {w}x{h}")


if __name__ == "__main__":
    main()
