"""Thinning walkthrough: from a thick synthetic glyph to a 1-px skeleton.

Run:  python3 demos/demo_thinning.py

Renders a glyph, thins it, and prints both rasters side by side so you
can see the skeleton tracking the stroke midline.  Also demonstrates the
two invariants the engine relies on: the skeleton is a subset of the
input ink, and thinning is idempotent.
"""

import numpy as np

from glyphcode import segment, thin
from glyphcode.render import render_glyph


def ascii_art(bits):
    return "\n".join("".join("#" if v else "." for v in row) for row in bits)


def main():
    glyph = render_glyph("vee", 28)
    skeleton = thin(glyph)

    print("input ink:")
    print(ascii_art(glyph.bits))
    print()
    print("skeleton:")
    print(ascii_art(skeleton.bits))
    print()

    assert (skeleton.bits <= glyph.bits).all(), "skeleton must be subset of ink"
    assert (thin(skeleton).bits == skeleton.bits).all(), "thinning is idempotent"
    print(f"ink pixels:      {int(glyph.bits.sum())}")
    print(f"skeleton pixels: {int(skeleton.bits.sum())}")

    strokes = segment(skeleton)
    print(f"connected strokes after segmentation: {len(strokes)}")
    for i, s in enumerate(strokes):
        cx, cy = s.centroid
        print(f"  stroke {i}: {len(s)} px, centroid ({cx:.1f}, {cy:.1f})")


if __name__ == "__main__":
    main()
