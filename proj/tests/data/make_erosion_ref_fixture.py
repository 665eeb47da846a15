"""Builds the stored Type-2 regression pair and its expected mask.

The expected mask comes from a direct set-based evaluation (threshold on the
Euclidean RGB distance, then erosion with out-of-canvas pixels unset), kept
independent of the C++ implementation. Run once; outputs are committed.
"""
import numpy as np
from PIL import Image

rng = np.random.default_rng(35)
H, W = 40, 48
bg = np.array([228, 221, 205], dtype=float)
original = np.tile(bg, (H, W, 1)) + rng.integers(-4, 5, size=(H, W, 1))
processed = np.tile(bg, (H, W, 1)).copy()

# a few thick strokes of varying contrast
strokes = [((4, 4), (12, 30), (40, 40, 40)),
           ((20, 6), (27, 20), (120, 110, 100)),
           ((18, 26), (36, 44), (200, 195, 180)),
           ((30, 2), (38, 10), (10, 60, 150))]
for (y0, x0), (y1, x1), col in strokes:
    original[y0:y1, x0:x1] = col
original = np.clip(original, 0, 255).astype(np.uint8)
processed = processed.astype(np.uint8)

T_THRES, T_TIMES, T_KERNEL = 35, -2, 3
d2 = ((original.astype(int) - processed.astype(int)) ** 2).sum(axis=2)
mask = {(y, x) for y in range(H) for x in range(W) if d2[y, x] > T_THRES * T_THRES}
r = T_KERNEL // 2
for _ in range(abs(T_TIMES)):
    mask = {(y, x) for (y, x) in mask
            if all((y + dy, x + dx) in mask
                   for dy in range(-r, r + 1) for dx in range(-r, r + 1))}

Image.fromarray(original, "RGB").save("erosion_ref_original.png")
Image.fromarray(processed, "RGB").save("erosion_ref_processed.png")
with open("erosion_ref_expected.txt", "w") as f:
    f.write(f"{W} {H} {T_THRES} {T_TIMES} {T_KERNEL}\n")
    for y in range(H):
        f.write("".join("1" if (y, x) in mask else "0" for x in range(W)) + "\n")
