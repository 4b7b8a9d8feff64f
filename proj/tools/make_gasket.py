#!/usr/bin/env python3
"""Writes data/gasket.json: a four-bore cylinder head gasket with 46 small holes.

Component ids: 0-7 outer outline, 8-11 bores (left to right), then coolant,
oil and oil-return holes.
"""
import json
import math
import sys

T_OUTER = 20.0
T_BORE = 160.0
T_COOLANT = 90.0
T_OIL = 110.0
T_OIL_RETURN = 100.0

HALF_W, HALF_H, CORNER = 1.1, 0.55, 0.15
BORE_R = 0.22
Z0 = (0.240999, 0.3)


def circle(c, r, t):
    return {"kind": "circle", "center": list(c), "radius": r, "boundary_value": {"const": t}}


def outline():
    x0, y0 = HALF_W - CORNER, HALF_H - CORNER
    h = math.pi / 2
    segs = [
        {"kind": "segment", "a": [-x0, -HALF_H], "b": [x0, -HALF_H]},
        {"kind": "arc", "center": [x0, -y0], "radius": CORNER, "angles": [-h, 0.0]},
        {"kind": "segment", "a": [HALF_W, -y0], "b": [HALF_W, y0]},
        {"kind": "arc", "center": [x0, y0], "radius": CORNER, "angles": [0.0, h]},
        {"kind": "segment", "a": [x0, HALF_H], "b": [-x0, HALF_H]},
        {"kind": "arc", "center": [-x0, y0], "radius": CORNER, "angles": [h, 2 * h]},
        {"kind": "segment", "a": [-HALF_W, y0], "b": [-HALF_W, -y0]},
        {"kind": "arc", "center": [-x0, -y0], "radius": CORNER, "angles": [2 * h, 3 * h]},
    ]
    for s in segs:
        s["boundary_value"] = {"const": T_OUTER}
    return segs


def holes():
    out = []
    for x in (-0.72, -0.24, 0.24, 0.72):
        out.append(((x, 0.0), BORE_R, T_BORE))
    for y in (-0.45, 0.45):
        for i in range(17):
            x = round(-0.96 + 0.12 * i, 10)
            if y > 0 and abs(abs(x) - 0.24) < 1e-9:
                continue  # keeps the probe point clear
            out.append(((x, y), 0.035, T_COOLANT))
    for x in (-0.48, 0.0, 0.48):
        for y in (-0.25, 0.25):
            out.append(((x, y), 0.03, T_OIL))
    for x in (-1.0, 1.0):
        for y in (-0.24, -0.08, 0.08, 0.24):
            out.append(((x, y), 0.04, T_OIL_RETURN))
    return out


def check(hs):
    for i, (c1, r1, _) in enumerate(hs):
        assert abs(c1[0]) + r1 < HALF_W - 0.01 and abs(c1[1]) + r1 < HALF_H - 0.01, c1
        for c2, r2, _ in hs[i + 1:]:
            assert math.dist(c1, c2) > r1 + r2 + 0.01, (c1, c2)
        assert math.dist(c1, Z0) > r1 + 0.05, c1


def main():
    hs = holes()
    check(hs)
    assert len(hs) == 50
    doc = {
        "name": "gasket",
        "dimension": 2,
        "composition": "difference",
        "regions": [{"side": "keep-inside", "components": outline()}]
        + [{"side": "keep-outside", "components": [circle(c, r, t)]} for c, r, t in hs],
        "source": "zero",
    }
    path = sys.argv[1] if len(sys.argv) > 1 else "data/gasket.json"
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
