#!/usr/bin/env python3
"""Writes the synthetic graded corpus under fixtures/corpus/.

Each grade gets routes of hand holds strung up a 3 m x 4.5 m wall; the grade
is fixed by the hold difficulty level. Output is in canonical .crux form.
"""
import json
import pathlib
import random
import sys

WIDTH, HEIGHT = 3.0, 4.5
GRADES = [("5.8", "c08", 0.15), ("5.10a", "c10a", 0.40), ("5.11a", "c11a", 0.65)]
PER_GRADE = 10
NOMINAL = [("jug", 0.10), ("volume", 0.20), ("pocket", 0.45), ("pinch", 0.50),
           ("sloper", 0.60), ("crimp", 0.70)]


def num(v):
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def nearest_type(d):
    return min(NOMINAL, key=lambda t: abs(t[1] - d))[0]


def route_doc(rng, name, grade, level):
    n = rng.randint(6, 8)
    sx, sy = rng.uniform(1.0, 2.0), rng.uniform(0.9, 1.3)
    fx, fy = rng.uniform(0.8, 2.2), rng.uniform(3.6, 4.1)
    holds = []
    for j in range(n):
        f = j / (n - 1)
        if j == 0:
            x, y = sx, sy
        elif j == n - 1:
            x, y = fx, fy
        else:
            x = min(max(sx + f * (fx - sx) + rng.uniform(-0.35, 0.35), 0.0), WIDTH)
            y = sy + f * (fy - sy) + rng.uniform(-0.1, 0.1)
        d = min(max(level + rng.uniform(-0.05, 0.05), 0.0), 1.0)
        hid = f"h{j + 1}"
        holds.append((hid, x, y, "jug" if j == 0 else nearest_type(d), 0.1 if j == 0 else d))
    lines = [f"WALL {num(WIDTH)} {num(HEIGHT)}", f"PANEL {num(0)} {num(HEIGHT)} {num(90)}"]
    for hid, x, y, t, d in sorted(holds):
        lines.append(f"HOLD {hid} {num(x)} {num(y)} {t} {num(d)} hand|foot {num(0)}")
    ids = sorted(h[0] for h in holds)
    lines += [f"ROUTE {name}", f"START {holds[0][0]}", f"FINISH {holds[-1][0]}",
              "USE " + " ".join(ids), f"GRADE {grade}"]
    return "\n".join(lines) + "\n"


def main(out):
    out = pathlib.Path(out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240611)
    meta = {"routes": {}}
    for grade, prefix, level in GRADES:
        for i in range(PER_GRADE):
            name = f"{prefix}_{i + 1:02d}"
            (out / f"{name}.crux").write_text(route_doc(rng, name, grade, level))
            meta["routes"][name] = {"exposure_count": 50, "grade_locked": True}
    (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent / "corpus")
