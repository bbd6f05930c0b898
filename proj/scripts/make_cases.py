#!/usr/bin/env python3
"""Generate the shipped desk cases under cases/.

Every case is deterministic. Line limits are derived from a merit-order
dispatch at nominal load so that most limits are loose, a few bind, and all
cases stay feasible when loads are scaled up to 1.5x nominal.

Usage: python3 scripts/make_cases.py [outdir]
"""

import itertools
import json
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import linprog


def ptdf(buses, lines, slack):
    idx = {b: i for i, b in enumerate(buses)}
    n = len(buses)
    bf = np.zeros((len(lines), n))
    for j, ln in enumerate(lines):
        bf[j, idx[ln["from"]]] = ln["susceptance"]
        bf[j, idx[ln["to"]]] = -ln["susceptance"]
    inc = np.zeros((len(lines), n))
    for j, ln in enumerate(lines):
        inc[j, idx[ln["from"]]] = 1.0
        inc[j, idx[ln["to"]]] = -1.0
    bbus = inc.T @ bf
    keep = [i for i in range(n) if i != idx[slack]]
    p = np.zeros((len(lines), n))
    p[:, keep] = bf[:, keep] @ np.linalg.inv(bbus[np.ix_(keep, keep)])
    return p


def gen_matrix(buses, gens):
    idx = {b: i for i, b in enumerate(buses)}
    m = np.zeros((len(buses), len(gens)))
    for g, gen in enumerate(gens):
        m[idx[gen["bus"]], g] = 1.0
    return m


def dispatch_lp(case, load, with_limits=True):
    """Economic dispatch with every unit on and x in [0, x_max]."""
    p = ptdf(case["buses"], case["lines"], min(case["buses"]))
    b = gen_matrix(case["buses"], case["generators"])
    cost = [g["cost"] for g in case["generators"]]
    bounds = [(0.0, g["x_max"]) for g in case["generators"]]
    a_ub, b_ub = None, None
    if with_limits:
        pb = p @ b
        flow0 = p @ load
        fmax = np.array([ln["f_max"] for ln in case["lines"]])
        fmin = np.array([ln["f_min"] for ln in case["lines"]])
        a_ub = np.vstack([pb, -pb])
        b_ub = np.concatenate([fmax + flow0, -fmin - flow0])
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=np.ones((1, len(cost))),
                  b_eq=[load.sum()], bounds=bounds, method="highs")
    return res, p, b


def assign_limits(case, rng, tight=1, scales=(1.0, 1.5)):
    load = np.array(case["nominal_load"])
    res, p, b = dispatch_lp(case, load, with_limits=False)
    flows = p @ (b @ res.x - load)
    scale = max(np.abs(flows).mean(), 1.0)
    limits = np.maximum(np.abs(flows) * rng.uniform(1.6, 3.0, len(flows)), 0.4 * scale)
    for j in np.argsort(-np.abs(flows))[:tight]:
        limits[j] = 0.9 * abs(flows[j])
    for _ in range(50):
        for j, ln in enumerate(case["lines"]):
            ln["f_max"] = round(float(limits[j]), 3)
            ln["f_min"] = -round(float(limits[j]), 3)
        if all(dispatch_lp(case, s * load)[0].status == 0 for s in scales):
            return
        limits *= 1.15
    raise RuntimeError("could not make " + case["name"] + " feasible")


def line(f, t, s):
    return {"from": f, "to": t, "susceptance": s, "f_min": 0.0, "f_max": 0.0}


def five():
    """Two units feeding a three-bus mesh through radial lines 1 and 2."""
    buses = [1, 2, 3, 4, 5]
    lines = [line(1, 3, 10.0), line(2, 4, 10.0), line(3, 4, 10.0),
             line(3, 5, 5.0), line(4, 5, 8.0), line(3, 5, 4.0)]
    gens = [{"bus": 1, "x_min": 0.5, "x_max": 5.0, "cost": 10.0},
            {"bus": 2, "x_min": 0.5, "x_max": 5.0, "cost": 20.0}]
    load = np.array([0.0, 0.0, 1.5, 1.0, 1.5])
    case = {"name": "five", "buses": buses, "lines": lines, "generators": gens,
            "nominal_load": load.tolist()}
    lines[0]["f_min"], lines[0]["f_max"] = -3.0, 3.0
    lines[1]["f_min"], lines[1]["f_max"] = -3.0, 3.0
    # The relaxed dispatch region is the segment x1 + x2 = 4 inside [1, 3]^2.
    p = ptdf(buses, lines, 1)
    b = gen_matrix(buses, gens)
    corners = [np.array(c) for c in itertools.product([1.0, 3.0], repeat=2)]
    segment = [np.array([1.0, 3.0]), np.array([3.0, 1.0])]
    for j in range(2, 6):
        flow = lambda x: float(p[j] @ (b @ x - load))
        box_hi = max(flow(c) for c in corners)
        seg_lo = min(flow(c) for c in segment)
        lines[j]["f_max"] = round(max(box_hi, 0.0) + 0.5, 3)
        # Loose for the segment, but tighter than the box minimum.
        lines[j]["f_min"] = round(min(seg_lo - 0.1, 0.0), 3)
    return case


def nine_ring(rng):
    buses = list(range(1, 10))
    lines = [line(i, i % 9 + 1, round(float(rng.uniform(5, 15)), 3)) for i in buses]
    lines.append(line(1, 5, 6.0))
    gens = [{"bus": 1, "x_min": 10.0, "x_max": 250.0, "cost": 12.0},
            {"bus": 4, "x_min": 10.0, "x_max": 200.0, "cost": 18.0},
            {"bus": 7, "x_min": 10.0, "x_max": 150.0, "cost": 25.0}]
    load = [0, 30, 45, 0, 60, 25, 0, 50, 40]
    case = {"name": "nine_ring", "buses": buses, "lines": lines, "generators": gens,
            "nominal_load": [float(v) for v in load]}
    assign_limits(case, rng)
    return case


def fourteen_mesh(rng):
    branches = [(1, 2, 0.05917), (1, 5, 0.22304), (2, 3, 0.19797), (2, 4, 0.17632),
                (2, 5, 0.17388), (3, 4, 0.17103), (4, 5, 0.04211), (4, 7, 0.20912),
                (4, 9, 0.55618), (5, 6, 0.25202), (6, 11, 0.19890), (6, 12, 0.25581),
                (6, 13, 0.13027), (7, 8, 0.17615), (7, 9, 0.11001), (9, 10, 0.08450),
                (9, 14, 0.27038), (10, 11, 0.19207), (12, 13, 0.19988), (13, 14, 0.34802)]
    lines = [line(f, t, round(1.0 / x, 4)) for f, t, x in branches]
    gens = [{"bus": 1, "x_min": 40.0, "x_max": 200.0, "cost": 15.0},
            {"bus": 2, "x_min": 20.0, "x_max": 140.0, "cost": 20.0},
            {"bus": 3, "x_min": 15.0, "x_max": 100.0, "cost": 35.0},
            {"bus": 6, "x_min": 15.0, "x_max": 100.0, "cost": 30.0},
            {"bus": 8, "x_min": 10.0, "x_max": 100.0, "cost": 40.0}]
    load = [0, 21.7, 94.2, 47.8, 7.6, 11.2, 0, 0, 29.5, 9.0, 3.5, 6.1, 13.5, 14.9]
    case = {"name": "fourteen_mesh", "buses": list(range(1, 15)), "lines": lines,
            "generators": gens, "nominal_load": load}
    assign_limits(case, rng)
    return case


def random_mesh(name, n, extra, gen_buses, rng, tight=2):
    """Random spanning tree plus `extra` chords; loads on most buses."""
    buses = list(range(1, n + 1))
    edges = set()
    order = rng.permutation(buses)
    for i in range(1, n):
        a, b = int(order[i]), int(order[rng.integers(0, i)])
        edges.add((min(a, b), max(a, b)))
    while len(edges) < n - 1 + extra:
        a, b = (int(v) for v in rng.choice(buses, 2, replace=False))
        edges.add((min(a, b), max(a, b)))
    lines = [line(a, b, round(float(rng.uniform(2, 20)), 3)) for a, b in sorted(edges)]
    load = np.where(rng.random(n) < 0.75, np.round(rng.uniform(5, 40, n), 2), 0.0)
    total = load.sum()
    share = rng.uniform(0.5, 1.5, len(gen_buses))
    share = share / share.sum()
    gens = []
    for g, bus in enumerate(gen_buses):
        x_max = round(float(2.0 * total * share[g]), 1)
        gens.append({"bus": int(bus), "x_min": round(0.25 * x_max, 1), "x_max": x_max,
                     "cost": round(float(rng.uniform(10, 50)), 2)})
    case = {"name": name, "buses": buses, "lines": lines, "generators": gens,
            "nominal_load": load.tolist()}
    assign_limits(case, rng, tight=tight)
    return case


def negative_binding():
    """Cheap unit behind a congested line: removing line 1's upper limit
    changes the optimum."""
    lines = [line(1, 3, 10.0), line(2, 3, 10.0)]
    lines[0]["f_min"], lines[0]["f_max"] = -40.0, 40.0
    lines[1]["f_min"], lines[1]["f_max"] = -100.0, 100.0
    gens = [{"bus": 1, "x_min": 5.0, "x_max": 100.0, "cost": 10.0},
            {"bus": 2, "x_min": 5.0, "x_max": 100.0, "cost": 30.0}]
    return {"name": "negative_binding", "buses": [1, 2, 3], "lines": lines,
            "generators": gens, "nominal_load": [0.0, 0.0, 70.0]}


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "cases"
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240501)
    cases = [five(), nine_ring(rng), fourteen_mesh(rng),
             random_mesh("thirty", 30, 11, [1, 2, 13, 22, 23, 27], rng),
             random_mesh("rand50", 50, 20, sorted(rng.choice(range(1, 51), 12, replace=False)), rng),
             negative_binding()]
    for case in cases:
        path = out / (case["name"] + ".json")
        path.write_text(json.dumps(case, indent=2) + "\n")
        print(path, len(case["buses"]), "buses", len(case["lines"]), "lines",
              len(case["generators"]), "units")


if __name__ == "__main__":
    main()
