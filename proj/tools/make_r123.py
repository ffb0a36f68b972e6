#!/usr/bin/env python3
"""Writes data/r123.json, an APPROXIMATE 123-node feeder scenario.

The line list follows the public IEEE 123-node test feeder closely; node
coordinates come from a simple tree layout, not from any published drawing,
so travel times, coverage and every objective value are only indicative.
Fixed facts: 3385 kW of load, substation available at minute 30, four
faulted lines (13-34, 47-48, 76-77, 101-102), sixteen automatic switches,
two crew depots 65 minutes apart (the largest crew travel time), two crews
and one ECV per depot, six ECV working sites.
"""
import json
import math
import os

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

EDGES = """
150-1 1-2 1-3 1-7 3-4 3-5 5-6 7-8 8-12 8-9 8-13 9-14 13-34 13-18 13-152 152-52 14-11 14-10
15-16 15-17 18-19 18-21 18-135 135-35 19-20 21-22 21-23 23-24 23-25 25-26 25-28 26-27 26-31
27-33 28-29 29-30 30-250 31-32 34-15 35-36 35-40 36-37 36-38 38-39 40-41 40-42 42-43 42-44
44-45 44-47 45-46 47-48 47-49 49-50 50-51 51-151 52-53 53-54 54-55 54-57 55-56 57-58 57-60
58-59 60-61 60-62 60-160 160-67 61-610 62-63 63-64 64-65 65-66 67-68 67-72 67-97 68-69 69-70
70-71 72-73 72-76 73-74 74-75 76-77 76-86 77-78 78-79 78-80 80-81 81-82 81-84 82-83 84-85
86-87 87-88 87-89 89-90 89-91 91-92 91-93 93-94 93-95 95-96 97-98 97-197 197-101 98-99 99-100
101-102 101-105 102-103 103-104 105-106 105-108 106-107 108-109 108-300 109-110 110-111
110-112 112-113 113-114
""".split()
TIES = ["151-300", "54-94"]  # normally open ties, closing them forms loops

AUTOMATIC = {
    "150-1": "to", "1-3": "from", "7-8": "from", "13-152": "to", "18-135": "from", "23-25": "to",
    "40-42": "from", "44-47": "to", "54-57": "from", "60-160": "to", "67-72": "from", "76-86": "to",
    "97-197": "from", "105-108": "to", "151-300": "from", "60-62": "to",
}
MANUAL = {"21-23", "81-84", "110-112", "54-94"}
FAULTS = {"13-34": 120, "47-48": 120, "76-77": 120, "101-102": 120}
DAMAGED_FTU = {"67-72"}
INTACT = {"1-3"}

LOADED = [1, 2, 4, 5, 6, 7, 9, 10, 11, 12, 16, 17, 19, 20, 22, 24, 28, 29, 30, 31, 32, 33, 34, 35, 37,
          38, 39, 41, 42, 43, 45, 46, 47, 48, 49, 50, 51, 52, 53, 55, 56, 58, 59, 60, 62, 63, 64, 65,
          66, 68, 69, 70, 71, 73, 74, 75, 76, 77, 79, 80, 82, 83, 84, 85, 86, 87, 88, 90, 92, 94, 95,
          96, 98, 99, 100, 102, 103, 104, 106, 107, 109, 111, 112, 113, 114]
TOTAL_KW = 3385.0
SPACING = 4.0


def layout(edges, root):
    children = {}
    for e in edges:
        a, b = e.split("-")
        children.setdefault(a, []).append(b)
    pos, next_leaf = {}, [0]

    def place(n, depth):
        kids = children.get(n, [])
        if not kids:
            y = next_leaf[0]
            next_leaf[0] += 1
        else:
            ys = [place(k, depth + 1) for k in kids]
            y = sum(ys) / len(ys)
        pos[n] = (depth * SPACING, y * SPACING * 0.6)
        return y

    place(root, 0)
    return pos


def main():
    pos = layout(EDGES, "150")
    nodes = sorted(pos, key=lambda n: int(n))
    assert len(nodes) == 123, len(nodes)

    pattern = [40, 20, 40, 75, 20, 40, 40]
    loads = {n: float(pattern[i % len(pattern)]) for i, n in enumerate(LOADED)}
    loads[LOADED[0]] += TOTAL_KW - sum(loads.values())
    assert abs(sum(loads.values()) - TOTAL_KW) < 1e-9

    node_list = [{"id": n, "x": round(pos[n][0], 3), "y": round(pos[n][1], 3), "load_kw": loads.get(int(n), 0.0)}
                 for n in nodes]
    lines = []
    for e in EDGES + TIES:
        a, b = e.split("-")
        ln = {"id": "L" + e, "from": a, "to": b}
        if e in AUTOMATIC:
            ftu = {"side": AUTOMATIC[e], "residual_minutes": 240}
            if e in DAMAGED_FTU:
                ftu["damaged"] = True
            ln["switch"] = {"kind": "automatic", "ftu": ftu}
            if e in INTACT:
                ln["switch"]["intact_remote"] = True
        elif e in MANUAL:
            ln["switch"] = {"kind": "manual"}
        if e in FAULTS:
            ln["faulted"] = True
            ln["repair_minutes"] = FAULTS[e]
        lines.append(ln)
    assert sum(1 for l in lines if l.get("switch", {}).get("kind") == "automatic") == 16

    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    lo_x, hi_x, lo_y, hi_y = min(xs) - 4, max(xs) + 4, min(ys) - 4, max(ys) + 4
    # Depots at opposite corners of the bounding box: no crew leg is longer.
    d1, d2 = (lo_x, lo_y), (hi_x, hi_y)
    scale = 65.0 / math.hypot(d2[0] - d1[0], d2[1] - d1[1])

    # ECV sites: greedy cover of the FTUs; candidates are FTU positions and
    # midpoints of FTU pairs, ties broken by candidate order.
    ftu_pts = []
    for l in lines:
        sw = l.get("switch")
        if sw and sw["kind"] == "automatic":
            n = l["from"] if sw["ftu"]["side"] == "from" else l["to"]
            ftu_pts.append(pos[n])
    cands = list(ftu_pts)
    for i in range(len(ftu_pts)):
        for j in range(i + 1, len(ftu_pts)):
            a, b = ftu_pts[i], ftu_pts[j]
            cands.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
    radius = 10.0
    left = set(range(len(ftu_pts)))
    sites = []
    for i in range(6):
        best = max(cands, key=lambda c: sum(1 for f in left if math.dist(c, ftu_pts[f]) <= radius - 0.5))
        left -= {f for f in left if math.dist(best, ftu_pts[f]) <= radius - 0.5}
        sites.append({"id": "W%d" % (i + 1), "x": round(best[0], 3), "y": round(best[1] + 0.25, 3)})
    sites[2]["intact_base_station"] = True

    scenario = {
        "name": "r123-approximate",
        "horizon_minutes": 720,
        "start_time": 0,
        "nodes": node_list,
        "lines": lines,
        "sources": [{"node": "150", "available_at": 30}],
        "crew_depots": [{"id": "D1", "x": d1[0], "y": d1[1], "capacity": 2},
                        {"id": "D2", "x": d2[0], "y": d2[1], "capacity": 2}],
        "ecv_depots": [{"id": "E1", "x": round(d1[0] + 10, 3), "y": round(d1[1] + 10, 3), "capacity": 1},
                       {"id": "E2", "x": round(d2[0] - 10, 3), "y": round(d2[1] - 10, 3), "capacity": 1}],
        "crews": [{"id": "C1", "depot": "D1"}, {"id": "C2", "depot": "D1"},
                  {"id": "C3", "depot": "D2"}, {"id": "C4", "depot": "D2"}],
        "ecvs": [{"id": "V1", "depot": "E1", "radius": 10}, {"id": "V2", "depot": "E2", "radius": 10}],
        "ecv_sites": sites,
        "travel": {"mode": "euclidean_scaled", "scale_minutes_per_unit": scale},
        "weights": {"beta_ea": 10, "beta_ra": 1, "beta_ca": 1, "omega_ra": [1, 1], "omega_ca": [1, 1]},
    }
    with open(os.path.join(ROOT, "data", "r123.json"), "w") as f:
        json.dump(scenario, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
