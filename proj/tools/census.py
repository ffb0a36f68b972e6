#!/usr/bin/env python3
"""Counts MILP variables and rows per family for a small scenario by walking
the formulation directly over the scenario JSON.

Independent of the C++ builder: cells, sites and coverage are recomputed
here. Handles scenarios without intact or damaged switches and with
euclidean travel, which is what the census fixtures use.

usage: census.py scenario.json out.json
"""
import json
import math
import sys
from collections import Counter


def cells_of(sc):
    parent = {n["id"]: n["id"] for n in sc["nodes"]}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ln in sc["lines"]:
        if "switch" not in ln:
            parent[find(ln["to"])] = find(ln["from"])
    roots = []
    for n in sc["nodes"]:
        r = find(n["id"])
        if r not in roots:
            roots.append(r)
    return {n["id"]: roots.index(find(n["id"])) for n in sc["nodes"]}, len(roots)


def census(sc, wca):
    for ln in sc["lines"]:
        sw = ln.get("switch", {})
        assert not sw.get("intact_remote") and not sw.get("ftu", {}).get("damaged"), "unsupported feature"
    cell, nc = cells_of(sc)
    nodes = {n["id"]: n for n in sc["nodes"]}
    switches = [ln for ln in sc["lines"] if "switch" in ln]
    faults = [ln for ln in sc["lines"] if ln.get("faulted") and "switch" not in ln]
    faulted_sw = [ln for ln in switches if ln.get("faulted")]
    n_ra_sites = len(switches) + len(faults)
    ndr = len(sc["crew_depots"])
    nRL = ndr + n_ra_sites
    sources = {cell[s["node"]] for s in sc["sources"]}

    def remote(ln):
        return wca and ln["switch"]["kind"] == "automatic" and not ln.get("faulted")

    def ftu_node(ln):
        return ln["from"] if ln["switch"]["ftu"]["side"] == "from" else ln["to"]

    def gov(ln):
        p = nodes[ftu_node(ln)]
        out = []
        for site in sc["ecv_sites"]:
            d = math.hypot(site["x"] - p["x"], site["y"] - p["y"])
            if all(d <= v["radius"] for v in sc["ecvs"]):
                out.append(site["id"])
        return out

    V, R = Counter(), Counter()
    if wca:
        nd = len(sc["ecv_depots"])
        ns = len(sc["ecv_sites"])
        n = nd + ns
        V["xC"] += n * n
        V["tCa"] += n
        V["tCd"] += n
        R["c1"] += nd
        R["c2"] += ns
        R["c3"] += n * nd - nd
        R["c4"] += n * (n - 1) // 2
        R["c5"] += nd
        R["c6a"] += ns
        R["c6b"] += ns
        R["c7"] += nd
        R["c7d"] += nd
        R["c8"] += n
        R["c9a"] += n * ns - ns
        R["c9b"] += n * ns - ns
        R["c10"] += ns
        R["c11a"] += ns
        R["c11b"] += ns
    V["xR"] += nRL * nRL
    V["tR"] += nRL
    V["fR"] += nc
    V["tE"] += nc
    V["lvl"] += nc
    R["c12"] += ndr
    R["c13"] += n_ra_sites
    R["c14"] += nRL * ndr - ndr
    R["c15"] += nRL * (nRL - 1) // 2
    R["c16"] += ndr
    R["c17a"] += n_ra_sites
    R["c17b"] += n_ra_sites
    R["c18"] += ndr
    for ab in "ab":
        R["c19" + ab] += ndr * n_ra_sites
        # legs between two distinct sites, named by the family of the first
        R["c20" + ab] += len(faults) * (n_ra_sites - 1)
        R["c21" + ab] += (len(switches) - len(faulted_sw)) * (n_ra_sites - 1)
        R["c22" + ab] += len(faulted_sw) * (n_ra_sites - 1)
        R["c23" + ab] += n_ra_sites
    R["c24"] += len(faults)
    R["c25"] += nc - len({cell[f["from"]] for f in faults})
    R["eIn"] += nc
    R["eRad"] += 1
    R["eMtz"] += 2 * len(switches)
    R["eSrc"] += len(sources)
    for ln in switches:
        V["xE"] += 2
        V["dMO"] += 2
        V["dMOe"] += 2
        V["dMOde"] += 2
        if remote(ln):
            g = gov(ln)
            for name in ("dAO", "dAOe", "dAOde", "tAOop", "ymax", "dE", "dR"):
                V[name] += 2
            V["z"] += len(g)
            R["c27"] += 2
            R["c28"] += 1
            R["c29"] += 1 if g else 0
            R["c31"] += len(g)
            R["c33a"] += 2 * len(g)
            R["c33b"] += 2 * len(g)
            for name in ("c34a", "c34b", "A1", "A2", "A3", "A4", "A5", "c35a", "c35b", "c36a", "c36b",
                         "c38a", "c38b", "c39a", "c39b", "c40"):
                R[name] += 2
            R["c37"] += 1  # only the direction into the FTU's cell
        else:
            R["r27"] += 2
        R["c41"] += 1
        f44, f46 = ("c45", "c47") if ln.get("faulted") else ("c44", "c46")
        for name in ("c42a", "c42b", "c43a", "c43b", f44 + "a", f44 + "b", f46 + "a", f46 + "b", "c48a", "c48b"):
            R[name] += 2
        if ln.get("faulted"):
            R["c49a"] += 1
            R["c49b"] += 1
    R["c50"] += nc
    return {"vars": dict(sorted((k, v) for k, v in V.items() if v)),
            "rows": dict(sorted((k, v) for k, v in R.items() if v))}


def main():
    sc = json.load(open(sys.argv[1]))
    out = {"scenario": sc["name"], "wca": census(sc, True), "woca": census(sc, False)}
    with open(sys.argv[2], "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
