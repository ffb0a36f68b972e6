#!/usr/bin/env python3
"""Writes the bundled tiny scenarios under data/.

Every fixture stays inside the enumeration budget (<= 2 crews, <= 1 ECV,
<= 5 cells, <= 5 switches, <= 2 faulted lines) except the mutation fixture,
which carries two ECVs and two crew depots for the validator mutation suite.
"""
import json
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def node(i, x, y, load=0.0, weight=None):
    n = {"id": i, "x": x, "y": y, "load_kw": load}
    if weight is not None:
        n["weight"] = weight
    return n


def line(i, a, b, **kw):
    d = {"id": i, "from": a, "to": b}
    d.update(kw)
    return d


def auto(side="from", **kw):
    ftu = {"side": side}
    for k in ("residual_minutes", "damaged", "x", "y"):
        if k in kw:
            ftu[k] = kw.pop(k)
    sw = {"kind": "automatic", "ftu": ftu}
    sw.update(kw)
    return sw


def manual(**kw):
    sw = {"kind": "manual"}
    sw.update(kw)
    return sw


def scenario(name, nodes, lines, sources, crew_depots, crews, ecv_depots=(), ecvs=(), sites=(), **extra):
    s = {
        "name": name,
        "horizon_minutes": extra.pop("horizon", 720),
        "start_time": extra.pop("start", 0),
        "nodes": nodes,
        "lines": lines,
        "sources": sources,
        "crew_depots": crew_depots,
        "ecv_depots": list(ecv_depots),
        "crews": crews,
        "ecvs": list(ecvs),
        "ecv_sites": list(sites),
        "travel": extra.pop("travel", {"mode": "euclidean_scaled", "scale_minutes_per_unit": 1.0}),
    }
    s.update(extra)
    return s


def depot(i, x, y, cap=2):
    return {"id": i, "x": x, "y": y, "capacity": cap}


def site(i, x, y, **kw):
    d = {"id": i, "x": x, "y": y}
    d.update(kw)
    return d


def chain_nodes(n, dx=20.0, loads=None):
    loads = loads or {}
    return [node("n%d" % (k + 1), dx * k, 0.0, loads.get(k + 1, 0.0)) for k in range(n)]


def fixtures():
    out = {}

    # Six nodes in a row, three switches, four cells; one faulted line.
    out["tiny1"] = scenario(
        "tiny1",
        chain_nodes(6, loads={2: 100, 4: 200, 5: 150, 6: 50}),
        [
            line("L12", "n1", "n2"),
            line("S23", "n2", "n3", switch=auto("from", residual_minutes=240)),
            line("L34", "n3", "n4", faulted=True, repair_minutes=60),
            line("S45", "n4", "n5", switch=manual()),
            line("S56", "n5", "n6", switch=auto("to", residual_minutes=240)),
        ],
        [{"node": "n1", "available_at": 30}],
        [depot("D1", 40, 30)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 0, 40, 1)],
        [{"id": "V1", "depot": "E1", "radius": 45}],
        [site("W1", 30, 15), site("W2", 90, 15)],
    )

    # Ring of four cells: one switch stays open.
    out["t02_ring"] = scenario(
        "t02_ring",
        [node("a", 0, 0), node("b", 30, 0, 120), node("c", 30, 30, 80), node("d", 0, 30, 60)],
        [
            line("Sab", "a", "b", switch=auto("to", residual_minutes=200)),
            line("Sbc", "b", "c", switch=manual()),
            line("Lcc", "c", "c2"),
            line("Scd", "c2", "d", switch=auto("from")),
            line("Sda", "d", "a", switch=manual()),
            line("Fb", "b", "b2", faulted=True, repair_minutes=45),
        ],
        [{"node": "a", "available_at": 0}],
        [depot("D1", 15, 15)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", -10, 15, 1)],
        [{"id": "V1", "depot": "E1", "radius": 40}],
        [site("W1", 15, -5), site("W2", 15, 40)],
    )
    out["t02_ring"]["nodes"] += [node("c2", 20, 30, 40), node("b2", 40, 0, 30)]

    # Two sources feeding three dead cells.
    out["t03_two_sources"] = scenario(
        "t03_two_sources",
        [node("s1", 0, 0), node("x", 25, 0, 90), node("y", 50, 0, 60), node("z", 75, 0, 110), node("s2", 100, 0)],
        [
            line("A", "s1", "x", switch=auto("to", residual_minutes=300)),
            line("B", "x", "y", switch=manual()),
            line("Fy", "y", "y2", faulted=True, repair_minutes=30),
            line("C", "y2", "z", switch=manual()),
            line("D", "z", "s2", switch=auto("from", residual_minutes=100)),
        ],
        [{"node": "s1", "available_at": 10}, {"node": "s2", "available_at": 60}],
        [depot("D1", 50, 25)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 50, -30, 1)],
        [{"id": "V1", "depot": "E1", "radius": 35}],
        [site("W1", 25, -15), site("W2", 75, -15)],
    )
    out["t03_two_sources"]["nodes"].append(node("y2", 55, 5, 20))

    # Two crews at one depot, two faults in different cells.
    out["t04_two_crews"] = scenario(
        "t04_two_crews",
        chain_nodes(5, 25.0, loads={2: 80, 3: 50, 4: 120, 5: 70}),
        [
            line("S1", "n1", "n2", switch=manual()),
            line("F2", "n2", "n2b", faulted=True, repair_minutes=50),
            line("S2", "n2b", "n3", switch=auto("to", residual_minutes=150)),
            line("S3", "n3", "n4", switch=manual()),
            line("F4", "n4", "n5", faulted=True, repair_minutes=40),
        ],
        [{"node": "n1", "available_at": 0}],
        [depot("D1", 50, 20)],
        [{"id": "C1", "depot": "D1"}, {"id": "C2", "depot": "D1"}],
        [depot("E1", 0, -20, 1)],
        [{"id": "V1", "depot": "E1", "radius": 30}],
        [site("W1", 40, -10)],
    )
    out["t04_two_crews"]["nodes"].append(node("n2b", 30, 5, 10))

    # Two crew depots far apart, one crew each.
    out["t05_two_depots"] = scenario(
        "t05_two_depots",
        chain_nodes(5, 30.0, loads={2: 100, 3: 100, 4: 100, 5: 100}),
        [
            line("S1", "n1", "n2", switch=auto("to")),
            line("F1", "n2", "n2b", faulted=True, repair_minutes=60),
            line("S2", "n2b", "n3", switch=manual()),
            line("S3", "n3", "n4", switch=manual()),
            line("F2", "n4", "n5", faulted=True, repair_minutes=30),
        ],
        [{"node": "n1", "available_at": 20}],
        [depot("D1", 10, 20), depot("D2", 120, 20)],
        [{"id": "C1", "depot": "D1"}, {"id": "C2", "depot": "D2"}],
        [depot("E1", 60, 40, 1)],
        [{"id": "V1", "depot": "E1", "radius": 40}],
        [site("W1", 30, 20), site("W2", 90, 20)],
    )
    out["t05_two_depots"]["nodes"].append(node("n2b", 35, 5, 0))

    # Damaged FTU: the automatic switch needs a crew and cannot be remote.
    out["t06_damaged_ftu"] = scenario(
        "t06_damaged_ftu",
        chain_nodes(4, 30.0, loads={2: 150, 3: 60, 4: 90}),
        [
            line("S1", "n1", "n2", switch=auto("to", damaged=True)),
            line("S2", "n2", "n3", switch=auto("from", residual_minutes=120)),
            line("F3", "n3", "n4", faulted=True, repair_minutes=40),
            line("S3", "n4", "n5", switch=manual()),
        ],
        [{"node": "n1", "available_at": 0}],
        [depot("D1", 45, 25)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 45, -25, 1)],
        [{"id": "V1", "depot": "E1", "radius": 40}],
        [site("W1", 45, -5)],
    )
    out["t06_damaged_ftu"]["nodes"].append(node("n5", 120, 0, 40))

    # Intact remote switch closed without ECV or crew.
    out["t07_intact"] = scenario(
        "t07_intact",
        chain_nodes(4, 30.0, loads={2: 70, 3: 90, 4: 110}),
        [
            line("S1", "n1", "n2", switch=auto("to", intact_remote=True)),
            line("F2", "n2", "n2b", faulted=True, repair_minutes=35),
            line("S2", "n2b", "n3", switch=auto("from", residual_minutes=180)),
            line("S3", "n3", "n4", switch=manual()),
        ],
        [{"node": "n1", "available_at": 15}],
        [depot("D1", 45, 30)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 60, -30, 1)],
        [{"id": "V1", "depot": "E1", "radius": 30}],
        [site("W1", 50, -10), site("W2", 80, -10)],
    )
    out["t07_intact"]["nodes"].append(node("n2b", 35, 5, 20))

    # Faulted line carrying a switch.
    out["t08_faulted_switch"] = scenario(
        "t08_faulted_switch",
        chain_nodes(4, 30.0, loads={2: 100, 3: 100, 4: 100}),
        [
            line("S1", "n1", "n2", switch=auto("to", residual_minutes=200)),
            line("S2", "n2", "n3", switch=manual(), faulted=True, repair_minutes=50),
            line("S3", "n3", "n4", switch=auto("from", residual_minutes=200)),
            line("S4", "n1", "n4", switch=manual()),
        ],
        [{"node": "n1", "available_at": 0}],
        [depot("D1", 40, 25)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 40, -30, 1)],
        [{"id": "V1", "depot": "E1", "radius": 45}],
        [site("W1", 20, -10), site("W2", 70, -10)],
    )

    # Short residual times: remote closings race the FTU batteries.
    out["t09_short_rt"] = scenario(
        "t09_short_rt",
        chain_nodes(5, 25.0, loads={2: 60, 3: 60, 4: 60, 5: 200}),
        [
            line("S1", "n1", "n2", switch=auto("to", residual_minutes=20)),
            line("S2", "n2", "n3", switch=auto("to", residual_minutes=35)),
            line("F3", "n3", "n3b", faulted=True, repair_minutes=25),
            line("S3", "n3b", "n4", switch=auto("from", residual_minutes=90)),
            line("S4", "n4", "n5", switch=manual()),
        ],
        [{"node": "n1", "available_at": 5}],
        [depot("D1", 60, 20)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 20, -15, 1)],
        [{"id": "V1", "depot": "E1", "radius": 30}],
        [site("W1", 25, -10), site("W2", 75, -10)],
    )
    out["t09_short_rt"]["nodes"].append(node("n3b", 55, 5, 15))

    # No ECV at all: the WCA model degenerates to WOCA.
    out["t10_no_ecv"] = scenario(
        "t10_no_ecv",
        chain_nodes(4, 30.0, loads={2: 100, 3: 50, 4: 75}),
        [
            line("S1", "n1", "n2", switch=auto("to")),
            line("F2", "n2", "n3", faulted=True, repair_minutes=60),
            line("S2", "n3", "n4", switch=manual()),
            line("S3", "n4", "n5", switch=auto("from")),
        ],
        [{"node": "n1", "available_at": 0}],
        [depot("D1", 50, 20)],
        [{"id": "C1", "depot": "D1"}],
    )
    out["t10_no_ecv"]["nodes"].append(node("n5", 120, 0, 25))

    # Explicit, asymmetric travel tables.
    t11 = scenario(
        "t11_explicit",
        chain_nodes(4, 30.0, loads={2: 90, 3: 90, 4: 90}),
        [
            line("S1", "n1", "n2", switch=auto("to", residual_minutes=150)),
            line("F1", "n2", "n3", faulted=True, repair_minutes=45),
            line("S2", "n3", "n4", switch=manual()),
        ],
        [{"node": "n1", "available_at": 0}],
        [depot("D1", 40, 20)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 0, -20, 1)],
        [{"id": "V1", "depot": "E1", "radius": 30}],
        [site("W1", 20, -10), site("W2", 60, -10)],
        travel={
            "mode": "explicit",
            "crew": {
                "locations": ["D1", "S1", "F1", "S2"],
                "minutes": [[0, 20, 25, 30], [24, 0, 12, 40], [28, 14, 0, 16], [35, 38, 18, 0]],
            },
            "ecv": {
                "locations": ["E1", "W1", "W2"],
                "minutes": [[0, 18, 40], [20, 0, 25], [45, 27, 0]],
            },
        },
    )
    out["t11_explicit"] = t11

    # A base station survives at one ECV site.
    out["t12_base_station"] = scenario(
        "t12_base_station",
        chain_nodes(4, 30.0, loads={2: 120, 3: 40, 4: 80}),
        [
            line("S1", "n1", "n2", switch=auto("to", residual_minutes=240)),
            line("F2", "n2", "n3", faulted=True, repair_minutes=30),
            line("S2", "n3", "n4", switch=auto("from", residual_minutes=240)),
        ],
        [{"node": "n1", "available_at": 0}],
        [depot("D1", 60, 30)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 45, -40, 1)],
        [{"id": "V1", "depot": "E1", "radius": 35}],
        [site("W1", 25, -10, intact_base_station=True), site("W2", 80, -10)],
    )

    # Late source and a spare tie switch toward a second source.
    out["t13_late_source"] = scenario(
        "t13_late_source",
        [node("s1", 0, 0), node("p", 30, 0, 100), node("q", 60, 0, 100), node("r", 90, 0, 100), node("s2", 120, 0)],
        [
            line("A", "s1", "p", switch=manual()),
            line("B", "p", "q", switch=auto("from", residual_minutes=240)),
            line("Fq", "q", "q2", faulted=True, repair_minutes=20),
            line("C", "q2", "r", switch=manual()),
            line("D", "r", "s2", switch=auto("from", residual_minutes=240)),
        ],
        [{"node": "s1", "available_at": 90}, {"node": "s2", "available_at": 30}],
        [depot("D1", 60, 30)],
        [{"id": "C1", "depot": "D1"}],
        [depot("E1", 100, -30, 1)],
        [{"id": "V1", "depot": "E1", "radius": 40}],
        [site("W1", 40, -10), site("W2", 100, -10)],
    )
    out["t13_late_source"]["nodes"].append(node("q2", 65, 5, 30))

    return out


def mutation_fixture():
    # Two crew depots, two crews, two ECVs: every constraint family is
    # reachable from one feasible plan.
    return scenario(
        "mut2",
        chain_nodes(5, 30.0, loads={2: 100, 3: 80, 4: 60, 5: 40}),
        [
            line("S1", "n1", "n2", switch=auto("to", residual_minutes=240)),
            line("F1", "n2", "n2b", faulted=True, repair_minutes=40),
            line("S2", "n2b", "n3", switch=manual(), faulted=True, repair_minutes=20),
            line("S3", "n3", "n4", switch=auto("from", residual_minutes=240)),
            line("S4", "n4", "n5", switch=manual()),
            line("S5", "n5", "n6", switch=auto("to", residual_minutes=300)),
        ],
        [{"node": "n1", "available_at": 10}],
        [depot("D1", 10, 25), depot("D2", 120, 25)],
        [{"id": "C1", "depot": "D1"}, {"id": "C2", "depot": "D2"}],
        [depot("E1", 0, -30, 1), depot("E2", 150, -30, 1)],
        [{"id": "V1", "depot": "E1", "radius": 40}, {"id": "V2", "depot": "E2", "radius": 40}],
        [site("W1", 20, -10), site("W2", 90, -10), site("W3", 140, -10)],
    )


def main():
    fx = fixtures()
    fx["tiny1"]  # noqa: B018
    os.makedirs(os.path.join(ROOT, "data", "tiny"), exist_ok=True)
    os.makedirs(os.path.join(ROOT, "data", "mutation"), exist_ok=True)
    mut = mutation_fixture()
    mut["nodes"] += [node("n2b", 35, 5, 10), node("n6", 150, 0, 30)]
    outputs = {os.path.join("data", "tiny1.json"): fx.pop("tiny1")}
    for name, s in fx.items():
        outputs[os.path.join("data", "tiny", name + ".json")] = s
    outputs[os.path.join("data", "mutation", "mut2.json")] = mut
    for rel, s in outputs.items():
        with open(os.path.join(ROOT, rel), "w") as f:
            json.dump(s, f, indent=2)
            f.write("\n")
        print("wrote", rel, file=sys.stderr)


if __name__ == "__main__":
    main()
