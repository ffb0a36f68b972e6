#!/usr/bin/env python3
"""Runs HiGHS on an MPS file and writes the native solution format.

usage: highs_solve.py INPUT OUTPUT TIME_LIMIT MIP_GAP [START|none]
"""
import sys

import highspy


def read_start(path):
    values = {}
    with open(path) as f:
        for line in f:
            parts = line.split()
            if len(parts) == 2 and parts[0] not in ("status", "objective"):
                values[parts[0]] = float(parts[1])
    return values


def main():
    if len(sys.argv) < 5:
        sys.exit(__doc__)
    src, dst, limit, gap = sys.argv[1], sys.argv[2], float(sys.argv[3]), float(sys.argv[4])
    start = sys.argv[5] if len(sys.argv) > 5 and sys.argv[5] != "none" else None

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("random_seed", 0)
    h.setOptionValue("time_limit", limit)
    h.setOptionValue("mip_rel_gap", gap)
    h.setOptionValue("mip_abs_gap", 0.0)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    if h.readModel(src) != highspy.HighsStatus.kOk:
        sys.exit("cannot read " + src)
    names = list(h.getLp().col_names_)
    if start:
        values = read_start(start)
        sol = highspy.HighsSolution()
        sol.col_value = [values.get(n, 0.0) for n in names]
        sol.value_valid = True
        h.setSolution(sol)
    h.run()

    ms = h.getModelStatus()
    info = h.getInfo()
    has_solution = info.primal_solution_status == 2
    if ms == highspy.HighsModelStatus.kOptimal:
        status = "optimal"
    elif ms in (highspy.HighsModelStatus.kInfeasible, highspy.HighsModelStatus.kUnboundedOrInfeasible):
        status = "infeasible"
    elif ms == highspy.HighsModelStatus.kTimeLimit:
        status = "timeout"
    elif has_solution:
        status = "feasible"
    else:
        status = "error"

    with open(dst, "w") as f:
        f.write("status %s\n" % status)
        if has_solution:
            f.write("objective %r\n" % info.objective_function_value)
            for n, v in zip(names, h.getSolution().col_value):
                f.write("%s %r\n" % (n, v))


if __name__ == "__main__":
    main()
