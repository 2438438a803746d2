#!/usr/bin/env python3
# Copyright 2026 The shuffleopt Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Solves an LP file with HiGHS and writes the shuffleopt adapter format.

usage: highs_adapter.py MODEL.lp OUT.sol TIME_LIMIT_S REL_GAP
       highs_adapter.py --describe MODEL.lp

--describe prints the column, row and integer-column counts HiGHS read.
"""

import sys

import highspy


def describe(lp_path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(lp_path) == highspy.HighsStatus.kError:
        sys.stderr.write("HiGHS could not read %s\n" % lp_path)
        return 1
    lp = h.getLp()
    integers = sum(1 for t in lp.integrality_ if t == highspy.HighsVarType.kInteger)
    print("columns %d" % lp.num_col_)
    print("rows %d" % lp.num_row_)
    print("integers %d" % integers)
    return 0


def main(argv):
    if len(argv) == 3 and argv[1] == "--describe":
        return describe(argv[2])
    if len(argv) != 5:
        sys.stderr.write(__doc__)
        return 2
    lp_path, out_path, time_limit, gap = argv[1], argv[2], float(argv[3]), float(argv[4])

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", time_limit)
    h.setOptionValue("mip_rel_gap", gap)
    if h.readModel(lp_path) == highspy.HighsStatus.kError:
        sys.stderr.write("HiGHS could not read %s\n" % lp_path)
        return 1
    h.run()

    ms = h.getModelStatus()
    S = highspy.HighsModelStatus
    info = h.getInfo()
    has_point = info.primal_solution_status == 2
    if ms == S.kOptimal:
        status = "optimal"
    elif ms == S.kInfeasible:
        status, has_point = "infeasible", False
    elif ms in (S.kUnbounded, S.kUnboundedOrInfeasible):
        status, has_point = "unbounded", False
    elif ms in (S.kTimeLimit, S.kIterationLimit, S.kSolutionLimit, S.kInterrupt):
        status = "limit"
    else:
        sys.stderr.write("unexpected HiGHS status %s\n" % h.modelStatusToString(ms))
        return 1

    lines = ["status " + status]
    if has_point:
        names = h.getLp().col_names_
        values = h.getSolution().col_value
        lines.append("objective %.17g" % info.objective_function_value)
        lines.extend("%s %.17g" % (n, v) for n, v in zip(names, values))
    with open(out_path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
