# Copyright 2026 The qcert Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Solves an SDPA sparse file with cvxpy.

The file is read as the SDPA dual, max <F0, Y> s.t. <F_k, Y> = c_k, Y PSD.
Files written by qcert store F0 = -C, so the printed optimum is the negated
qcert objective.

Usage: python3 sdpa_crosscheck.py program.dat-s
"""

import re
import sys

import cvxpy as cp
import numpy as np


def read_sdpa(path):
    lines = [l for l in open(path) if l.strip() and l[0] not in '*"']
    toks = lambda s: [t for t in re.split(r"[\s,{}()]+", s) if t]
    m = int(toks(lines[0])[0])
    nblocks = int(toks(lines[1])[0])
    sizes = [int(t) for t in toks(lines[2])[:nblocks]]
    c = [float(t) for t in toks(lines[3])[:m]] if m else []
    F = [[np.zeros((n, n)) for n in sizes] for _ in range(m + 1)]
    for line in lines[4 if m else 3:]:
        k, b, i, j, v = toks(line)
        k, b, i, j, v = int(k), int(b) - 1, int(i) - 1, int(j) - 1, float(v)
        F[k][b][i, j] = v
        F[k][b][j, i] = v
    return sizes, c, F


def main():
    sizes, c, F = read_sdpa(sys.argv[1])
    Y = [cp.Variable((n, n), symmetric=True) for n in sizes]
    cons = [y >> 0 for y in Y]
    for k in range(1, len(F)):
        cons.append(sum(cp.trace(F[k][b] @ Y[b]) for b in range(len(sizes))) == c[k - 1])
    obj = sum(cp.trace(F[0][b] @ Y[b]) for b in range(len(sizes)))
    prob = cp.Problem(cp.Maximize(obj), cons)
    prob.solve(solver="CLARABEL")
    print("status", prob.status)
    print("sdpa optimum %.10f" % prob.value)
    print("qcert objective %.10f" % -prob.value)


if __name__ == "__main__":
    main()
