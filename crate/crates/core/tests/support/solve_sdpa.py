"""Solve an SDPA sparse (.dat-s) problem with cvxpy and print the optimum.

The file is read in the standard SDPA convention,

    max  F0 . Y   s.t.  Fi . Y = c_i,  Y >= 0 (block diagonal),

where a negative block size denotes a diagonal (LP) block. Prints
`status <s>` and `objective <value>` on stdout.
"""

import re
import sys

import cvxpy as cp
import numpy as np


def read_sdpa(path):
    lines = []
    with open(path) as fh:
        for raw in fh:
            s = raw.strip()
            if not s or s[0] in '"*':
                continue
            lines.append(re.sub(r"[,(){}]", " ", s).split())
    m = int(lines[0][0])
    nblocks = int(lines[1][0])
    sizes = [int(v) for v in lines[2][:nblocks]]
    c = np.array([float(v) for v in lines[3][:m]])
    mats = [[np.zeros((abs(b), abs(b))) for b in sizes] for _ in range(m + 1)]
    for tok in lines[4:]:
        k, b, i, j = (int(v) for v in tok[:4])
        v = float(tok[4])
        mats[k][b - 1][i - 1, j - 1] = v
        mats[k][b - 1][j - 1, i - 1] = v
    return m, sizes, c, mats


def solve(path):
    m, sizes, c, mats = read_sdpa(path)
    ys, cons = [], []
    for b in sizes:
        if b > 0:
            y = cp.Variable((b, b), symmetric=True)
            cons.append(y >> 0)
        else:
            y = cp.Variable(-b, nonneg=True)
        ys.append(y)

    def inner(blocks):
        terms = []
        for y, f, b in zip(ys, blocks, sizes):
            if b > 0:
                terms.append(cp.trace(f @ y))
            else:
                terms.append(np.diag(f) @ y)
        return cp.sum(cp.hstack(terms))

    cons += [inner(mats[k + 1]) == c[k] for k in range(m)]
    prob = cp.Problem(cp.Maximize(inner(mats[0])), cons)
    for solver in ("CLARABEL", "SCS", "CVXOPT"):
        if solver in cp.installed_solvers():
            try:
                prob.solve(solver=solver)
                break
            except cp.error.SolverError:
                continue
    return prob.status, prob.value


if __name__ == "__main__":
    status, value = solve(sys.argv[1])
    print(f"status {status}")
    print(f"objective {float('nan') if value is None else float(value)!r}")
