#!/usr/bin/env python3
"""Solve an SDPA-format problem with an off-the-shelf conic solver.

The file follows the CSDP reading: maximize tr(F0 X) subject to
tr(Fi X) = ci, X PSD (negative block sizes are diagonal blocks).
The solution is written in the format read back by `pentapack solve --import`:
optional "* key value" lines, the dual vector y on one line, then
"matno block i j value" entries with matno 1 for Z and 2 for X.
"""

import argparse
import re
import sys

import numpy as np
import cvxpy as cp


def read_sdpa(path):
    with open(path) as fh:
        lines = fh.readlines()
    body = []
    started = False
    for line in lines:
        s = line.strip()
        if not started and (not s or s[0] in '"*'):
            continue
        started = True
        body.append(re.sub(r"[,(){}]", " ", line))
    tok = " ".join(body).split()
    pos = 0
    m = int(tok[pos]); pos += 1
    nb = int(tok[pos]); pos += 1
    dims = [int(t) for t in tok[pos:pos + nb]]; pos += nb
    c = np.array([float(t) for t in tok[pos:pos + m]]); pos += m
    mats = [[{} for _ in range(nb)] for _ in range(m + 1)]
    while pos + 5 <= len(tok):
        mat, blk, i, j = (int(t) for t in tok[pos:pos + 4])
        v = float(tok[pos + 4])
        pos += 5
        i, j = min(i, j) - 1, max(i, j) - 1
        d = mats[mat][blk - 1]
        d[(i, j)] = d.get((i, j), 0.0) + v
    return m, dims, c, mats


def dense(entries, n):
    a = np.zeros((n, n))
    for (i, j), v in entries.items():
        a[i, j] = v
        a[j, i] = v
    return a


def inner(entries, var, diagonal):
    terms = []
    for (i, j), v in entries.items():
        if diagonal:
            terms.append(v * var[i])
        elif i == j:
            terms.append(v * var[i, j])
        else:
            terms.append(2 * v * var[i, j])
    return cp.sum(cp.hstack(terms)) if terms else 0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("problem")
    ap.add_argument("solution")
    ap.add_argument("--solver", default="CLARABEL", help="cvxpy solver name (CLARABEL, SCS, CVXOPT)")
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    m, dims, c, mats = read_sdpa(args.problem)
    xs = []
    cons = []
    for n in dims:
        if n < 0:
            x = cp.Variable(-n, nonneg=True)
        else:
            x = cp.Variable((n, n), PSD=True)
        xs.append(x)

    def functional(i):
        parts = [inner(mats[i][b], xs[b], dims[b] < 0) for b in range(len(dims)) if mats[i][b]]
        return sum(parts) if parts else cp.Constant(0.0)

    eqs = [functional(i + 1) == c[i] for i in range(m)]
    objective = cp.Maximize(functional(0))
    prob = cp.Problem(objective, eqs)
    prob.solve(solver=args.solver, verbose=args.verbose)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        print(f"solver status {prob.status}", file=sys.stderr)
        return 1

    y = np.array([float(e.dual_value) for e in eqs])
    # Z = sum y_i F_i - F0; fix the sign convention of the backend by PSD-ness
    def zblocks(yv):
        out = []
        for b, n in enumerate(dims):
            size = abs(n)
            z = -dense(mats[0][b], size)
            for i in range(m):
                if mats[i + 1][b]:
                    z += yv[i] * dense(mats[i + 1][b], size)
            out.append(z)
        return out

    def min_eig(blocks):
        return min(np.linalg.eigvalsh(z).min() if dims[b] > 0 else np.diag(z).min() for b, z in enumerate(blocks))

    if min_eig(zblocks(-y)) > min_eig(zblocks(y)):
        y = -y
    z = zblocks(y)

    primal = float(prob.value)
    dual = float(c @ y)
    status = "optimal" if prob.status == "optimal" else "near-optimal"
    with open(args.solution, "w") as out:
        # the embedded convention minimizes C.X with C = -F0
        out.write(f"* primal_objective {-primal!r}\n")
        out.write(f"* dual_objective {-dual!r}\n")
        out.write(f"* status {status}\n")
        out.write(" ".join(repr(float(v)) for v in y) + "\n")
        for matno, blocks in ((1, z), (2, None)):
            for b, n in enumerate(dims):
                if blocks is None:
                    val = xs[b].value
                    mat = np.diag(val) if n < 0 else 0.5 * (val + val.T)
                else:
                    mat = blocks[b]
                size = abs(n)
                for i in range(size):
                    for j in range(i, size):
                        if n < 0 and i != j:
                            continue
                        v = float(mat[i, j])
                        if v != 0.0:
                            out.write(f"{matno} {b + 1} {i + 1} {j + 1} {v!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
