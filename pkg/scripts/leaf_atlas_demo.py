#!/usr/bin/env python3
"""Compute the twisted leaf atlas for a battery of small groups and print a
summary table; optionally dump the per-pair JSON reports to a directory.

Usage: python scripts/leaf_atlas_demo.py [outdir]
"""

import json
import sys
import time

from leafatlas import linalg as la
from leafatlas.exactnum import root_of_unity
from leafatlas.leaves import leaf_report
from leafatlas.refgroup import catalog, dihedral_tau
from leafatlas.tau import build_tau, make_full


def diag_flip(n):
    return la.mat([[(-1 if i == 0 else 1) if i == j else 0 for j in range(n)]
                   for i in range(n)])


PAIRS = [
    ("cyclic2", "identity", lambda W: la.identity(W.dim)),
    ("cyclic2", "zeta4", lambda W: la.mat([[root_of_unity(4)]])),
    ("B2", "identity", lambda W: la.identity(W.dim)),
    ("B3", "identity", lambda W: la.identity(W.dim)),
    ("G4", "identity", lambda W: la.identity(W.dim)),
    ("dihedral3", "swap", lambda W: dihedral_tau(3)),
    ("dihedral4", "swap", lambda W: dihedral_tau(4)),
    ("dihedral5", "swap", lambda W: dihedral_tau(5)),
    ("dihedral6", "swap", lambda W: dihedral_tau(6)),
    ("D3", "diag-flip", lambda W: diag_flip(W.dim)),
    ("D4", "diag-flip", lambda W: diag_flip(W.dim)),
]


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else None
    print(f"{'group':<12}{'twist':<12}{'|W|':>6}{'|W_tau|':>9}{'leaves':>8}  dims")
    for gname, tname, builder in PAIRS:
        start = time.time()
        W = catalog(gname)
        ctx = build_tau(W, make_full(W, builder(W)))
        report = leaf_report(ctx, gname, tname)
        dims = [leaf["dim"] for leaf in report["leaves"]]
        print(f"{gname:<12}{tname:<12}{W.order:>6}{ctx.w_tau.order:>9}"
              f"{report['leaf_count']:>8}  {dims}  ({time.time()-start:.1f}s)")
        if outdir:
            path = f"{outdir}/{gname}-{tname}.json"
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(report, fh, sort_keys=True, indent=2)


if __name__ == "__main__":
    main()
