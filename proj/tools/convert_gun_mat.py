#!/usr/bin/env python3
# Copyright 2026 The nepcontour Authors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""Convert the NLEVP gun problem (gun.mat) into the K/M/W1/W2 Matrix Market files.

The gun problem ships with NLEVP as a MATLAB file holding the sparse matrices K, M, W1
and W2. Point NEPCONTOUR_DATA (or --gun-data) at the output directory afterwards.

    python3 tools/convert_gun_mat.py path/to/gun.mat data/gun
"""

import argparse
import pathlib
import sys

import scipy.io
import scipy.sparse


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("mat", type=pathlib.Path, help="gun.mat from NLEVP")
    parser.add_argument("out", type=pathlib.Path, help="output directory")
    args = parser.parse_args()

    data = scipy.io.loadmat(args.mat)
    args.out.mkdir(parents=True, exist_ok=True)
    n = None
    for name in ("K", "M", "W1", "W2"):
        if name not in data:
            print(f"{args.mat}: no variable {name}", file=sys.stderr)
            return 1
        a = scipy.sparse.coo_matrix(data[name])
        if n is not None and a.shape != (n, n):
            print(f"{name}: shape {a.shape} does not match ({n}, {n})", file=sys.stderr)
            return 1
        n = a.shape[0]
        scipy.io.mmwrite(str(args.out / f"{name}.mtx"), a, precision=17)
        print(f"wrote {args.out / (name + '.mtx')} ({a.shape[0]} x {a.shape[1]}, nnz {a.nnz})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
