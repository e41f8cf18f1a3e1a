#!/usr/bin/env python3
# Copyright 2026 The DEGNN Workbench Authors.
#
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

"""Convert Planetoid "ind.<name>.*" pickles into a degnn bundle directory.

Usage: planetoid_ind_to_bundle.py RAW_DIR NAME OUT_DIR

Needs numpy and scipy. Test nodes missing from the index range (Citeseer has
a few isolated ones) get zero features and label 0, as in the usual loaders.
The public split (first 20 per class for training, next 500 for validation,
the 1000 listed test nodes) is written to OUT_DIR/public_split.json.
"""

import json
import pickle
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def load(raw, name, part):
    with open(raw / f"ind.{name}.{part}", "rb") as f:
        return pickle.load(f, encoding="latin1")


def main(argv):
    if len(argv) != 4:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    raw, name, out = Path(argv[1]), argv[2], Path(argv[3])
    x, y, tx, ty, allx, ally, graph = (load(raw, name, p)
                                       for p in ("x", "y", "tx", "ty", "allx", "ally", "graph"))
    test_index = [int(line) for line in open(raw / f"ind.{name}.test.index")]
    test_sorted = sorted(test_index)

    lo, hi = test_sorted[0], test_sorted[-1]
    full = hi - lo + 1
    tx_full = sp.lil_matrix((full, tx.shape[1]))
    ty_full = np.zeros((full, ty.shape[1]))
    tx_full[np.array(test_sorted) - lo, :] = tx
    ty_full[np.array(test_sorted) - lo, :] = ty

    features = sp.vstack((allx, tx_full)).tolil()
    labels = np.vstack((ally, ty_full))
    features[test_index, :] = features[test_sorted, :]
    labels[test_index, :] = labels[test_sorted, :]
    features = np.asarray(features.todense(), dtype="<f4")
    label_ids = labels.argmax(axis=1)
    n = features.shape[0]

    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            if u != v and u < n and v < n:
                edges.add((min(u, v), max(u, v)))

    out.mkdir(parents=True, exist_ok=True)
    meta = {"n_nodes": int(n), "n_features": int(features.shape[1]),
            "n_classes": int(labels.shape[1])}
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    with open(out / "edges.tsv", "w") as f:
        for u, v in sorted(edges):
            f.write(f"{u}\t{v}\n")
    features.tofile(out / "features.bin")
    (out / "labels.txt").write_text("".join(f"{int(c)}\n" for c in label_ids))

    train = list(range(y.shape[0]))
    val = list(range(y.shape[0], y.shape[0] + 500))
    split = {"train": train, "val": val, "test": test_sorted, "seed": 0}
    (out / "public_split.json").write_text(json.dumps(split) + "\n")
    print(f"wrote {out}: {n} nodes, {len(edges)} edges, {features.shape[1]} features")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
