# Copyright 2026 The qforest Authors
# SPDX-License-Identifier: Apache-2.0
"""Smoke test for the qforest extension module.

Build with `maturin develop -m crates/py/Cargo.toml` or copy
`target/release/libqforest_py.so` to `qforest.so` on PYTHONPATH.
"""

import json

import qforest


def main():
    tree = qforest.Graph(5, [(1, 2), (2, 3), (2, 4), (4, 5)])
    assert tree.find_cycle() is None
    r = qforest.decide_forest(tree, seed=7)
    assert r.verdict == "forest" and r.holds and r.seed == 7
    assert json.loads(r.to_json())["counters"]["seed"] == 7

    c5 = qforest.Graph.from_edge_list("5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n")
    ok, cycle = c5.bipartition()
    assert not ok and len(cycle) == 5
    r = qforest.decide_bipartite(c5, seed=3)
    assert r.verdict == "odd-cycle" and r.k is not None

    r = qforest.decide_forest(c5, seed=1, model="array")
    assert r.verdict == "has-cycle"

    spec = qforest.delta_spectrum(5, 2.0)
    assert spec["factorization_residual"] < 1e-9
    assert spec["gap"] > 0

    path = qforest.Graph(3, [(1, 2), (2, 3)])
    assert qforest.span_acceptance(path, 1, 3, 2.0, 0.05) > 0.3

    full, _ = qforest.aa_schedule(4)
    assert full >= 0

    assert qforest.parity_gadget("1000", "cycle-test").find_cycle() is None
    assert qforest.parity_gadget("1100", "cycle-test").find_cycle() is not None

    try:
        qforest.Graph(2, [(1, 3)])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range edge accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
