"""Smoke test for the `qaos` extension module.

Build first with `cargo build --release -p qaos-py` (or `maturin develop`
inside crates/py), then run `python3 python/smoke_test.py`.
"""

import importlib
import json
import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("qaos")
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libqaos.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp())
            shutil.copy(lib, tmp / "qaos.so")
            sys.path.insert(0, str(tmp))
            return importlib.import_module("qaos")
    sys.exit("qaos module not found; run `cargo build --release -p qaos-py` first")


def main():
    qaos = load()

    g = qaos.ConflictGraph([1, 2], [(0, 1)])
    assert g.n == 2 and g.edges == [(0, 1)]
    assert qaos.diagonal_table(g) == [0.75, -0.25, -1.25, 0.75]
    assert qaos.brute_force(g) == ("01", 2)
    assert qaos.greedy(g) == ("01", 2)
    assert qaos.eta(1, 2) == 0.5

    # Single qubit: <H> = (w/2) sin(2 beta) sin(gamma w).
    w, gamma, beta = 3.0, 0.4, 0.3
    e = qaos.expectation([w / 2, -w / 2], [gamma], [beta])
    assert abs(e - w / 2 * math.sin(2 * beta) * math.sin(gamma * w)) < 1e-12

    probs = qaos.probabilities(qaos.diagonal_table(g), [0.5, 0.1], [0.2, 0.7])
    assert abs(sum(probs) - 1.0) < 1e-12

    r = qaos.solve_qaos(g, p=3, epochs=50, seed=1)
    assert r["schedule"] == "01" and r["weight"] == 2, r

    h = qaos.ConflictGraph.random(n=8, edge_prob=0.4, seed=5)
    assert qaos.ConflictGraph.from_json(h.to_json()).edges == h.edges
    best = qaos.brute_force(h)[1]
    assert qaos.random_maximal(h, seed=3)[1] <= best
    assert h.is_independent(qaos.greedy(h)[0])

    out = qaos.run_benchmark(json.dumps({"graph_count": 5, "algorithms": ["greedy", "random", "brute"]}), workers=2)
    assert len(out["records"]) == 15
    brute = [s for s in out["summary"] if s["algorithm"] == "brute"][0]
    assert brute["optimal_rate"] == 1.0

    try:
        qaos.ConflictGraph([1, 2], [(0, 0)])
    except ValueError:
        pass
    else:
        raise AssertionError("self-edge accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
