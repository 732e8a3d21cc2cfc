"""Smoke test for the Python extension.

Builds the extension with cargo when it cannot be imported, copies the
shared library next to this script, and exercises the main entry points.

    python3 python/smoke_test.py
"""

import importlib
import json
import pathlib
import shutil
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def load():
    sys.path.insert(0, str(HERE))
    try:
        return importlib.import_module("housealloc_py")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "-p", "housealloc-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "debug" / "libhousealloc_py.so"
    shutil.copyfile(built, HERE / "housealloc_py.so")
    return importlib.import_module("housealloc_py")


def main():
    ha = load()

    graph, values = ha.figure("fig1")
    assert ha.total_envy(graph, values, [0, 3, 1, 4, 2]) == "15"

    p5 = ha.Graph.path(5)
    sol = ha.solve(p5, [1, 2, 4, 5, 6])
    assert (sol.solver, sol.envy, sol.guarantee) == ("path", "5", "exact"), sol
    assert ha.brute_force(p5, [1, 2, 4, 5, 6]).envy == "5"

    envy, count, classes = ha.enumerate_optima(ha.Graph.cycle(5), [1, 2, 3, 4, 5], canon="cycle")
    assert (envy, len(classes)) == ("8", 4), (envy, count, classes)

    g, vals = ha.figure("fig3-bottom")
    assert ha.solve(g, vals).solver == "cliques_xp"

    mixed = ha.Graph.family("path:2+clique:3")
    assert [c[1] for c in mixed.components()] == ["P_2", "C_3"]
    assert ha.solve(mixed, ["1/2", "0.25", 3, 4, 7]).envy == ha.brute_force(mixed, ["1/2", "0.25", 3, 4, 7]).envy

    text = ha.dump_instance(p5, [1, 2, 4, 5, 6])
    back, back_values = ha.load_instance(text)
    assert back.edges == p5.edges and back_values == ["1", "2", "4", "5", "6"]

    report = json.loads(ha.experiment("mla-contiguity", count=3, n=5, seed=1))
    assert report["summary"]["holds"] == 3

    try:
        ha.brute_force(ha.Graph.path(8), list(range(8)), budget=10)
    except ha.BudgetExceeded:
        pass
    else:
        raise AssertionError("budget was not enforced")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
