"""Smoke test for the nilslice Python module.

Uses an installed `nilslice` if there is one, otherwise the library built by
`cargo build --release -p nilslice-py --features extension-module`.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys


def load():
    try:
        import nilslice

        return nilslice
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        path = root / "target" / profile / "libnilslice_py.so"
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("nilslice", str(path))
            spec = importlib.util.spec_from_file_location("nilslice", str(path), loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("nilslice module not found; build nilslice-py first")


def main():
    ns = load()

    idx = ns.OrbitIndex("C", 4, 1)
    assert (idx.kind, idx.m, idx.n, idx.codim) == ("C", 4, 1, 6)
    assert idx.coord_names() == ["a1", "y1", "z1", "d1", "d2", "d3"]
    assert len(ns.OrbitIndex.all("D", 5)) == 3

    coords = ns.sample_coords(idx, seed=7)
    assert ns.charpoly_residual(idx, coords) == []
    matrix = ns.slice_point(idx, [1, "1/2", 0, -3, "2/3", 5])
    assert len(matrix) == 8 and len(matrix[0]) == 8

    tau = ns.spectral_class(idx, coords)
    assert len(tau["mu"]) == 4 and tau["p"] is None

    cert = ns.transversality(ns.OrbitIndex("B", 3, 2))
    assert cert["verdict"] and cert["dim_v"] == 7

    klein = ns.kleinian("C", 3)
    assert klein["found"] == "D4" and klein["matches"]

    ip = ns.ideal_point(idx, coords)
    assert ip["remainder"] == 0.0 and len(ip["support"]) == 1

    b = ns.OrbitIndex("B", 4, 2)
    c = ns.sample_coords(b, seed=3)
    s1 = ns.ideal_point(b, c)["support"]
    s2 = ns.ideal_point(b, ns.partner(b, c))["support"]
    assert all(abs(p - q) < 1e-9 for u, v in zip(s1, s2) for p, q in zip(u, v))

    report = json.loads(ns.run_campaign("verify-jm", m_max=3))
    assert report["pass"] and report["schema_version"] == 1

    try:
        ns.OrbitIndex("D", 3, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid index accepted")

    print("python smoke test ok")


if __name__ == "__main__":
    main()
