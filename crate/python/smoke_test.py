"""Quick end-to-end check of the Python bindings."""

import math

import ghmst_py as g

W4 = [
    [0.0, 0.1, 0.3, 0.45],
    [0.1, 0.0, 0.2, 0.35],
    [0.3, 0.2, 0.0, 0.15],
    [0.45, 0.35, 0.15, 0.0],
]


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    x = g.MetricSpace(W4, ["a", "b", "c", "d"])
    assert len(x) == 4 and x.labels == ["a", "b", "c", "d"]
    assert close(x.diameter(), 0.45)

    spec = g.mst_spectrum(x)
    assert spec == [0.2, 0.15, 0.1], spec
    assert g.spectrum_via_partitions(x) == spec
    assert all(close(a, b) for a, b in zip(g.spectrum_via_gh(x, 1.0), spec))
    assert close(g.mst_length_via_gh(x, 1.0), g.mst_length(x))
    assert close(g.minimum_spanning_tree(x)["length"], 0.45)

    assert g.gh_exact(x, x)["distance"] == 0.0
    r = g.gh_to_simplex(x, 2, 1.0)
    assert r["method"] == "closed_form" and close(r["distance"], 0.4)
    ex = g.gh_exact(x, g.simplex(2, 1.0), "exhaustive")
    assert close(ex["distance"], r["distance"])

    y = g.MetricSpace(
        [[0, 1.2, 1.2, 0.6], [1.2, 0, 1.2, 0.6], [1.2, 1.2, 0, 0.6], [0.6, 0.6, 0.6, 0]],
        ["a", "b", "c", "s"],
    )
    assert close(g.smt(y, ["a", "b", "c"])["length"], 1.8)
    assert close(g.smt_via_gh(y, ["a", "b", "c"]), 1.8, 1e-9)

    tri = g.MetricSpace([[0, 3, 5], [3, 0, 4], [5, 4, 0]])
    f = g.mf(tri)
    assert close(f["length"], 6.0, 1e-9)
    s = g.mf_upper_bound_search(tri, iterations=100, seed=1)
    assert s["value"] >= f["length"] - 1e-9 and math.isfinite(s["value"])

    try:
        g.MetricSpace([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    except ValueError as e:
        assert "TriangleViolation" in str(e)
    else:
        raise AssertionError("triangle violation accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
