"""Smoke test for the Python bindings.

    pip install --no-build-isolation -e crates/python
    python3 python/smoke_test.py

Reference values are closed forms computed here, not by the library.
"""
import math

import pysltwo as s


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    t = s.Tau(0.5)
    close(t.threshold(), math.sqrt(2) * math.pi, 1e-14)

    # neck root of -1 + c t - t^2
    close(s.catenoid_root(10.0), 5 - math.sqrt(24), 1e-13)
    close(s.disk_area(1.0, 0.0), 4 * math.pi * math.sinh(0.5) ** 2, 1e-10)
    close(s.tilted_height(1.0, 0.0, 0.5), math.sqrt(2) * math.pi / 2, 1e-10)

    slab = s.Surface("slab", d=1.0, tau=0.0)
    close(slab.value(0.0, 0.5), math.pi / 6, 1e-14)
    rep = s.Surface("catenoid", c=10.0, tau=0.5).verify(samples=40)
    assert rep["pass"] and rep["n_samples"] == 40, rep

    verts, faces = s.Surface("catenoid", c=10.0).mesh(model="cyl", resolution=9)
    assert len(verts) == 8 * 17 and len(faces) == 2 * 8 * 16
    assert all(math.hypot(v[0], v[1]) < 1 for v in verts)

    p = s.Point(0.3, 2.0, 1.0)
    back = p.to_cylinder(0.5).to_half_space(0.5)
    assert back.model == "half-space", back.model
    for u, v in zip(p.coords, back.coords):
        close(u, v, 1e-12)

    circles = s.Curve.circles([0.0, 4.0], 16)
    assert circles.tallness(0.0)["tall"]
    assert not circles.tallness(0.5)["tall"]
    again = s.Curve.parse(circles.to_text())
    close(again.tallness(0.0)["inf_height"], 4.0, 1e-12)

    chk = s.douglas_check(2.0, 2.5, 0.5)
    assert chk["holds"] and chk["margin"] > 0
    assert not s.douglas_check(0.25, 0.3125, 0.5)["holds"]
    rows = s.douglas_sweep([0.25, 1.0, 4.0])
    assert [r["margin"] > 0 for r in rows] == [False, True, True]

    q = math.pi / 2
    js = s.jenkins_serrin_check([0.0, q, 2 * q, 3 * q], [0.5] * 4, origin=False)
    assert js["balanced"], js

    sol = s.solve(
        "nx = 9\nny = 9\ntau = 0.5\n"
        "[domain]\nx0 = -1.0\nx1 = 1.0\ny0 = 0.5\ny1 = 1.5\n"
        "[boundary]\nkind = \"plane\"\nslope = 0.7\noffset = 0.1\n"
    )
    assert len(sol["values"]) == 81
    assert sol["max_node_error"] < 1e-12, sol["max_node_error"]

    try:
        s.Surface("catenoid", c=1.5)
    except s.SltwoError as e:
        assert e.kind == "BadParameter", e.kind
    else:
        raise AssertionError("expected SltwoError")

    print("smoke test: ok")


if __name__ == "__main__":
    main()
