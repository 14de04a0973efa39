# SPDX-License-Identifier: MIT
"""Smoke tests of the Python bindings and the installed CLI binary."""

import math
import os
import subprocess
import sys

import pytest

import _core


def test_material_constants():
    mat = _core.material(e=1.0, nu=0.4, dim=2)
    assert mat["lambda"] == pytest.approx(10.0 / 7.0, rel=1e-14)
    assert mat["mu"] == pytest.approx(5.0 / 14.0, rel=1e-14)
    assert mat["c_alpha"] == 16.0 and mat["c_beta"] == 2.0
    assert mat["lambda_ge_mu"]


def test_grid_info_matches_reference_counts():
    g = _core.grid_info(h_max=0.25, delta=0.25)
    assert g["n"] == (19, 27)
    assert g["num_nodes"] == 19 * 27
    assert g["num_unknown"] == 21


def test_quadrature_weights_positive_and_normalized():
    qs = _core.quadrature_weights(eps1=0.25)
    assert len(qs["points"]) == 48
    assert all(w > 0 for w in qs["weights"])
    # Second-moment constraint: sum w rho t_1^2 = 1/2 (closed unit ball).
    s = sum(
        w * (3.0 / (2.0 * math.pi)) / math.hypot(*p) * p[0] ** 2
        for p, w in zip(qs["points"], qs["weights"])
    )
    assert s == pytest.approx(0.5, abs=1e-10)


def test_navier_symbol_frozen_value():
    s = _core.navier_symbol(1.3, -0.7, delta=0.25)
    assert s["matrix"][0][0] == pytest.approx(3.7489140505091414, rel=1e-10)
    assert s["min_eig"] > 0


def test_lattice_symbol_positive_definite():
    for form in ("galerkin", "collocation", "quasi"):
        s = _core.lattice_symbol(2.2, -1.9, form=form)
        assert s["converged"], form
        assert s["min_eig"] > 0, form


def test_solve_manufactured_error_shrinks():
    coarse = _core.solve_manufactured(h_max=0.25, delta=0.25)
    fine = _core.solve_manufactured(h_max=0.125, delta=0.25)
    assert coarse["dofs"] == 42 and fine["dofs"] == 210
    assert 0 < fine["l2_error"] < coarse["l2_error"]
    # delta is fixed and the manufactured field solves the nonlocal problem
    # exactly, so the error is pure discretization: about 4x per halving.
    assert coarse["l2_error"] / fine["l2_error"] == pytest.approx(4.0, rel=0.5)


def test_interpolate_reproduces_linears():
    val = _core.interpolate(0.125, lambda x, y: 2.0 * x - y + 0.25, 0.4, 0.7)
    assert val == pytest.approx(2.0 * 0.4 - 0.7 + 0.25, abs=1e-13)
    dx = _core.interpolate(0.125, lambda x, y: 2.0 * x - y + 0.25, 0.4, 0.7, 1, 0)
    assert dx == pytest.approx(2.0, abs=1e-12)


def test_error_types_are_mapped():
    with pytest.raises(_core.ConfigError):
        _core.lattice_symbol(1.0, 1.0, form="frobnicate")
    with pytest.raises(_core.NumericalError):
        _core.quadrature_weights(eps1=0.9)


def test_cli_binary_if_available(tmp_path):
    bin_path = os.environ.get("PERIDYN_RK_BIN")
    if not bin_path or not os.path.exists(bin_path):
        pytest.skip("PERIDYN_RK_BIN not set")
    out = subprocess.run(
        [bin_path, "symbols", "--xi", "1.3,-0.7", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "direct-vs-decomposed" in out.stdout
    rows = [
        line.split(",")
        for line in (tmp_path / "symbol_point.csv").read_text().splitlines()
        if line and not line.startswith("#")
    ]
    # Header plus one row per evaluation path, m11 in column 3.
    assert rows[0][3] == "m11" and len(rows) == 3
    for row in rows[1:]:
        assert float(row[3]) == pytest.approx(3.7489140505091414, rel=1e-8)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
