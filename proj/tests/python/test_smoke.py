import math

import pytest

import _curlopt as co


def test_mesh_census():
    mesh = co.build_structured_domain("unit_cube", 1)
    assert mesh.n_vertices == 8
    assert mesh.n_cells == 6
    top = co.topology_counts(mesh)
    assert top["edges"] == 19
    assert top["boundary_edges"] == 18
    assert co.space_dim(mesh) == 1


def test_refinement_and_quality():
    mesh = co.build_structured_domain("unit_cube", 1)
    refined = co.bisect_marked(mesh, list(range(mesh.n_cells)))
    assert refined.n_cells == 12
    stats = co.mesh_quality_stats(mesh)
    assert stats["h_max"] == pytest.approx(math.sqrt(3.0))
    uniform = co.bisect_all(mesh, 3)
    assert co.mesh_quality_stats(uniform)["h_max"] == pytest.approx(math.sqrt(3.0) / 2)


def test_domain_validation():
    with pytest.raises(Exception):
        co.build_structured_domain("cube_with_inner_box", 3)


def test_ssn_on_coarse_smooth_case():
    out = co.ssn_solve("test1", n=2, tol=1e-9)
    assert out["iterations"] <= 10
    assert out["residuals"][-1] <= 1e-9
    # the coarse-mesh control sits near the continuous fixed point 1/(2 pi^2)
    assert out["u"][0] == pytest.approx(1.0 / (2.0 * math.pi**2), rel=0.2)
    assert max(abs(g) for g in out["gradient"]) <= 1e-8


def test_uniform_run_records_and_eoc():
    records = co.run_uniform("test1", levels=2, n0=1)
    assert len(records) == 2
    assert records[1]["ncells"] == 8 * records[0]["ncells"]
    assert records[1]["err_y_hcurl"] < records[0]["err_y_hcurl"]
    orders = co.eoc(
        [r["err_y_hcurl"] for r in records],
        [r["h_max"] for r in records],
        "h",
    )
    assert orders[0] > 0.3


def test_adaptive_run_grows_cells():
    records = co.run_adaptive("test3", max_cells=800, max_iters=4, n0=4)
    cells = [r["ncells"] for r in records]
    assert cells == sorted(cells)
    assert len(cells) >= 2
    assert all(len(r["u"]) == 2 for r in records)


def test_config_parsing():
    cfg = co.parse_config("case=test1\nrefine=uniform\nlevels=3")
    assert cfg["case"] == "test1"
    assert cfg["levels"] == 3
    with pytest.raises(Exception):
        co.parse_config("theta_mark=1.5")
