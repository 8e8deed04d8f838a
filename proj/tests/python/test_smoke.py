import math
from pathlib import Path

import pytest

import sts

ROOT = Path(__file__).resolve().parents[2]


def test_default_config_round_trips():
    text = sts.default_config_text("semilinear_heat")
    assert "problem = semilinear_heat" in text
    assert sts.normalize_config_text(text) == text


def test_config_error_names_the_key():
    with pytest.raises(ValueError, match="n_intervals"):
        sts.config_text(n_intervals=7)


def test_shipped_configs_parse():
    for cfg in sorted((ROOT / "configs").glob("*.cfg")):
        assert "format_version = 1" in sts.normalize_config_text(cfg.read_text())


def test_short_heat_run(tmp_path):
    report, series = sts.run(p=3, threshold=1e4, output_dir=str(tmp_path))
    assert report["termination"] == "threshold_reached"
    assert abs(report["final_value"] / 1e4 - 1) <= 1e-3
    assert len(series["time"]) == len(series["value"]) > 10
    header = (tmp_path / "series.csv").read_text().splitlines()[0]
    assert header == "time,value,half_width,dvdt,cone_slope,level,time_to_end"
    assert (tmp_path / "report.json").exists()
    assert list((tmp_path / "snapshots").glob("snapshot_*.csv"))


def test_rkl1_certificate_and_counterexample():
    ok = sts.verify_monotone("rkl1", 10)
    assert ok["monotone"] and ok["consistent"]
    bad = sts.verify_monotone("rkl1", 10, ["3/10"])
    assert not bad["monotone"]


def test_stability_polynomial_at_limit():
    for fam in ("rkl1", "rkl2", "rkg1", "rkg2"):
        z = -4 * sts.stability_cfl_limit(fam, 9)
        assert abs(sts.stability_polynomial(fam, 9, z)) <= 1 + 1e-12
        assert sts.stability_polynomial(fam, 9, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_constants_and_reference_profile():
    assert sts.CONE_SLOPE == 1.0373
    assert math.isclose(sts.collapse_reference(1.0, 3.0), 0.5)
    assert math.isclose(sts.residual_blowup_time(10.0, 2.0), 0.1)


def test_convergence_order():
    rows, order = sts.heat_convergence("rkl2", 8)
    assert len(rows) == 5
    assert abs(order - 2.0) <= 0.1
