import io
import json
import math

import numpy as np
import pytest

from dimerchain import analytic4 as a4
from dimerchain.sweep import (
    CSV_COLUMNS,
    SweepConfig,
    bisect_root,
    dumps,
    find_threshold,
    golden_max,
    read_csv,
    row_dict,
    run_sweep,
    write_csv,
)


@pytest.fixture(scope="module")
def sweep4():
    return run_sweep(SweepConfig(4))


@pytest.fixture(scope="module")
def sweep6():
    return run_sweep(SweepConfig(6))


def test_config_validation():
    for bad in (dict(n=5), dict(n=4, j2_min=2, j2_max=1), dict(n=4, steps=1),
                dict(n=4, j2_min=-1), dict(n=4, method="qr"), dict(n=4, output_format="xml"),
                dict(n=4, j1=0.0)):
        with pytest.raises(ValueError):
            SweepConfig(**bad)


def test_ratio_grid():
    cfg = SweepConfig(4, j1=2.0, j2_min=0, j2_max=2, steps=3, ratio=True)
    np.testing.assert_allclose(cfg.grid(), [0, 2, 4])


def test_n4_sweep_summary(sweep4):
    assert len(sweep4.rows) == 81
    assert np.all(np.diff(sweep4.j2) > 0)
    assert abs(sweep4.argmax_cmean - 1.0) < 1e-6
    j2th_12, j2th_23 = sweep4.thresholds
    assert abs(j2th_12 - 2.0) < 1e-6
    assert abs(j2th_23 - 0.5) < 1e-6


def test_n4_sweep_pointwise_closed_form(sweep4):
    for row in sweep4.rows:
        j2 = row.params.j2
        assert row.c12_signed == pytest.approx(a4.c12_analytic(1, j2), abs=1e-9)
        assert row.c23_signed == pytest.approx(a4.c23_analytic(1, j2), abs=1e-9)
        assert row.c_mean_signed == pytest.approx(a4.c_mean_analytic(1, j2), abs=1e-9)


def test_n6_threshold_drift(sweep6):
    j2th_12, j2th_23 = sweep6.thresholds
    assert j2th_12 < 2.0
    assert j2th_23 > 0.5


def test_find_threshold_examples():
    assert find_threshold(4, 1, "c12", (1, 3)) == pytest.approx(2.0, abs=1e-8)
    assert find_threshold(4, 1, "c23", (0.1, 1)) == pytest.approx(0.5, abs=1e-8)
    assert find_threshold(8, 1, "c12", (1, 3)) < 2.0


def test_find_threshold_no_root():
    assert find_threshold(4, 1, "c12", (0.1, 1.0)) is None
    with pytest.raises(ValueError):
        find_threshold(4, 1, "c99", (0, 1))


def test_bisect_and_golden_helpers():
    assert bisect_root(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-8)
    assert golden_max(lambda x: -(x - 0.3) ** 2, 0, 1) == pytest.approx(0.3, abs=1e-6)


def test_sweep_deterministic_and_parallel_identical():
    cfg = dict(n=6, j2_min=0.2, j2_max=3.0, steps=9)
    a = run_sweep(SweepConfig(**cfg))
    b = run_sweep(SweepConfig(**cfg, n_jobs=2))
    assert dumps(a) == dumps(b)


def test_lanczos_sweep_agrees_with_dense():
    cfg = dict(n=8, j2_min=0.5, j2_max=1.5, steps=5)
    dense = run_sweep(SweepConfig(**cfg, method="dense"))
    lz = run_sweep(SweepConfig(**cfg, method="lanczos"))
    np.testing.assert_allclose(dense.column("c_mean_signed"), lz.column("c_mean_signed"),
                               atol=1e-9)
    assert abs(lz.argmax_cmean - 1.0) < 1e-6


def test_csv_roundtrip_bitwise(sweep4):
    text = dumps(sweep4, "csv")
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_csv(io.StringIO(text))
    assert len(rows) == len(sweep4.rows)
    for parsed, report in zip(rows, sweep4.rows):
        original = row_dict(report)
        for key in CSV_COLUMNS:
            assert parsed[key] == original[key], key


def test_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        read_csv(io.StringIO("a,b\n1,2\n"))


def test_json_layout(sweep4):
    doc = json.loads(dumps(sweep4, "json"))
    meta = doc["metadata"]
    assert (meta["N"], meta["J1"], meta["seed"], meta["method"]) == (4, 1.0, 42, "auto")
    assert "version" in meta
    assert set(doc["rows"][0]) == set(CSV_COLUMNS)
    assert doc["rows"][5]["c12_signed"] == sweep4.rows[5].c12_signed


def test_write_csv_to_file(tmp_path, sweep4):
    path = tmp_path / "out.csv"
    with open(path, "w", newline="") as fh:
        write_csv(sweep4, fh)
    with open(path) as fh:
        assert len(read_csv(fh)) == 81
