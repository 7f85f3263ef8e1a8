import io

import numpy as np
import pytest

from avcsym.errors import AlphabetTooSmall
from avcsym.randomscan import (
    CSV_HEADER,
    ScanCell,
    ScanConfig,
    cell_seed,
    dof_threshold,
    estimate_psym,
    psym_surface,
    sample_avc,
    substream,
    write_psym_csv,
)


def test_substreams_are_reproducible_and_distinct():
    a = substream(7, 0).random(4)
    b = substream(7, 0).random(4)
    c = substream(7, 1).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_cell_seed_stable():
    assert cell_seed(0, 3) == cell_seed(0, 3)
    assert cell_seed(0, 3) != cell_seed(0, 4)
    assert cell_seed(1, 3) != cell_seed(0, 3)


def test_sample_avc_rows_on_simplex():
    avc = sample_avc(3, 5, 4, substream(11, 0))
    np.testing.assert_allclose(avc.w.sum(axis=2), 1.0, atol=1e-12)
    assert avc.w.min() >= 0.0


def test_sample_avc_is_flat_on_the_simplex():
    # flat Dirichlet has mean 1/Y per coordinate and var (Y-1)/(Y^2 (Y+1))
    rng = substream(13, 0)
    rows = np.vstack([sample_avc(1, 1, 3, rng).w.reshape(1, 3) for _ in range(4000)])
    np.testing.assert_allclose(rows.mean(axis=0), 1.0 / 3.0, atol=0.01)
    expected_var = 2.0 / (9.0 * 4.0)
    np.testing.assert_allclose(rows.var(axis=0), expected_var, atol=0.005)


def test_dof_threshold_values():
    assert dof_threshold(4, 4) == 7
    assert dof_threshold(2, 2) == 2
    assert dof_threshold(2, 3) == 3
    with pytest.raises(AlphabetTooSmall):
        dof_threshold(1, 4)


def test_scan_config_validation():
    with pytest.raises(AlphabetTooSmall):
        ScanConfig(1, 2, (2,), (0.5,), 1, 0)
    with pytest.raises(AlphabetTooSmall):
        ScanConfig(2, 2, (1,), (0.5,), 1, 0)
    with pytest.raises(ValueError):
        ScanConfig(2, 2, (2,), (0.5,), 0, 0)
    with pytest.raises(ValueError):
        ScanConfig(2, 2, (2,), (-0.5,), 1, 0)
    with pytest.raises(ValueError):
        ScanConfig(2, 2, (2,), (0.5,), 1, -1)


def test_estimate_psym_deterministic():
    a = estimate_psym(2, 2, 2, 0.25, 20, seed=99)
    b = estimate_psym(2, 2, 2, 0.25, 20, seed=99)
    assert a == b
    assert 0.0 <= a.fraction_symmetrizable <= 1.0
    assert a.mean_f >= 0.0
    assert a.samples == 20


def test_standard_error():
    cell = ScanCell(2, 0.5, 0.25, 100, 0.1, 0)
    assert cell.standard_error() == pytest.approx((0.25 * 0.75 / 100) ** 0.5)


def test_surface_order_and_seeds():
    config = ScanConfig(2, 2, (2, 3), (0.5, 1.0), 5, seed=3)
    cells = psym_surface(config)
    assert [(c.s, c.epsilon) for c in cells] == [(2, 0.5), (2, 1.0), (3, 0.5), (3, 1.0)]
    assert [c.seed for c in cells] == [cell_seed(3, i) for i in range(4)]


def test_surface_worker_count_invariance():
    config = ScanConfig(2, 2, (2, 3), (0.25, 1.0), 8, seed=17)
    serial = io.StringIO()
    parallel = io.StringIO()
    write_psym_csv(psym_surface(config, workers=1), serial)
    write_psym_csv(psym_surface(config, workers=3), parallel)
    assert serial.getvalue() == parallel.getvalue()


def test_csv_format(tmp_path):
    cells = [ScanCell(2, 0.5, 0.25, 4, 0.625, 12345)]
    path = tmp_path / "scan.csv"
    write_psym_csv(cells, path)
    text = path.read_text()
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER == "s,epsilon,fraction,mean_f,samples,seed"
    assert lines[1] == "2,0.5,0.25,0.625,4,12345"
