import math
from pathlib import Path

import pytest

from psiapprox.utils.models import ApproxMethod, BoundReport, FrequencySet, SweepConfig

BASE = {"psi": "power:1", "s_values": "1, 2", "n_values": "1..3,8"}


def test_sweep_config_from_dict():
    config = SweepConfig.from_dict({**BASE, "beta": "0.5", "output": "out/a.csv"})
    assert config.s_values == (1.0, 2.0)
    assert config.n_values == (1, 2, 3, 8)
    assert config.beta == 0.5
    assert config.output == Path("out/a.csv")
    assert config.grid_oversample == 16
    assert not config.corrupt_signs
    assert config.solver_options.oversample == 16
    assert config.method is ApproxMethod.IRLS


def test_sweep_config_flags():
    config = SweepConfig.from_dict({**BASE, "corrupt_signs": "yes", "seed_count": "0"})
    assert config.corrupt_signs
    assert config.seed_count == 0


@pytest.mark.parametrize("missing", ["psi", "s_values", "n_values"])
def test_sweep_config_missing_key(missing):
    data = {k: v for k, v in BASE.items() if k != missing}
    with pytest.raises(ValueError, match=missing):
        SweepConfig.from_dict(data)


@pytest.mark.parametrize("key, value", [
    ("s_values", "0.5"),
    ("s_values", "inf"),
    ("n_values", "0..2"),
    ("n_values", "two"),
    ("grid_oversample", "0"),
    ("tol", "-1"),
    ("seed_count", "-2"),
    ("method", "simplex"),
    ("method", "greedy"),
])
def test_sweep_config_rejects(key, value):
    with pytest.raises(ValueError):
        SweepConfig.from_dict({**BASE, key: value})


def test_with_overrides_skips_unset():
    config = SweepConfig.from_dict(BASE)
    changed = config.with_overrides(seed=7, tol=None, output=Path("x.csv"))
    assert changed.seed == 7
    assert changed.tol == config.tol
    assert changed.output == Path("x.csv")
    with pytest.raises(ValueError):
        config.with_overrides(grid_oversample=0)


def test_frequency_set():
    window = FrequencySet.window(3)
    assert window.sorted() == [-2, -1, 0, 1, 2]
    assert 2 in window and 3 not in window
    assert FrequencySet.of([]).padded(3).members == {0, 1, -1}
    assert FrequencySet.of([5]).padded(3, avoid=[0, 1]).members == {5, -1, 2}


def test_bound_report():
    report = BoundReport("eq-q5", 3, 2.0, 1.0, 2.0)
    assert report.passed
    assert report.ratio == 0.5
    assert report.to_row()["pass"] is True
    assert not BoundReport("x", 1, None, 1.0 + 1e-6, 1.0, 1e-9).passed
    assert BoundReport("x", 1, None, 1.0 + 1e-12, 1.0, 1e-9).passed
    assert BoundReport("x", 1, None, 0.0, 0.0).ratio == 0.0
    assert BoundReport("x", 1, None, 1.0, 0.0).ratio == math.inf
    assert report.to_row()["k_max"] is None


def test_bound_report_carries_scan_extent():
    report = BoundReport("class-P-dyadic", 4, None, 0.5, 64.0, k_max=65, m_max=5, witness_index=2)
    row = report.to_row()
    assert (row["k_max"], row["m_max"], row["witness_index"]) == (65, 5, 2)
    assert report.passed


def test_sweep_config_method():
    config = SweepConfig.from_dict({**BASE, "method": "linprog"})
    assert config.method is ApproxMethod.LINPROG
    assert config.solver_options.method is ApproxMethod.LINPROG
