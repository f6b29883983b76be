import io

import numpy as np
import pytest

from refcast.stats.density import kde_density, silverman_bandwidth
from refcast.stats.distribution import EmpiricalDistribution, fraction_above, quantile, summarize
from refcast.stats.export import write_xy_csv


def test_empirical_distribution_sorts_and_validates():
    dist = EmpiricalDistribution([2.0, 0.5, 1.0], label="toy")
    assert list(dist.sample) == [0.5, 1.0, 2.0]
    assert dist.n == len(dist) == 3
    assert dist.represented_n == 3
    assert dist.mean == pytest.approx(3.5 / 3)

    sketch = EmpiricalDistribution([1.0, 2.0], represented_n=245)
    assert sketch.represented_n == 245

    with pytest.raises(ValueError, match="at least one value"):
        EmpiricalDistribution([])
    with pytest.raises(ValueError, match="finite and > 0"):
        EmpiricalDistribution([1.0, 0.0])
    with pytest.raises(ValueError, match="finite and > 0"):
        EmpiricalDistribution([1.0, np.inf])


def test_quantile_linear_interpolation():
    """h = (n - 1) q + 1 on [1, 2, 3, 4]: q = 0.25 gives 1.75 and q = 0.8 gives 3.4."""
    dist = EmpiricalDistribution([4.0, 1.0, 3.0, 2.0])
    assert quantile(dist, 0.25) == pytest.approx(1.75)
    assert quantile(dist, 0.8) == pytest.approx(3.4)
    assert quantile(dist, 0.0) == 1.0
    assert quantile(dist, 1.0) == 4.0

    single = EmpiricalDistribution([1.3])
    assert quantile(single, 0.37) == 1.3

    with pytest.raises(ValueError, match="q must be in"):
        quantile(dist, 1.5)


def test_summarize():
    """Sample 0.5, 1.0, 1.5, 2.5, 4.0 checked by hand."""
    summary = summarize(EmpiricalDistribution([0.5, 1.0, 1.5, 2.5, 4.0]))

    assert summary.n == 5
    assert summary.mean == pytest.approx(1.9)
    assert summary.median == pytest.approx(1.5)
    assert summary.iqr == pytest.approx(1.5)
    assert summary.fraction_above == {1.0: 0.6, 2.0: 0.4, 3.0: 0.2}
    assert summary.to_dict()["fraction_above"] == {"1": 0.6, "2": 0.4, "3": 0.2}


def test_fraction_above_is_strict():
    dist = EmpiricalDistribution([1.0, 1.0, 2.0, 3.0])
    assert fraction_above(dist, 1.0) == 0.5
    assert fraction_above(dist, 3.0) == 0.0


def test_silverman_bandwidth():
    """For {0, 1} the IQR term 0.5 / 1.34 is below the sd, h = 0.9 * 0.3731 * 2^(-1/5)."""
    assert silverman_bandwidth([0.0, 1.0]) == pytest.approx(0.9 * (0.5 / 1.34) * 2 ** -0.2)
    assert silverman_bandwidth([0.0, 1.0]) == pytest.approx(0.2923, abs=1e-4)

    with pytest.raises(ValueError, match="at least 2"):
        silverman_bandwidth([1.0])
    with pytest.raises(ValueError, match="zero spread"):
        silverman_bandwidth([1.0, 1.0, 1.0])


def test_kde_density_grid_and_mass():
    sample = [0.8, 1.0, 1.1, 1.3, 1.6, 2.4, 3.5]
    trace = kde_density(sample, grid_points=400)
    x = np.array([p[0] for p in trace])
    y = np.array([p[1] for p in trace])
    h = silverman_bandwidth(sample)

    assert len(trace) == 400
    assert x[0] == pytest.approx(0.8 - 3 * h)
    assert x[-1] == pytest.approx(3.5 + 3 * h)
    assert np.all(np.diff(x) > 0)
    assert np.all(y >= 0)
    assert float(np.sum(y) * (x[1] - x[0])) == pytest.approx(1.0, abs=0.01)

    with pytest.raises(ValueError, match="grid_points"):
        kde_density(sample, grid_points=1)


def test_write_xy_csv():
    out = io.StringIO()
    write_xy_csv([(0.2, 99.0), (0.5, 26.0)], ("acceptable_risk", "uplift_pct"), out)
    assert out.getvalue() == "acceptable_risk,uplift_pct\n0.2,99\n0.5,26\n"
