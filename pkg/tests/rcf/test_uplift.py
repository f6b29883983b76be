import io
import warnings

import numpy as np
import pytest

from refcast.exceptions import SmallSampleWarning
from refcast.rcf.benchmarks import LargeDamSummary
from refcast.rcf.uplift import DEFAULT_RISKS, UpliftCurve, debias, required_uplift
from refcast.stats.distribution import EmpiricalDistribution


def test_required_uplift_on_bundled_sketch():
    """The sketch encodes the published curve: 26 % at 50 % risk, 99 % at 20 % risk."""
    summary = LargeDamSummary.load()
    with warnings.catch_warnings():
        warnings.simplefilter("error", SmallSampleWarning)
        assert required_uplift(summary.cost, 0.5) == pytest.approx(0.26)
        assert required_uplift(summary.cost, 0.2) == pytest.approx(0.99)
        assert required_uplift(summary.schedule, 0.2) == pytest.approx(0.66)


def test_required_uplift_downlift_and_small_sample():
    dist = EmpiricalDistribution([0.6, 0.8, 0.9, 1.1])
    with pytest.warns(SmallSampleWarning, match="4 observations"):
        uplift = required_uplift(dist, 0.9)
    # q = 0.1 gives 0.6 + 0.3 * 0.2 = 0.66, a downlift of 34 %
    assert uplift == pytest.approx(-0.34)

    with pytest.raises(ValueError, match="acceptable_risk must be in"):
        required_uplift(dist, 1.0)
    with pytest.raises(ValueError, match="acceptable_risk must be in"):
        required_uplift(dist, 0.0)


def test_required_uplift_is_antitone_and_bounds_exceedance():
    """Lower acceptable risk never lowers the uplift.

    Interpolated quantiles can sit between two order statistics, so the share
    of the class still exceeding the revised estimate is below p + 1/n rather
    than below p; the brute-force count checks that bound.
    """
    rng = np.random.default_rng(11)
    risks = np.linspace(0.01, 0.99, 100)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallSampleWarning)
        for _ in range(20):
            dist = EmpiricalDistribution(rng.lognormal(0.1, 0.6, size=int(rng.integers(2, 60))))
            uplifts = np.array([required_uplift(dist, p) for p in risks])
            assert np.all(np.diff(uplifts) <= 1e-12)

            for p, u in zip(risks, uplifts):
                exceeding = np.count_nonzero(dist.sample > 1.0 + u + 1e-12) / dist.n
                assert exceeding < p + 1.0 / dist.n


def test_debias():
    """Diamer-Bhasha at 20 % risk: 894 * 1.99 = 1779.06."""
    assert debias(894.0, 0.99) == pytest.approx(1779.06)
    assert debias(120.0, 0.0) == 120.0
    assert debias(100.0, -0.34) == pytest.approx(66.0)

    with pytest.raises(ValueError, match="estimate must be positive"):
        debias(0.0, 0.5)
    with pytest.raises(ValueError, match="uplift must exceed -1"):
        debias(10.0, -1.0)


def test_uplift_curve_table_and_inverse():
    curve = LargeDamSummary.load().cost_curve()
    rows = curve.table([0.5, 0.2])

    assert rows == [(0.5, pytest.approx(26.0)), (0.2, pytest.approx(99.0))]
    assert curve(0.5) == pytest.approx(0.26)
    # 2 of 11 sketch points lie strictly above 1.99
    assert curve.risk_at(0.99) == pytest.approx(2 / 11)
    assert len(curve.table()) == len(DEFAULT_RISKS) == 19

    risks, uplifts = curve.grid(25)
    assert risks.shape == uplifts.shape == (25,)
    assert np.all(np.diff(uplifts) <= 1e-12)


def test_uplift_curve_to_csv():
    curve = LargeDamSummary.load().cost_curve()
    out = io.StringIO()
    curve.to_csv(out, risks=[0.5, 0.2])
    assert out.getvalue() == "acceptable_risk,uplift_pct\n0.5,26\n0.2,99\n"


def test_uplift_curve_table_warns_once_for_small_class():
    curve = UpliftCurve(EmpiricalDistribution([1.0, 1.5, 2.0]))
    with pytest.warns(SmallSampleWarning) as record:
        curve.table([0.5, 0.2, 0.1])
    assert len(record) == 1
