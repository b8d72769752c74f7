import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from buildecarb import (
    EndUse,
    FactorVector,
    PeriodWindow,
    chain_decompose,
    decompose_period,
    derive_factors,
    intensity_from_factors,
    log_mean,
    parse_stages,
    path_integral_oracle,
    stage_decompose,
    substitute_zeros,
)
from buildecarb.errors import (
    DegenerateState,
    FewerThanTwoYears,
    GapInSeries,
    IdentityMismatch,
    InvalidWindow,
    NonPositiveInput,
    SectorMismatch,
)
from helpers import random_pair, raw_records, worked_pair


class TestLogMean:
    def test_equal(self):
        assert log_mean(1, 1) == 1

    def test_closed_form(self):
        expected = 6 / math.log(4)
        assert log_mean(2, 8) == pytest.approx(expected, rel=1e-15)
        assert log_mean(2, 8) == pytest.approx(4.328085, abs=1e-6)

    def test_non_positive(self):
        with pytest.raises(NonPositiveInput):
            log_mean(0, 1)

    @given(st.floats(1e-30, 1e30), st.floats(1e-30, 1e30))
    def test_symmetric_and_bounded(self, a, b):
        m = log_mean(a, b)
        assert m == log_mean(b, a)
        assert min(a, b) * (1 - 1e-15) <= m <= max(a, b) * (1 + 1e-15)

    def test_near_equal_series(self):
        # L(a, a(1+x)) = a (1 + x/2 - x^2/12 + x^3/24 ...) for small x
        a, x = 3.0, 1e-7
        series = a * (1 + x / 2 - x * x / 12 + x**3 / 24)
        assert log_mean(a, a * (1 + x)) == pytest.approx(series, rel=1e-15)


class TestDecomposePeriod:
    def test_no_change(self):
        fv0, _ = worked_pair()
        cs = decompose_period(fv0, fv0)
        assert all(v == 0 for v in cs.per_factor.values())
        assert cs.delta_total == 0

    def test_single_factor(self):
        fv0 = FactorVector.build("residential", dict(pr=2, gr=10, hr=0.5, er=0.1), {"lighting": 1}, {"lighting": 2})
        fvT = FactorVector.build("residential", dict(pr=2, gr=20, hr=0.5, er=0.1), {"lighting": 1}, {"lighting": 2})
        cs = decompose_period(fv0, fvT)
        assert cs.per_factor["gr"] == pytest.approx(2.0, rel=1e-15)
        assert {k: v for k, v in cs.per_factor.items() if k != "gr"} == dict.fromkeys(["pr", "hr", "er", "s", "k"], 0.0)

    def test_worked_example(self):
        fv0, fvT = worked_pair()
        cs = decompose_period(fv0, fvT)
        weight = 4 / math.log(3)
        assert cs.per_factor["pr"] == pytest.approx(weight * math.log(1.5), rel=1e-14)
        assert cs.per_factor["gr"] == pytest.approx(weight * math.log(2), rel=1e-14)
        assert cs.per_factor["pr"] == pytest.approx(1.476, abs=1e-3)
        assert cs.per_factor["gr"] == pytest.approx(2.524, abs=1e-3)
        assert abs(sum(cs.per_factor.values()) - 4.0) <= 1e-9
        assert cs.window == PeriodWindow(2000, 2001)

    def test_detail_sums(self):
        rng = np.random.default_rng(0)
        fv0, fvT = random_pair(rng, "commercial")
        cs = decompose_period(fv0, fvT)
        for name in ("e", "k"):
            assert cs.per_factor[name] == pytest.approx(math.fsum(cs.per_enduse_detail[name].values()), rel=1e-12)
        for j, total in cs.per_enduse_total.items():
            c0 = intensity_from_factors(fv0).per_enduse[j]
            cT = intensity_from_factors(fvT).per_enduse[j]
            assert total == pytest.approx(cT - c0, rel=1e-9, abs=1e-12)

    @pytest.mark.parametrize("sector", ["residential", "commercial"])
    def test_closure_and_antisymmetry(self, sector):
        rng = np.random.default_rng(1)
        for _ in range(200):
            fv0, fvT = random_pair(rng, sector)
            fwd = decompose_period(fv0, fvT)
            back = decompose_period(fvT, fv0)
            assert abs(sum(fwd.per_factor.values()) - fwd.delta_total) <= 1e-9 * max(1, abs(fwd.delta_total))
            for k in fwd.per_factor:
                assert abs(fwd.per_factor[k] + back.per_factor[k]) <= 1e-12 * max(1, abs(fwd.per_factor[k]))

    def test_sector_mismatch(self):
        rng = np.random.default_rng(2)
        a, _ = random_pair(rng, "residential")
        b, _ = random_pair(rng, "commercial")
        with pytest.raises(SectorMismatch):
            decompose_period(a, b)

    def test_observed_intensity_checked(self):
        fv0, fvT = worked_pair()
        p0 = intensity_from_factors(fv0)
        pT = intensity_from_factors(fvT)
        decompose_period((fv0, p0), (fvT, pT))
        bad = type(pT)(pT.sector, pT.intensity * 1.01, pT.per_enduse)
        with pytest.raises(IdentityMismatch):
            decompose_period((fv0, p0), (fvT, bad))

    def test_underflow_is_degenerate(self):
        fv0, fvT = worked_pair()
        with pytest.raises(DegenerateState):
            decompose_period(fv0, fvT, delta=1e-200)


class TestOracle:
    def test_no_change(self):
        fv0, _ = worked_pair()
        for steps in (1, 7, 100):
            cs = path_integral_oracle(fv0, fv0, steps)
            assert all(v == 0 for v in cs.per_factor.values())

    def test_worked_example(self):
        fv0, fvT = worked_pair()
        exact = decompose_period(fv0, fvT)
        approx = path_integral_oracle(fv0, fvT, 10**5)
        for k in ("pr", "gr"):
            assert approx.per_factor[k] == pytest.approx(exact.per_factor[k], rel=1e-6)

    def test_convergence_sweep(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            fv0, fvT = random_pair(rng, "residential")
            exact = decompose_period(fv0, fvT)
            errs = []
            for steps in (1, 10, 100, 1000, 10**4, 10**5):
                o = path_integral_oracle(fv0, fvT, steps)
                errs.append(max(abs(o.per_factor[k] - exact.per_factor[k]) for k in exact.per_factor))
            assert all(b < a for a, b in zip(errs, errs[1:])), errs


class TestSubstituteZeros:
    def test_targeted(self):
        fv = FactorVector.build("residential", dict(pr=2, gr=10, hr=0.5, er=0.1),
                                {"space_heating": 0.5, "space_cooling": 0.5, "lighting": 0.0},
                                {"space_heating": 2, "space_cooling": 3})
        out = substitute_zeros(fv)
        assert out.structure[EndUse.LIGHTING] == 1e-20
        assert out.emission_factor[EndUse.LIGHTING] == 1e-20
        assert out.structure[EndUse.SPACE_HEATING] == 0.5
        assert out.common == fv.common

    def test_identity_without_zeros(self):
        fv, _ = random_pair(np.random.default_rng(6), "commercial")
        assert substitute_zeros(fv) == fv

    def test_appearing_end_use_stable(self):
        rng = np.random.default_rng(7)
        m0, r0 = raw_records(rng, "residential", year=2000, zero=("space_cooling",))
        m1, r1 = raw_records(rng, "residential", year=2001)
        f0, f1 = derive_factors(m0, r0), derive_factors(m1, r1)
        a = decompose_period(f0, f1, delta=1e-10)
        b = decompose_period(f0, f1, delta=1e-20)
        target = intensity_from_factors(f1).per_enduse[EndUse.SPACE_COOLING]
        assert b.per_enduse_total[EndUse.SPACE_COOLING] == pytest.approx(target, rel=1e-15)
        assert a.per_enduse_total[EndUse.SPACE_COOLING] == pytest.approx(
            b.per_enduse_total[EndUse.SPACE_COOLING], rel=1e-6)


def _series(rng, years, sector="residential"):
    out = []
    for y in years:
        m, recs = raw_records(rng, sector, year=y)
        fv = derive_factors(m, recs)
        out.append((fv, intensity_from_factors(fv)))
    return out


class TestChain:
    def test_two_years_equals_period(self):
        s = _series(np.random.default_rng(8), [2000, 2001])
        chain = chain_decompose(s)
        single = decompose_period(s[0], s[1])
        assert chain.periods[0].per_factor == single.per_factor
        assert chain.cumulative == single.per_factor

    def test_three_years_telescope(self):
        s = _series(np.random.default_rng(9), [2000, 2001, 2002])
        chain = chain_decompose(s)
        assert chain.cumulative_delta == pytest.approx(chain.delta_total, abs=1e-9 * max(1, abs(chain.delta_total)))

    def test_21_years_against_oracle(self):
        s = _series(np.random.default_rng(10), range(2000, 2021))
        chain = chain_decompose(s)
        assert len(chain.periods) == 20
        assert chain.cumulative["gr"] == math.fsum(p.per_factor["gr"] for p in chain.periods)
        oracle = math.fsum(path_integral_oracle(a, b, 10**4).per_factor["gr"] for a, b in zip(s, s[1:]))
        assert chain.cumulative["gr"] == pytest.approx(oracle, rel=1e-4)

    def test_errors(self):
        s = _series(np.random.default_rng(11), [2000, 2001, 2003])
        with pytest.raises(GapInSeries):
            chain_decompose(s)
        with pytest.raises(FewerThanTwoYears):
            chain_decompose(s[:1])

    def test_stage_mode(self):
        s = _series(np.random.default_rng(12), range(2000, 2011))
        stages = parse_stages("2001-2005,2006-2010")
        assert stages == [PeriodWindow(2000, 2005), PeriodWindow(2005, 2010)]
        chain = stage_decompose(s, stages)
        assert [p.window for p in chain.periods] == stages
        assert chain.cumulative_delta == pytest.approx(chain.delta_total, rel=1e-12)


def test_window_validation():
    with pytest.raises(InvalidWindow):
        PeriodWindow(2005, 2005)
    assert PeriodWindow(2000, 2005).label() == "2001-2005"
    assert PeriodWindow(2004, 2005).label() == "2005"
    assert PeriodWindow.from_label("2005") == PeriodWindow(2004, 2005)
    with pytest.raises(InvalidWindow):
        PeriodWindow.from_label("2005-2001")
    assert PeriodWindow(2000, 2005).covers(2005) and not PeriodWindow(2000, 2005).covers(2000)
