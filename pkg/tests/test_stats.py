# tests/test_stats.py
# 불완전 베타, ANOVA, t-test, 모델 비교 리포트 테스트

import csv
import json

import numpy as np
import pytest
from scipy import special as sp_special
from scipy import stats as sp_stats

from src.models.stats_models import RatingGroup, RatingsTable
from src.stats import (
    StatsDomainError,
    evaluate_models,
    one_way_anova,
    read_ratings_csv,
    reg_inc_beta,
    t_test,
    write_report_csv,
    write_report_json,
)
from src.stats.hypothesis import f_survival, t_two_sided


def _table(**groups):
    return RatingsTable(groups=[RatingGroup(name=name, ratings=values) for name, values in groups.items()])


# ------------------------------------------------------------------ 불완전 베타


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (1.0, 3.0), (2.5, 7.0), (30.0, 0.5), (100.0, 120.0)])
def test_reg_inc_beta_matches_scipy(a, b):
    for x in np.linspace(0.0, 1.0, 41):
        assert reg_inc_beta(float(x), a, b) == pytest.approx(sp_special.betainc(a, b, x), abs=1e-9)


def test_reg_inc_beta_is_monotone_in_x():
    values = [reg_inc_beta(float(x), 3.0, 4.0) for x in np.linspace(0.0, 1.0, 101)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[0] == 0.0
    assert values[-1] == 1.0


@pytest.mark.parametrize("x, a, b", [(-0.1, 1.0, 1.0), (1.1, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, -2.0)])
def test_reg_inc_beta_domain(x, a, b):
    with pytest.raises(StatsDomainError):
        reg_inc_beta(x, a, b)


def test_distribution_tails_match_scipy():
    assert f_survival(3.0, 2.0, 6.0) == pytest.approx(sp_stats.f.sf(3.0, 2, 6), abs=1e-12)
    assert t_two_sided(-2.1, 13.0) == pytest.approx(2 * sp_stats.t.sf(2.1, 13), abs=1e-12)
    assert f_survival(float("inf"), 2.0, 6.0) == 0.0


# ------------------------------------------------------------------ ANOVA


def test_anova_known_example():
    result = one_way_anova(_table(a=[1, 2, 3], b=[2, 3, 4], c=[3, 4, 5]))
    assert result.statistic == pytest.approx(3.0)
    assert result.df == (2.0, 6.0)
    assert result.p_value == pytest.approx(0.125)
    assert not result.degenerate


def test_anova_matches_scipy():
    rng = np.random.default_rng(0)
    groups = {name: np.clip(rng.normal(3.0, 0.8, size=n), 1, 5).tolist() for name, n in zip("xyz", (8, 11, 6))}
    result = one_way_anova(_table(**groups))
    expected = sp_stats.f_oneway(*groups.values())
    assert result.statistic == pytest.approx(expected.statistic, rel=1e-10)
    assert result.p_value == pytest.approx(expected.pvalue, abs=1e-9)


def test_anova_degenerate_cases():
    constant = one_way_anova(_table(a=[2, 2], b=[2, 2], c=[2, 2]))
    assert constant.degenerate
    assert constant.p_value == 1.0
    assert np.isnan(constant.statistic)

    separated = one_way_anova(_table(a=[1, 1], b=[3, 3]))
    assert separated.degenerate
    assert separated.p_value == 0.0
    assert separated.statistic == float("inf")


def test_anova_rejects_small_inputs():
    with pytest.raises(StatsDomainError):
        one_way_anova(_table(a=[1, 2, 3]))
    with pytest.raises(StatsDomainError):
        one_way_anova(_table(a=[1, 2], b=[3]))


def test_f_equals_t_squared_for_two_groups():
    a, b = [1.0, 2.5, 3.0, 4.2], [2.0, 3.5, 4.0, 4.8, 5.0]
    anova = one_way_anova(_table(a=a, b=b))
    pooled = t_test(a, b)
    assert anova.statistic == pytest.approx(pooled.statistic**2, rel=1e-12)
    assert anova.p_value == pytest.approx(pooled.p_value, abs=1e-12)


# ------------------------------------------------------------------ t-test


def test_pooled_t_known_example():
    result = t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert result.statistic == pytest.approx(-1.0)
    assert result.df == 8.0
    expected = sp_stats.ttest_ind([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert result.p_value == pytest.approx(expected.pvalue, abs=1e-12)


def test_welch_matches_scipy():
    a, b = [1.0, 1.2, 0.9, 1.1], [2.0, 3.5, 1.0, 4.8, 2.2, 3.9]
    result = t_test(a, b, variant="welch")
    expected = sp_stats.ttest_ind(a, b, equal_var=False)
    assert result.statistic == pytest.approx(expected.statistic, rel=1e-12)
    assert result.p_value == pytest.approx(expected.pvalue, abs=1e-10)
    assert result.df < 8.0


def test_t_test_degenerate_cases():
    same = t_test([3, 3, 3], [3, 3])
    assert same.degenerate
    assert same.p_value == 1.0
    apart = t_test([1, 1, 1], [4, 4])
    assert apart.degenerate
    assert apart.p_value == 0.0
    assert apart.statistic == float("-inf")


def test_t_test_rejects_bad_input():
    with pytest.raises(StatsDomainError):
        t_test([1.0], [2.0, 3.0])
    with pytest.raises(StatsDomainError):
        t_test([1.0, 2.0], [2.0, 3.0], variant="paired")


def test_p_value_shrinks_as_groups_separate():
    base = [2.0, 2.5, 3.0, 3.5]
    p_values = [t_test(base, [v + shift for v in base]).p_value for shift in (0.0, 0.5, 1.0, 1.5)]
    assert p_values[0] == pytest.approx(1.0)
    assert all(b < a for a, b in zip(p_values, p_values[1:]))


@pytest.mark.slow
def test_false_positive_rate_under_null():
    rng = np.random.default_rng(12)
    rejections = 0
    p_values = []
    for _ in range(10_000):
        a, b = rng.normal(3.0, 0.3, size=10), rng.normal(3.0, 0.3, size=10)
        p_value = t_test(a.tolist(), b.tolist()).p_value
        p_values.append(p_value)
        rejections += p_value < 0.05
    assert rejections / 10_000 == pytest.approx(0.05, abs=0.01)
    assert sp_stats.kstest(p_values, "uniform").statistic < 0.05


# ------------------------------------------------------------------ 모델 비교 리포트


def test_evaluate_models_report():
    table = _table(uni=[3.0, 3.5, 2.5, 3.0], bi=[4.0, 4.5, 3.5, 4.0], tcn=[2.0, 2.5, 1.5, 2.0])
    report = evaluate_models(table)
    assert [(p.first, p.second) for p in report.pairwise] == [("uni", "bi"), ("uni", "tcn"), ("bi", "tcn")]
    assert report.means == {"uni": 3.0, "bi": 4.0, "tcn": 2.0}
    assert report.mse["uni"] == pytest.approx(0.125)
    assert report.counts == {"uni": 4, "bi": 4, "tcn": 4}
    assert report.anova.p_value < 0.01


def test_evaluate_models_needs_three_groups():
    with pytest.raises(StatsDomainError):
        evaluate_models(_table(a=[1, 2], b=[2, 3]))


def test_report_writers(tmp_path):
    report = evaluate_models(_table(uni=[1, 2, 3], bi=[2, 3, 4], tcn=[3, 4, 5]))
    csv_path = write_report_csv(report, tmp_path / "report.csv")
    with open(csv_path, encoding="utf-8", newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 4
    assert rows[0]["test"] == "anova"
    assert rows[0]["df"] == "2/6"
    assert [row["test"] for row in rows[1:]] == ["t", "t", "t"]

    json_path = write_report_json(report, tmp_path / "report.json")
    data = json.loads(json_path.read_text(encoding="utf-8"))
    assert data["anova"]["p_value"] == pytest.approx(0.125)
    assert len(data["pairwise"]) == 3


def test_read_ratings_csv(tmp_path):
    path = tmp_path / "ratings.csv"
    path.write_text(
        "sample_id,model_name,rating\n"
        "s1,tcn,3.5\ns1,uni,2\ns2,tcn,4\ns2,uni,2.5\ns1,bi,5\n",
        encoding="utf-8",
    )
    table = read_ratings_csv(path)
    assert table.names == ["tcn", "uni", "bi"]
    assert table.group("uni").ratings == [2.0, 2.5]


@pytest.mark.parametrize(
    "content",
    [
        "sample_id,rating\ns1,3\n",
        "sample_id,model_name,rating\ns1,uni,good\n",
        "sample_id,model_name,rating\ns1,uni,7\n",
    ],
)
def test_read_ratings_csv_errors(tmp_path, content):
    path = tmp_path / "ratings.csv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(StatsDomainError):
        read_ratings_csv(path)
