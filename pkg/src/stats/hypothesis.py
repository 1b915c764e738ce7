# src/stats/hypothesis.py
# 일원분산분석(ANOVA)과 두 표본 t-test

import logging
import math
from typing import List, Literal, Sequence, Tuple

from src.models.stats_models import RatingsTable, TestResult

from .special import StatsDomainError, reg_inc_beta

logger = logging.getLogger(__name__)

TTestVariant = Literal["pooled", "welch"]


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _sum_squares(values: Sequence[float], center: float) -> float:
    return math.fsum((v - center) ** 2 for v in values)


def f_survival(f_value: float, df_between: float, df_within: float) -> float:
    """P(F ≥ f) = I_{d2/(d2+d1 f)}(d2/2, d1/2)"""
    if math.isinf(f_value):
        return 0.0
    x = df_within / (df_within + df_between * f_value)
    return reg_inc_beta(x, df_within / 2.0, df_between / 2.0)


def t_two_sided(t_value: float, df: float) -> float:
    """P(|T| ≥ |t|) = I_{df/(df+t²)}(df/2, 1/2)"""
    if math.isinf(t_value):
        return 0.0
    return reg_inc_beta(df / (df + t_value * t_value), df / 2.0, 0.5)


def one_way_anova(table: RatingsTable) -> TestResult:
    """
    일원분산분석 F-test (H0: 모든 그룹 평균이 같다).

    그룹 내 분산이 0이면 통계량이 퇴화합니다: 그룹 간 차이가 있으면 p=0, 모든 값이
    같으면 F를 정의할 수 없으므로 p=1로 보고하고 둘 다 degenerate로 표시합니다.

    Args:
        table: 그룹별 평점 (2개 이상 그룹, 그룹당 2개 이상)

    Returns:
        TestResult: F, (df_between, df_within), p-value

    Raises:
        StatsDomainError: 그룹 수나 그룹 크기가 부족한 경우
    """
    groups: List[List[float]] = [list(g.ratings) for g in table.groups]
    if len(groups) < 2:
        raise StatsDomainError(f"ANOVA에는 그룹이 2개 이상 필요합니다: {len(groups)}")
    small = [g.name for g in table.groups if len(g.ratings) < 2]
    if small:
        raise StatsDomainError(f"평점이 2개 미만인 그룹: {small}")

    everything = [v for g in groups for v in g]
    grand_mean = _mean(everything)
    ss_between = math.fsum(len(g) * (_mean(g) - grand_mean) ** 2 for g in groups)
    ss_within = math.fsum(_sum_squares(g, _mean(g)) for g in groups)
    df_between = float(len(groups) - 1)
    df_within = float(len(everything) - len(groups))
    df: Tuple[float, float] = (df_between, df_within)

    if ss_within == 0.0:
        if ss_between == 0.0:
            logger.warning("모든 평점이 같아 F를 정의할 수 없습니다")
            return TestResult(
                test_kind="anova", statistic=float("nan"), df=df, p_value=1.0,
                degenerate=True, note="모든 값이 동일",
            )
        logger.warning("그룹 내 분산이 0이라 F가 무한대입니다")
        return TestResult(
            test_kind="anova", statistic=float("inf"), df=df, p_value=0.0,
            degenerate=True, note="그룹 내 분산 0",
        )

    f_value = (ss_between / df_between) / (ss_within / df_within)
    p_value = f_survival(f_value, df_between, df_within)
    logger.debug(f"ANOVA F={f_value:.6g}, df={df}, p={p_value:.6g}")
    return TestResult(test_kind="anova", statistic=f_value, df=df, p_value=p_value)


def t_test(
    a: Sequence[float], b: Sequence[float], variant: TTestVariant = "pooled"
) -> TestResult:
    """
    독립 두 표본 양측 t-test (H0: 두 평균이 같다).

    Args:
        a: 첫 번째 표본 (2개 이상)
        b: 두 번째 표본 (2개 이상)
        variant: "pooled" (등분산) 또는 "welch" (Welch–Satterthwaite 자유도)

    Returns:
        TestResult: t, df, 양측 p-value

    Raises:
        StatsDomainError: 표본이 2개 미만이거나 variant를 모르는 경우
    """
    if len(a) < 2 or len(b) < 2:
        raise StatsDomainError(f"각 표본은 2개 이상이어야 합니다: {len(a)}, {len(b)}")
    if variant not in ("pooled", "welch"):
        raise StatsDomainError(f"알 수 없는 t-test 종류: {variant}")

    n_a, n_b = len(a), len(b)
    mean_a, mean_b = _mean(a), _mean(b)
    var_a = _sum_squares(a, mean_a) / (n_a - 1)
    var_b = _sum_squares(b, mean_b) / (n_b - 1)
    pooled_df = float(n_a + n_b - 2)

    if variant == "pooled":
        pooled_var = ((n_a - 1) * var_a + (n_b - 1) * var_b) / pooled_df
        se = math.sqrt(pooled_var * (1.0 / n_a + 1.0 / n_b))
        df = pooled_df
    else:
        se_a, se_b = var_a / n_a, var_b / n_b
        se = math.sqrt(se_a + se_b)
        denominator = se_a**2 / (n_a - 1) + se_b**2 / (n_b - 1)
        df = (se_a + se_b) ** 2 / denominator if denominator > 0 else pooled_df

    difference = mean_a - mean_b
    if se == 0.0:
        if difference == 0.0:
            return TestResult(
                test_kind="t", statistic=0.0, df=df, p_value=1.0,
                degenerate=True, note="두 표본 모두 분산 0, 평균 같음",
            )
        logger.warning("두 표본 모두 분산이 0이라 t가 무한대입니다")
        return TestResult(
            test_kind="t", statistic=math.copysign(float("inf"), difference), df=df,
            p_value=0.0, degenerate=True, note="두 표본 모두 분산 0",
        )

    t_value = difference / se
    p_value = t_two_sided(t_value, df)
    logger.debug(f"t-test({variant}) t={t_value:.6g}, df={df:.6g}, p={p_value:.6g}")
    return TestResult(test_kind="t", statistic=t_value, df=df, p_value=p_value)
