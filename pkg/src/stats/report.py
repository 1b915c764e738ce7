# src/stats/report.py
# 세 모델 비교 리포트 (ANOVA 1개 + 쌍별 t-test 3개), 평점 CSV 입출력

import csv
import json
import logging
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
from pydantic import ValidationError

from src.models.stats_models import (
    ModelComparisonReport,
    PairwiseResult,
    RatingGroup,
    RatingsTable,
)

from .hypothesis import TTestVariant, one_way_anova, t_test
from .special import StatsDomainError

logger = logging.getLogger(__name__)

RATINGS_COLUMNS = ("sample_id", "model_name", "rating")
REPORT_COLUMNS = ("test", "first", "second", "statistic", "df", "p_value", "degenerate")


def evaluate_models(table: RatingsTable, variant: TTestVariant = "pooled") -> ModelComparisonReport:
    """
    세 모델 평점을 비교합니다.

    Args:
        table: 정확히 3개 그룹 (예: uni, bi, tcn)
        variant: 쌍별 t-test 종류

    Returns:
        ModelComparisonReport: ANOVA, 쌍별 t-test, 평균, 평균제곱오차, 표본 수

    Raises:
        StatsDomainError: 그룹이 3개가 아닌 경우
    """
    if len(table.groups) != 3:
        raise StatsDomainError(f"모델 비교에는 정확히 3개 그룹이 필요합니다: {table.names}")

    anova = one_way_anova(table)
    pairwise = [
        PairwiseResult(first=a.name, second=b.name, result=t_test(a.ratings, b.ratings, variant))
        for a, b in combinations(table.groups, 2)
    ]
    means = {g.name: float(np.mean(g.ratings)) for g in table.groups}
    # 그룹 평균에 대한 평균제곱오차 (모분산)
    mse = {g.name: float(np.var(g.ratings)) for g in table.groups}
    counts = {g.name: len(g.ratings) for g in table.groups}

    logger.info(
        f"모델 비교: ANOVA p={anova.p_value:.3g}, "
        + ", ".join(f"{p.first}-{p.second} p={p.result.p_value:.3g}" for p in pairwise)
    )
    return ModelComparisonReport(anova=anova, pairwise=pairwise, means=means, mse=mse, counts=counts)


def read_ratings_csv(path: Union[str, Path]) -> RatingsTable:
    """
    (sample_id, model_name, rating) CSV를 그룹별 평점 표로 읽습니다.

    그룹 순서는 파일에 처음 나온 순서를 따릅니다.

    Raises:
        StatsDomainError: 열이 없거나 평점이 숫자/척도가 아닌 경우
    """
    grouped: Dict[str, List[float]] = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        missing = [c for c in RATINGS_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise StatsDomainError(f"평점 CSV에 열이 없습니다: {missing}")
        for line_no, row in enumerate(reader, start=2):
            try:
                rating = float(row["rating"])
            except (TypeError, ValueError):
                raise StatsDomainError(f"{line_no}행: 평점이 숫자가 아닙니다: {row['rating']!r}") from None
            grouped.setdefault(row["model_name"].strip(), []).append(rating)

    try:
        table = RatingsTable(
            groups=[RatingGroup(name=name, ratings=ratings) for name, ratings in grouped.items()]
        )
    except ValidationError as e:
        raise StatsDomainError(f"평점 표 검증 실패: {e}") from e
    logger.info(f"평점 로드: {', '.join(f'{g.name}({len(g.ratings)})' for g in table.groups)}")
    return table


def report_rows(report: ModelComparisonReport) -> List[Dict[str, object]]:
    rows: List[Dict[str, object]] = [
        {
            "test": "anova",
            "first": "",
            "second": "",
            "statistic": report.anova.statistic,
            "df": "/".join(f"{d:g}" for d in report.anova.df),
            "p_value": report.anova.p_value,
            "degenerate": report.anova.degenerate,
        }
    ]
    for pair in report.pairwise:
        rows.append(
            {
                "test": "t",
                "first": pair.first,
                "second": pair.second,
                "statistic": pair.result.statistic,
                "df": f"{pair.result.df:g}",
                "p_value": pair.result.p_value,
                "degenerate": pair.result.degenerate,
            }
        )
    return rows


def write_report_csv(report: ModelComparisonReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(REPORT_COLUMNS), lineterminator="\n")
        writer.writeheader()
        writer.writerows(report_rows(report))
    return path


def write_report_json(report: ModelComparisonReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(json.loads(report.model_dump_json()), f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    return path
