# src/models/stats_models.py
# 평가 설문 통계(ANOVA / t-test)를 위한 데이터 모델

from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

RATING_MIN = 1.0
RATING_MAX = 5.0


class RatingGroup(BaseModel):
    """모델 하나에 대한 평점 묶음"""

    name: str = Field(..., description="모델 이름")
    ratings: List[float] = Field(..., min_length=1, description="1~5 연속 척도 평점")

    @field_validator("ratings")
    @classmethod
    def _check_scale(cls, value: List[float]) -> List[float]:
        bad = [r for r in value if not RATING_MIN <= r <= RATING_MAX]
        if bad:
            raise ValueError(f"평점이 척도({RATING_MIN}-{RATING_MAX})를 벗어났습니다: {bad[:5]}")
        return value


class RatingsTable(BaseModel):
    """그룹별 평점 표"""

    groups: List[RatingGroup] = Field(default_factory=list)

    def group(self, name: str) -> RatingGroup:
        for group in self.groups:
            if group.name == name:
                return group
        raise KeyError(name)

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.groups]


class TestResult(BaseModel):
    """가설 검정 결과"""

    __test__ = False  # pytest 수집 대상 아님

    test_kind: Literal["anova", "t"]
    statistic: float
    df: Union[Tuple[float, float], float]
    p_value: float = Field(..., ge=0.0, le=1.0)
    degenerate: bool = Field(default=False, description="분산 0 등으로 통계량이 퇴화한 경우")
    note: Optional[str] = None


class PairwiseResult(BaseModel):
    """두 모델 사이의 t-test"""

    first: str
    second: str
    result: TestResult


class ModelComparisonReport(BaseModel):
    """세 모델 비교 리포트 (ANOVA 1개 + 쌍별 t-test 3개)"""

    anova: TestResult
    pairwise: List[PairwiseResult]
    means: Dict[str, float]
    mse: Dict[str, float] = Field(..., description="그룹 평균 기준 평균제곱오차 (에러바)")
    counts: Dict[str, int]
