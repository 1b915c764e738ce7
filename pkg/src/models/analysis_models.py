# src/models/analysis_models.py
# VMO 패턴 분석 결과 모델

from typing import List

from pydantic import BaseModel, Field, model_validator


class IRCurve(BaseModel):
    """θ 스윕에 따른 Information Rate 곡선"""

    thetas: List[float] = Field(..., min_length=1)
    ir_totals: List[float] = Field(..., min_length=1)
    best_theta: float
    estimator: str = Field(default="compror")

    @model_validator(mode="after")
    def _check_lengths(self) -> "IRCurve":
        if len(self.thetas) != len(self.ir_totals):
            raise ValueError("thetas와 ir_totals 길이가 다릅니다")
        return self

    @property
    def best_index(self) -> int:
        return self.thetas.index(self.best_theta)


class Motif(BaseModel):
    """반복 모티프 하나: 길이와 각 등장의 끝 상태"""

    length: int = Field(..., gt=0)
    occurrences: List[int] = Field(..., description="등장 위치의 끝 상태 인덱스 (1-based)")

    def spans(self) -> List[range]:
        """등장 구간 (상태 인덱스 기준, 양끝 포함)"""
        return [range(end - self.length + 1, end + 1) for end in self.occurrences]


class PatternSet(BaseModel):
    """시퀀스에서 찾은 모티프 목록"""

    motifs: List[Motif] = Field(default_factory=list)
    min_len: int = Field(default=4)
    sequence_length: int = Field(default=0)

    def covered_states(self) -> List[int]:
        """어느 모티프 등장이든 덮는 상태 인덱스들"""
        covered = set()
        for motif in self.motifs:
            for span in motif.spans():
                covered.update(span)
        return sorted(covered)


class SampleSummary(BaseModel):
    """샘플 그룹 비교용 요약 한 줄"""

    name: str
    frames: int = Field(..., ge=0, description="분석한 박 단위 프레임 수")
    best_theta: float
    best_ir: float
    motif_count: int = Field(..., ge=0)
    longest_motif: int = Field(default=0, ge=0)
    covered_frames: int = Field(..., ge=0, description="모티프 등장이 덮는 프레임 수")

    @property
    def covered_ratio(self) -> float:
        return self.covered_frames / self.frames if self.frames else 0.0
