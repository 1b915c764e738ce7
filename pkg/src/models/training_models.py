# src/models/training_models.py
# 학습/생성 파이프라인을 위한 데이터 모델

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .score_models import FRAMES_PER_BEAT, FrameSequence


class TrainConfig(BaseModel):
    """학습 옵션"""

    epochs: int = Field(default=10, ge=0, description="에폭 수")
    optimizer: Literal["adam", "sgd"] = Field(default="adam")
    lr: float = Field(default=1e-3, gt=0, description="학습률")
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)
    seed: int = Field(default=0)
    max_steps: Optional[int] = Field(
        default=None, ge=0, description="옵티마이저 스텝 상한 (과적합 점검용)"
    )
    progress: bool = Field(default=False, description="tqdm 진행바 표시 여부")


class EpochRecord(BaseModel):
    """에폭별 손실 기록 (nats/frame)"""

    epoch: int
    train_nats: float
    heldout_nats: Optional[float] = None


class CorpusSplit(BaseModel):
    """곡 단위로 분리된 학습/평가 코퍼스"""

    train: List[FrameSequence] = Field(default_factory=list)
    held_out: List[FrameSequence] = Field(default_factory=list)
    train_ids: List[str] = Field(default_factory=list, description="train 각 항목의 원곡 ID")
    held_out_ids: List[str] = Field(default_factory=list)
    augmented: bool = Field(default=False, description="train에 12조 전조 적용 여부")

    @model_validator(mode="after")
    def _check_disjoint(self) -> "CorpusSplit":
        leaked = set(self.train_ids) & set(self.held_out_ids)
        if leaked:
            raise ValueError(f"train/held-out 사이에 같은 원곡이 있습니다: {sorted(leaked)[:5]}")
        return self


class GenerationTask(BaseModel):
    """설문 프로토콜의 이어 생성 과제 (기본 20박 프라임 + 20박 생성)"""

    prime_beats: int = Field(default=20, ge=0)
    generate_beats: int = Field(default=20, ge=0)
    temperature: float = Field(
        default=1.0, ge=0, description="샘플링 온도 (0이면 argmax)"
    )
    seed: int = Field(default=0)

    def prime_frames(self, frames_per_beat: int = FRAMES_PER_BEAT) -> int:
        return self.prime_beats * frames_per_beat

    def total_frames(self, frames_per_beat: int = FRAMES_PER_BEAT) -> int:
        return (self.prime_beats + self.generate_beats) * frames_per_beat
