# src/models/network_models.py
# 멜로디 생성 네트워크(LSTM / TCN) 설정 모델

from typing import List, Literal

from pydantic import BaseModel, Field, field_validator

from .score_models import CHORD_VOCAB, MELODY_VOCAB, PITCH_COUNT

ModelKind = Literal["uni", "bi", "tcn"]
MODEL_KINDS = ("uni", "bi", "tcn")


class LstmModelConfig(BaseModel):
    """LSTM 생성기 설정 (단방향 / 양방향 코드 인코더)"""

    layers: int = Field(default=7, ge=2, description="생성기 LSTM 층 수 (skip은 2층부터)")
    hidden: int = Field(default=128, gt=0, description="은닉 크기")
    bidirectional_context: bool = Field(
        default=False, description="True면 코드 전체를 보는 양방향 인코더 사용"
    )
    encoder_layers: int = Field(default=2, ge=1, description="방향별 코드 인코더 층 수")
    encoder_hidden: int = Field(default=64, gt=0, description="방향별 코드 인코더 은닉 크기")
    vocab_out: int = Field(default=MELODY_VOCAB, description="출력 클래스 수")

    @property
    def context_dim(self) -> int:
        """생성기 입력 중 코드 쪽 차원"""
        if self.bidirectional_context:
            return 2 * self.encoder_hidden
        return CHORD_VOCAB

    @property
    def input_dim(self) -> int:
        return MELODY_VOCAB + self.context_dim


class TcnConfig(BaseModel):
    """WaveNet 스타일 dilated causal convolution 스택 설정"""

    kernel: int = Field(default=2, ge=1, description="커널 크기 k")
    dilations: List[int] = Field(
        default_factory=lambda: [1, 2, 4, 8, 16, 32, 64, 128, 256],
        description="블록별 dilation",
    )
    residual_channels: int = Field(default=64, gt=0)
    skip_channels: int = Field(default=128, gt=0)
    vocab_out: int = Field(default=PITCH_COUNT)
    condition_dim: int = Field(default=CHORD_VOCAB)
    conditioned: bool = Field(default=True, description="False면 코드 조건 없는 스택")

    @field_validator("dilations")
    @classmethod
    def _check_dilations(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("dilation 목록이 비어 있습니다")
        if any(d < 1 for d in value):
            raise ValueError(f"dilation은 1 이상이어야 합니다: {value}")
        return value

    @property
    def receptive_field(self) -> int:
        return 1 + sum((self.kernel - 1) * d for d in self.dilations)
