# src/generators/base.py
# 멜로디 생성 모델 공통 인터페이스와 생성 세션

import logging
from abc import ABC, abstractmethod
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from src.models.score_models import FrameSequence
from src.numerics.checkpoint import Checkpoint
from src.numerics.param_store import ParamStore
from src.numerics.tensor_ops import softmax_xent

logger = logging.getLogger(__name__)


class GenerationSession(ABC):
    """
    자기회귀 생성 상태. 위치 t의 logits를 계산하고, 라벨을 확정하면 t가 1 증가합니다.

    라벨 공간은 모델의 출력 어휘를 따릅니다 (LSTM 130, TCN 128).
    """

    def __init__(self, chords_full: List[int]):
        self.chords_full = list(chords_full)
        self.position = 0

    @property
    def remaining(self) -> int:
        return len(self.chords_full) - self.position

    @abstractmethod
    def next_logits(self) -> np.ndarray:
        """현재 위치의 logits (vocab,)"""

    @abstractmethod
    def push(self, label: int) -> None:
        """현재 위치의 라벨을 확정하고 다음 위치로 이동"""


class MelodyModel(ABC):
    """
    교사 강제 학습과 생성이 가능한 멜로디 모델.

    파라미터는 모두 ParamStore에 이름으로 저장되고, forward는 캐시를 돌려주며
    backward는 기울기를 store.grads에 누적합니다.
    """

    kind: str = ""

    def __init__(self, config: BaseModel, store: Optional[ParamStore] = None, seed: int = 0):
        self.config = config
        if store is None:
            store = ParamStore()
            self.init_params(store, np.random.default_rng(seed))
            logger.debug(f"{self.kind} 모델 초기화: 파라미터 {store.num_parameters()}개")
        self.store = store

    @property
    def vocab(self) -> int:
        return self.config.vocab_out

    @abstractmethod
    def init_params(self, store: ParamStore, rng: np.random.Generator) -> None:
        """store에 파라미터를 등록"""

    @abstractmethod
    def forward(self, frames: FrameSequence) -> Tuple[np.ndarray, Any]:
        """(T, vocab) logits와 역전파용 캐시"""

    @abstractmethod
    def backward(self, cache: Any, dlogits: np.ndarray) -> None:
        """dlogits를 역전파해 store.grads에 누적"""

    @abstractmethod
    def targets(self, frames: FrameSequence) -> np.ndarray:
        """교사 강제 학습의 정답 라벨 (T,)"""

    @abstractmethod
    def start_session(self, chords_full: List[int]) -> GenerationSession:
        """chords_full 전체 길이에 대한 생성 세션"""

    def loss(self, frames: FrameSequence) -> float:
        logits, _ = self.forward(frames)
        loss, _ = softmax_xent(logits, self.targets(frames))
        return loss

    def loss_and_grads(self, frames: FrameSequence) -> float:
        """프레임 평균 교차엔트로피를 계산하고 기울기를 누적"""
        logits, cache = self.forward(frames)
        loss, dlogits = softmax_xent(logits, self.targets(frames))
        self.backward(cache, dlogits)
        return loss

    def to_checkpoint(self, **extra: Any) -> Checkpoint:
        return Checkpoint(
            kind=self.kind, config=self.config.model_dump(), store=self.store, extra=extra
        )
