# src/generators/tcn_model.py
# WaveNet 스타일 코드 조건 TCN 멜로디 모델

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.encoding.frames import to_wavenet_frames
from src.models.network_models import TcnConfig
from src.models.score_models import CHORD_VOCAB, PITCH_COUNT, FrameSequence, WaveNetFrames
from src.numerics.param_store import ParamStore
from src.numerics.tensor_ops import glorot_uniform

from .base import GenerationSession, MelodyModel
from .tcn_layers import (
    GatedBlockCache,
    block_params,
    gated_block,
    gated_block_backward,
    init_block,
    receptive_field,
)

logger = logging.getLogger(__name__)


@dataclass
class TcnForwardCache:
    shifted: np.ndarray
    condition: Optional[np.ndarray]
    blocks: List[GatedBlockCache]
    skip_sum: np.ndarray
    head_hidden: np.ndarray


def shifted_melody(labels: List[int]) -> np.ndarray:
    """(T, 128) one-hot(m_{t-1}), t=0 행은 0"""
    length = len(labels)
    shifted = np.zeros((length, PITCH_COUNT))
    if length > 1:
        shifted[np.arange(1, length), np.asarray(labels[:-1], dtype=int)] = 1.0
    return shifted


def condition_one_hot(chords: List[int]) -> np.ndarray:
    condition = np.zeros((len(chords), CHORD_VOCAB))
    condition[np.arange(len(chords)), np.asarray(chords, dtype=int)] = 1.0
    return condition


class TcnModel(MelodyModel):
    """
    p(m_t | m_<t, c_≤t) 를 dilated causal convolution 스택으로 모델링합니다.

    입력 1×1 투영 → gated 블록들(블록마다 코드 조건) → skip 합 → ReLU → 1×1 → ReLU → 1×1.
    멜로디는 WaveNet 표현(128 라벨)으로 다룹니다.
    """

    kind = "tcn"
    config: TcnConfig

    def __init__(self, config: Optional[TcnConfig] = None, **kwargs):
        super().__init__(config or TcnConfig(), **kwargs)

    def init_params(self, store: ParamStore, rng: np.random.Generator) -> None:
        cfg = self.config
        store.add("in.W", glorot_uniform(rng, (cfg.residual_channels, PITCH_COUNT)))
        store.add("in.b", np.zeros(cfg.residual_channels))
        for k in range(len(cfg.dilations)):
            init_block(store, f"block.{k}", cfg, rng)
        store.add("head.W1", glorot_uniform(rng, (cfg.skip_channels, cfg.skip_channels)))
        store.add("head.b1", np.zeros(cfg.skip_channels))
        store.add("head.W2", glorot_uniform(rng, (cfg.vocab_out, cfg.skip_channels)))
        store.add("head.b2", np.zeros(cfg.vocab_out))

    @property
    def receptive_field(self) -> int:
        return receptive_field(self.config)

    def targets(self, frames: FrameSequence) -> np.ndarray:
        return np.asarray(to_wavenet_frames(frames).melody, dtype=int)

    def forward(self, frames: FrameSequence) -> Tuple[np.ndarray, TcnForwardCache]:
        return self.forward_wavenet(to_wavenet_frames(frames))

    def forward_wavenet(self, frames: WaveNetFrames) -> Tuple[np.ndarray, TcnForwardCache]:
        """WaveNet 표현 입력에 대한 (T, 128) logits"""
        return self._forward_arrays(shifted_melody(frames.melody), condition_one_hot(frames.chords))

    def _forward_arrays(
        self, shifted: np.ndarray, condition: np.ndarray
    ) -> Tuple[np.ndarray, TcnForwardCache]:
        cfg = self.config
        store = self.store
        active_condition = condition if cfg.conditioned else None

        x = shifted @ store["in.W"].T + store["in.b"]
        skip_sum = np.zeros((shifted.shape[0], cfg.skip_channels))
        caches: List[GatedBlockCache] = []
        for k, dilation in enumerate(cfg.dilations):
            x, skip, cache = gated_block(
                x, active_condition, block_params(store, f"block.{k}"), dilation
            )
            skip_sum += skip
            caches.append(cache)

        head_hidden = np.maximum(skip_sum, 0.0) @ store["head.W1"].T + store["head.b1"]
        logits = np.maximum(head_hidden, 0.0) @ store["head.W2"].T + store["head.b2"]
        cache = TcnForwardCache(
            shifted=shifted,
            condition=active_condition,
            blocks=caches,
            skip_sum=skip_sum,
            head_hidden=head_hidden,
        )
        return logits, cache

    def backward(self, cache: Optional[TcnForwardCache], dlogits: np.ndarray) -> None:
        if cache is None:
            raise ValueError("역전파에 필요한 순전파 캐시가 없습니다")
        store = self.store
        head_active = np.maximum(cache.head_hidden, 0.0)
        store.accumulate("head.W2", dlogits.T @ head_active)
        store.accumulate("head.b2", dlogits.sum(axis=0))
        d_head_hidden = (dlogits @ store["head.W2"]) * (cache.head_hidden > 0)

        skip_active = np.maximum(cache.skip_sum, 0.0)
        store.accumulate("head.W1", d_head_hidden.T @ skip_active)
        store.accumulate("head.b1", d_head_hidden.sum(axis=0))
        d_skip = (d_head_hidden @ store["head.W1"]) * (cache.skip_sum > 0)

        d_x = np.zeros((dlogits.shape[0], self.config.residual_channels))
        for k in reversed(range(len(self.config.dilations))):
            prefix = f"block.{k}"
            d_x, grads = gated_block_backward(
                d_x, d_skip, cache.blocks[k], block_params(store, prefix), self.config.dilations[k]
            )
            for name, grad in grads.items():
                store.accumulate(f"{prefix}.{name}", grad)

        store.accumulate("in.W", d_x.T @ cache.shifted)
        store.accumulate("in.b", d_x.sum(axis=0))

    def start_session(self, chords_full: List[int]) -> "TcnSession":
        return TcnSession(self, chords_full)


class TcnSession(GenerationSession):
    """
    수용 영역만큼의 최근 프레임 창을 매 스텝 다시 계산하는 생성 세션.

    위치 t의 출력은 입력 [t-RF+1, t] 에만 의존하므로 창 재계산 결과는 전체 순전파와 같습니다.
    """

    def __init__(self, model: TcnModel, chords_full: List[int]):
        super().__init__(chords_full)
        self.model = model
        self.history: List[int] = []
        self.condition = condition_one_hot(chords_full)

    def next_logits(self) -> np.ndarray:
        t = self.position
        if t >= len(self.chords_full):
            raise ValueError(f"코드 진행 길이({len(self.chords_full)})를 넘어 생성할 수 없습니다")
        start = max(0, t - self.model.receptive_field + 1)
        shifted = np.zeros((t - start + 1, PITCH_COUNT))
        for row, position in enumerate(range(start, t + 1)):
            if position > 0:
                shifted[row, self.history[position - 1]] = 1.0
        logits, _ = self.model._forward_arrays(shifted, self.condition[start : t + 1])
        return logits[-1]

    def push(self, label: int) -> None:
        self.history.append(int(label))
        self.position += 1
