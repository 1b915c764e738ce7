# src/generators/lstm_models.py
# 단방향 조건부 LSTM과 양방향 코드 인코더 LSTM 멜로디 모델

import logging
from abc import abstractmethod
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

import numpy as np

from src.models.network_models import LstmModelConfig
from src.models.score_models import CHORD_VOCAB, MELODY_VOCAB, FrameSequence
from src.numerics.param_store import ParamStore
from src.numerics.tensor_ops import ShapeMismatchError, glorot_uniform

from .base import GenerationSession, MelodyModel
from .lstm_layers import (
    LstmLayerCache,
    LstmLayerParams,
    accumulate_layer_grads,
    init_lstm_layer,
    layer_params,
    lstm_stack_backward,
    lstm_stack_forward,
    lstm_stack_step,
)

logger = logging.getLogger(__name__)


def chord_one_hot(chords: List[int]) -> np.ndarray:
    context = np.zeros((len(chords), CHORD_VOCAB))
    context[np.arange(len(chords)), np.asarray(chords, dtype=int)] = 1.0
    return context


@dataclass
class LstmForwardCache:
    hidden: np.ndarray
    stack: List[LstmLayerCache]
    context_cache: Any


class _LstmMelodyModel(MelodyModel):
    """
    조건부 멜로디 LSTM 공통 부분.

    t 스텝 입력은 [멜로디(t-1) one-hot (t=0은 학습되는 start 벡터), 코드 문맥(t)] 이고,
    코드 문맥은 하위 클래스가 정합니다.
    """

    config: LstmModelConfig

    def init_params(self, store: ParamStore, rng: np.random.Generator) -> None:
        cfg = self.config
        store.add("start", np.zeros(MELODY_VOCAB))
        for k in range(cfg.layers):
            input_dim = cfg.input_dim if k == 0 else cfg.hidden
            init_lstm_layer(store, f"lstm.{k}", input_dim, cfg.hidden, rng)
        store.add("out.W", glorot_uniform(rng, (cfg.vocab_out, cfg.hidden)))
        store.add("out.b", np.zeros(cfg.vocab_out))

    def generator_params(self) -> List[LstmLayerParams]:
        return [layer_params(self.store, f"lstm.{k}") for k in range(self.config.layers)]

    @abstractmethod
    def context(self, chords: List[int]) -> Tuple[np.ndarray, Any]:
        """코드 진행 → (T, context_dim) 문맥과 역전파용 캐시"""

    @abstractmethod
    def context_backward(self, cache: Any, d_context: np.ndarray) -> None:
        """문맥 기울기를 문맥 파라미터로 전파"""

    def build_inputs(self, melody: List[int], context: np.ndarray) -> np.ndarray:
        """(T, 130 + context_dim) 생성기 입력 (멜로디 한 칸 shift)"""
        length = len(melody)
        inputs = np.zeros((length, MELODY_VOCAB + context.shape[1]))
        if length:
            inputs[0, :MELODY_VOCAB] = self.store["start"]
            inputs[np.arange(1, length), np.asarray(melody[:-1], dtype=int)] = 1.0
            inputs[:, MELODY_VOCAB:] = context
        return inputs

    def targets(self, frames: FrameSequence) -> np.ndarray:
        return np.asarray(frames.melody, dtype=int)

    def forward(self, frames: FrameSequence) -> Tuple[np.ndarray, LstmForwardCache]:
        context, context_cache = self.context(frames.chords)
        inputs = self.build_inputs(frames.melody, context)
        hidden, stack_cache = lstm_stack_forward(inputs, self.generator_params())
        logits = hidden @ self.store["out.W"].T + self.store["out.b"]
        return logits, LstmForwardCache(hidden=hidden, stack=stack_cache, context_cache=context_cache)

    def backward(self, cache: Optional[LstmForwardCache], dlogits: np.ndarray) -> None:
        if cache is None:
            raise ValueError("역전파에 필요한 순전파 캐시가 없습니다")
        store = self.store
        store.accumulate("out.W", dlogits.T @ cache.hidden)
        store.accumulate("out.b", dlogits.sum(axis=0))
        d_hidden = dlogits @ store["out.W"]
        params = self.generator_params()
        d_inputs, grads = lstm_stack_backward(d_hidden, cache.stack, params)
        for k, layer_grads in enumerate(grads):
            accumulate_layer_grads(store, f"lstm.{k}", layer_grads)
        if len(d_inputs):
            store.accumulate("start", d_inputs[0, :MELODY_VOCAB])
        self.context_backward(cache.context_cache, d_inputs[:, MELODY_VOCAB:])

    def start_session(self, chords_full: List[int]) -> "LstmSession":
        context, _ = self.context(chords_full)
        return LstmSession(self, chords_full, context)


class UniLstmModel(_LstmMelodyModel):
    """p(m_t | m_<t, c_≤t): 코드 one-hot을 그대로 문맥으로 사용"""

    kind = "uni"

    def __init__(self, config: Optional[LstmModelConfig] = None, **kwargs):
        config = config or LstmModelConfig()
        if config.bidirectional_context:
            raise ValueError("UniLstmModel에는 bidirectional_context=False 설정이 필요합니다")
        super().__init__(config, **kwargs)

    def context(self, chords: List[int]) -> Tuple[np.ndarray, Any]:
        return chord_one_hot(chords), None

    def context_backward(self, cache: Any, d_context: np.ndarray) -> None:
        return None


@dataclass
class EncoderCache:
    forward_stack: List[LstmLayerCache]
    backward_stack: List[LstmLayerCache]


class BiLstmModel(_LstmMelodyModel):
    """
    p(m_t | m_<t, c_1..c_T): 코드 진행 전체를 양방향 LSTM 인코더로 요약한 문맥 e_t를 사용.

    e_t = [정방향 인코더(t), 역방향 인코더(t)] 이고, 두 방향 모두 전체 진행을 봅니다.
    """

    kind = "bi"

    def __init__(self, config: Optional[LstmModelConfig] = None, **kwargs):
        config = config or LstmModelConfig(bidirectional_context=True)
        if not config.bidirectional_context:
            raise ValueError("BiLstmModel에는 bidirectional_context=True 설정이 필요합니다")
        super().__init__(config, **kwargs)

    def init_params(self, store: ParamStore, rng: np.random.Generator) -> None:
        cfg = self.config
        for direction in ("enc_fwd", "enc_bwd"):
            for k in range(cfg.encoder_layers):
                input_dim = CHORD_VOCAB if k == 0 else cfg.encoder_hidden
                init_lstm_layer(store, f"{direction}.{k}", input_dim, cfg.encoder_hidden, rng)
        super().init_params(store, rng)

    def encoder_params(self, direction: str) -> List[LstmLayerParams]:
        return [
            layer_params(self.store, f"{direction}.{k}") for k in range(self.config.encoder_layers)
        ]

    def context(self, chords: List[int]) -> Tuple[np.ndarray, EncoderCache]:
        one_hot = chord_one_hot(chords)
        forward_out, forward_cache = lstm_stack_forward(one_hot, self.encoder_params("enc_fwd"))
        backward_out, backward_cache = lstm_stack_forward(
            one_hot[::-1].copy(), self.encoder_params("enc_bwd")
        )
        context = np.concatenate((forward_out, backward_out[::-1]), axis=1)
        return context, EncoderCache(forward_stack=forward_cache, backward_stack=backward_cache)

    def context_backward(self, cache: EncoderCache, d_context: np.ndarray) -> None:
        hidden = self.config.encoder_hidden
        if d_context.shape[1] != 2 * hidden:
            raise ShapeMismatchError(f"문맥 기울기 shape 불일치: {d_context.shape}")
        for direction, stack_cache, d_out in (
            ("enc_fwd", cache.forward_stack, d_context[:, :hidden]),
            ("enc_bwd", cache.backward_stack, d_context[::-1, hidden:]),
        ):
            _, grads = lstm_stack_backward(
                np.ascontiguousarray(d_out), stack_cache, self.encoder_params(direction)
            )
            for k, layer_grads in enumerate(grads):
                accumulate_layer_grads(self.store, f"{direction}.{k}", layer_grads)


class LstmSession(GenerationSession):
    """LSTM 순환 상태를 한 스텝씩 진행하는 생성 세션"""

    def __init__(self, model: _LstmMelodyModel, chords_full: List[int], context: np.ndarray):
        super().__init__(chords_full)
        self.model = model
        self.context = context
        self.params = model.generator_params()
        hidden = model.config.hidden
        self.states = [(np.zeros(hidden), np.zeros(hidden)) for _ in self.params]
        self.previous: Optional[int] = None
        self._pending: Optional[Tuple[np.ndarray, list]] = None

    def _advance(self) -> Tuple[np.ndarray, list]:
        if self.position >= len(self.chords_full):
            raise ValueError(f"코드 진행 길이({len(self.chords_full)})를 넘어 생성할 수 없습니다")
        x = np.zeros(MELODY_VOCAB + self.context.shape[1])
        if self.previous is None:
            x[:MELODY_VOCAB] = self.model.store["start"]
        else:
            x[self.previous] = 1.0
        x[MELODY_VOCAB:] = self.context[self.position]
        output, states = lstm_stack_step(x, self.states, self.params)
        logits = self.model.store["out.W"] @ output + self.model.store["out.b"]
        return logits, states

    def next_logits(self) -> np.ndarray:
        if self._pending is None:
            self._pending = self._advance()
        return self._pending[0]

    def push(self, label: int) -> None:
        if self._pending is None:
            self._pending = self._advance()
        self.states = self._pending[1]
        self._pending = None
        self.previous = int(label)
        self.position += 1
