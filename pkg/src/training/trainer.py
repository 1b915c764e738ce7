# src/training/trainer.py
# 교사 강제 학습 루프와 평가 손실

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from src.generators.base import MelodyModel
from src.generators.registry import build_model
from src.models.score_models import FrameSequence
from src.models.training_models import CorpusSplit, EpochRecord, TrainConfig
from src.numerics.optimizers import adam_step, sgd_step
from src.numerics.param_store import ParamStore
from src.numerics.tensor_ops import NonFiniteError

logger = logging.getLogger(__name__)


class TrainingDivergedError(RuntimeError):
    """학습 손실이 NaN/Inf가 됨"""


@dataclass
class TrainResult:
    """학습 결과: 최적(평가 손실 기준) 파라미터를 가진 모델과 손실 곡선"""

    model: MelodyModel
    curve: List[EpochRecord] = field(default_factory=list)
    steps: int = 0
    best_epoch: Optional[int] = None
    diverged: bool = False
    final_store: Optional[ParamStore] = None

    def curve_rows(self) -> List[Dict[str, Any]]:
        return [record.model_dump() for record in self.curve]

    def raise_for_divergence(self) -> None:
        if self.diverged:
            raise TrainingDivergedError(
                f"{self.model.kind} 학습이 {self.steps}스텝 뒤 발산했습니다 "
                f"(최적 에폭 {self.best_epoch})"
            )


def evaluate_xent(model: MelodyModel, data: Sequence[FrameSequence]) -> float:
    """
    교사 강제 평균 교차엔트로피 (nats/frame, 프레임 수 가중)

    Raises:
        ValueError: 평가할 프레임이 없는 경우
    """
    total_loss = 0.0
    total_frames = 0
    for frames in data:
        if len(frames) == 0:
            continue
        total_loss += model.loss(frames) * len(frames)
        total_frames += len(frames)
    if total_frames == 0:
        raise ValueError("평가할 프레임이 없습니다")
    return total_loss / total_frames


def _optimizer_step(store: ParamStore, config: TrainConfig) -> None:
    if config.optimizer == "adam":
        adam_step(store, lr=config.lr, beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    else:
        sgd_step(store, lr=config.lr)


def train(
    model: Union[str, MelodyModel],
    split: CorpusSplit,
    config: Optional[TrainConfig] = None,
    model_config: Optional[Any] = None,
) -> TrainResult:
    """
    곡 하나를 배치로 하는 교사 강제 학습.

    에폭마다 학습 손실(프레임 가중 평균)과 평가 손실을 기록하고, 평가 손실(평가셋이
    없으면 학습 손실)이 가장 낮은 파라미터를 보관합니다. 손실이 발산하면 중단하고
    마지막 최적 파라미터를 돌려줍니다.

    Args:
        model: 모델 종류 이름("uni" | "bi" | "tcn") 또는 모델 객체
        split: 학습/평가 코퍼스
        config: 학습 옵션
        model_config: model이 이름일 때 모델 설정

    Returns:
        TrainResult: 최적 파라미터 모델과 손실 곡선
    """
    config = config or TrainConfig()
    if isinstance(model, str):
        model = build_model(model, model_config, seed=config.seed)
    rng = np.random.default_rng(config.seed)

    best_store = model.store.copy()
    best_score = math.inf
    result = TrainResult(model=model)

    epochs = tqdm(
        range(1, config.epochs + 1),
        desc=f"{model.kind} 학습",
        disable=not config.progress,
    )
    for epoch in epochs:
        total_loss = 0.0
        total_frames = 0
        capped = False
        for index in rng.permutation(len(split.train)):
            if config.max_steps is not None and result.steps >= config.max_steps:
                capped = True
                break
            song = split.train[index]
            if len(song) == 0:
                continue
            try:
                loss = model.loss_and_grads(song)
                if not math.isfinite(loss):
                    raise NonFiniteError("loss")
                _optimizer_step(model.store, config)
            except NonFiniteError as e:
                logger.error(f"{epoch}번째 에폭에서 학습이 발산했습니다: {e}")
                result.diverged = True
                break
            result.steps += 1
            total_loss += loss * len(song)
            total_frames += len(song)

        if result.diverged or total_frames == 0:
            break

        train_nats = total_loss / total_frames
        heldout_nats = evaluate_xent(model, split.held_out) if split.held_out else None
        result.curve.append(
            EpochRecord(epoch=epoch, train_nats=train_nats, heldout_nats=heldout_nats)
        )
        score = heldout_nats if heldout_nats is not None else train_nats
        if score < best_score:
            best_score = score
            best_store = model.store.copy()
            result.best_epoch = epoch
        logger.info(
            f"[{model.kind}] 에폭 {epoch}: train {train_nats:.4f}"
            + (f", held-out {heldout_nats:.4f}" if heldout_nats is not None else "")
            + f" nats/frame (스텝 {result.steps})"
        )
        if capped:
            break

    result.final_store = model.store
    model.store = best_store
    return result
