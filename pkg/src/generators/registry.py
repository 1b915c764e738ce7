# src/generators/registry.py
# 모델 종류 이름 → 모델 생성/체크포인트 복원

import logging
from typing import Any, Dict, Optional, Union

from src.models.network_models import MODEL_KINDS, LstmModelConfig, TcnConfig
from src.numerics.checkpoint import Checkpoint

from .base import MelodyModel
from .lstm_models import BiLstmModel, UniLstmModel
from .tcn_model import TcnModel

logger = logging.getLogger(__name__)

ModelConfig = Union[LstmModelConfig, TcnConfig]


def default_config(kind: str, overrides: Optional[Dict[str, Any]] = None) -> ModelConfig:
    """모델 종류별 기본 설정에 overrides를 덮어씁니다"""
    overrides = dict(overrides or {})
    if kind == "uni":
        return LstmModelConfig(**{**overrides, "bidirectional_context": False})
    if kind == "bi":
        return LstmModelConfig(**{**overrides, "bidirectional_context": True})
    if kind == "tcn":
        return TcnConfig(**overrides)
    raise ValueError(f"알 수 없는 모델 종류: {kind} (가능: {', '.join(MODEL_KINDS)})")


def build_model(
    kind: str,
    config: Optional[Union[ModelConfig, Dict[str, Any]]] = None,
    seed: int = 0,
) -> MelodyModel:
    """
    새 모델을 초기화합니다.

    Args:
        kind: "uni" | "bi" | "tcn"
        config: 설정 객체 또는 기본값 위에 덮어쓸 dict
        seed: 파라미터 초기화 시드

    Returns:
        MelodyModel: 초기화된 모델
    """
    if config is None or isinstance(config, dict):
        config = default_config(kind, config)
    model_class = {"uni": UniLstmModel, "bi": BiLstmModel, "tcn": TcnModel}.get(kind)
    if model_class is None:
        raise ValueError(f"알 수 없는 모델 종류: {kind}")
    model = model_class(config, seed=seed)
    logger.info(f"{kind} 모델 생성: 파라미터 {model.store.num_parameters()}개 (seed {seed})")
    return model


def model_from_checkpoint(checkpoint: Checkpoint) -> MelodyModel:
    """체크포인트의 설정과 파라미터로 모델을 복원합니다"""
    config = default_config(checkpoint.kind, checkpoint.config)
    model_class = {"uni": UniLstmModel, "bi": BiLstmModel, "tcn": TcnModel}[checkpoint.kind]
    return model_class(config, store=checkpoint.store)
