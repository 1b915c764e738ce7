# src/generators/__init__.py
# 코드 조건 멜로디 생성 모델 (단방향 LSTM, 양방향 문맥 LSTM, TCN)

from .base import GenerationSession, MelodyModel
from .lstm_models import BiLstmModel, UniLstmModel
from .registry import build_model, default_config, model_from_checkpoint
from .tcn_model import TcnModel

__all__ = [
    "GenerationSession",
    "MelodyModel",
    "BiLstmModel",
    "UniLstmModel",
    "TcnModel",
    "build_model",
    "default_config",
    "model_from_checkpoint",
]
