# src/training/__init__.py
# 코퍼스 분리, 학습, 이어 생성

from .corpus import split_corpus
from .sampler import build_survey_group, generate_continuation, sample_label
from .trainer import TrainingDivergedError, TrainResult, evaluate_xent, train

__all__ = [
    "split_corpus",
    "build_survey_group",
    "generate_continuation",
    "sample_label",
    "TrainingDivergedError",
    "TrainResult",
    "evaluate_xent",
    "train",
]
