# src/numerics/__init__.py
# 모델 학습용 수치 연산 기반 (텐서 연산, 파라미터 저장소, 옵티마이저, 기울기 검증)

from .checkpoint import Checkpoint, CheckpointError, load_checkpoint, save_checkpoint
from .grad_check import GradCheckFailure, GradCheckReport, grad_check
from .optimizers import adam_step, sgd_step
from .param_store import ParamStore, average_grads
from .tensor_ops import (
    NonFiniteError,
    ShapeMismatchError,
    check_finite,
    matmul,
    sigmoid,
    softmax,
    softmax_xent,
)

__all__ = [
    "Checkpoint",
    "CheckpointError",
    "load_checkpoint",
    "save_checkpoint",
    "GradCheckFailure",
    "GradCheckReport",
    "grad_check",
    "adam_step",
    "sgd_step",
    "ParamStore",
    "average_grads",
    "NonFiniteError",
    "ShapeMismatchError",
    "check_finite",
    "matmul",
    "sigmoid",
    "softmax",
    "softmax_xent",
]
