# src/numerics/tensor_ops.py
# float64 텐서 연산: 행렬곱, 활성함수, softmax 교차엔트로피, 유한성 검사

from typing import Sequence, Tuple

import numpy as np


class ShapeMismatchError(ValueError):
    """텐서 shape이 맞지 않음"""


class NonFiniteError(RuntimeError):
    """NaN/Inf 발생 (파라미터/텐서 이름 포함)"""

    def __init__(self, name: str):
        super().__init__(f"유한하지 않은 값이 발생했습니다: {name}")
        self.name = name


def check_finite(array: np.ndarray, name: str) -> np.ndarray:
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(name)
    return array


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(m, k) × (k, n) → (m, n)"""
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(f"행렬곱 shape 불일치: {a.shape} × {b.shape}")
    return a @ b


def sigmoid(x: np.ndarray) -> np.ndarray:
    """overflow 없는 로지스틱 함수"""
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))


def softmax_xent(logits: np.ndarray, targets: Sequence[int]) -> Tuple[float, np.ndarray]:
    """
    프레임 평균 교차엔트로피(자연로그)와 logits에 대한 기울기.

    Args:
        logits: (T, V) 점수
        targets: 길이 T 정답 라벨

    Returns:
        Tuple[float, np.ndarray]: (평균 손실, (softmax - onehot) / T)

    Raises:
        NonFiniteError: logits에 NaN/Inf가 있는 경우
        ShapeMismatchError: 길이/범위가 맞지 않는 경우
    """
    check_finite(logits, "logits")
    targets = np.asarray(targets, dtype=int)
    length, vocab = logits.shape
    if targets.shape != (length,):
        raise ShapeMismatchError(f"정답 길이 불일치: {targets.shape} vs T={length}")
    if length == 0:
        return 0.0, np.zeros_like(logits)
    if targets.min() < 0 or targets.max() >= vocab:
        raise ShapeMismatchError(f"정답 라벨이 0..{vocab - 1} 범위를 벗어났습니다")

    rows = np.arange(length)
    log_probs = log_softmax(logits)
    loss = float(-np.mean(log_probs[rows, targets]))
    dlogits = np.exp(log_probs)
    dlogits[rows, targets] -= 1.0
    dlogits /= length
    return loss, dlogits


def glorot_uniform(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """uniform(-a, a), a = sqrt(6 / (fan_in + fan_out)); 3차원은 (out, in, kernel)"""
    receptive = int(np.prod(shape[2:])) if len(shape) > 2 else 1
    fan_out = shape[0] * receptive
    fan_in = (shape[1] if len(shape) > 1 else 1) * receptive
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)
