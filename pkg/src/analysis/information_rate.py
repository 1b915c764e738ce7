# src/analysis/information_rate.py
# Information Rate 추정과 θ 스윕

import logging
import math
from typing import Any, List, Literal, Sequence

import numpy as np

from src.models.analysis_models import IRCurve

from .oracle import Metric, Oracle, OracleError, build_oracle

logger = logging.getLogger(__name__)

Estimator = Literal["lrs_gain", "compror"]
DEFAULT_GRID_SIZE = 64
GRID_PERCENTILES = (5.0, 95.0)


def lrs_gain_ir(lrs: Sequence[int]) -> float:
    """Σ_t max(0, log2(t+1) - log2(lrs[t]+1))"""
    return float(
        sum(max(0.0, math.log2(t + 1) - math.log2(lrs[t] + 1)) for t in range(1, len(lrs)))
    )


def compror_ir(lrs: Sequence[int]) -> float:
    """
    블록 부호 기반 IR.

    lrs를 따라 앞부분을 복사할 수 있는 가장 긴 블록으로 욕심껏 자르고, 프레임마다
    문맥 없는 비용 log2(지금까지 새 기호 수)에서 블록 부호 비용
    log2(지금까지 부호어 수) / 블록 길이를 뺀 값을 0 이상으로 잘라 더합니다.
    """
    length = len(lrs) - 1
    total = 0.0
    new_symbols = 0
    codewords = 0
    i = 1
    while i <= length:
        if lrs[i] == 0:
            block = 1
        else:
            block = 1
            while i + block <= length and lrs[i + block] >= block + 1:
                block += 1
        codewords += 1
        block_cost = math.log2(codewords) / block
        for frame in range(i, i + block):
            if lrs[frame] == 0:
                new_symbols += 1
            unconditional = math.log2(new_symbols) if new_symbols else 0.0
            total += max(0.0, unconditional - block_cost)
        i += block
    return total


def compute_ir(oracle: Oracle, estimator: Estimator = "lrs_gain") -> float:
    """오라클의 총 IR"""
    if estimator == "lrs_gain":
        return lrs_gain_ir(oracle.lrs)
    if estimator == "compror":
        return compror_ir(oracle.lrs)
    raise ValueError(f"알 수 없는 IR 추정기: {estimator}")


def sweep_theta(
    features: Sequence[Any],
    theta_grid: Sequence[float],
    metric: Metric = "euclidean",
    estimator: Estimator = "compror",
) -> IRCurve:
    """
    θ마다 오라클을 만들어 총 IR을 기록하고 최대가 되는 θ를 고릅니다 (동률이면 가장 작은 θ).

    Raises:
        OracleError: 빈 θ 격자
    """
    if len(theta_grid) == 0:
        raise OracleError("θ 격자가 비어 있습니다")
    thetas = [float(theta) for theta in theta_grid]
    totals = [compute_ir(build_oracle(features, theta, metric), estimator) for theta in thetas]
    peak = max(totals)
    best_theta = min(theta for theta, total in zip(thetas, totals) if total == peak)
    logger.info(f"θ 스윕 완료: {len(thetas)}개, 최적 θ={best_theta:.4g} (IR {peak:.3f})")
    return IRCurve(thetas=thetas, ir_totals=totals, best_theta=best_theta, estimator=estimator)


def default_theta_grid(
    features: Sequence[Any],
    count: int = DEFAULT_GRID_SIZE,
    max_samples: int = 256,
) -> List[float]:
    """
    쌍별 프레임 거리의 5~95 백분위 사이를 count개로 나눈 θ 격자.

    프레임이 max_samples보다 많으면 균등 간격으로 골라 씁니다.
    """
    matrix = np.asarray([np.atleast_1d(np.asarray(f, dtype=float)) for f in features])
    if len(matrix) > max_samples:
        matrix = matrix[np.linspace(0, len(matrix) - 1, max_samples).astype(int)]
    if len(matrix) < 2:
        return [0.0]
    rows, cols = np.triu_indices(len(matrix), k=1)
    distances = np.linalg.norm(matrix[rows] - matrix[cols], axis=1)
    low, high = np.percentile(distances, GRID_PERCENTILES)
    if high <= low:
        return [float(low)]
    return np.linspace(low, high, count).tolist()
