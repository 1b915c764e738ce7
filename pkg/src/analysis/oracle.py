# src/analysis/oracle.py
# Variable Markov Oracle (θ-유사 프레임을 같은 기호로 보는 factor oracle)

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Sequence

import numpy as np

logger = logging.getLogger(__name__)

Metric = Literal["euclidean", "identity"]


class OracleError(ValueError):
    """오라클 입력 오류"""


@dataclass
class Oracle:
    """
    상태 0..T (0은 초기 상태) 위의 VMO.

    상태 t는 특징 data[t-1]을 읽은 뒤의 상태입니다. 프레임 쌍의 유사 여부는 필요할 때마다
    encoded에서 계산하므로 메모리는 O(T·D)입니다.
    """

    data: List[Any]
    theta: float
    metric: str
    encoded: np.ndarray  # identity: (T,) 정수 코드, euclidean: (T, D) 특징 행렬
    sfx: List[int] = field(default_factory=list)
    rsfx: List[List[int]] = field(default_factory=list)
    trn: List[List[int]] = field(default_factory=list)
    lrs: List[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.sfx)

    @property
    def length(self) -> int:
        return len(self.data)

    def similar_to_earlier(self, index: int) -> np.ndarray:
        """프레임 index와 앞선 프레임 0..index-1 각각의 θ-유사 여부 (index,)"""
        if self.metric == "identity":
            return self.encoded[:index] == self.encoded[index]
        return np.linalg.norm(self.encoded[:index] - self.encoded[index], axis=1) <= self.theta

    def similar_pairs(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """프레임 쌍 (rows[k], cols[k])별 θ-유사 여부"""
        if self.metric == "identity":
            return self.encoded[rows] == self.encoded[cols]
        return np.linalg.norm(self.encoded[rows] - self.encoded[cols], axis=1) <= self.theta

    def segment_matches(self, end_a: int, end_b: int, length: int) -> bool:
        """상태 end_a와 end_b에서 끝나는 길이 length 구간이 프레임별로 θ-유사한지"""
        if end_a < length or end_b < length:
            return False
        offsets = np.arange(length)
        return bool(np.all(self.similar_pairs(end_a - 1 - offsets, end_b - 1 - offsets)))


def encode_features(features: Sequence[Any], metric: str) -> np.ndarray:
    """
    metric에 맞게 특징을 배열로 바꿉니다 (identity는 기호별 정수 코드, euclidean은 (T, D) 행렬).

    Raises:
        OracleError: 특징 차원이 섞여 있거나 metric을 모르는 경우
    """
    if metric == "identity":
        codes: Dict[Any, int] = {}
        return np.array([codes.setdefault(_hashable(f), len(codes)) for f in features])
    if metric == "euclidean":
        try:
            matrix = np.asarray([np.atleast_1d(np.asarray(f, dtype=float)) for f in features])
        except ValueError:
            raise OracleError("특징 벡터 차원이 서로 다릅니다") from None
        if matrix.ndim != 2:
            raise OracleError("특징 벡터 차원이 서로 다릅니다")
        return matrix
    raise OracleError(f"알 수 없는 metric: {metric}")


def _hashable(feature: Any) -> Any:
    if isinstance(feature, np.ndarray):
        return tuple(feature.ravel().tolist())
    if isinstance(feature, list):
        return tuple(feature)
    return feature


def build_oracle(features: Sequence[Any], theta: float = 0.0, metric: Metric = "euclidean") -> Oracle:
    """
    특징 시퀀스로 VMO를 한 상태씩 구성합니다.

    lrs[t]는 Q[1..t]의 접미사 중 앞에서 (θ-유사하게) 다시 나타난 가장 긴 것의 길이이고,
    sfx[t]는 그 접미사가 처음 끝나는 상태입니다 (없으면 0). 순방향 전이는 factor oracle
    규칙대로 접미사 링크를 따라가며 θ-유사 전이가 없는 상태에 추가합니다.

    Args:
        features: 기호 또는 벡터 시퀀스
        theta: 유사 거리 임계값 (0 이상)
        metric: "euclidean" (벡터) 또는 "identity" (기호 동일성)

    Returns:
        Oracle: 구성된 오라클

    Raises:
        OracleError: 빈 입력, 음수 θ, 차원 불일치
    """
    if len(features) == 0:
        raise OracleError("빈 시퀀스로는 오라클을 만들 수 없습니다")
    if theta < 0:
        raise OracleError(f"θ는 0 이상이어야 합니다: {theta}")

    length = len(features)
    oracle = Oracle(
        data=list(features), theta=theta, metric=metric, encoded=encode_features(features, metric)
    )
    oracle.sfx = [-1]
    oracle.lrs = [0]
    oracle.trn = [[]]
    oracle.rsfx = [[]]

    # match[j]: 현재 프레임에서 끝나는 접미사와 프레임 j에서 끝나는 접미사의 공통 길이
    match = np.zeros(0, dtype=int)
    for i in range(length):
        state = i + 1
        earlier = oracle.similar_to_earlier(i)
        current = np.zeros(i, dtype=int)
        if i > 0:
            current[0] = int(earlier[0])
            current[1:] = np.where(earlier[1:], match[: i - 1] + 1, 0)
        match = current

        longest = int(match.max()) if i > 0 else 0
        suffix = int(np.argmax(match)) + 1 if longest > 0 else 0
        oracle.lrs.append(longest)
        oracle.sfx.append(suffix)
        oracle.rsfx.append([])
        oracle.rsfx[suffix].append(state)

        oracle.trn.append([])
        oracle.trn[state - 1].append(state)
        k = oracle.sfx[state - 1]
        while k > -1:
            if any(earlier[target - 1] for target in oracle.trn[k] if target < state):
                break
            oracle.trn[k].append(state)
            k = oracle.sfx[k]

    logger.debug(
        f"오라클 구성: 상태 {oracle.size}개, θ={theta:.4g}, 최대 lrs {max(oracle.lrs)}"
    )
    return oracle
