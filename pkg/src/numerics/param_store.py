# src/numerics/param_store.py
# 이름 → (값, 기울기) 파라미터 저장소와 옵티마이저 상태

import logging
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .tensor_ops import ShapeMismatchError

logger = logging.getLogger(__name__)


class ParamStore:
    """
    모델 파라미터 저장소

    값과 기울기는 항상 같은 shape의 float64 배열이고, 옵티마이저 moment와
    스텝 수를 함께 보관합니다. 한 학습 스레드에서만 사용합니다.
    """

    def __init__(self):
        self.values: Dict[str, np.ndarray] = {}
        self.grads: Dict[str, np.ndarray] = {}
        self.moments: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}
        self.step = 0

    def add(self, name: str, value: np.ndarray) -> np.ndarray:
        if name in self.values:
            raise ValueError(f"이미 등록된 파라미터: {name}")
        array = np.array(value, dtype=np.float64)
        self.values[name] = array
        self.grads[name] = np.zeros_like(array)
        return array

    def __getitem__(self, name: str) -> np.ndarray:
        return self.values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def __iter__(self) -> Iterator[str]:
        return iter(self.names())

    def __len__(self) -> int:
        return len(self.values)

    def names(self) -> List[str]:
        return sorted(self.values)

    def accumulate(self, name: str, grad: np.ndarray) -> None:
        """기울기 누적 (shape 검사 포함)"""
        target = self.grads[name]
        if grad.shape != target.shape:
            raise ShapeMismatchError(f"{name} 기울기 shape 불일치: {grad.shape} != {target.shape}")
        target += grad

    def set_value(self, name: str, value: np.ndarray) -> None:
        """shape을 유지한 채 값 교체 (배열 객체는 그대로)"""
        target = self.values[name]
        value = np.asarray(value, dtype=np.float64)
        if value.shape != target.shape:
            raise ShapeMismatchError(f"{name} 값 shape 불일치: {value.shape} != {target.shape}")
        target[...] = value

    def zero_grads(self) -> None:
        for grad in self.grads.values():
            grad.fill(0.0)

    def num_parameters(self) -> int:
        return int(sum(value.size for value in self.values.values()))

    def copy(self) -> "ParamStore":
        clone = ParamStore()
        for name in self.names():
            clone.values[name] = self.values[name].copy()
            clone.grads[name] = self.grads[name].copy()
        clone.moments = {
            name: (first.copy(), second.copy()) for name, (first, second) in self.moments.items()
        }
        clone.step = self.step
        return clone


def average_grads(target: ParamStore, stores: List[ParamStore]) -> None:
    """독립적으로 계산한 여러 저장소의 기울기 평균을 target에 씁니다"""
    if not stores:
        raise ValueError("평균낼 저장소가 없습니다")
    for name in target.names():
        stacked = [store.grads[name] for store in stores]
        target.grads[name][...] = np.mean(stacked, axis=0)
    logger.debug(f"기울기 평균: 저장소 {len(stores)}개")
