# src/numerics/grad_check.py
# 중앙 차분으로 해석적 기울기를 검증하는 gradient checker

import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .param_store import ParamStore

logger = logging.getLogger(__name__)

RELATIVE_ERROR_FLOOR = 1e-5  # 두 기울기가 모두 ~0일 때 분모 하한


class GradCheckFailure(RuntimeError):
    """허용 오차를 넘은 파라미터가 있음"""


class GradCheckEntry(BaseModel):
    """파라미터별 최악 좌표"""

    name: str
    index: Tuple[int, ...]
    analytic: float
    numeric: float
    relative_error: float
    checked: int = Field(..., description="검사한 좌표 수")


class GradCheckReport(BaseModel):
    """grad_check 결과"""

    tolerance: float
    epsilon: float
    entries: List[GradCheckEntry] = Field(default_factory=list)

    @property
    def failures(self) -> List[GradCheckEntry]:
        return [e for e in self.entries if e.relative_error >= self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def worst(self) -> Optional[GradCheckEntry]:
        if not self.entries:
            return None
        return max(self.entries, key=lambda e: e.relative_error)

    def raise_for_failure(self) -> None:
        failures = self.failures
        if failures:
            detail = ", ".join(
                f"{e.name}{list(e.index)} (rel {e.relative_error:.3g})" for e in failures
            )
            raise GradCheckFailure(f"기울기 검증 실패: {detail}")


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic) + abs(numeric), RELATIVE_ERROR_FLOOR)


def grad_check(
    loss_fn: Callable[[ParamStore], float],
    store: ParamStore,
    epsilon: float = 1e-5,
    tolerance: float = 1e-4,
    samples_per_param: Optional[int] = None,
    seed: int = 0,
    names: Optional[Sequence[str]] = None,
) -> GradCheckReport:
    """
    store.grads에 채워진 해석적 기울기를 중앙 차분 (f(x+ε) - f(x-ε)) / 2ε 와 비교합니다.

    Args:
        loss_fn: 현재 store 값으로 스칼라 손실을 계산하는 함수 (기울기는 건드리지 않음)
        store: 해석적 기울기가 채워진 파라미터 저장소
        epsilon: 차분 간격
        tolerance: 상대 오차 허용치
        samples_per_param: 파라미터당 검사할 좌표 수 (None이면 전부)
        seed: 좌표 샘플링 시드
        names: 검사할 파라미터 이름 (None이면 전부)

    Returns:
        GradCheckReport: 파라미터별 최악 좌표 리포트
    """
    rng = np.random.default_rng(seed)
    analytic_grads = {name: grad.copy() for name, grad in store.grads.items()}
    report = GradCheckReport(tolerance=tolerance, epsilon=epsilon)

    for name in names or store.names():
        value = store.values[name]
        if value.size == 0:
            continue
        if samples_per_param is None or samples_per_param >= value.size:
            coordinates = np.arange(value.size)
        else:
            coordinates = rng.choice(value.size, size=samples_per_param, replace=False)

        worst: Optional[GradCheckEntry] = None
        for flat_index in coordinates:
            original = value.flat[flat_index]
            value.flat[flat_index] = original + epsilon
            loss_plus = loss_fn(store)
            value.flat[flat_index] = original - epsilon
            loss_minus = loss_fn(store)
            value.flat[flat_index] = original

            numeric = (loss_plus - loss_minus) / (2.0 * epsilon)
            analytic = float(analytic_grads[name].flat[flat_index])
            error = relative_error(analytic, numeric)
            if worst is None or error > worst.relative_error:
                worst = GradCheckEntry(
                    name=name,
                    index=tuple(int(i) for i in np.unravel_index(flat_index, value.shape)),
                    analytic=analytic,
                    numeric=float(numeric),
                    relative_error=error,
                    checked=len(coordinates),
                )
        report.entries.append(worst)
        logger.debug(f"{name}: 최악 상대오차 {worst.relative_error:.3e} at {worst.index}")

    for name, grad in analytic_grads.items():
        store.grads[name][...] = grad

    status = "통과" if report.passed else "실패"
    logger.info(f"기울기 검증 {status}: 파라미터 {len(report.entries)}개, 허용치 {tolerance}")
    return report
