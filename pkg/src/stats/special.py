# src/stats/special.py
# 정규화 불완전 베타 함수 (F / t 분포 CDF의 기반)

import logging
import math

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 10000
EPS = 1e-15
TINY = 1e-300


class StatsDomainError(ValueError):
    """통계 함수 정의역 밖의 입력"""


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    """불완전 베타의 연분수 (modified Lentz)"""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    for m in range(1, MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    logger.warning(f"연분수가 {MAX_ITERATIONS}회 안에 수렴하지 않았습니다 (a={a}, b={b}, x={x})")
    return h


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """
    정규화 불완전 베타 함수 I_x(a, b).

    x가 (a+1)/(a+b+2)보다 크면 I_x(a,b) = 1 - I_{1-x}(b,a) 대칭을 써서
    연분수가 빨리 수렴하는 쪽으로 계산합니다.

    Args:
        x: 0 ≤ x ≤ 1
        a: a > 0
        b: b > 0

    Returns:
        float: [0, 1] 범위의 값

    Raises:
        StatsDomainError: 정의역 밖의 입력
    """
    if not (a > 0 and b > 0) or math.isinf(a) or math.isinf(b):
        raise StatsDomainError(f"a, b는 양의 유한수여야 합니다: a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise StatsDomainError(f"x는 [0, 1] 범위여야 합니다: {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        value = front * _beta_continued_fraction(x, a, b) / a
    else:
        value = 1.0 - front * _beta_continued_fraction(1.0 - x, b, a) / b
    return min(1.0, max(0.0, value))
