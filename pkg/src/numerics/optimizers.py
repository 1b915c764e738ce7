# src/numerics/optimizers.py
# Adam / SGD 파라미터 업데이트

import numpy as np

from .param_store import ParamStore
from .tensor_ops import NonFiniteError


def _check_grads(store: ParamStore) -> None:
    for name in store.names():
        if not np.all(np.isfinite(store.grads[name])):
            raise NonFiniteError(name)


def adam_step(
    store: ParamStore,
    lr: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """
    bias correction을 포함한 Adam 한 스텝. 끝나면 기울기를 0으로 만듭니다.

    Raises:
        NonFiniteError: 기울기에 NaN/Inf가 있으면 아무 것도 바꾸지 않고 중단
    """
    _check_grads(store)
    store.step += 1
    correction1 = 1.0 - beta1**store.step
    correction2 = 1.0 - beta2**store.step
    for name in store.names():
        grad = store.grads[name]
        first, second = store.moments.get(name) or (
            np.zeros_like(grad),
            np.zeros_like(grad),
        )
        first *= beta1
        first += (1.0 - beta1) * grad
        second *= beta2
        second += (1.0 - beta2) * grad * grad
        store.moments[name] = (first, second)
        store.values[name] -= lr * (first / correction1) / (np.sqrt(second / correction2) + eps)
    store.zero_grads()


def sgd_step(store: ParamStore, lr: float = 1e-2) -> None:
    """plain SGD 한 스텝"""
    _check_grads(store)
    store.step += 1
    for name in store.names():
        store.values[name] -= lr * store.grads[name]
    store.zero_grads()
