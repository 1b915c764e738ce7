# src/generators/lstm_layers.py
# LSTM 셀/층/스택의 순전파와 BPTT 역전파 (게이트 순서 i, f, o, g)

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.numerics.param_store import ParamStore
from src.numerics.tensor_ops import ShapeMismatchError, check_finite, glorot_uniform, sigmoid

FORGET_BIAS = 1.0


@dataclass
class LstmLayerParams:
    """한 층의 파라미터: W (4H, D), U (4H, H), b (4H)"""

    W: np.ndarray
    U: np.ndarray
    b: np.ndarray

    @property
    def hidden(self) -> int:
        return self.U.shape[1]

    @property
    def input_dim(self) -> int:
        return self.W.shape[1]


@dataclass
class LstmLayerCache:
    inputs: np.ndarray
    gates: np.ndarray  # (T, 4H) 활성화 후 [i, f, o, g]
    cells: np.ndarray
    tanh_cells: np.ndarray
    hidden: np.ndarray


def init_lstm_layer(
    store: ParamStore, prefix: str, input_dim: int, hidden: int, rng: np.random.Generator
) -> None:
    store.add(f"{prefix}.W", glorot_uniform(rng, (4 * hidden, input_dim)))
    store.add(f"{prefix}.U", glorot_uniform(rng, (4 * hidden, hidden)))
    bias = np.zeros(4 * hidden)
    bias[hidden : 2 * hidden] = FORGET_BIAS
    store.add(f"{prefix}.b", bias)


def layer_params(store: ParamStore, prefix: str) -> LstmLayerParams:
    return LstmLayerParams(
        W=store[f"{prefix}.W"], U=store[f"{prefix}.U"], b=store[f"{prefix}.b"]
    )


def accumulate_layer_grads(
    store: ParamStore, prefix: str, grads: Tuple[np.ndarray, np.ndarray, np.ndarray]
) -> None:
    for suffix, grad in zip(("W", "U", "b"), grads):
        store.accumulate(f"{prefix}.{suffix}", grad)


def _activate(pre: np.ndarray, hidden: int) -> np.ndarray:
    gates = np.empty_like(pre)
    gates[..., : 3 * hidden] = sigmoid(pre[..., : 3 * hidden])
    gates[..., 3 * hidden :] = np.tanh(pre[..., 3 * hidden :])
    return gates


def lstm_cell(
    x: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray, params: LstmLayerParams
) -> Tuple[np.ndarray, np.ndarray]:
    """
    LSTM 한 스텝.

    f = σ(W_f x + U_f h + b_f), i, o 동일; c = f⊙c_prev + i⊙tanh(W_c x + U_c h + b_c); h = o⊙tanh(c)

    Raises:
        ShapeMismatchError: 입력 차원이 맞지 않는 경우
        NonFiniteError: 출력에 NaN/Inf가 생긴 경우
    """
    hidden = params.hidden
    if x.shape != (params.input_dim,) or h_prev.shape != (hidden,) or c_prev.shape != (hidden,):
        raise ShapeMismatchError(
            f"lstm_cell 입력 shape 불일치: x {x.shape}, h {h_prev.shape}, c {c_prev.shape}"
        )
    gates = _activate(params.W @ x + params.U @ h_prev + params.b, hidden)
    i, f, o, g = np.split(gates, 4)
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    check_finite(h, "lstm_cell.h")
    return h, c


def lstm_layer_forward(
    inputs: np.ndarray, params: LstmLayerParams
) -> Tuple[np.ndarray, LstmLayerCache]:
    """(T, D) 입력 전체에 대해 h, c를 0에서 시작해 순서대로 계산"""
    length = inputs.shape[0]
    hidden = params.hidden
    if inputs.ndim != 2 or inputs.shape[1] != params.input_dim:
        raise ShapeMismatchError(f"LSTM 층 입력 shape 불일치: {inputs.shape}, D={params.input_dim}")

    projected = inputs @ params.W.T + params.b
    gates = np.zeros((length, 4 * hidden))
    cells = np.zeros((length, hidden))
    hidden_states = np.zeros((length, hidden))
    h = np.zeros(hidden)
    c = np.zeros(hidden)
    for t in range(length):
        gates[t] = _activate(projected[t] + params.U @ h, hidden)
        i, f, o, g = np.split(gates[t], 4)
        c = f * c + i * g
        h = o * np.tanh(c)
        cells[t] = c
        hidden_states[t] = h
    check_finite(hidden_states, "lstm_layer.h")
    cache = LstmLayerCache(
        inputs=inputs,
        gates=gates,
        cells=cells,
        tanh_cells=np.tanh(cells),
        hidden=hidden_states,
    )
    return hidden_states, cache


def lstm_layer_backward(
    d_hidden: np.ndarray, cache: LstmLayerCache, params: LstmLayerParams
) -> Tuple[np.ndarray, Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """
    한 층의 BPTT.

    Args:
        d_hidden: (T, H) 각 스텝 출력 h에 대한 기울기
        cache: lstm_layer_forward 캐시
        params: 층 파라미터

    Returns:
        Tuple: (입력 기울기 (T, D), (dW, dU, db))
    """
    length, hidden = d_hidden.shape
    d_pre = np.zeros((length, 4 * hidden))
    dU = np.zeros_like(params.U)
    dh_next = np.zeros(hidden)
    dc_next = np.zeros(hidden)
    zeros = np.zeros(hidden)

    for t in reversed(range(length)):
        i, f, o, g = np.split(cache.gates[t], 4)
        tanh_c = cache.tanh_cells[t]
        c_prev = cache.cells[t - 1] if t > 0 else zeros
        h_prev = cache.hidden[t - 1] if t > 0 else zeros

        dh = d_hidden[t] + dh_next
        dc = dh * o * (1.0 - tanh_c**2) + dc_next
        d_pre[t] = np.concatenate(
            (
                dc * g * i * (1.0 - i),
                dc * c_prev * f * (1.0 - f),
                dh * tanh_c * o * (1.0 - o),
                dc * i * (1.0 - g**2),
            )
        )
        dU += np.outer(d_pre[t], h_prev)
        dh_next = params.U.T @ d_pre[t]
        dc_next = dc * f

    dW = d_pre.T @ cache.inputs
    db = d_pre.sum(axis=0)
    d_inputs = d_pre @ params.W
    return d_inputs, (dW, dU, db)


def lstm_stack_forward(
    inputs: np.ndarray, params: List[LstmLayerParams]
) -> Tuple[np.ndarray, List[LstmLayerCache]]:
    """
    층을 쌓아 실행합니다. 1층 출력은 h¹, 2층부터는 h^k + (k-1층 출력) (additive skip).

    Returns:
        Tuple: ((T, H) 스택 출력, 층별 캐시)
    """
    output = inputs
    caches: List[LstmLayerCache] = []
    for k, layer in enumerate(params):
        hidden_states, cache = lstm_layer_forward(output, layer)
        output = hidden_states if k == 0 else hidden_states + output
        caches.append(cache)
    return output, caches


def lstm_stack_backward(
    d_output: np.ndarray, caches: List[LstmLayerCache], params: List[LstmLayerParams]
) -> Tuple[np.ndarray, List[Tuple[np.ndarray, np.ndarray, np.ndarray]]]:
    """lstm_stack_forward의 역전파. (입력 기울기, 층별 (dW, dU, db))"""
    if len(caches) != len(params):
        raise ValueError("역전파에 필요한 순전파 캐시가 없습니다")
    grads: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = [None] * len(params)
    d_flow = d_output
    for k in reversed(range(len(params))):
        d_inputs, grads[k] = lstm_layer_backward(d_flow, caches[k], params[k])
        d_flow = d_inputs + d_flow if k > 0 else d_inputs
    return d_flow, grads


def lstm_stack_step(
    x: np.ndarray,
    states: List[Tuple[np.ndarray, np.ndarray]],
    params: List[LstmLayerParams],
) -> Tuple[np.ndarray, List[Tuple[np.ndarray, np.ndarray]]]:
    """스택 한 스텝 (생성 세션용). (출력, 새 (h, c) 상태들)"""
    output = x
    new_states: List[Tuple[np.ndarray, np.ndarray]] = []
    for k, (layer, (h, c)) in enumerate(zip(params, states)):
        h, c = lstm_cell(output, h, c, layer)
        output = h if k == 0 else h + output
        new_states.append((h, c))
    return output, new_states
