# src/generators/tcn_layers.py
# dilated causal convolution과 코드 조건 gated residual 블록

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from src.models.network_models import TcnConfig
from src.numerics.param_store import ParamStore
from src.numerics.tensor_ops import ShapeMismatchError, glorot_uniform, sigmoid

BLOCK_PARAM_NAMES = ("Wf", "Wg", "bf", "bg", "Vf", "Vg", "Wr", "br", "Ws", "bs")


def receptive_field(config: TcnConfig) -> int:
    """1 + Σ (kernel - 1) · dilation"""
    return 1 + sum((config.kernel - 1) * d for d in config.dilations)


def dilated_causal_conv(x: np.ndarray, kernel: np.ndarray, dilation: int) -> np.ndarray:
    """
    out[t] = Σ_j kernel[:, :, j] · x[t - (K-1-j)·dilation], 왼쪽 (K-1)·dilation 만큼 0 패딩.

    Args:
        x: (T, C_in)
        kernel: (C_out, C_in, K)
        dilation: 1 이상

    Returns:
        np.ndarray: (T, C_out)
    """
    if dilation < 1:
        raise ValueError(f"dilation은 1 이상이어야 합니다: {dilation}")
    if x.ndim != 2 or kernel.ndim != 3 or kernel.shape[1] != x.shape[1]:
        raise ShapeMismatchError(f"합성곱 shape 불일치: x {x.shape}, kernel {kernel.shape}")
    length = x.shape[0]
    taps = kernel.shape[2]
    pad = (taps - 1) * dilation
    padded = np.vstack((np.zeros((pad, x.shape[1])), x))
    out = np.zeros((length, kernel.shape[0]))
    for j in range(taps):
        out += padded[j * dilation : j * dilation + length] @ kernel[:, :, j].T
    return out


def dilated_causal_conv_backward(
    d_out: np.ndarray, x: np.ndarray, kernel: np.ndarray, dilation: int
) -> Tuple[np.ndarray, np.ndarray]:
    """dilated_causal_conv의 (dx, dkernel)"""
    length = x.shape[0]
    taps = kernel.shape[2]
    pad = (taps - 1) * dilation
    padded = np.vstack((np.zeros((pad, x.shape[1])), x))
    d_padded = np.zeros_like(padded)
    d_kernel = np.zeros_like(kernel)
    for j in range(taps):
        window = slice(j * dilation, j * dilation + length)
        d_kernel[:, :, j] = d_out.T @ padded[window]
        d_padded[window] += d_out @ kernel[:, :, j]
    return d_padded[pad:], d_kernel


@dataclass
class TcnLayerParams:
    """블록 하나: 게이트 합성곱 Wf/Wg, 조건 투영 Vf/Vg, residual/skip 1×1"""

    Wf: np.ndarray
    Wg: np.ndarray
    bf: np.ndarray
    bg: np.ndarray
    Wr: np.ndarray
    br: np.ndarray
    Ws: np.ndarray
    bs: np.ndarray
    Vf: Optional[np.ndarray] = None
    Vg: Optional[np.ndarray] = None


@dataclass
class GatedBlockCache:
    x: np.ndarray
    condition: Optional[np.ndarray]
    tanh_f: np.ndarray
    sigma_g: np.ndarray
    z: np.ndarray


def init_block(store: ParamStore, prefix: str, config: TcnConfig, rng: np.random.Generator) -> None:
    channels = config.residual_channels
    shape = (channels, channels, config.kernel)
    store.add(f"{prefix}.Wf", glorot_uniform(rng, shape))
    store.add(f"{prefix}.Wg", glorot_uniform(rng, shape))
    store.add(f"{prefix}.bf", np.zeros(channels))
    store.add(f"{prefix}.bg", np.zeros(channels))
    if config.conditioned:
        store.add(f"{prefix}.Vf", glorot_uniform(rng, (channels, config.condition_dim)))
        store.add(f"{prefix}.Vg", glorot_uniform(rng, (channels, config.condition_dim)))
    store.add(f"{prefix}.Wr", glorot_uniform(rng, (channels, channels)))
    store.add(f"{prefix}.br", np.zeros(channels))
    store.add(f"{prefix}.Ws", glorot_uniform(rng, (config.skip_channels, channels)))
    store.add(f"{prefix}.bs", np.zeros(config.skip_channels))


def block_params(store: ParamStore, prefix: str) -> TcnLayerParams:
    values = {
        name: store[f"{prefix}.{name}"] for name in BLOCK_PARAM_NAMES if f"{prefix}.{name}" in store
    }
    return TcnLayerParams(**values)


def gated_block(
    x: np.ndarray,
    condition: Optional[np.ndarray],
    params: TcnLayerParams,
    dilation: int,
) -> Tuple[np.ndarray, np.ndarray, GatedBlockCache]:
    """
    z = tanh(W_f * x + V_f·c) ⊙ σ(W_g * x + V_g·c), residual = x + 1×1(z), skip = 1×1_skip(z).

    condition이 None이거나 블록에 V가 없으면 조건 없는 형태가 됩니다.

    Returns:
        Tuple: (residual 출력 (T, C), skip 출력 (T, S), 캐시)

    Raises:
        ShapeMismatchError: condition 길이가 T와 다른 경우
    """
    if condition is not None and condition.shape[0] != x.shape[0]:
        raise ShapeMismatchError(
            f"코드 조건 길이({condition.shape[0]})가 멜로디 길이({x.shape[0]})와 다릅니다"
        )
    filter_pre = dilated_causal_conv(x, params.Wf, dilation) + params.bf
    gate_pre = dilated_causal_conv(x, params.Wg, dilation) + params.bg
    use_condition = condition is not None and params.Vf is not None
    if use_condition:
        filter_pre = filter_pre + condition @ params.Vf.T
        gate_pre = gate_pre + condition @ params.Vg.T

    tanh_f = np.tanh(filter_pre)
    sigma_g = sigmoid(gate_pre)
    z = tanh_f * sigma_g
    residual = x + z @ params.Wr.T + params.br
    skip = z @ params.Ws.T + params.bs
    cache = GatedBlockCache(
        x=x,
        condition=condition if use_condition else None,
        tanh_f=tanh_f,
        sigma_g=sigma_g,
        z=z,
    )
    return residual, skip, cache


def gated_block_backward(
    d_residual: np.ndarray,
    d_skip: np.ndarray,
    cache: GatedBlockCache,
    params: TcnLayerParams,
    dilation: int,
) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    """gated_block 역전파. (dx, 파라미터 이름 → 기울기)"""
    grads: Dict[str, np.ndarray] = {
        "Wr": d_residual.T @ cache.z,
        "br": d_residual.sum(axis=0),
        "Ws": d_skip.T @ cache.z,
        "bs": d_skip.sum(axis=0),
    }
    d_z = d_residual @ params.Wr + d_skip @ params.Ws
    d_filter = d_z * cache.sigma_g * (1.0 - cache.tanh_f**2)
    d_gate = d_z * cache.tanh_f * cache.sigma_g * (1.0 - cache.sigma_g)

    dx_filter, grads["Wf"] = dilated_causal_conv_backward(d_filter, cache.x, params.Wf, dilation)
    dx_gate, grads["Wg"] = dilated_causal_conv_backward(d_gate, cache.x, params.Wg, dilation)
    grads["bf"] = d_filter.sum(axis=0)
    grads["bg"] = d_gate.sum(axis=0)
    if cache.condition is not None:
        grads["Vf"] = d_filter.T @ cache.condition
        grads["Vg"] = d_gate.T @ cache.condition
    return d_residual + dx_filter + dx_gate, grads
