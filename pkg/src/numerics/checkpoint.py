# src/numerics/checkpoint.py
# 단일 파일 체크포인트: magic + JSON 헤더 + little-endian float64 페이로드

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from .param_store import ParamStore

logger = logging.getLogger(__name__)

CHECKPOINT_MAGIC = b"MELODYCKPT\n"
CHECKPOINT_VERSION = 1
GATE_ORDER = "i,f,o,g"
PAYLOAD_DTYPE = "<f8"


class CheckpointError(ValueError):
    """체크포인트 형식 오류"""


@dataclass
class Checkpoint:
    """모델 종류, 모델 설정, 파라미터를 묶은 체크포인트"""

    kind: str
    config: Dict[str, Any]
    store: ParamStore
    extra: Dict[str, Any] = field(default_factory=dict)


def checkpoint_bytes(checkpoint: Checkpoint) -> bytes:
    store = checkpoint.store
    names = store.names()
    header = {
        "version": CHECKPOINT_VERSION,
        "kind": checkpoint.kind,
        "config": checkpoint.config,
        "gate_order": GATE_ORDER,
        "names": names,
        "shapes": {name: list(store[name].shape) for name in names},
        "extra": checkpoint.extra,
    }
    header_bytes = json.dumps(header, sort_keys=True, ensure_ascii=False).encode("utf-8")
    payload = b"".join(store[name].astype(PAYLOAD_DTYPE).tobytes() for name in names)
    return CHECKPOINT_MAGIC + len(header_bytes).to_bytes(8, "little") + header_bytes + payload


def save_checkpoint(checkpoint: Checkpoint, path: Union[str, Path]) -> Path:
    """체크포인트를 파일로 저장합니다"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(checkpoint_bytes(checkpoint))
    logger.info(
        f"체크포인트 저장: {path} ({checkpoint.kind}, 파라미터 {checkpoint.store.num_parameters()}개)"
    )
    return path


def parse_checkpoint(data: bytes) -> Checkpoint:
    """
    checkpoint_bytes의 역변환 (값은 비트 단위로 동일)

    Raises:
        CheckpointError: magic/버전/길이가 맞지 않는 경우
    """
    if not data.startswith(CHECKPOINT_MAGIC):
        raise CheckpointError("체크포인트 magic이 아닙니다")
    position = len(CHECKPOINT_MAGIC)
    header_length = int.from_bytes(data[position : position + 8], "little")
    position += 8
    try:
        header = json.loads(data[position : position + header_length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"체크포인트 헤더를 읽을 수 없습니다: {e}") from None
    position += header_length
    if header.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"지원하지 않는 체크포인트 버전: {header.get('version')}")

    store = ParamStore()
    for name in header["names"]:
        shape = tuple(header["shapes"][name])
        count = int(np.prod(shape)) if shape else 1
        size = count * 8
        if position + size > len(data):
            raise CheckpointError(f"페이로드가 잘렸습니다: {name}")
        array = np.frombuffer(data, dtype=PAYLOAD_DTYPE, count=count, offset=position)
        store.add(name, array.reshape(shape).astype(np.float64))
        position += size
    if position != len(data):
        raise CheckpointError("페이로드 뒤에 남는 바이트가 있습니다")
    return Checkpoint(
        kind=header["kind"], config=header["config"], store=store, extra=header.get("extra", {})
    )


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    checkpoint = parse_checkpoint(Path(path).read_bytes())
    logger.info(f"체크포인트 로드: {path} ({checkpoint.kind})")
    return checkpoint
