# src/encoding/__init__.py
# 프레임 인코딩과 코드 해싱 모듈

from .chords import format_chord_name, hash_chord, parse_chord_name
from .frame_io import read_frames_csv, write_frames_csv
from .frames import (
    QuantizationError,
    decode_frames,
    encode_lstm,
    encode_wavenet,
    from_wavenet_labels,
    quantize_score,
    to_wavenet_frames,
    transpose_augment,
    transpose_frames,
)

__all__ = [
    "format_chord_name",
    "hash_chord",
    "parse_chord_name",
    "read_frames_csv",
    "write_frames_csv",
    "QuantizationError",
    "decode_frames",
    "encode_lstm",
    "encode_wavenet",
    "from_wavenet_labels",
    "quantize_score",
    "to_wavenet_frames",
    "transpose_augment",
    "transpose_frames",
]
