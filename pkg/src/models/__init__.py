# src/models/__init__.py
# 멜로디 생성/분석을 위한 Pydantic 데이터 모델들

from .score_models import (
    ChordEvent,
    FrameSequence,
    NoteEvent,
    RawSmfEvents,
    SmfEvent,
    SymbolicScore,
    WaveNetFrames,
)
from .network_models import LstmModelConfig, TcnConfig
from .training_models import CorpusSplit, EpochRecord, GenerationTask, TrainConfig

__all__ = [
    "ChordEvent",
    "FrameSequence",
    "NoteEvent",
    "RawSmfEvents",
    "SmfEvent",
    "SymbolicScore",
    "WaveNetFrames",
    "LstmModelConfig",
    "TcnConfig",
    "CorpusSplit",
    "EpochRecord",
    "GenerationTask",
    "TrainConfig",
]
