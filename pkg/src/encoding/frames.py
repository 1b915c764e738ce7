# src/encoding/frames.py
# SymbolicScore ↔ 프레임 라벨 변환, WaveNet 표현, 전조 증강, one-hot 인코딩

import logging
from typing import List, Optional, Tuple

import numpy as np

from src.models.score_models import (
    CHORD_VOCAB,
    FRAMES_PER_BEAT,
    HOLD_LABEL,
    MELODY_VOCAB,
    NC_LABEL,
    PITCH_COUNT,
    REST_LABEL,
    TARGET_BPM,
    ChordEvent,
    FrameSequence,
    NoteEvent,
    SymbolicScore,
    WaveNetFrames,
)

from .chords import TEMPLATES, hash_chord, transpose_chord_label

logger = logging.getLogger(__name__)

TRIPLET_PATTERN = (5, 6, 5)  # 한 박 셋잇단을 1/16 격자에 놓은 길이


class QuantizationError(ValueError):
    """프레임 격자로 옮길 수 없는 악보"""


def _to_frame(ticks: int, ticks_per_beat: int) -> int:
    """tick → 프레임 (반올림, .5는 올림). 정수 연산으로 계산"""
    return (2 * ticks * FRAMES_PER_BEAT + ticks_per_beat) // (2 * ticks_per_beat)


def _warn(warnings: Optional[List[str]], message: str) -> None:
    logger.warning(message)
    if warnings is not None:
        warnings.append(message)


def quantize_score(
    score: SymbolicScore, warnings: Optional[List[str]] = None
) -> FrameSequence:
    """
    악보를 1/16 박 프레임 라벨 시퀀스로 양자화합니다.

    음의 onset 프레임에는 음높이, 나머지 프레임에는 hold(129), 빈 곳은 쉼표(128)입니다.
    코드 라벨은 덮고 있는 ChordEvent를 hash_chord로 변환하고, 없으면 NC(24)입니다.

    Args:
        score: 120 bpm으로 정규화된 악보
        warnings: 양자화 경고를 모을 리스트 (선택)

    Returns:
        FrameSequence: 프레임 시퀀스

    Raises:
        QuantizationError: 빈 악보, 겹치는 코드
    """
    if score.last_tick == 0:
        raise QuantizationError("빈 악보는 양자화할 수 없습니다")
    if score.bpm != TARGET_BPM:
        logger.debug(f"bpm {score.bpm}인 악보를 박 단위로 양자화합니다")

    tpb = score.ticks_per_beat
    spans: List[Tuple[int, int, NoteEvent]] = []
    for note in score.melody:
        start = _to_frame(note.onset_ticks, tpb)
        end = _to_frame(note.end_ticks, tpb)
        if end <= start:
            _warn(
                warnings,
                f"tick {note.onset_ticks}의 음(pitch {note.pitch})이 반 프레임보다 짧아 1프레임으로 유지합니다",
            )
            end = start + 1
        spans.append((start, end, note))

    for prev, cur in zip(score.chords, score.chords[1:]):
        if prev.end_ticks > cur.onset_ticks:
            raise QuantizationError(f"코드가 tick {cur.onset_ticks}에서 겹칩니다")

    total = _to_frame(score.last_tick, tpb)
    if spans:
        total = max(total, max(end for _, end, _ in spans))

    melody = [REST_LABEL] * total
    previous_start = -1
    for start, end, note in spans:
        if start <= previous_start:
            _warn(warnings, f"프레임 {start}에서 음이 겹쳐 뒤의 음으로 덮어씁니다")
        melody[start] = note.pitch
        for frame in range(start + 1, end):
            melody[frame] = HOLD_LABEL
        previous_start = start

    chords = [NC_LABEL] * total
    for chord in score.chords:
        start = _to_frame(chord.onset_ticks, tpb)
        end = _to_frame(chord.end_ticks, tpb)
        if end <= start:
            _warn(warnings, f"tick {chord.onset_ticks}의 코드가 반 프레임보다 짧아 무시합니다")
            continue
        label = hash_chord(chord.pitch_classes, chord.root)
        for frame in range(start, end):
            chords[frame] = label

    return FrameSequence(melody=melody, chords=chords, frames_per_beat=FRAMES_PER_BEAT)


def decode_frames(frames: FrameSequence) -> SymbolicScore:
    """
    프레임 시퀀스를 악보로 되돌립니다 (tpb = 프레임/박, bpm 120).

    음높이+hold 연속은 음 하나, 같은 코드 라벨 연속은 코드 하나가 됩니다.
    박 머리에서 시작하는 5+6+5 프레임 음 세 개는 셋잇단으로 표시합니다.
    """
    melody: List[NoteEvent] = []
    start: Optional[int] = None
    pitch = 0
    for index, label in enumerate(list(frames.melody) + [REST_LABEL]):
        if label == HOLD_LABEL:
            continue
        if start is not None:
            melody.append(NoteEvent(onset_ticks=start, duration_ticks=index - start, pitch=pitch))
            start = None
        if label != REST_LABEL and index < len(frames):
            start, pitch = index, label

    chords: List[ChordEvent] = []
    run_start = 0
    for index in range(1, len(frames) + 1):
        if index < len(frames) and frames.chords[index] == frames.chords[run_start]:
            continue
        label = frames.chords[run_start]
        if label != NC_LABEL:
            chords.append(
                ChordEvent(
                    onset_ticks=run_start,
                    duration_ticks=index - run_start,
                    pitch_classes=TEMPLATES[label],
                    root=label % 12,
                )
            )
        run_start = index

    return SymbolicScore(
        melody=melody,
        chords=chords,
        ticks_per_beat=frames.frames_per_beat,
        bpm=TARGET_BPM,
        end_ticks=len(frames),
        triplet_onsets=_find_triplets(melody, frames.frames_per_beat),
    )


def _find_triplets(melody: List[NoteEvent], frames_per_beat: int) -> List[int]:
    onsets: List[int] = []
    for first, second, third in zip(melody, melody[1:], melody[2:]):
        if first.onset_ticks % frames_per_beat:
            continue
        if (first.end_ticks, second.end_ticks) != (second.onset_ticks, third.onset_ticks):
            continue
        durations = (first.duration_ticks, second.duration_ticks, third.duration_ticks)
        if durations == TRIPLET_PATTERN:
            onsets.append(first.onset_ticks)
    return onsets


def to_wavenet_frames(
    frames: FrameSequence, warnings: Optional[List[str]] = None
) -> WaveNetFrames:
    """hold → 직전 라벨, 쉼표 → 0 으로 바꿔 WaveNet 표현을 만듭니다"""
    melody: List[int] = []
    previous = 0
    collided = False
    for label in frames.melody:
        if label == HOLD_LABEL:
            value = previous
        elif label == REST_LABEL:
            value = 0
        else:
            value = label
            collided = collided or label == 0
        melody.append(value)
        previous = value
    if collided:
        _warn(warnings, "음높이 0이 WaveNet 표현에서 쉼표와 구분되지 않습니다")
    return WaveNetFrames(melody=melody, chords=list(frames.chords))


def from_wavenet_labels(labels: List[int], previous: Optional[int] = None) -> List[int]:
    """
    WaveNet 멜로디 라벨을 130-라벨 멜로디로 디코딩합니다.

    0은 쉼표, 직전과 같은 라벨은 hold, 나머지는 새 음입니다.

    Args:
        labels: 0..127 라벨
        previous: labels 바로 앞의 WaveNet 라벨 (이어 생성할 때)

    Returns:
        List[int]: 0..129 멜로디 라벨
    """
    decoded: List[int] = []
    for label in labels:
        if label == 0:
            decoded.append(REST_LABEL)
        elif label == previous:
            decoded.append(HOLD_LABEL)
        else:
            decoded.append(label)
        previous = label
    return decoded


def transpose_pitch(pitch: int, shift: int) -> int:
    """음높이를 올리되 127을 넘으면 한 옥타브 내립니다"""
    moved = pitch + shift
    return moved if moved < PITCH_COUNT else moved - 12


def transpose_frames(frames: FrameSequence, shift: int) -> FrameSequence:
    melody = [
        label if label >= PITCH_COUNT else transpose_pitch(label, shift)
        for label in frames.melody
    ]
    chords = [transpose_chord_label(label, shift) for label in frames.chords]
    return FrameSequence(melody=melody, chords=chords, frames_per_beat=frames.frames_per_beat)


def transpose_augment(frames: FrameSequence) -> List[FrameSequence]:
    """반음 0..11 이동한 12개 조성 버전"""
    return [transpose_frames(frames, shift) for shift in range(12)]


def encode_lstm(frames: FrameSequence) -> np.ndarray:
    """(T, 155) one-hot: 멜로디 130열 + 코드 25열"""
    length = len(frames)
    batch = np.zeros((length, MELODY_VOCAB + CHORD_VOCAB))
    rows = np.arange(length)
    batch[rows, np.asarray(frames.melody, dtype=int)] = 1.0
    batch[rows, MELODY_VOCAB + np.asarray(frames.chords, dtype=int)] = 1.0
    return batch


def encode_wavenet(frames: WaveNetFrames) -> Tuple[np.ndarray, np.ndarray]:
    """WaveNet 표현의 (T, 128) 멜로디 one-hot과 (T, 25) 코드 one-hot"""
    length = len(frames)
    melody = np.zeros((length, PITCH_COUNT))
    chords = np.zeros((length, CHORD_VOCAB))
    rows = np.arange(length)
    melody[rows, np.asarray(frames.melody, dtype=int)] = 1.0
    chords[rows, np.asarray(frames.chords, dtype=int)] = 1.0
    return melody, chords
