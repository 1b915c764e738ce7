# src/encoding/frame_io.py
# 프레임 시퀀스 CSV 입출력 (frame_index, melody_label, chord_label)

import csv
from pathlib import Path
from typing import Union

from src.models.score_models import FRAMES_PER_BEAT, FrameSequence

FRAME_CSV_HEADER = ["frame_index", "melody_label", "chord_label"]


def write_frames_csv(frames: FrameSequence, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(FRAME_CSV_HEADER)
        for index, (melody, chord) in enumerate(zip(frames.melody, frames.chords)):
            writer.writerow([index, melody, chord])
    return path


def read_frames_csv(path: Union[str, Path]) -> FrameSequence:
    """
    write_frames_csv로 저장한 CSV를 읽습니다.

    Raises:
        ValueError: 헤더가 다르거나 frame_index가 0부터 연속이 아닌 경우
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != FRAME_CSV_HEADER:
            raise ValueError(f"프레임 CSV 헤더가 올바르지 않습니다: {header}")
        melody, chords = [], []
        for expected, row in enumerate(reader):
            if int(row[0]) != expected:
                raise ValueError(f"frame_index가 연속이 아닙니다: {row[0]} (기대값 {expected})")
            melody.append(int(row[1]))
            chords.append(int(row[2]))
    return FrameSequence(melody=melody, chords=chords, frames_per_beat=FRAMES_PER_BEAT)
