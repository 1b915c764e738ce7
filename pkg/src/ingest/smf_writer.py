# src/ingest/smf_writer.py
# generate 명령용 최소 SMF(포맷 1) 출력

from typing import List, Tuple

from src.models.score_models import SymbolicScore

from .smf_parser import write_vlq

CHORD_BASE_PITCH = 48  # 근음을 C3 옥타브에 두고 나머지를 그 위로 쌓음
MELODY_CHANNEL = 0
CHORD_CHANNEL = 1


def _track_chunk(timed: List[Tuple[int, int, bytes]]) -> bytes:
    """(절대 tick, 정렬 우선순위, 메시지) 목록을 MTrk 청크로 직렬화"""
    body = bytearray()
    now = 0
    for tick, _, message in sorted(timed, key=lambda item: (item[0], item[1])):
        body += write_vlq(tick - now)
        body += message
        now = tick
    body += write_vlq(0) + b"\xff\x2f\x00"
    return b"MTrk" + len(body).to_bytes(4, "big") + bytes(body)


def write_smf(score: SymbolicScore) -> bytes:
    """
    악보를 포맷 1 SMF로 직렬화합니다.

    트랙 0은 템포 + 멜로디(채널 0), 트랙 1은 코드(채널 1)로 load_score 기본 트랙 번호와 맞습니다.
    같은 tick에서는 note-off가 note-on보다 먼저 나옵니다.

    Args:
        score: 출력할 악보

    Returns:
        bytes: SMF 파일 내용
    """
    tempo_us = round(60_000_000 / score.bpm)
    melody_events: List[Tuple[int, int, bytes]] = [
        (0, -1, b"\xff\x51\x03" + tempo_us.to_bytes(3, "big"))
    ]
    for note in score.melody:
        melody_events.append((note.onset_ticks, 1, bytes([0x90 | MELODY_CHANNEL, note.pitch, 80])))
        melody_events.append((note.end_ticks, 0, bytes([0x80 | MELODY_CHANNEL, note.pitch, 0])))

    chord_events: List[Tuple[int, int, bytes]] = []
    for chord in score.chords:
        base = CHORD_BASE_PITCH + (chord.root or 0)
        for pc in sorted(chord.pitch_classes):
            pitch = base + (pc - (chord.root or 0)) % 12
            chord_events.append((chord.onset_ticks, 1, bytes([0x90 | CHORD_CHANNEL, pitch, 64])))
            chord_events.append((chord.end_ticks, 0, bytes([0x80 | CHORD_CHANNEL, pitch, 0])))

    header = (
        b"MThd"
        + (6).to_bytes(4, "big")
        + (1).to_bytes(2, "big")
        + (2).to_bytes(2, "big")
        + score.ticks_per_beat.to_bytes(2, "big")
    )
    return header + _track_chunk(melody_events) + _track_chunk(chord_events)
