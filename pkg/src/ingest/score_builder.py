# src/ingest/score_builder.py
# SMF 이벤트 → SymbolicScore 변환, 템포 정규화, 파일 로드

import logging
from collections import defaultdict, deque
from pathlib import Path
from typing import Deque, Dict, List, Optional, Tuple, Union

from src.models.score_models import (
    TARGET_BPM,
    ChordEvent,
    NoteEvent,
    RawSmfEvents,
    SmfEvent,
    SymbolicScore,
)

from .score_text import parse_score_text
from .smf_parser import parse_smf

logger = logging.getLogger(__name__)

MIDI_SUFFIXES = (".mid", ".midi")

# (onset, end, pitch)
NoteSpan = Tuple[int, int, int]


class PolyphonyError(ValueError):
    """멜로디 트랙에서 두 음이 겹침"""

    def __init__(self, tick: int):
        super().__init__(f"멜로디 트랙이 단선율이 아닙니다: tick {tick}에서 음이 겹칩니다")
        self.tick = tick


def _pair_notes(events: List[SmfEvent]) -> List[NoteSpan]:
    """note-on/off를 (채널, 음높이)별 FIFO로 짝지어 절대 tick 구간으로 변환"""
    now = 0
    pending: Dict[Tuple[int, int], Deque[int]] = defaultdict(deque)
    spans: List[NoteSpan] = []
    for event in events:
        now += event.delta_ticks
        if event.kind == "note_on":
            pending[(event.channel or 0, event.pitch)].append(now)
        elif event.kind == "note_off":
            queue = pending.get((event.channel or 0, event.pitch))
            if not queue:
                logger.debug(f"짝 없는 note-off 무시: 음 {event.pitch}, tick {now}")
                continue
            onset = queue.popleft()
            if now > onset:
                spans.append((onset, now, event.pitch))
            else:
                logger.warning(f"길이 0인 음 무시: 음 {event.pitch}, tick {onset}")
    spans.sort()
    return spans


def _first_tempo(raw: RawSmfEvents) -> Optional[float]:
    earliest: Optional[Tuple[int, float]] = None
    for track in raw.tracks:
        now = 0
        for event in track:
            now += event.delta_ticks
            if event.kind == "tempo" and event.bpm:
                if earliest is None or now < earliest[0]:
                    earliest = (now, event.bpm)
                break
    return earliest[1] if earliest else None


def to_symbolic_score(
    raw: RawSmfEvents, melody_track: int = 0, chord_track: Optional[int] = 1
) -> SymbolicScore:
    """
    디코딩된 SMF 이벤트를 SymbolicScore로 조립합니다.

    코드 트랙에서 같은 onset에 시작하는 음들은 하나의 ChordEvent가 되고,
    근음은 가장 낮은 음의 pitch class입니다. 템포는 첫 tempo 이벤트(없으면 120)입니다.

    Args:
        raw: parse_smf 결과
        melody_track: 멜로디 트랙 인덱스
        chord_track: 코드 트랙 인덱스 (None이면 코드 없음)

    Returns:
        SymbolicScore: 조립된 악보

    Raises:
        ValueError: 멜로디 트랙이 없는 경우
        PolyphonyError: 멜로디 음이 겹치는 경우
    """
    if not 0 <= melody_track < len(raw.tracks):
        raise ValueError(f"멜로디 트랙 {melody_track}이(가) 없습니다 (트랙 {len(raw.tracks)}개)")

    melody: List[NoteEvent] = []
    previous_end = 0
    for onset, end, pitch in _pair_notes(raw.tracks[melody_track]):
        if melody and onset < previous_end:
            raise PolyphonyError(onset)
        melody.append(NoteEvent(onset_ticks=onset, duration_ticks=end - onset, pitch=pitch))
        previous_end = end

    chords: List[ChordEvent] = []
    if chord_track is not None:
        if chord_track < len(raw.tracks):
            chords = _group_chords(_pair_notes(raw.tracks[chord_track]))
        else:
            logger.warning(f"코드 트랙 {chord_track}이(가) 없어 모든 프레임을 NC로 둡니다")

    bpm = _first_tempo(raw) or TARGET_BPM
    score = SymbolicScore(
        melody=melody, chords=chords, ticks_per_beat=raw.ticks_per_beat, bpm=bpm
    )
    logger.debug(f"악보 조립: 음 {len(melody)}개, 코드 {len(chords)}개, bpm {bpm:.2f}")
    return score


def _group_chords(spans: List[NoteSpan]) -> List[ChordEvent]:
    """onset이 정확히 같은 음들을 코드 하나로 묶고, 다음 코드 onset에서 자릅니다"""
    groups: Dict[int, List[NoteSpan]] = defaultdict(list)
    for span in spans:
        groups[span[0]].append(span)
    onsets = sorted(groups)

    chords: List[ChordEvent] = []
    for index, onset in enumerate(onsets):
        members = groups[onset]
        end = max(span[1] for span in members)
        if index + 1 < len(onsets):
            end = min(end, onsets[index + 1])
        lowest = min(span[2] for span in members)
        chords.append(
            ChordEvent(
                onset_ticks=onset,
                duration_ticks=end - onset,
                pitch_classes=frozenset(span[2] % 12 for span in members),
                root=lowest % 12,
            )
        )
    return chords


def normalize_tempo(score: SymbolicScore) -> SymbolicScore:
    """bpm만 120으로 바꿉니다 (tick 값은 그대로, 박 단위 해석)"""
    if score.bpm == TARGET_BPM:
        return score
    return score.model_copy(update={"bpm": TARGET_BPM})


def load_score(
    path: Union[str, Path], melody_track: int = 0, chord_track: Optional[int] = 1
) -> SymbolicScore:
    """
    파일 확장자에 따라 SMF 또는 텍스트 악보를 읽습니다.

    Args:
        path: .mid/.midi 또는 텍스트 악보 경로
        melody_track: SMF 멜로디 트랙 인덱스
        chord_track: SMF 코드 트랙 인덱스

    Returns:
        SymbolicScore: 읽은 악보 (템포 정규화 전)
    """
    path = Path(path)
    if path.suffix.lower() in MIDI_SUFFIXES:
        raw = parse_smf(path.read_bytes())
        return to_symbolic_score(raw, melody_track=melody_track, chord_track=chord_track)
    return parse_score_text(path.read_text(encoding="utf-8"))
