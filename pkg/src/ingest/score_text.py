# src/ingest/score_text.py
# 줄 단위 텍스트 악보 포맷 파서/렌더러

import logging
from typing import List, Optional, Tuple

from src.encoding.chords import format_chord_name, parse_chord_name
from src.models.score_models import (
    FRAMES_PER_BEAT,
    TARGET_BPM,
    ChordEvent,
    NoteEvent,
    SymbolicScore,
)

logger = logging.getLogger(__name__)


class ScoreTextError(ValueError):
    """텍스트 악보 형식 오류 (줄 번호 포함, 1-based)"""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"{line_no}번째 줄: {message}")
        self.line_no = line_no


def _int_field(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ScoreTextError(f"{what}은(는) 정수여야 합니다: {token!r}", line_no) from None


def parse_score_text(text: str) -> SymbolicScore:
    """
    텍스트 악보를 SymbolicScore로 파싱합니다.

    형식:
        bpm <실수> / tpb <정수> / end <tick> 헤더,
        `N <onset> <dur> <pitch>` 멜로디, `C <onset> <dur> <코드이름>` 코드,
        `T <onset>` 셋잇단 그룹 표시. 빈 줄과 `#` 주석은 무시합니다.

    Args:
        text: UTF-8 텍스트

    Returns:
        SymbolicScore: 파싱 결과

    Raises:
        ScoreTextError: 형식 오류, 범위 오류, 이벤트 없음
    """
    bpm = TARGET_BPM
    ticks_per_beat = FRAMES_PER_BEAT
    end_ticks: Optional[int] = None
    notes: List[Tuple[NoteEvent, int]] = []
    chords: List[Tuple[ChordEvent, int]] = []
    triplets: List[int] = []
    line_no = 0

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        tokens = stripped.split()
        tag = tokens[0]

        if tag == "bpm" and len(tokens) == 2:
            try:
                bpm = float(tokens[1])
            except ValueError:
                raise ScoreTextError(f"bpm 값 오류: {tokens[1]!r}", line_no) from None
            if bpm <= 0:
                raise ScoreTextError("bpm은 양수여야 합니다", line_no)
        elif tag == "tpb" and len(tokens) == 2:
            ticks_per_beat = _int_field(tokens[1], line_no, "tpb")
            if ticks_per_beat <= 0:
                raise ScoreTextError("tpb는 양수여야 합니다", line_no)
        elif tag == "end" and len(tokens) == 2:
            end_ticks = _int_field(tokens[1], line_no, "end")
            if end_ticks < 0:
                raise ScoreTextError("end는 0 이상이어야 합니다", line_no)
        elif tag == "T" and len(tokens) == 2:
            triplets.append(_int_field(tokens[1], line_no, "셋잇단 onset"))
        elif tag == "N" and len(tokens) == 4:
            onset = _int_field(tokens[1], line_no, "onset")
            duration = _int_field(tokens[2], line_no, "duration")
            pitch = _int_field(tokens[3], line_no, "pitch")
            if onset < 0 or duration <= 0:
                raise ScoreTextError(f"onset/duration 범위 오류: {onset}, {duration}", line_no)
            if not 0 <= pitch <= 127:
                raise ScoreTextError(f"음높이 범위 초과: {pitch}", line_no)
            notes.append(
                (NoteEvent(onset_ticks=onset, duration_ticks=duration, pitch=pitch), line_no)
            )
        elif tag == "C" and len(tokens) == 4:
            onset = _int_field(tokens[1], line_no, "onset")
            duration = _int_field(tokens[2], line_no, "duration")
            if onset < 0 or duration <= 0:
                raise ScoreTextError(f"onset/duration 범위 오류: {onset}, {duration}", line_no)
            try:
                pitch_classes, root = parse_chord_name(tokens[3])
            except ValueError as e:
                raise ScoreTextError(str(e), line_no) from None
            chords.append(
                (
                    ChordEvent(
                        onset_ticks=onset,
                        duration_ticks=duration,
                        pitch_classes=pitch_classes,
                        root=root,
                    ),
                    line_no,
                )
            )
        else:
            raise ScoreTextError(f"알 수 없는 줄: {stripped!r}", line_no)

    if not notes and not chords:
        raise ScoreTextError("no events", line_no)

    notes.sort(key=lambda item: item[0].onset_ticks)
    chords.sort(key=lambda item: item[0].onset_ticks)
    _check_overlaps(notes, "멜로디 음")
    _check_overlaps(chords, "코드")

    return SymbolicScore(
        melody=[note for note, _ in notes],
        chords=[chord for chord, _ in chords],
        ticks_per_beat=ticks_per_beat,
        bpm=bpm,
        end_ticks=end_ticks,
        triplet_onsets=sorted(triplets),
    )


def _check_overlaps(events: List[Tuple], what: str) -> None:
    for (prev, _), (cur, line_no) in zip(events, events[1:]):
        if prev.end_ticks > cur.onset_ticks:
            raise ScoreTextError(f"{what}이(가) tick {cur.onset_ticks}에서 겹칩니다", line_no)


def render_score_text(score: SymbolicScore) -> str:
    """SymbolicScore를 정규형 텍스트로 출력 (parse_score_text의 역변환)"""
    lines = [f"bpm {float(score.bpm)!r}", f"tpb {score.ticks_per_beat}"]
    if score.end_ticks is not None:
        lines.append(f"end {score.end_ticks}")
    lines.extend(f"T {onset}" for onset in score.triplet_onsets)
    for note in score.melody:
        lines.append(f"N {note.onset_ticks} {note.duration_ticks} {note.pitch}")
    for chord in score.chords:
        name = format_chord_name(chord.pitch_classes, chord.root)
        lines.append(f"C {chord.onset_ticks} {chord.duration_ticks} {name}")
    return "\n".join(lines) + "\n"
