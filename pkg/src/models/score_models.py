# src/models/score_models.py
# 악보/프레임 표현을 위한 핵심 데이터 모델들

from typing import FrozenSet, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

# 멜로디 라벨: 0..127 음높이 onset, 128 쉼표, 129 지속(hold)
PITCH_COUNT = 128
REST_LABEL = 128
HOLD_LABEL = 129
MELODY_VOCAB = 130

# 코드 라벨: 0..11 장3화음, 12..23 단3화음, 24 NC
CHORD_TEMPLATES = 24
NC_LABEL = 24
CHORD_VOCAB = 25

FRAMES_PER_BEAT = 16
TARGET_BPM = 120.0


class NoteEvent(BaseModel):
    """멜로디 음표 하나"""

    onset_ticks: int = Field(..., ge=0, description="시작 위치 (tick)")
    duration_ticks: int = Field(..., gt=0, description="길이 (tick)")
    pitch: int = Field(..., ge=0, le=127, description="MIDI 음높이")

    @property
    def end_ticks(self) -> int:
        return self.onset_ticks + self.duration_ticks


class ChordEvent(BaseModel):
    """코드 구간 하나"""

    onset_ticks: int = Field(..., ge=0, description="시작 위치 (tick)")
    duration_ticks: int = Field(..., gt=0, description="길이 (tick)")
    pitch_classes: FrozenSet[int] = Field(
        default_factory=frozenset, description="울리는 음의 pitch class 집합 (0-11)"
    )
    root: Optional[int] = Field(default=None, ge=0, le=11, description="근음 (알 때만)")

    @field_validator("pitch_classes")
    @classmethod
    def _check_pitch_classes(cls, value: FrozenSet[int]) -> FrozenSet[int]:
        bad = [pc for pc in value if not 0 <= pc <= 11]
        if bad:
            raise ValueError(f"pitch class 범위 초과: {sorted(bad)}")
        return value

    @property
    def end_ticks(self) -> int:
        return self.onset_ticks + self.duration_ticks


class SymbolicScore(BaseModel):
    """파싱 직후, 양자화 이전의 악보 표현"""

    melody: List[NoteEvent] = Field(default_factory=list, description="단선율 멜로디")
    chords: List[ChordEvent] = Field(default_factory=list, description="코드 진행")
    ticks_per_beat: int = Field(..., gt=0, description="박당 tick 수")
    bpm: float = Field(..., gt=0, description="템포")
    end_ticks: Optional[int] = Field(
        default=None, ge=0, description="곡의 명시적 끝 (뒤쪽 쉼표 보존용)"
    )
    triplet_onsets: List[int] = Field(
        default_factory=list, description="셋잇단 그룹(5+6+5) 시작 tick 표시"
    )

    @model_validator(mode="after")
    def _check_ordering(self) -> "SymbolicScore":
        for prev, cur in zip(self.melody, self.melody[1:]):
            if prev.end_ticks > cur.onset_ticks:
                raise ValueError(
                    f"멜로디가 단선율이 아닙니다: tick {cur.onset_ticks}에서 겹침"
                )
        for prev, cur in zip(self.chords, self.chords[1:]):
            if prev.end_ticks > cur.onset_ticks:
                raise ValueError(f"코드 구간이 겹칩니다: tick {cur.onset_ticks}")
        return self

    @property
    def last_tick(self) -> int:
        """모든 이벤트와 end_ticks를 포함한 곡의 끝"""
        ends = [n.end_ticks for n in self.melody] + [c.end_ticks for c in self.chords]
        if self.end_ticks is not None:
            ends.append(self.end_ticks)
        return max(ends) if ends else 0

    @property
    def is_empty(self) -> bool:
        return not self.melody and not self.chords


class SmfEvent(BaseModel):
    """SMF 트랙 안의 시간 이벤트"""

    delta_ticks: int = Field(..., ge=0)
    kind: Literal["note_on", "note_off", "tempo", "other"]
    channel: Optional[int] = None
    pitch: Optional[int] = None
    velocity: Optional[int] = None
    tempo_us_per_beat: Optional[int] = None
    offset: int = Field(default=0, description="파일 내 바이트 오프셋 (진단용)")

    @property
    def bpm(self) -> Optional[float]:
        if self.tempo_us_per_beat:
            return 60_000_000 / self.tempo_us_per_beat
        return None


class RawSmfEvents(BaseModel):
    """MThd/MTrk 청크를 디코딩한 결과"""

    tracks: List[List[SmfEvent]] = Field(default_factory=list)
    ticks_per_beat: int = Field(..., gt=0)
    format: int = Field(default=1)
    warnings: List[str] = Field(default_factory=list)

    @property
    def event_count(self) -> int:
        return sum(len(track) for track in self.tracks)


class FrameSequence(BaseModel):
    """1/16 박 프레임 단위 멜로디/코드 라벨 (LSTM 표현)"""

    melody: List[int] = Field(..., description="멜로디 라벨 0..129")
    chords: List[int] = Field(..., description="코드 라벨 0..24")
    frames_per_beat: int = Field(default=FRAMES_PER_BEAT)

    @model_validator(mode="after")
    def _check_labels(self) -> "FrameSequence":
        if len(self.melody) != len(self.chords):
            raise ValueError(
                f"멜로디/코드 길이 불일치: {len(self.melody)} != {len(self.chords)}"
            )
        if any(not 0 <= m < MELODY_VOCAB for m in self.melody):
            raise ValueError("멜로디 라벨은 0..129 범위여야 합니다")
        if any(not 0 <= c < CHORD_VOCAB for c in self.chords):
            raise ValueError("코드 라벨은 0..24 범위여야 합니다")
        previous = REST_LABEL
        for index, label in enumerate(self.melody):
            if label == HOLD_LABEL and previous == REST_LABEL:
                raise ValueError(f"프레임 {index}: hold는 음 또는 hold 뒤에만 올 수 있습니다")
            previous = label
        return self

    def __len__(self) -> int:
        return len(self.melody)

    def head(self, frames: int) -> "FrameSequence":
        """앞쪽 frames 개 프레임만 잘라낸 시퀀스"""
        return FrameSequence(
            melody=self.melody[:frames],
            chords=self.chords[:frames],
            frames_per_beat=self.frames_per_beat,
        )


class WaveNetFrames(BaseModel):
    """WaveNet 표현: 0은 쉼표, 같은 라벨 연속은 지속음"""

    melody: List[int] = Field(..., description="멜로디 라벨 0..127")
    chords: List[int] = Field(..., description="코드 라벨 0..24")

    @model_validator(mode="after")
    def _check_labels(self) -> "WaveNetFrames":
        if len(self.melody) != len(self.chords):
            raise ValueError("멜로디/코드 길이 불일치")
        if any(not 0 <= m < PITCH_COUNT for m in self.melody):
            raise ValueError("WaveNet 멜로디 라벨은 0..127 범위여야 합니다")
        if any(not 0 <= c < CHORD_VOCAB for c in self.chords):
            raise ValueError("코드 라벨은 0..24 범위여야 합니다")
        return self

    def __len__(self) -> int:
        return len(self.melody)
