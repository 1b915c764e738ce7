# tests/conftest.py
# 공용 픽스처: 텍스트 악보, 반복/비반복 프레이즈, 작은 모델 설정, --runslow 옵션

from typing import Callable, List

import numpy as np
import pytest

from src.ingest.score_text import parse_score_text
from src.models.score_models import HOLD_LABEL, REST_LABEL, FrameSequence, SymbolicScore

# 8박 프레이즈: 박마다 서로 다른 pitch class 하나
PHRASE_PITCHES = [60, 62, 64, 65, 67, 69, 71, 61]
# 반복 없는 24박: 앞 12박은 7씩, 뒤 12박은 5씩 올라가 같은 2-gram이 두 번 나오지 않음
NON_REPEATING_PCS = [(7 * i) % 12 for i in range(12)] + [(5 * i) % 12 for i in range(12, 24)]

SIMPLE_SCORE_TEXT = """\
# 두 마디 예제
bpm 120
tpb 16
N 0 16 60
N 16 8 62
N 24 8 64
N 32 32 67
N 64 16 65
N 96 32 64
C 0 64 C:maj
C 64 64 G:maj
"""


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="느린 테스트까지 실행")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="--runslow 옵션이 필요합니다")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def beat_score_text(pitches: List[int], chords: List[str] = (), tpb: int = 16) -> str:
    """박마다 4분음표 하나, chords는 4박(한 마디)마다 하나"""
    lines = ["bpm 120", f"tpb {tpb}"]
    for beat, pitch in enumerate(pitches):
        lines.append(f"N {beat * tpb} {tpb} {pitch}")
    for bar, name in enumerate(chords):
        lines.append(f"C {bar * 4 * tpb} {4 * tpb} {name}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def simple_score_text() -> str:
    return SIMPLE_SCORE_TEXT


@pytest.fixture
def simple_score() -> SymbolicScore:
    return parse_score_text(SIMPLE_SCORE_TEXT)


@pytest.fixture
def repeating_score() -> SymbolicScore:
    """8박 프레이즈를 3번 반복한 24박 멜로디 (코드 없음)"""
    return parse_score_text(beat_score_text(PHRASE_PITCHES * 3))


@pytest.fixture
def repeating_score_with_chords() -> SymbolicScore:
    return parse_score_text(beat_score_text(PHRASE_PITCHES * 3, ["C:maj", "G:maj"] * 3))


@pytest.fixture
def non_repeating_score() -> SymbolicScore:
    """반복 모티프가 없는 같은 길이(24박)의 무조 멜로디"""
    return parse_score_text(beat_score_text([60 + pc for pc in NON_REPEATING_PCS]))


@pytest.fixture
def random_frames() -> Callable[..., FrameSequence]:
    """유효한 임의 FrameSequence를 만드는 함수"""

    def make(length: int, seed: int = 0, pitches=(55, 60, 62, 64, 67, 72)) -> FrameSequence:
        rng = np.random.default_rng(seed)
        melody: List[int] = []
        for _ in range(length):
            choices = list(pitches) + [REST_LABEL]
            if melody and melody[-1] != REST_LABEL:
                choices.append(HOLD_LABEL)
            melody.append(int(rng.choice(choices)))
        chords = [int(c) for c in rng.integers(0, 25, size=length)]
        return FrameSequence(melody=melody, chords=chords)

    return make


@pytest.fixture
def tiny_configs():
    """기울기 검증/과적합용 작은 모델 설정"""
    return {
        "uni": {"layers": 2, "hidden": 4},
        "bi": {"layers": 2, "hidden": 4, "encoder_layers": 1, "encoder_hidden": 3},
        "tcn": {"kernel": 2, "dilations": [1, 2], "residual_channels": 4, "skip_channels": 4},
    }
