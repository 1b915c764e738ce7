# src/training/sampler.py
# 설문 프로토콜의 이어 생성 (프라임 복사 + 자기회귀 샘플링)

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.encoding.frames import from_wavenet_labels, to_wavenet_frames
from src.generators.base import MelodyModel
from src.models.score_models import HOLD_LABEL, REST_LABEL, FrameSequence
from src.models.training_models import GenerationTask
from src.numerics.tensor_ops import softmax

logger = logging.getLogger(__name__)

ORIGINAL_KEY = "original"


def sample_label(
    logits: np.ndarray,
    temperature: float,
    rng: np.random.Generator,
    banned: Sequence[int] = (),
) -> int:
    """softmax(logits / temperature)에서 라벨 하나 (temperature 0이면 argmax)"""
    scores = np.array(logits, dtype=np.float64)
    if len(banned):
        scores[list(banned)] = -np.inf
    if temperature == 0:
        return int(np.argmax(scores))
    probs = softmax(scores / temperature)
    return int(rng.choice(len(probs), p=probs))


def generate_continuation(
    model: MelodyModel,
    prime: FrameSequence,
    chords_full: Sequence[int],
    task: Optional[GenerationTask] = None,
) -> FrameSequence:
    """
    프라임 뒤로 멜로디를 이어 생성합니다.

    프라임 프레임은 그대로 복사하고, 이후 라벨은 softmax(logits/temperature)에서 하나씩
    뽑습니다. 쉼표 뒤나 첫 프레임의 hold는 금지해 결과가 항상 유효한 FrameSequence가
    되도록 합니다. TCN 출력은 지속음 구간 디코딩으로 130-라벨로 바꿉니다.

    Args:
        model: 학습된 모델
        prime: 프라임 (prime_beats × 16 프레임 이상)
        chords_full: 생성 구간 전체의 코드 라벨
        task: 생성 과제 설정

    Returns:
        FrameSequence: 프라임 + 생성 프레임

    Raises:
        ValueError: 프라임이 짧거나 코드 진행이 요청 길이보다 짧은 경우
    """
    task = task or GenerationTask()
    prime_length = task.prime_frames(prime.frames_per_beat)
    total = task.total_frames(prime.frames_per_beat)
    if len(prime) < prime_length:
        raise ValueError(f"프라임 길이({len(prime)})가 {prime_length}프레임보다 짧습니다")
    if len(chords_full) < total:
        raise ValueError(f"코드 진행 길이({len(chords_full)})가 요청 길이({total})보다 짧습니다")

    chords = [int(c) for c in chords_full[:total]]
    rng = np.random.default_rng(task.seed)
    primed = FrameSequence(
        melody=prime.melody[:prime_length],
        chords=chords[:prime_length],
        frames_per_beat=prime.frames_per_beat,
    )
    melody: List[int] = list(primed.melody)
    session = model.start_session(chords)

    if model.kind == "tcn":
        wavenet = to_wavenet_frames(primed).melody
        for label in wavenet:
            session.push(label)
        previous: Optional[int] = wavenet[-1] if wavenet else None
        for _ in range(prime_length, total):
            label = sample_label(session.next_logits(), task.temperature, rng)
            melody.extend(from_wavenet_labels([label], previous=previous))
            session.push(label)
            previous = label
    else:
        for label in melody:
            session.push(label)
        for _ in range(prime_length, total):
            banned = [HOLD_LABEL] if not melody or melody[-1] == REST_LABEL else []
            label = sample_label(session.next_logits(), task.temperature, rng, banned)
            melody.append(label)
            session.push(label)

    logger.debug(
        f"{model.kind} 이어 생성 완료: 프라임 {prime_length} + 생성 {total - prime_length}프레임"
    )
    return FrameSequence(melody=melody, chords=chords, frames_per_beat=prime.frames_per_beat)


def build_survey_group(
    song: FrameSequence,
    models: Dict[str, MelodyModel],
    task: Optional[GenerationTask] = None,
) -> Dict[str, FrameSequence]:
    """
    같은 프라임에서 모델별 이어 생성을 만들고 원곡 구간과 함께 묶습니다.

    Returns:
        Dict[str, FrameSequence]: "original" 과 모델 이름별 시퀀스
    """
    task = task or GenerationTask()
    total = task.total_frames(song.frames_per_beat)
    if len(song) < total:
        raise ValueError(f"곡 길이({len(song)})가 프라임+생성 길이({total})보다 짧습니다")
    group = {ORIGINAL_KEY: song.head(total)}
    prime = song.head(task.prime_frames(song.frames_per_beat))
    for name, model in models.items():
        group[name] = generate_continuation(model, prime, song.chords, task)
    logger.info(f"설문 샘플 그룹 생성: {', '.join(group)}")
    return group
