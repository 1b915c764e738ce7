# src/analysis/chroma.py
# 사인파 합성, STFT 크로마그램, 박 단위 크로마, 심볼릭 크로마

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from src.models.score_models import SymbolicScore

logger = logging.getLogger(__name__)

SAMPLE_RATE = 44100
STFT_WINDOW = 4096
STFT_HOP = 1024
FADE_SECONDS = 0.01
PEAK_LEVEL = 0.9
LOWEST_FREQUENCY = 27.5  # A0
CHORD_BASE_PITCH = 48


class ChromaError(ValueError):
    """크로마 계산 입력 오류"""


@dataclass
class ChromaSequence:
    """(N, 12) pitch class 에너지와 프레임 속도(Hz)"""

    frames: np.ndarray
    frame_rate: float

    def __post_init__(self):
        if self.frames.ndim != 2 or self.frames.shape[1] != 12:
            raise ChromaError(f"크로마 shape은 (N, 12)여야 합니다: {self.frames.shape}")
        if self.frames.shape[0] < 1:
            raise ChromaError("크로마 프레임이 없습니다")

    def __len__(self) -> int:
        return self.frames.shape[0]


def midi_frequency(pitch: float) -> float:
    return 440.0 * 2.0 ** ((pitch - 69) / 12)


def _sounding_notes(score: SymbolicScore) -> Iterator[Tuple[float, float, int]]:
    """(시작 초, 길이 초, 음높이): 멜로디 음과 코드 구성음(C3 옥타브)"""
    seconds_per_tick = 60.0 / score.bpm / score.ticks_per_beat
    for note in score.melody:
        yield note.onset_ticks * seconds_per_tick, note.duration_ticks * seconds_per_tick, note.pitch
    for chord in score.chords:
        for pc in sorted(chord.pitch_classes):
            yield (
                chord.onset_ticks * seconds_per_tick,
                chord.duration_ticks * seconds_per_tick,
                CHORD_BASE_PITCH + pc,
            )


def render_notes(score: SymbolicScore, sample_rate: float = SAMPLE_RATE) -> np.ndarray:
    """
    정규화 전 가산 합성 결과.

    각 음은 sin(2π f t)에 10 ms 선형 fade-in/out을 곱한 것이고 모두 같은 이득으로 더합니다.

    Raises:
        ChromaError: 빈 악보
    """
    if score.is_empty:
        raise ChromaError("빈 악보는 합성할 수 없습니다")
    seconds_per_tick = 60.0 / score.bpm / score.ticks_per_beat
    total = int(round(score.last_tick * seconds_per_tick * sample_rate))
    samples = np.zeros(total)
    fade = int(round(FADE_SECONDS * sample_rate))

    for onset, duration, pitch in _sounding_notes(score):
        start = int(round(onset * sample_rate))
        count = min(int(round(duration * sample_rate)), total - start)
        if count <= 0:
            continue
        t = np.arange(count) / sample_rate
        tone = np.sin(2.0 * math.pi * midi_frequency(pitch) * t)
        ramp = min(fade, count // 2)
        if ramp > 0:
            envelope = np.ones(count)
            envelope[:ramp] = np.arange(ramp) / ramp
            envelope[count - ramp :] = np.arange(ramp)[::-1] / ramp
            tone *= envelope
        samples[start : start + count] += tone
    return samples


def synthesize(score: SymbolicScore, sample_rate: float = SAMPLE_RATE) -> np.ndarray:
    """render_notes 결과를 최대 진폭 0.9로 정규화"""
    samples = render_notes(score, sample_rate)
    peak = np.max(np.abs(samples)) if samples.size else 0.0
    if peak > 0:
        samples = samples * (PEAK_LEVEL / peak)
    logger.debug(f"합성 완료: {samples.size}샘플 ({samples.size / sample_rate:.2f}초)")
    return samples


def power_spectrogram(
    samples: np.ndarray, window: int = STFT_WINDOW, hop: int = STFT_HOP
) -> np.ndarray:
    """Hann 창 |STFT|², (N, window//2 + 1), N = 1 + floor((len - window) / hop)"""
    samples = np.asarray(samples, dtype=float)
    if samples.size < window:
        raise ChromaError(f"샘플 수({samples.size})가 창 크기({window})보다 작습니다")
    count = 1 + (samples.size - window) // hop
    frames = np.lib.stride_tricks.sliding_window_view(samples, window)[::hop][:count]
    spectrum = np.fft.rfft(frames * np.hanning(window), axis=1)
    return np.abs(spectrum) ** 2


def chroma_fold_matrix(window: int, sample_rate: float) -> np.ndarray:
    """(bins, 12) 접기 행렬: f ≥ 27.5 Hz 빈은 round(12·log2(f/440) + 69) mod 12 로"""
    frequencies = np.fft.rfftfreq(window, 1.0 / sample_rate)
    fold = np.zeros((frequencies.size, 12))
    usable = frequencies >= LOWEST_FREQUENCY
    classes = np.round(12 * np.log2(frequencies[usable] / 440.0) + 69).astype(int) % 12
    fold[np.flatnonzero(usable), classes] = 1.0
    return fold


def stft_chroma(
    samples: np.ndarray,
    sample_rate: float = SAMPLE_RATE,
    window: int = STFT_WINDOW,
    hop: int = STFT_HOP,
) -> ChromaSequence:
    """
    스펙트로그램을 12 pitch class로 접은 크로마그램.

    Args:
        samples: 오디오 샘플
        sample_rate: 샘플레이트
        window: STFT 창 크기
        hop: 창 이동 간격

    Returns:
        ChromaSequence: 프레임 속도 sample_rate / hop

    Raises:
        ChromaError: 입력이 창보다 짧은 경우
    """
    power = power_spectrogram(samples, window, hop)
    chroma = power @ chroma_fold_matrix(window, sample_rate)
    return ChromaSequence(frames=chroma, frame_rate=sample_rate / hop)


def _unit_rows(frames: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(frames, axis=1, keepdims=True)
    return np.divide(frames, norms, out=np.zeros_like(frames), where=norms > 0)


def beat_chroma(chroma: ChromaSequence, beat_seconds: float = 0.5) -> ChromaSequence:
    """프레임 시작 시각 기준으로 박마다 평균한 뒤 행을 단위 벡터로 정규화"""
    beats = np.floor(np.arange(len(chroma)) / chroma.frame_rate / beat_seconds).astype(int)
    count = int(beats[-1]) + 1
    sums = np.zeros((count, 12))
    np.add.at(sums, beats, chroma.frames)
    frames_per_beat = np.bincount(beats, minlength=count)[:, None]
    means = np.divide(sums, frames_per_beat, out=np.zeros_like(sums), where=frames_per_beat > 0)
    return ChromaSequence(frames=_unit_rows(means), frame_rate=1.0 / beat_seconds)


def symbolic_chroma(score: SymbolicScore, include_chords: bool = True) -> ChromaSequence:
    """
    합성 없이 박 단위 크로마를 바로 계산합니다 (결정적인 빠른 경로).

    박 [b, b+1)과 겹치는 길이(박 단위)만큼 멜로디 음과 코드 구성음의 pitch class에 더한 뒤
    단위 벡터로 정규화합니다.
    """
    if score.last_tick == 0:
        raise ChromaError("빈 악보의 크로마는 계산할 수 없습니다")
    tpb = score.ticks_per_beat
    count = -(-score.last_tick // tpb)
    energy = np.zeros((count, 12))

    def add(onset: int, end: int, pitch_class: int) -> None:
        for beat in range(onset // tpb, min(count, -(-end // tpb))):
            overlap = min(end, (beat + 1) * tpb) - max(onset, beat * tpb)
            if overlap > 0:
                energy[beat, pitch_class] += overlap / tpb

    for note in score.melody:
        add(note.onset_ticks, note.end_ticks, note.pitch % 12)
    if include_chords:
        for chord in score.chords:
            for pc in chord.pitch_classes:
                add(chord.onset_ticks, chord.end_ticks, pc)
    beat_seconds = 60.0 / score.bpm
    return ChromaSequence(frames=_unit_rows(energy), frame_rate=1.0 / beat_seconds)
