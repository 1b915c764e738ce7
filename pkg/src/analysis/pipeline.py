# src/analysis/pipeline.py
# 악보 → 크로마 → θ 스윕 → 오라클 → 모티프 분석 파이프라인

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from src.ingest.score_builder import normalize_tempo
from src.models.analysis_models import IRCurve, PatternSet, SampleSummary
from src.models.score_models import SymbolicScore

from .chroma import SAMPLE_RATE, ChromaSequence, beat_chroma, stft_chroma, symbolic_chroma, synthesize
from .information_rate import Estimator, default_theta_grid, sweep_theta
from .oracle import Oracle, build_oracle
from .patterns import DEFAULT_MIN_LEN, find_patterns

logger = logging.getLogger(__name__)


@dataclass
class AnalysisResult:
    """샘플 하나의 분석 결과"""

    ir_curve: IRCurve
    patterns: PatternSet
    chroma: ChromaSequence
    oracle: Oracle

    def summary(self, name: str) -> SampleSummary:
        motifs = self.patterns.motifs
        return SampleSummary(
            name=name,
            frames=len(self.chroma),
            best_theta=self.ir_curve.best_theta,
            best_ir=self.ir_curve.ir_totals[self.ir_curve.best_index],
            motif_count=len(motifs),
            longest_motif=max((m.length for m in motifs), default=0),
            covered_frames=len(self.patterns.covered_states()),
        )


def score_chroma(
    score: SymbolicScore, symbolic: bool = False, sample_rate: float = SAMPLE_RATE
) -> ChromaSequence:
    """
    120 bpm으로 맞춘 뒤 박 단위 크로마를 만듭니다.

    symbolic=True면 합성을 건너뛰고 음표에서 바로 계산합니다.
    """
    score = normalize_tempo(score)
    if symbolic:
        return symbolic_chroma(score)
    samples = synthesize(score, sample_rate)
    return beat_chroma(stft_chroma(samples, sample_rate), beat_seconds=60.0 / score.bpm)


def analyze_sample(
    score: SymbolicScore,
    theta_grid: Optional[Sequence[float]] = None,
    min_len: int = DEFAULT_MIN_LEN,
    symbolic: bool = False,
    estimator: Estimator = "compror",
    sample_rate: float = SAMPLE_RATE,
) -> AnalysisResult:
    """
    크로마 → θ 스윕 → 최적 θ 오라클 → 모티프 탐색.

    Args:
        score: 분석할 악보
        theta_grid: θ 후보 (None이면 default_theta_grid)
        min_len: 최소 모티프 길이 (박 프레임)
        symbolic: True면 합성 없는 심볼릭 크로마 사용
        estimator: θ 선택에 쓸 IR 추정기
        sample_rate: 합성 샘플레이트

    Returns:
        AnalysisResult: IR 곡선, 모티프, 크로마, 오라클
    """
    chroma = score_chroma(score, symbolic=symbolic, sample_rate=sample_rate)
    features = list(chroma.frames)
    grid = list(theta_grid) if theta_grid is not None else default_theta_grid(features)
    curve = sweep_theta(features, grid, metric="euclidean", estimator=estimator)
    oracle = build_oracle(features, curve.best_theta, metric="euclidean")
    patterns = find_patterns(oracle, min_len=min_len)
    logger.info(
        f"분석 완료: {len(chroma)}프레임, θ={curve.best_theta:.4g}, 모티프 {len(patterns.motifs)}개"
    )
    return AnalysisResult(ir_curve=curve, patterns=patterns, chroma=chroma, oracle=oracle)


def compare_samples(
    scores: Dict[str, SymbolicScore], **options: Any
) -> Dict[str, AnalysisResult]:
    """이름별 악보(원곡 + 생성 결과)를 같은 옵션으로 분석합니다."""
    results: Dict[str, AnalysisResult] = {}
    for name, score in scores.items():
        logger.info(f"샘플 분석: {name}")
        results[name] = analyze_sample(score, **options)
    return results


def summarize(results: Dict[str, AnalysisResult]) -> List[SampleSummary]:
    return [result.summary(name) for name, result in results.items()]


def curve_rows(curve: IRCurve) -> List[Dict[str, Any]]:
    return [
        {"theta": theta, "ir_total": total, "best": theta == curve.best_theta}
        for theta, total in zip(curve.thetas, curve.ir_totals)
    ]


def pattern_rows(patterns: PatternSet) -> List[Dict[str, Any]]:
    rows = []
    for index, motif in enumerate(patterns.motifs):
        for end in motif.occurrences:
            rows.append(
                {"motif": index, "length": motif.length, "start": end - motif.length + 1, "end": end}
            )
    return rows


def chroma_rows(chroma: ChromaSequence) -> List[Dict[str, Any]]:
    rows = []
    for index, frame in enumerate(chroma.frames):
        row: Dict[str, Any] = {"frame": index}
        row.update({f"pc{pc}": float(frame[pc]) for pc in range(12)})
        rows.append(row)
    return rows

