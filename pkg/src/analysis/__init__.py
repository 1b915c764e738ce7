# src/analysis/__init__.py
# VMO 기반 구조 분석 (크로마, 오라클, IR, 모티프)

from .chroma import ChromaError, ChromaSequence, beat_chroma, stft_chroma, symbolic_chroma, synthesize
from .information_rate import compute_ir, default_theta_grid, sweep_theta
from .oracle import Oracle, OracleError, build_oracle
from .patterns import find_patterns
from .pipeline import AnalysisResult, analyze_sample, compare_samples, summarize

__all__ = [
    "ChromaError",
    "ChromaSequence",
    "beat_chroma",
    "stft_chroma",
    "symbolic_chroma",
    "synthesize",
    "compute_ir",
    "default_theta_grid",
    "sweep_theta",
    "Oracle",
    "OracleError",
    "build_oracle",
    "find_patterns",
    "AnalysisResult",
    "analyze_sample",
    "compare_samples",
    "summarize",
]
