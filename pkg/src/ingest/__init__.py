# src/ingest/__init__.py
# 악보 입력(SMF / 텍스트) 파싱 모듈

from .score_builder import PolyphonyError, load_score, normalize_tempo, to_symbolic_score
from .score_text import ScoreTextError, parse_score_text, render_score_text
from .smf_parser import SmfParseError, parse_smf, read_vlq, write_vlq
from .smf_writer import write_smf

__all__ = [
    "PolyphonyError",
    "load_score",
    "normalize_tempo",
    "to_symbolic_score",
    "ScoreTextError",
    "parse_score_text",
    "render_score_text",
    "SmfParseError",
    "parse_smf",
    "read_vlq",
    "write_vlq",
    "write_smf",
]
