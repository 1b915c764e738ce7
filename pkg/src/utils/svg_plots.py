# src/utils/svg_plots.py
# IR 곡선, 모티프 등장 막대, 평점 에러바 SVG (외부 플롯 라이브러리 없이)

from pathlib import Path
from typing import List, Sequence, Tuple, Union
from xml.sax.saxutils import escape

from src.models.analysis_models import IRCurve, PatternSet
from src.models.stats_models import ModelComparisonReport

WIDTH = 640
HEIGHT = 360
MARGIN = 50
PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _document(title: str, body: List[str], height: int = HEIGHT) -> str:
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
        *body,
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def _axes(height: int = HEIGHT) -> List[str]:
    bottom = height - MARGIN
    return [
        f'<line x1="{MARGIN}" y1="{bottom}" x2="{WIDTH - MARGIN}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{bottom}" stroke="black"/>',
    ]


def _scale(low: float, high: float, out_low: float, out_high: float):
    span = high - low if high > low else 1.0

    def convert(value: float) -> float:
        return out_low + (value - low) / span * (out_high - out_low)

    return convert


def ir_curve_svg(curve: IRCurve, title: str = "IR vs theta") -> str:
    """θ에 따른 총 IR 꺾은선과 최적 θ 표시"""
    x_of = _scale(min(curve.thetas), max(curve.thetas), MARGIN, WIDTH - MARGIN)
    y_of = _scale(min(0.0, min(curve.ir_totals)), max(curve.ir_totals), HEIGHT - MARGIN, MARGIN)
    points = " ".join(
        f"{_fmt(x_of(t))},{_fmt(y_of(v))}" for t, v in zip(curve.thetas, curve.ir_totals)
    )
    best_x = _fmt(x_of(curve.best_theta))
    body = _axes() + [
        f'<polyline class="ir-curve" points="{points}" fill="none" stroke="{PALETTE[0]}" stroke-width="2"/>',
        f'<line class="best-theta" x1="{best_x}" y1="{MARGIN}" x2="{best_x}" '
        f'y2="{HEIGHT - MARGIN}" stroke="{PALETTE[3]}" stroke-dasharray="4,4"/>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">'
        f"theta (best {curve.best_theta:.4g})</text>",
        f'<text x="14" y="{HEIGHT // 2}" font-size="12" transform="rotate(-90 14 {HEIGHT // 2})">IR</text>',
    ]
    return _document(title, body)


def motif_bars_svg(patterns: PatternSet, title: str = "Motifs") -> str:
    """모티프마다 한 줄, 등장 구간마다 막대 하나"""
    row_height = 24
    height = max(HEIGHT // 2, 2 * MARGIN + row_height * max(1, len(patterns.motifs)))
    length = max(1, patterns.sequence_length)
    x_of = _scale(0, length, MARGIN, WIDTH - MARGIN)
    body = _axes(height)
    for index, motif in enumerate(patterns.motifs):
        y = MARGIN + index * row_height + 4
        color = PALETTE[index % len(PALETTE)]
        for span in motif.spans():
            x_start = x_of(span.start - 1)
            width = x_of(span.stop - 1) - x_start
            body.append(
                f'<rect class="motif-occurrence" data-motif="{index}" x="{_fmt(x_start)}" '
                f'y="{y}" width="{_fmt(width)}" height="{row_height - 8}" fill="{color}"/>'
            )
        body.append(
            f'<text x="{MARGIN - 6}" y="{y + row_height - 10}" text-anchor="end" font-size="10">'
            f"{index} (len {motif.length})</text>"
        )
    body.append(
        f'<text x="{WIDTH // 2}" y="{height - 12}" text-anchor="middle" font-size="12">'
        f"time frame (0..{patterns.sequence_length})</text>"
    )
    return _document(title, body, height)


def error_bar_svg(report: ModelComparisonReport, title: str = "Ratings") -> str:
    """모델별 평균 평점 막대와 평균제곱오차 에러바 (1~5 척도)"""
    names = list(report.means)
    y_of = _scale(0.0, 5.0, HEIGHT - MARGIN, MARGIN)
    slot = (WIDTH - 2 * MARGIN) / max(1, len(names))
    body = _axes()
    for index, name in enumerate(names):
        mean, error = report.means[name], report.mse[name]
        x = MARGIN + slot * index + slot * 0.2
        bar_width = slot * 0.6
        center = x + bar_width / 2
        top = y_of(mean)
        body += [
            f'<rect class="mean-bar" x="{_fmt(x)}" y="{_fmt(top)}" width="{_fmt(bar_width)}" '
            f'height="{_fmt(HEIGHT - MARGIN - top)}" fill="{PALETTE[index % len(PALETTE)]}"/>',
            f'<line class="error-bar" x1="{_fmt(center)}" y1="{_fmt(y_of(min(5.0, mean + error)))}" '
            f'x2="{_fmt(center)}" y2="{_fmt(y_of(max(0.0, mean - error)))}" stroke="black"/>',
            f'<text x="{_fmt(center)}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" '
            f'font-size="12">{escape(name)}</text>',
        ]
    return _document(title, body)


def write_svg(svg: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(svg)
    return path
