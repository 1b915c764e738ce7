# src/encoding/chords.py
# 코드 해싱(24개 장/단3화음 + NC)과 코드 이름 처리

import re
from typing import FrozenSet, Iterable, List, Optional, Tuple

from src.models.score_models import CHORD_TEMPLATES, NC_LABEL

PITCH_NAMES = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"]
FLAT_ALIASES = {"Db": 1, "Eb": 3, "Gb": 6, "Ab": 8, "Bb": 10}

# 이름 있는 코드 품질 → 근음 기준 음정
QUALITY_INTERVALS = {
    "maj": (0, 4, 7),
    "min": (0, 3, 7),
    "7": (0, 4, 7, 10),
    "maj7": (0, 4, 7, 11),
    "min7": (0, 3, 7, 10),
    "dim": (0, 3, 6),
    "aug": (0, 4, 8),
    "sus4": (0, 5, 7),
}

_PCS_PATTERN = re.compile(r"^pcs:\{([0-9,\s]*)\}(?:@(\d+))?$")


def chord_template(label: int) -> FrozenSet[int]:
    """라벨 0..23의 3화음 pitch class 집합 (NC는 빈 집합)"""
    if label == NC_LABEL:
        return frozenset()
    if not 0 <= label < CHORD_TEMPLATES:
        raise ValueError(f"코드 라벨 범위 초과: {label}")
    root = label % 12
    intervals = QUALITY_INTERVALS["maj"] if label < 12 else QUALITY_INTERVALS["min"]
    return frozenset((root + i) % 12 for i in intervals)


TEMPLATES: List[FrozenSet[int]] = [chord_template(k) for k in range(CHORD_TEMPLATES)]


def template_root(label: int) -> Optional[int]:
    return None if label == NC_LABEL else label % 12


def hash_chord(pitch_classes: Iterable[int], root: Optional[int] = None) -> int:
    """
    임의의 pitch class 집합을 가장 많은 음을 공유하는 3화음 라벨로 매핑합니다.

    동점이면 근음이 root와 같은 템플릿을 우선하고, 그다음 낮은 인덱스를 고릅니다.
    빈 집합은 NC(24)입니다.

    Args:
        pitch_classes: 0..11 pitch class들
        root: 코드 이름 등으로 알고 있는 근음 (없으면 None)

    Returns:
        int: 0..24 코드 라벨
    """
    pcs = frozenset(pitch_classes)
    if not pcs:
        return NC_LABEL
    best_label = NC_LABEL
    best_key: Tuple[int, int] = (-1, -1)
    for label, template in enumerate(TEMPLATES):
        key = (len(pcs & template), 1 if root is not None and label % 12 == root else 0)
        if key > best_key:
            best_key = key
            best_label = label
    return best_label


def transpose_chord_label(label: int, shift: int) -> int:
    """코드 라벨의 근음을 shift 반음 이동 (품질 유지, NC 고정)"""
    if label == NC_LABEL:
        return label
    quality_base = 0 if label < 12 else 12
    return quality_base + (label - quality_base + shift) % 12


def parse_pitch_name(name: str) -> int:
    if name in PITCH_NAMES:
        return PITCH_NAMES.index(name)
    if name in FLAT_ALIASES:
        return FLAT_ALIASES[name]
    raise ValueError(f"알 수 없는 음이름: {name}")


def parse_chord_name(name: str) -> Tuple[FrozenSet[int], Optional[int]]:
    """
    텍스트 악보의 코드 이름을 (pitch class 집합, 근음)으로 변환합니다.

    지원 형식: `NC`, `<Root>:<quality>`, `pcs:{0,4,7}` (선택적으로 `@<root>`)
    """
    if name == "NC":
        return frozenset(), None
    match = _PCS_PATTERN.match(name)
    if match:
        body, root_text = match.groups()
        pcs = frozenset(int(tok) for tok in body.replace(" ", "").split(",") if tok)
        if any(pc > 11 for pc in pcs):
            raise ValueError(f"pitch class 범위 초과: {name}")
        root = int(root_text) if root_text is not None else None
        if root is not None and root > 11:
            raise ValueError(f"근음 범위 초과: {name}")
        return pcs, root
    if ":" not in name:
        raise ValueError(f"코드 이름 형식 오류: {name}")
    root_name, quality = name.split(":", 1)
    if quality not in QUALITY_INTERVALS:
        raise ValueError(f"지원하지 않는 코드 품질: {quality}")
    root = parse_pitch_name(root_name)
    return frozenset((root + i) % 12 for i in QUALITY_INTERVALS[quality]), root


def format_chord_name(pitch_classes: Iterable[int], root: Optional[int]) -> str:
    """parse_chord_name의 역변환 (정규형 이름)"""
    pcs = frozenset(pitch_classes)
    if not pcs and root is None:
        return "NC"
    if root is not None:
        for quality, intervals in QUALITY_INTERVALS.items():
            if frozenset((root + i) % 12 for i in intervals) == pcs:
                return f"{PITCH_NAMES[root]}:{quality}"
    body = ",".join(str(pc) for pc in sorted(pcs))
    suffix = f"@{root}" if root is not None else ""
    return f"pcs:{{{body}}}{suffix}"
