# src/analysis/patterns.py
# 오라클의 접미사 링크로 반복 모티프 찾기

import logging
from collections import deque
from typing import List, Set, Tuple

from src.models.analysis_models import Motif, PatternSet

from .oracle import Oracle

logger = logging.getLogger(__name__)

DEFAULT_MIN_LEN = 4


def _linked_states(oracle: Oracle, start: int) -> Set[int]:
    """sfx / rsfx 링크로 연결된 상태들 (상태 0 제외)"""
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        neighbors = list(oracle.rsfx[state])
        if oracle.sfx[state] > 0:
            neighbors.append(oracle.sfx[state])
        for neighbor in neighbors:
            if neighbor not in seen:
                seen.add(neighbor)
                queue.append(neighbor)
    return seen


def _non_overlapping(ends: List[int], length: int) -> List[int]:
    kept: List[int] = []
    for end in sorted(ends):
        if not kept or end - length + 1 > kept[-1]:
            kept.append(end)
    return kept


def find_patterns(oracle: Oracle, min_len: int = DEFAULT_MIN_LEN) -> PatternSet:
    """
    반복 모티프와 모든 등장 위치를 찾습니다.

    lrs ≥ min_len 이면서 다음 상태에서 더 이어지지 않는 상태를 후보로 삼고, 반복이 자기
    자신과 겹치면 주기(t - sfx[t])를 모티프 길이로 씁니다. 등장 위치는 sfx/rsfx로 연결된
    상태 중 같은 구간을 가진 것들이며, 서로 겹치는 등장은 앞쪽부터 하나만 남깁니다.

    Args:
        oracle: build_oracle 결과
        min_len: 최소 모티프 길이

    Returns:
        PatternSet: 긴 모티프부터 정렬된 결과
    """
    length = oracle.length
    candidates: List[Tuple[int, int]] = []
    for state in range(1, length + 1):
        repeat = oracle.lrs[state]
        if repeat < min_len:
            continue
        if state < length and oracle.lrs[state + 1] == repeat + 1:
            continue
        period = state - oracle.sfx[state]
        motif_length = period if period < repeat else repeat
        if motif_length >= min_len:
            candidates.append((motif_length, state))

    motifs: List[Motif] = []
    covered: Set[Tuple[int, int]] = set()
    for motif_length, state in sorted(candidates, key=lambda item: (-item[0], item[1])):
        ends = [
            end
            for end in _linked_states(oracle, state)
            if oracle.segment_matches(end, state, motif_length)
        ]
        ends = _non_overlapping(ends, motif_length)
        if len(ends) < 2:
            continue
        spans = {(end - motif_length + 1, end) for end in ends}
        if all(_inside(span, covered) for span in spans):
            continue
        covered.update(spans)
        motifs.append(Motif(length=motif_length, occurrences=ends))

    logger.debug(f"모티프 {len(motifs)}개 발견 (min_len={min_len})")
    return PatternSet(motifs=motifs, min_len=min_len, sequence_length=length)


def _inside(span: Tuple[int, int], covered: Set[Tuple[int, int]]) -> bool:
    return any(start <= span[0] and span[1] <= end for start, end in covered)
