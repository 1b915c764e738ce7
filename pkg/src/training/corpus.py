# src/training/corpus.py
# 곡 단위 학습/평가 분리와 학습셋 전조 증강

import logging
from typing import List, Optional, Sequence

import numpy as np

from src.encoding.frames import transpose_augment
from src.models.score_models import FrameSequence
from src.models.training_models import CorpusSplit

logger = logging.getLogger(__name__)

DEFAULT_TRAIN_FRACTION = 631 / 941


def split_corpus(
    songs: Sequence[FrameSequence],
    train_count: Optional[int] = None,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    seed: int = 0,
    augment: bool = False,
    song_ids: Optional[Sequence[str]] = None,
) -> CorpusSplit:
    """
    시드로 섞은 뒤 곡 단위로 학습/평가를 나눕니다. 증강은 학습셋에만 적용합니다.

    Args:
        songs: 곡별 프레임 시퀀스
        train_count: 학습 곡 수 (None이면 train_fraction으로 계산)
        train_fraction: 학습 비율 (기본 631/941)
        seed: 셔플 시드
        augment: True면 학습곡마다 12개 조성 버전
        song_ids: 곡 ID (None이면 "song_<index>")

    Returns:
        CorpusSplit: 분리 결과

    Raises:
        ValueError: 빈 코퍼스, 잘못된 학습 곡 수
    """
    if not songs:
        raise ValueError("빈 코퍼스는 나눌 수 없습니다")
    ids = list(song_ids) if song_ids is not None else [f"song_{i}" for i in range(len(songs))]
    if len(ids) != len(songs):
        raise ValueError("song_ids 길이가 곡 수와 다릅니다")

    total = len(songs)
    if train_count is None:
        train_count = min(total, max(1, int(round(total * train_fraction))))
    if not 0 <= train_count <= total:
        raise ValueError(f"학습 곡 수 {train_count}이(가) 0..{total} 범위를 벗어났습니다")

    order = np.random.default_rng(seed).permutation(total)
    train_index = order[:train_count]
    held_index = order[train_count:]

    train: List[FrameSequence] = []
    train_ids: List[str] = []
    for index in train_index:
        versions = transpose_augment(songs[index]) if augment else [songs[index]]
        train.extend(versions)
        train_ids.extend([ids[index]] * len(versions))

    split = CorpusSplit(
        train=train,
        held_out=[songs[i] for i in held_index],
        train_ids=train_ids,
        held_out_ids=[ids[i] for i in held_index],
        augmented=augment,
    )
    logger.info(
        f"코퍼스 분리: 학습 {train_count}곡 ({len(train)}개 시퀀스), 평가 {len(held_index)}곡, "
        f"증강={augment}"
    )
    return split
