# src/utils/corpus_storage.py
# 프레임 CSV 코퍼스 디렉토리와 매니페스트 관리

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from src.encoding.frame_io import read_frames_csv, write_frames_csv
from src.models.score_models import FrameSequence

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
FRAMES_DIR_NAME = "frames"


class CorpusStorage:
    """
    곡별 FrameSequence CSV와 manifest.json을 관리합니다.

    manifest 구조:
        songs: song_id → {source, csv, frames, content_hash, warnings, transposition, origin}
        errors: [{source, error}]
        stats: {total_songs, total_frames, total_warnings, total_errors}
    """

    def __init__(self, storage_dir: Union[str, Path]):
        """
        코퍼스 저장소 초기화

        Args:
            storage_dir: 코퍼스 디렉토리 (없으면 생성)
        """
        self.storage_dir = Path(storage_dir)
        self.frames_dir = self.storage_dir / FRAMES_DIR_NAME
        self.frames_dir.mkdir(parents=True, exist_ok=True)
        self.manifest_file = self.storage_dir / MANIFEST_NAME
        self.manifest = self._load_or_create_manifest()
        logger.debug(f"CorpusStorage 초기화 완료: {self.storage_dir}")

    def _load_or_create_manifest(self) -> Dict[str, Any]:
        if self.manifest_file.exists():
            with open(self.manifest_file, "r", encoding="utf-8") as f:
                manifest = json.load(f)
            logger.info(f"기존 매니페스트 로드: {len(manifest.get('songs', {}))}곡")
            return manifest
        return {"songs": {}, "errors": [], "stats": {}}

    @staticmethod
    def content_hash(frames: FrameSequence) -> str:
        """프레임 라벨의 해시 (중복 곡 확인용)"""
        payload = ",".join(f"{m}:{c}" for m, c in zip(frames.melody, frames.chords))
        return hashlib.md5(payload.encode("utf-8")).hexdigest()

    def store_song(
        self,
        song_id: str,
        frames: FrameSequence,
        source: str,
        warnings: List[str] = None,
        transposition: int = 0,
        origin: Optional[str] = None,
    ) -> Path:
        """
        곡 하나를 CSV로 저장하고 매니페스트에 기록합니다.

        Args:
            song_id: 곡 식별자 (파일 이름에 쓰임)
            frames: 프레임 시퀀스
            source: 원본 파일 경로
            warnings: 양자화 경고
            transposition: 전조 반음 수 (증강본이면 0이 아님)
            origin: 원곡 ID (전조본일 때)

        Returns:
            Path: 저장된 CSV 경로
        """
        digest = self.content_hash(frames)
        for other_id, entry in self.manifest["songs"].items():
            if other_id != song_id and entry["content_hash"] == digest:
                logger.warning(f"같은 내용의 곡이 이미 있습니다: {song_id} = {other_id}")
                break

        path = write_frames_csv(frames, self.frames_dir / f"{song_id}.csv")
        self.manifest["songs"][song_id] = {
            "source": source,
            "csv": str(path.relative_to(self.storage_dir)),
            "frames": len(frames),
            "content_hash": digest,
            "warnings": list(warnings or []),
            "transposition": transposition,
            "origin": origin or song_id,
        }
        return path

    def record_error(self, source: str, message: str) -> None:
        """읽지 못한 입력 파일 기록"""
        self.manifest["errors"].append({"source": source, "error": message})

    def save_manifest(self) -> Path:
        """통계를 갱신해 매니페스트를 저장합니다."""
        songs = self.manifest["songs"]
        self.manifest["stats"] = {
            "total_songs": len(songs),
            "total_frames": sum(entry["frames"] for entry in songs.values()),
            "total_warnings": sum(len(entry["warnings"]) for entry in songs.values()),
            "total_errors": len(self.manifest["errors"]),
        }
        with open(self.manifest_file, "w", encoding="utf-8") as f:
            json.dump(self.manifest, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write("\n")
        logger.debug("매니페스트 저장 완료")
        return self.manifest_file

    def load_songs(self, include_transposed: bool = False) -> Tuple[List[str], List[FrameSequence]]:
        """
        저장된 곡들을 (원곡 ID 목록, FrameSequence 목록)으로 읽습니다.

        원곡 ID는 전조본도 원본과 같은 값이라 곡 단위 분리에 그대로 쓸 수 있습니다.
        """
        ids: List[str] = []
        sequences: List[FrameSequence] = []
        for song_id in sorted(self.manifest["songs"]):
            entry = self.manifest["songs"][song_id]
            if entry["transposition"] and not include_transposed:
                continue
            ids.append(entry["origin"])
            sequences.append(read_frames_csv(self.storage_dir / entry["csv"]))
        return ids, sequences

    @property
    def has_transposed(self) -> bool:
        return any(entry["transposition"] for entry in self.manifest["songs"].values())
