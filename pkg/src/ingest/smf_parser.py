# src/ingest/smf_parser.py
# 최소한의 Standard MIDI File(포맷 0/1, PPQ) 파서

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

from src.models.score_models import RawSmfEvents, SmfEvent

logger = logging.getLogger(__name__)

VLQ_MAX = 0x0FFFFFFF
META_TEMPO = 0x51
META_END_OF_TRACK = 0x2F


class SmfParseError(ValueError):
    """SMF 디코딩 실패 (바이트 오프셋 포함)"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


def read_vlq(data: bytes, offset: int) -> Tuple[int, int]:
    """
    variable-length quantity 하나를 읽습니다.

    Args:
        data: 바이트열
        offset: 읽기 시작 위치

    Returns:
        Tuple[int, int]: (값, 소비한 바이트 수)

    Raises:
        SmfParseError: 입력이 잘렸거나 4바이트 안에 끝나지 않는 경우
    """
    value = 0
    for consumed in range(1, 5):
        position = offset + consumed - 1
        if position >= len(data):
            raise SmfParseError("VLQ가 잘렸습니다", position)
        byte = data[position]
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, consumed
    raise SmfParseError("VLQ가 4바이트 안에 끝나지 않습니다", offset)


def write_vlq(value: int) -> bytes:
    """read_vlq의 역연산 (0 <= value < 2^28)"""
    if not 0 <= value <= VLQ_MAX:
        raise ValueError(f"VLQ 범위를 벗어난 값: {value}")
    groups = [value & 0x7F]
    value >>= 7
    while value:
        groups.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(groups))


def _require(data: bytes, position: int, count: int, what: str) -> None:
    if position + count > len(data):
        raise SmfParseError(f"{what}이(가) 잘렸습니다", position)


def parse_smf(data: bytes) -> RawSmfEvents:
    """
    SMF 바이트열을 트랙별 이벤트 목록으로 디코딩합니다.

    running status를 지원하고, velocity 0인 note-on은 note-off로 취급합니다.
    트랙 끝까지 닫히지 않은 note-on은 경고를 남기고 트랙 끝에서 닫습니다.

    Args:
        data: 파일 전체 바이트열

    Returns:
        RawSmfEvents: 디코딩된 이벤트

    Raises:
        SmfParseError: 헤더/청크 오류, SMPTE 시간 분할, 잘린 입력
    """
    if len(data) < 14 or data[0:4] != b"MThd":
        raise SmfParseError("MThd 헤더가 아닙니다", 0)

    header_length = int.from_bytes(data[4:8], "big")
    if header_length < 6:
        raise SmfParseError("MThd 본문이 너무 짧습니다", 4)
    _require(data, 8, header_length, "MThd 본문")
    smf_format = int.from_bytes(data[8:10], "big")
    track_count = int.from_bytes(data[10:12], "big")
    division = int.from_bytes(data[12:14], "big")

    if division & 0x8000:
        raise SmfParseError("SMPTE 시간 분할은 지원하지 않습니다", 12)
    if division == 0:
        raise SmfParseError("ticks_per_beat가 0입니다", 12)
    if smf_format not in (0, 1):
        raise SmfParseError(f"지원하지 않는 SMF 포맷: {smf_format}", 8)

    warnings: List[str] = []
    tracks: List[List[SmfEvent]] = []
    position = 8 + header_length
    while position < len(data):
        _require(data, position, 8, "청크 헤더")
        chunk_id = data[position : position + 4]
        chunk_length = int.from_bytes(data[position + 4 : position + 8], "big")
        body_start = position + 8
        _require(data, body_start, chunk_length, "청크 본문")
        if chunk_id == b"MTrk":
            events = _parse_track(data, body_start, body_start + chunk_length, warnings)
            tracks.append(events)
        else:
            logger.debug(f"알 수 없는 청크 건너뜀: {chunk_id!r}")
        position = body_start + chunk_length

    if len(tracks) != track_count:
        message = f"헤더의 트랙 수({track_count})와 실제 트랙 수({len(tracks)})가 다릅니다"
        logger.warning(message)
        warnings.append(message)

    raw = RawSmfEvents(
        tracks=tracks, ticks_per_beat=division, format=smf_format, warnings=warnings
    )
    logger.debug(f"SMF 파싱 완료: 트랙 {len(tracks)}개, 이벤트 {raw.event_count}개")
    return raw


def _parse_track(
    data: bytes, start: int, end: int, warnings: List[str]
) -> List[SmfEvent]:
    """MTrk 본문 하나를 디코딩"""
    events: List[SmfEvent] = []
    active: Dict[Tuple[int, int], int] = defaultdict(int)
    running_status: Optional[int] = None
    position = start
    track_data = data[:end]

    while position < end:
        event_offset = position
        delta, consumed = read_vlq(track_data, position)
        position += consumed
        _require(track_data, position, 1, "이벤트 상태 바이트")

        if track_data[position] & 0x80:
            status = track_data[position]
            position += 1
        elif running_status is not None:
            status = running_status
        else:
            raise SmfParseError("running status 없이 데이터 바이트가 나왔습니다", position)

        if status == 0xFF:
            _require(track_data, position, 1, "메타 이벤트 타입")
            meta_type = track_data[position]
            length, consumed = read_vlq(track_data, position + 1)
            position += 1 + consumed
            _require(track_data, position, length, "메타 이벤트 본문")
            body = track_data[position : position + length]
            position += length
            if meta_type == META_TEMPO and length == 3:
                events.append(
                    SmfEvent(
                        delta_ticks=delta,
                        kind="tempo",
                        tempo_us_per_beat=int.from_bytes(body, "big"),
                        offset=event_offset,
                    )
                )
            else:
                events.append(SmfEvent(delta_ticks=delta, kind="other", offset=event_offset))
            if meta_type == META_END_OF_TRACK:
                break
            continue

        if status in (0xF0, 0xF7):
            length, consumed = read_vlq(track_data, position)
            position += consumed
            _require(track_data, position, length, "SysEx 본문")
            position += length
            running_status = None
            events.append(SmfEvent(delta_ticks=delta, kind="other", offset=event_offset))
            continue

        if status < 0x80 or status > 0xEF:
            raise SmfParseError(f"알 수 없는 상태 바이트 0x{status:02X}", event_offset)

        running_status = status
        kind_nibble = status & 0xF0
        channel = status & 0x0F
        data_length = 1 if kind_nibble in (0xC0, 0xD0) else 2
        _require(track_data, position, data_length, "채널 메시지 데이터")
        first = track_data[position]
        second = track_data[position + 1] if data_length == 2 else 0
        position += data_length

        if kind_nibble == 0x90 and second > 0:
            active[(channel, first)] += 1
            events.append(
                SmfEvent(
                    delta_ticks=delta,
                    kind="note_on",
                    channel=channel,
                    pitch=first,
                    velocity=second,
                    offset=event_offset,
                )
            )
        elif kind_nibble in (0x80, 0x90):
            if active[(channel, first)] > 0:
                active[(channel, first)] -= 1
            events.append(
                SmfEvent(
                    delta_ticks=delta,
                    kind="note_off",
                    channel=channel,
                    pitch=first,
                    velocity=second,
                    offset=event_offset,
                )
            )
        else:
            events.append(
                SmfEvent(delta_ticks=delta, kind="other", channel=channel, offset=event_offset)
            )

    for (channel, pitch), count in sorted(active.items()):
        for _ in range(count):
            message = f"닫히지 않은 note-on (채널 {channel}, 음 {pitch})을 트랙 끝에서 닫습니다"
            logger.warning(message)
            warnings.append(message)
            events.append(
                SmfEvent(
                    delta_ticks=0,
                    kind="note_off",
                    channel=channel,
                    pitch=pitch,
                    velocity=0,
                    offset=end,
                )
            )
    return events
