# tests/test_ingest.py
# SMF 파서/작성기, 텍스트 악보, SymbolicScore 변환 테스트

from typing import List

import pytest

from src.ingest.score_builder import PolyphonyError, load_score, normalize_tempo, to_symbolic_score
from src.ingest.score_text import ScoreTextError, parse_score_text, render_score_text
from src.ingest.smf_parser import SmfParseError, parse_smf, read_vlq, write_vlq
from src.ingest.smf_writer import write_smf

END_OF_TRACK = b"\x00\xff\x2f\x00"


def smf_bytes(tracks: List[bytes], fmt: int = 1, division: int = 480) -> bytes:
    """MTrk 본문들을 감싸 SMF 바이트열을 만듭니다."""
    header = (
        b"MThd"
        + (6).to_bytes(4, "big")
        + fmt.to_bytes(2, "big")
        + len(tracks).to_bytes(2, "big")
        + division.to_bytes(2, "big")
    )
    chunks = b"".join(b"MTrk" + len(body).to_bytes(4, "big") + body for body in tracks)
    return header + chunks


# ------------------------------------------------------------------ VLQ


@pytest.mark.parametrize(
    "data, expected",
    [
        (bytes([0x00]), (0, 1)),
        (bytes([0x7F]), (127, 1)),
        (bytes([0x81, 0x00]), (128, 2)),
        (bytes([0xFF, 0x7F]), (16383, 2)),
        (bytes([0xFF, 0xFF, 0xFF, 0x7F]), (0x0FFFFFFF, 4)),
    ],
)
def test_read_vlq_examples(data, expected):
    assert read_vlq(data, 0) == expected


def test_read_vlq_respects_offset():
    assert read_vlq(bytes([0x00, 0x81, 0x00]), 1) == (128, 2)


def test_read_vlq_unterminated():
    with pytest.raises(SmfParseError) as info:
        read_vlq(bytes([0xFF, 0xFF, 0xFF, 0xFF, 0x00]), 0)
    assert info.value.offset == 0


def test_read_vlq_truncated():
    with pytest.raises(SmfParseError):
        read_vlq(bytes([0x81]), 0)


@pytest.mark.parametrize("value", [0, 1, 127, 128, 480, 16383, 16384, 2**21, 0x0FFFFFFF])
def test_write_vlq_is_inverse_of_read(value):
    encoded = write_vlq(value)
    assert read_vlq(encoded, 0) == (value, len(encoded))


def test_write_vlq_rejects_out_of_range():
    with pytest.raises(ValueError):
        write_vlq(0x10000000)


# ------------------------------------------------------------------ parse_smf


def test_single_note_file_has_one_pair():
    """PPQ 480, 음 60을 delta 0에 켜고 480 tick 뒤에 끔"""
    body = b"\x00\x90\x3c\x40" + b"\x83\x60\x80\x3c\x40" + END_OF_TRACK
    raw = parse_smf(smf_bytes([body], fmt=0))

    assert raw.ticks_per_beat == 480
    notes = [e for e in raw.tracks[0] if e.kind in ("note_on", "note_off")]
    assert [e.kind for e in notes] == ["note_on", "note_off"]
    assert notes[0].pitch == notes[1].pitch == 60
    assert notes[1].delta_ticks == 480
    assert raw.warnings == []


def test_empty_track_has_no_events():
    raw = parse_smf(smf_bytes([b""]))
    assert raw.event_count == 0
    assert len(raw.tracks) == 1


def test_tempo_meta_event():
    body = b"\x00\xff\x51\x03\x07\xa1\x20" + END_OF_TRACK
    raw = parse_smf(smf_bytes([body]))
    tempo = [e for e in raw.tracks[0] if e.kind == "tempo"]
    assert len(tempo) == 1
    assert tempo[0].tempo_us_per_beat == 500000
    assert tempo[0].bpm == pytest.approx(120.0)


def test_running_status_and_velocity_zero_note_off():
    body = b"\x00\x90\x3c\x40" + b"\x83\x60\x3c\x00" + END_OF_TRACK
    raw = parse_smf(smf_bytes([body]))
    kinds = [e.kind for e in raw.tracks[0] if e.kind != "other"]
    assert kinds == ["note_on", "note_off"]
    assert raw.warnings == []


def test_unmatched_note_on_is_closed_with_warning():
    body = b"\x00\x90\x3c\x40" + END_OF_TRACK
    raw = parse_smf(smf_bytes([body]))
    assert len(raw.warnings) == 1
    assert raw.tracks[0][-1].kind == "note_off"
    assert raw.tracks[0][-1].pitch == 60


def test_bad_magic():
    with pytest.raises(SmfParseError) as info:
        parse_smf(b"RIFF" + bytes(20))
    assert info.value.offset == 0


def test_smpte_division_rejected():
    with pytest.raises(SmfParseError) as info:
        parse_smf(smf_bytes([END_OF_TRACK], division=0xE250))
    assert info.value.offset == 12


def test_truncated_chunk():
    data = smf_bytes([]) + b"MTrk" + (100).to_bytes(4, "big") + b"\x00\x90"
    with pytest.raises(SmfParseError):
        parse_smf(data)


def test_running_status_without_previous_status():
    with pytest.raises(SmfParseError):
        parse_smf(smf_bytes([b"\x00\x3c\x40" + END_OF_TRACK]))


# ------------------------------------------------------------------ to_symbolic_score


def _melody_track() -> bytes:
    return b"\x00\x90\x3c\x40" + b"\x87\x40\x80\x3c\x00" + END_OF_TRACK


def test_chord_track_notes_sharing_onset_become_one_chord():
    chord_track = (
        b"\x00\x90\x30\x40\x00\x90\x34\x40\x00\x90\x37\x40"
        + b"\x87\x40\x80\x30\x00\x00\x80\x34\x00\x00\x80\x37\x00"
        + END_OF_TRACK
    )
    score = to_symbolic_score(parse_smf(smf_bytes([_melody_track(), chord_track])))

    assert len(score.chords) == 1
    chord = score.chords[0]
    assert chord.pitch_classes == frozenset({0, 4, 7})
    assert chord.root == 0
    assert (chord.onset_ticks, chord.duration_ticks) == (0, 960)
    assert [(n.pitch, n.duration_ticks) for n in score.melody] == [(60, 960)]


def test_empty_chord_track_gives_no_chords():
    score = to_symbolic_score(parse_smf(smf_bytes([_melody_track(), END_OF_TRACK])))
    assert score.chords == []


def test_missing_chord_track_gives_no_chords():
    score = to_symbolic_score(parse_smf(smf_bytes([_melody_track()])), chord_track=1)
    assert score.chords == []


def test_overlapping_melody_reports_first_overlap_tick():
    body = (
        b"\x00\x90\x3c\x40"  # 60 on @0
        + b"\x81\x70\x90\x3e\x40"  # 62 on @240
        + b"\x81\x70\x80\x3c\x00"  # 60 off @480
        + b"\x81\x70\x80\x3e\x00"  # 62 off @720
        + END_OF_TRACK
    )
    with pytest.raises(PolyphonyError) as info:
        to_symbolic_score(parse_smf(smf_bytes([body])), chord_track=None)
    assert info.value.tick == 240


def test_sounding_duration_is_preserved():
    body = (
        b"\x00\x90\x3c\x40\x83\x60\x80\x3c\x00"
        + b"\x00\x90\x3e\x40\x81\x70\x80\x3e\x00"
        + END_OF_TRACK
    )
    score = to_symbolic_score(parse_smf(smf_bytes([body])), chord_track=None)
    assert sum(n.duration_ticks for n in score.melody) == 480 + 240


def test_tempo_is_taken_from_first_tempo_event():
    tempo_track = b"\x00\xff\x51\x03\x09\x27\xc0" + END_OF_TRACK  # 600000 µs → 100 bpm
    score = to_symbolic_score(parse_smf(smf_bytes([tempo_track, _melody_track()])), 1, None)
    assert score.bpm == pytest.approx(100.0)


def test_written_smf_reads_back_with_default_tracks(simple_score):
    score = to_symbolic_score(parse_smf(write_smf(simple_score)))

    assert score.melody == simple_score.melody
    assert [c.pitch_classes for c in score.chords] == [c.pitch_classes for c in simple_score.chords]
    assert [c.root for c in score.chords] == [0, 7]
    assert score.bpm == pytest.approx(120.0)


# ------------------------------------------------------------------ 텍스트 악보


def test_parse_quarter_note_over_c_major_bar():
    score = parse_score_text("bpm 120\ntpb 4\nN 0 4 60\nC 0 16 C:maj\n")
    assert score.ticks_per_beat == 4
    assert [(n.onset_ticks, n.duration_ticks, n.pitch) for n in score.melody] == [(0, 4, 60)]
    assert score.chords[0].pitch_classes == frozenset({0, 4, 7})
    assert score.chords[0].root == 0


def test_parse_triplet_group_durations():
    score = parse_score_text("tpb 16\nN 0 5 60\nN 5 6 62\nN 11 5 64\nT 0\n")
    assert [n.duration_ticks for n in score.melody] == [5, 6, 5]
    assert score.triplet_onsets == [0]


def test_headers_only_is_no_events():
    with pytest.raises(ScoreTextError, match="no events"):
        parse_score_text("bpm 120\ntpb 16\n")


def test_malformed_line_reports_line_number():
    with pytest.raises(ScoreTextError) as info:
        parse_score_text("bpm 120\n# 주석\nX 1 2\n")
    assert info.value.line_no == 3


@pytest.mark.parametrize(
    "line",
    ["N 0 4 128", "N 0 0 60", "N -1 4 60", "C 0 4 H:maj", "C 0 4 C:blues", "bpm -3"],
)
def test_out_of_range_values_are_rejected(line):
    with pytest.raises(ScoreTextError) as info:
        parse_score_text(f"tpb 16\n{line}\n")
    assert info.value.line_no == 2


def test_overlapping_notes_are_rejected():
    with pytest.raises(ScoreTextError) as info:
        parse_score_text("N 0 8 60\nN 4 8 62\n")
    assert info.value.line_no == 2


def test_named_qualities_and_raw_pitch_class_sets():
    score = parse_score_text("C 0 16 C:min7\nC 16 16 pcs:{0,4,8}\nC 32 16 NC\nC 48 16 pcs:{2,5,9}@2\n")
    assert score.chords[0].pitch_classes == frozenset({0, 3, 7, 10})
    assert score.chords[0].root == 0
    assert score.chords[1].root is None
    assert score.chords[2].pitch_classes == frozenset()
    assert score.chords[3].root == 2


def test_render_then_parse_is_identity(simple_score):
    assert parse_score_text(render_score_text(simple_score)) == simple_score


def test_render_keeps_end_and_triplets():
    score = parse_score_text("tpb 16\nend 64\nT 0\nN 0 5 60\nN 5 6 62\nN 11 5 64\nC 0 32 pcs:{0,4,7,9}\n")
    assert parse_score_text(render_score_text(score)) == score


# ------------------------------------------------------------------ 템포 / 로드


def test_normalize_tempo_changes_only_bpm(simple_score):
    slow = simple_score.model_copy(update={"bpm": 90.0})
    normalized = normalize_tempo(slow)
    assert normalized.bpm == 120.0
    assert normalized.melody == simple_score.melody
    assert normalized.chords == simple_score.chords
    assert normalize_tempo(simple_score) == simple_score


def test_scores_differing_only_in_bpm_normalize_identically(simple_score):
    fast = simple_score.model_copy(update={"bpm": 180.0})
    slow = simple_score.model_copy(update={"bpm": 60.0})
    assert normalize_tempo(fast) == normalize_tempo(slow)


def test_load_score_dispatches_by_suffix(tmp_path, simple_score, simple_score_text):
    text_path = tmp_path / "song.txt"
    text_path.write_text(simple_score_text, encoding="utf-8")
    midi_path = tmp_path / "song.mid"
    midi_path.write_bytes(write_smf(simple_score))

    assert load_score(text_path) == simple_score
    assert load_score(midi_path).melody == simple_score.melody
