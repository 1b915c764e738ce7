# tests/test_analysis.py
# VMO 구성, IR 추정/θ 스윕, 모티프 탐색, 크로마그램, 분석 파이프라인 테스트

from itertools import product

import numpy as np
import pytest

from src.analysis.chroma import (
    LOWEST_FREQUENCY,
    ChromaError,
    ChromaSequence,
    beat_chroma,
    chroma_fold_matrix,
    power_spectrogram,
    stft_chroma,
    symbolic_chroma,
    synthesize,
)
from src.analysis.information_rate import (
    compror_ir,
    compute_ir,
    default_theta_grid,
    lrs_gain_ir,
    sweep_theta,
)
from src.analysis.oracle import OracleError, build_oracle
from src.analysis.patterns import find_patterns
from src.analysis.pipeline import analyze_sample, compare_samples, pattern_rows, summarize
from src.ingest.score_text import parse_score_text
from src.models.score_models import SymbolicScore


def _brute_lrs_and_sfx(sequence):
    """접미사 반복을 직접 찾는 참조 구현: (lrs, 가장 왼쪽 끝 상태)"""
    lrs, sfx = [0], [-1]
    for t in range(1, len(sequence) + 1):
        best_length, best_end = 0, 0
        for end in range(1, t):
            length = 0
            while length < end and sequence[end - 1 - length] == sequence[t - 1 - length]:
                length += 1
            if length > best_length:
                best_length, best_end = length, end
        lrs.append(best_length)
        sfx.append(best_end)
    return lrs, sfx


def _factor_oracle(sequence):
    """기호열의 factor oracle을 한 글자씩 구성하는 참조 구현: (sfx, 상태별 정렬된 전이 목적지)"""
    trn = [{}]
    sfx = [-1]
    for i, symbol in enumerate(sequence):
        state = i + 1
        trn.append({})
        trn[i][symbol] = state
        k = sfx[i]
        while k > -1 and symbol not in trn[k]:
            trn[k][symbol] = state
            k = sfx[k]
        sfx.append(0 if k == -1 else trn[k][symbol])
    return sfx, [sorted(targets.values()) for targets in trn]


def _check_oracle(sequence):
    oracle = build_oracle(list(sequence), theta=0.0, metric="identity")
    lrs, sfx = _brute_lrs_and_sfx(sequence)
    assert oracle.lrs == lrs, sequence
    assert oracle.sfx == sfx, sequence
    assert oracle.size == len(sequence) + 1
    for state in range(1, oracle.size):
        assert oracle.sfx[state] < state
        assert state in oracle.rsfx[oracle.sfx[state]]
        assert state in oracle.trn[state - 1]
    assert compute_ir(oracle) >= 0
    assert compute_ir(oracle, "compror") >= 0


# ------------------------------------------------------------------ 오라클


def test_oracle_on_abcabc():
    oracle = build_oracle(list("abcabc"), theta=0.0, metric="identity")
    assert oracle.lrs == [0, 0, 0, 0, 1, 2, 3]
    assert oracle.sfx == [-1, 0, 0, 0, 1, 2, 3]


def test_oracle_matches_brute_force_on_all_short_sequences():
    for length in range(1, 7):
        for sequence in product("abc", repeat=length):
            _check_oracle(sequence)


def test_oracle_on_abbcabcdabc():
    oracle = build_oracle(list("abbcabcdabc"), theta=0.0, metric="identity")
    assert oracle.lrs == [0, 0, 0, 1, 0, 1, 2, 2, 0, 1, 2, 3]
    assert oracle.sfx == [-1, 0, 0, 2, 0, 1, 2, 4, 0, 1, 2, 7]


def test_symbolic_oracle_equals_incremental_factor_oracle():
    for length in range(1, 9):
        for sequence in product("abc", repeat=length):
            oracle = build_oracle(list(sequence), theta=0.0, metric="identity")
            sfx, trn = _factor_oracle(sequence)
            assert oracle.sfx == sfx, sequence
            assert [sorted(targets) for targets in oracle.trn] == trn, sequence


@pytest.mark.slow
def test_oracle_matches_brute_force_exhaustively():
    for length in range(7, 10):
        for sequence in product("abc", repeat=length):
            _check_oracle(sequence)
    rng = np.random.default_rng(0)
    for _ in range(100_000):
        length = int(rng.integers(1, 13))
        _check_oracle(tuple(rng.integers(0, 4, size=length).tolist()))


def test_euclidean_theta_merges_close_vectors():
    features = [np.array([0.0]), np.array([0.05]), np.array([1.0]), np.array([0.02]), np.array([1.04])]
    strict = build_oracle(features, theta=0.0)
    loose = build_oracle(features, theta=0.1)
    assert max(strict.lrs) == 0
    assert loose.lrs[4] == 1
    assert loose.lrs[5] == 2


def test_identity_metric_accepts_vectors():
    features = [np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    assert build_oracle(features, metric="identity").lrs == [0, 0, 0, 1, 2]


def test_oracle_keeps_features_not_pairwise_matrix():
    rng = np.random.default_rng(5)
    features = list(rng.normal(size=(40, 12)))
    oracle = build_oracle(features, theta=4.5)
    assert oracle.encoded.shape == (40, 12)

    distances = np.linalg.norm(np.array(features)[:, None, :] - np.array(features)[None, :, :], axis=2)
    for index in range(40):
        np.testing.assert_array_equal(oracle.similar_to_earlier(index), distances[index, :index] <= 4.5)
    rows, cols = np.arange(10), np.arange(30, 40)
    np.testing.assert_array_equal(oracle.similar_pairs(rows, cols), distances[rows, cols] <= 4.5)


def test_oracle_errors():
    with pytest.raises(OracleError):
        build_oracle([])
    with pytest.raises(OracleError):
        build_oracle([1.0, 2.0], theta=-0.1)
    with pytest.raises(OracleError):
        build_oracle([np.zeros(2), np.zeros(3)])
    with pytest.raises(OracleError):
        build_oracle([1, 2], metric="cosine")


# ------------------------------------------------------------------ IR


def test_ir_estimators_on_known_lrs():
    assert lrs_gain_ir([0, 0]) == pytest.approx(1.0)
    assert lrs_gain_ir([0, 0, 1]) == pytest.approx(1.0 + np.log2(3) - 1.0)
    assert compror_ir([0, 0]) == 0.0
    assert compror_ir([0, 0, 0, 0]) == 0.0
    # abcabc: 새 기호 3개 뒤 길이 3 블록 하나 (부호어 4개)
    assert compror_ir([0, 0, 0, 0, 1, 2, 3]) == pytest.approx(3 * np.log2(3) - 2)


def test_ir_is_zero_when_everything_is_similar():
    oracle = build_oracle([np.array([float(i)]) for i in range(10)], theta=1e9)
    assert oracle.lrs == [0] + list(range(10))
    assert compute_ir(oracle, "compror") == 0.0


def test_sweep_picks_smallest_theta_among_ties():
    features = [np.array([float(v)]) for v in [0, 1, 2, 0, 1, 2, 0, 1, 2]]
    curve = sweep_theta(features, [0.0, 0.3, 0.6, 5.0])
    assert curve.best_theta == 0.0
    assert curve.ir_totals[0] == curve.ir_totals[1] == curve.ir_totals[2]
    assert curve.ir_totals[3] <= curve.ir_totals[0]
    assert curve.best_index == 0


def test_sweep_includes_degenerate_theta(repeating_score):
    features = list(symbolic_chroma(repeating_score).frames)
    curve = sweep_theta(features, [0.0, 1e9])
    assert curve.ir_totals[1] <= curve.ir_totals[curve.best_index]


def test_sweep_rejects_empty_grid():
    with pytest.raises(OracleError):
        sweep_theta([1.0, 2.0], [])


def test_default_grid_spans_distance_percentiles():
    features = [np.array([float(i)]) for i in range(21)]
    grid = default_theta_grid(features)
    distances = [abs(i - j) for i in range(21) for j in range(i + 1, 21)]
    assert len(grid) == 64
    assert grid[0] == pytest.approx(np.percentile(distances, 5))
    assert grid[-1] == pytest.approx(np.percentile(distances, 95))
    assert default_theta_grid([np.zeros(3)]) == [0.0]


# ------------------------------------------------------------------ 모티프


def test_abcabc_has_one_motif_of_length_three():
    patterns = find_patterns(build_oracle(list("abcabc"), metric="identity"), min_len=3)
    assert len(patterns.motifs) == 1
    assert patterns.motifs[0].length == 3
    assert patterns.motifs[0].occurrences == [3, 6]
    assert patterns.covered_states() == [1, 2, 3, 4, 5, 6]


def test_min_len_filters_short_repeats():
    assert find_patterns(build_oracle(list("abcabc"), metric="identity"), min_len=4).motifs == []


def test_motif_occurrences_are_equal_and_disjoint():
    rng = np.random.default_rng(3)
    for _ in range(200):
        sequence = rng.integers(0, 3, size=int(rng.integers(4, 30))).tolist()
        oracle = build_oracle(sequence, metric="identity")
        for motif in find_patterns(oracle, min_len=2).motifs:
            segments = [tuple(sequence[s.start - 1 : s.stop - 1]) for s in motif.spans()]
            assert len(set(segments)) == 1
            assert len(segments) >= 2
            ends = motif.occurrences
            assert all(b - a >= motif.length for a, b in zip(ends, ends[1:]))


# ------------------------------------------------------------------ 크로마


def test_a440_sine_lands_in_pitch_class_a():
    score = parse_score_text("tpb 16\nN 0 32 69\n")
    chroma = stft_chroma(synthesize(score))
    energy = chroma.frames.sum(axis=0)
    assert energy[9] / energy.sum() >= 0.9


def test_fold_conserves_energy_above_a0():
    rng = np.random.default_rng(4)
    samples = rng.normal(size=8192 + 3 * 1024)
    power = power_spectrogram(samples)
    chroma = stft_chroma(samples)
    usable = np.fft.rfftfreq(4096, 1.0 / 44100) >= LOWEST_FREQUENCY
    np.testing.assert_allclose(chroma.frames.sum(axis=1), power[:, usable].sum(axis=1), rtol=1e-9)
    assert len(chroma) == 1 + (samples.size - 4096) // 1024


def test_fold_matrix_assigns_each_usable_bin_once():
    fold = chroma_fold_matrix(4096, 44100)
    sums = fold.sum(axis=1)
    assert set(np.unique(sums)) == {0.0, 1.0}
    assert sums[0] == 0.0


def test_synthesis_is_normalized(simple_score):
    samples = synthesize(simple_score)
    assert np.max(np.abs(samples)) == pytest.approx(0.9)
    assert samples.size == 4 * 44100  # 8박 × 0.5초


def test_beat_chroma_has_one_unit_row_per_beat(simple_score):
    chroma = beat_chroma(stft_chroma(synthesize(simple_score)))
    assert len(chroma) == 8
    np.testing.assert_allclose(np.linalg.norm(chroma.frames, axis=1), np.ones(8))
    assert chroma.frame_rate == 2.0


def test_symbolic_chroma_counts_melody_and_chord_tones(simple_score):
    chroma = symbolic_chroma(simple_score)
    assert len(chroma) == 8
    expected = np.zeros(12)
    expected[[0, 4, 7]] = 1.0
    expected[0] += 1.0
    np.testing.assert_allclose(chroma.frames[0], expected / np.linalg.norm(expected))


def test_chroma_input_errors():
    with pytest.raises(ChromaError):
        ChromaSequence(frames=np.zeros((3, 11)), frame_rate=1.0)
    with pytest.raises(ChromaError):
        synthesize(SymbolicScore(ticks_per_beat=16, bpm=120.0))
    with pytest.raises(ChromaError):
        stft_chroma(np.zeros(100))


# ------------------------------------------------------------------ 파이프라인


def test_repeated_phrase_is_found_three_times(repeating_score):
    result = analyze_sample(repeating_score, symbolic=True)
    assert result.ir_curve.best_theta == 0.0
    assert [(m.length, m.occurrences) for m in result.patterns.motifs] == [(8, [8, 16, 24])]
    summary = result.summary("original")
    assert summary.covered_frames == 24
    assert summary.longest_motif == 8
    assert summary.covered_ratio == 1.0


def test_phrase_with_chords_is_found_three_times(repeating_score_with_chords):
    result = analyze_sample(repeating_score_with_chords, theta_grid=[0.0], symbolic=True)
    assert [(m.length, m.occurrences) for m in result.patterns.motifs] == [(8, [8, 16, 24])]
    assert len(pattern_rows(result.patterns)) == 3


def test_repetition_covers_more_than_random_melody(repeating_score, non_repeating_score):
    results = compare_samples(
        {"repeating": repeating_score, "random": non_repeating_score}, symbolic=True
    )
    summaries = {s.name: s for s in summarize(results)}
    assert summaries["random"].motif_count == 0
    assert summaries["repeating"].covered_frames > summaries["random"].covered_frames


@pytest.mark.slow
def test_audio_path_produces_beat_frames(repeating_score_with_chords):
    result = analyze_sample(repeating_score_with_chords)
    assert len(result.chroma) == 24
    assert result.ir_curve.best_theta in result.ir_curve.thetas
    assert result.oracle.length == 24
