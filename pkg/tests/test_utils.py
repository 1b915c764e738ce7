# tests/test_utils.py
# 설정 병합, 로깅, 코퍼스 저장소, 실행 추적기, CSV/SVG 내보내기 테스트

import json
import logging
from datetime import datetime

import pytest

from src.analysis.information_rate import sweep_theta
from src.analysis.oracle import build_oracle
from src.analysis.patterns import find_patterns
from src.models.score_models import FrameSequence
from src.models.stats_models import RatingGroup, RatingsTable
from src.stats.report import evaluate_models
from src.utils.config import (
    ConfigError,
    RunConfig,
    create_run_dir,
    load_run_config,
    setup_logging,
    write_config_echo,
)
from src.utils.corpus_storage import CorpusStorage
from src.utils.csv_export import write_rows_csv
from src.utils.run_tracker import RunTracker
from src.utils.svg_plots import error_bar_svg, ir_curve_svg, motif_bars_svg, write_svg

# ------------------------------------------------------------------ 설정


@pytest.fixture
def clean_env(monkeypatch):
    for key in ("MELODY_SEED", "MELODY_OUT_DIR", "LOG_LEVEL", "MELODY_JOBS"):
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    config = load_run_config()
    assert config == RunConfig()
    assert config.train_fraction == pytest.approx(631 / 941)


def test_precedence_env_file_flags(clean_env, tmp_path):
    clean_env.setenv("MELODY_SEED", "3")
    clean_env.setenv("MELODY_JOBS", "2")
    assert load_run_config().seed == 3

    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 5, "epochs": 7}), encoding="utf-8")
    from_file = load_run_config(path)
    assert (from_file.seed, from_file.epochs, from_file.jobs) == (5, 7, 2)

    from_flags = load_run_config(path, {"seed": 9, "epochs": None})
    assert (from_flags.seed, from_flags.epochs) == (9, 7)


@pytest.mark.parametrize(
    "content",
    ['{"not_a_setting": 1}', "[1, 2]", "{broken"],
)
def test_bad_config_files(clean_env, tmp_path, content):
    path = tmp_path / "config.json"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_run_config(path)


def test_invalid_values_raise_config_error(clean_env):
    with pytest.raises(ConfigError):
        load_run_config(overrides={"jobs": 0})
    with pytest.raises(ConfigError):
        load_run_config(overrides={"model": "gru"})
    clean_env.setenv("MELODY_SEED", "abc")
    with pytest.raises(ConfigError):
        load_run_config()


def test_run_dir_and_config_echo(tmp_path):
    config = RunConfig(out_dir=str(tmp_path), seed=4)
    run_dir = create_run_dir(config, now=datetime(2024, 1, 2, 3, 4, 5))
    assert run_dir == tmp_path / "20240102_030405_seed4"
    assert (run_dir / "logs").is_dir()

    echo = json.loads(write_config_echo(config, run_dir, "train").read_text(encoding="utf-8"))
    assert echo["command"] == "train"
    assert echo["seed"] == 4
    assert list(echo) == sorted(echo)


def test_setup_logging_replaces_its_handlers(tmp_path):
    log_file = tmp_path / "run.log"
    setup_logging("DEBUG", log_file)
    setup_logging("INFO", log_file)
    own = [h for h in logging.getLogger().handlers if getattr(h, "_melody_handler", False)]
    assert len(own) == 2
    logging.getLogger("src.test").info("기록 확인")
    for handler in own:
        handler.flush()
    assert "기록 확인" in log_file.read_text(encoding="utf-8")


# ------------------------------------------------------------------ 코퍼스 저장소


def test_corpus_storage_round_trip(tmp_path):
    storage = CorpusStorage(tmp_path / "corpus")
    song = FrameSequence(melody=[60, 129, 128, 62], chords=[0, 0, 24, 7])
    storage.store_song("tune", song, "tune.txt", warnings=["짧은 음표"])
    storage.store_song("tune_t01", song, "tune.txt", transposition=1, origin="tune")
    storage.record_error("bad.mid", "헤더 오류")
    storage.save_manifest()

    reopened = CorpusStorage(tmp_path / "corpus")
    assert reopened.manifest["stats"] == {
        "total_songs": 2,
        "total_frames": 8,
        "total_warnings": 1,
        "total_errors": 1,
    }
    assert reopened.has_transposed
    ids, songs = reopened.load_songs()
    assert ids == ["tune"]
    assert songs == [song]
    ids, _ = reopened.load_songs(include_transposed=True)
    assert ids == ["tune", "tune"]


def test_content_hash_depends_on_labels():
    first = FrameSequence(melody=[60, 62], chords=[0, 0])
    second = FrameSequence(melody=[60, 62], chords=[0, 7])
    assert CorpusStorage.content_hash(first) == CorpusStorage.content_hash(first.model_copy())
    assert CorpusStorage.content_hash(first) != CorpusStorage.content_hash(second)


# ------------------------------------------------------------------ 실행 추적기


def test_run_tracker_summary(tmp_path):
    tracker = RunTracker("ingest")
    tracker.end_step(tracker.start_step("ingest", "a.txt"), frames=64)
    tracker.end_step(tracker.start_step("ingest", "b.mid"), success=False, error="헤더 오류")
    summary = tracker.get_summary()
    assert summary["session_info"]["total_steps"] == 2
    assert summary["session_info"]["failed_steps"] == 1
    assert summary["component_breakdown"]["ingest"]["failed"] == 1
    assert summary["detailed_steps"][0]["details"] == {"frames": 64}
    assert [step.operation for step in tracker.failures] == ["b.mid"]

    path = tmp_path / "summary.json"
    tracker.save_report(path)
    assert json.loads(path.read_text(encoding="utf-8"))["session_info"]["command"] == "ingest"


# ------------------------------------------------------------------ 내보내기


def test_write_rows_csv(tmp_path):
    path = write_rows_csv([{"a": 1, "b": 2.5}], tmp_path / "nested" / "rows.csv")
    assert path.read_text(encoding="utf-8") == "a,b\n1,2.5\n"
    empty = write_rows_csv([], tmp_path / "empty.csv", fieldnames=["x"])
    assert empty.read_text(encoding="utf-8") == "x\n"
    with pytest.raises(ValueError):
        write_rows_csv([], tmp_path / "none.csv")


def test_svg_plots(tmp_path):
    features = list("abcabcabc")
    curve = sweep_theta([float(ord(c)) for c in features], [0.0, 0.5, 2.0])
    ir_svg = ir_curve_svg(curve, "IR")
    assert ir_svg.startswith("<svg") or ir_svg.startswith("<?xml")
    assert 'class="best-theta"' in ir_svg

    patterns = find_patterns(build_oracle(list("abcabc"), metric="identity"), min_len=3)
    assert motif_bars_svg(patterns).count('data-motif="0"') == 2

    table = RatingsTable(
        groups=[RatingGroup(name=n, ratings=r) for n, r in (("uni", [2, 3]), ("bi", [3, 4]), ("tcn", [1, 2]))]
    )
    bars = error_bar_svg(evaluate_models(table))
    assert bars.count('class="mean-bar"') == 3
    assert bars.count('class="error-bar"') == 3

    path = write_svg(ir_svg, tmp_path / "plots" / "ir.svg")
    assert path.read_text(encoding="utf-8") == ir_svg
