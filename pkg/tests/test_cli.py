# tests/test_cli.py
# 명령줄 엔트리포인트 통합 테스트 (ingest / train / generate / analyze / evaluate / gradcheck)

import csv
import json

import pytest

from src.generators.registry import build_model
from src.main import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main
from src.numerics.checkpoint import save_checkpoint

from .conftest import PHRASE_PITCHES, SIMPLE_SCORE_TEXT, beat_score_text


def _run(tmp_path, *args, run_name="run"):
    argv = [*args, "--out-dir", str(tmp_path / "runs"), "--run-name", run_name]
    return main(argv), tmp_path / "runs" / run_name


def _write_scores(directory):
    directory.mkdir(parents=True, exist_ok=True)
    texts = {
        "simple.txt": SIMPLE_SCORE_TEXT,
        "phrase.txt": beat_score_text(PHRASE_PITCHES * 2, ["C:maj", "A:min", "F:maj", "G:7"]),
        "scale.txt": beat_score_text([60, 62, 64, 65, 67, 69, 71, 72], ["C:maj", "G:maj"]),
    }
    for name, text in texts.items():
        (directory / name).write_text(text, encoding="utf-8")
    return directory


def _csv_rows(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


# ------------------------------------------------------------------ ingest


def test_ingest_writes_one_csv_per_score(tmp_path):
    scores = _write_scores(tmp_path / "scores")
    code, run_dir = _run(tmp_path, "ingest", str(scores))
    assert code == EXIT_OK
    assert sorted(p.name for p in (run_dir / "corpus" / "frames").iterdir()) == [
        "phrase.csv",
        "scale.csv",
        "simple.csv",
    ]
    manifest = json.loads((run_dir / "corpus" / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["stats"]["total_songs"] == 3
    assert manifest["stats"]["total_errors"] == 0
    assert (run_dir / "config.json").exists()
    assert (run_dir / "logs" / "run.log").exists()


def test_ingest_skips_corrupt_file(tmp_path):
    scores = _write_scores(tmp_path / "scores")
    (scores / "simple.txt").unlink()
    (scores / "broken.mid").write_bytes(b"RIFF not a midi file")
    code, run_dir = _run(tmp_path, "ingest", str(scores))
    assert code == EXIT_OK
    assert len(list((run_dir / "corpus" / "frames").iterdir())) == 2
    manifest = json.loads((run_dir / "corpus" / "manifest.json").read_text(encoding="utf-8"))
    assert [error["source"].endswith("broken.mid") for error in manifest["errors"]] == [True]


def test_ingest_augment_adds_transpositions(tmp_path):
    scores = _write_scores(tmp_path / "scores")
    code, run_dir = _run(tmp_path, "ingest", str(scores), "--augment")
    assert code == EXIT_OK
    assert len(list((run_dir / "corpus" / "frames").iterdir())) == 36


def test_ingest_is_deterministic(tmp_path):
    scores = _write_scores(tmp_path / "scores")
    _, first = _run(tmp_path, "ingest", str(scores), run_name="a")
    _, second = _run(tmp_path, "ingest", str(scores), run_name="b")
    for path in sorted((first / "corpus").rglob("*.*")):
        twin = second / path.relative_to(first)
        assert twin.read_bytes() == path.read_bytes(), path.name


def test_missing_input_is_usage_error(tmp_path):
    code, _ = _run(tmp_path, "ingest", str(tmp_path / "nowhere.txt"))
    assert code == EXIT_USAGE


def test_bad_config_is_usage_error(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"not_a_setting": 1}), encoding="utf-8")
    code, _ = _run(tmp_path, "gradcheck", "--config", str(config))
    assert code == EXIT_USAGE
    code, _ = _run(tmp_path, "gradcheck", "--config", str(tmp_path / "missing.json"))
    assert code == EXIT_USAGE


def test_unknown_command_is_usage_error():
    assert main(["compose"]) == EXIT_USAGE


# ------------------------------------------------------------------ train


def _ingested_corpus(tmp_path):
    scores = _write_scores(tmp_path / "scores")
    _, run_dir = _run(tmp_path, "ingest", str(scores), run_name="corpus_run")
    return run_dir / "corpus"


def test_train_writes_checkpoint_and_loss_curve(tmp_path):
    corpus = _ingested_corpus(tmp_path)
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"model_overrides": {"uni": {"layers": 2, "hidden": 4}}}), encoding="utf-8")
    code, run_dir = _run(
        tmp_path, "train", "--corpus", str(corpus), "--model", "uni", "--epochs", "2", "--config", str(config)
    )
    assert code == EXIT_OK
    assert (run_dir / "checkpoints" / "uni.ckpt").stat().st_size > 0
    assert len(_csv_rows(run_dir / "loss_uni.csv")) == 2


def test_train_reports_divergence(tmp_path, mocker):
    corpus = _ingested_corpus(tmp_path)
    mocker.patch("src.main._train_one", return_value=("uni", b"checkpoint", [], True))
    code, run_dir = _run(tmp_path, "train", "--corpus", str(corpus), "--model", "uni")
    assert code == EXIT_CHECK_FAILED
    assert (run_dir / "checkpoints" / "uni.ckpt").read_bytes() == b"checkpoint"


def test_train_needs_a_corpus(tmp_path):
    code, _ = _run(tmp_path, "train", "--corpus", str(tmp_path))
    assert code == EXIT_USAGE


# ------------------------------------------------------------------ generate


def _tiny_checkpoints(tmp_path, tiny_configs):
    paths = []
    for kind in ("uni", "bi", "tcn"):
        model = build_model(kind, tiny_configs[kind], seed=1)
        paths.append(save_checkpoint(model.to_checkpoint(), tmp_path / f"{kind}.ckpt"))
    return paths


def _generate(tmp_path, checkpoints, song, seed, run_name):
    args = ["generate", "--song", str(song), "--temperature", "0", "--prime-beats", "2"]
    args += ["--generate-beats", "2", "--seed", str(seed), "--smf"]
    for path in checkpoints:
        args += ["--checkpoint", str(path)]
    return _run(tmp_path, *args, run_name=run_name)


def test_generate_is_reproducible_at_zero_temperature(tmp_path, tiny_configs):
    checkpoints = _tiny_checkpoints(tmp_path, tiny_configs)
    song = tmp_path / "simple.txt"
    song.write_text(SIMPLE_SCORE_TEXT, encoding="utf-8")

    code, first = _generate(tmp_path, checkpoints, song, seed=1, run_name="a")
    assert code == EXIT_OK
    _, second = _generate(tmp_path, checkpoints, song, seed=2, run_name="b")

    names = sorted(p.name for p in (first / "generated").iterdir())
    assert {name.rsplit(".", 1)[0] for name in names} == {"original", "uni", "bi", "tcn"}
    for name in names:
        assert (first / "generated" / name).read_bytes() == (second / "generated" / name).read_bytes()


def test_generate_needs_existing_checkpoint(tmp_path):
    song = tmp_path / "simple.txt"
    song.write_text(SIMPLE_SCORE_TEXT, encoding="utf-8")
    code, _ = _generate(tmp_path, [tmp_path / "missing.ckpt"], song, seed=0, run_name="x")
    assert code == EXIT_USAGE


# ------------------------------------------------------------------ analyze / evaluate / gradcheck


def test_analyze_finds_repeated_phrase(tmp_path):
    score = tmp_path / "repeat.txt"
    score.write_text(beat_score_text(PHRASE_PITCHES * 3), encoding="utf-8")
    code, run_dir = _run(tmp_path, "analyze", str(score), "--symbolic", "--theta-grid", "0")
    assert code == EXIT_OK
    svg = (run_dir / "analysis" / "repeat_motifs.svg").read_text(encoding="utf-8")
    assert svg.count('data-motif="0"') == 3
    assert len(_csv_rows(run_dir / "analysis" / "repeat_patterns.csv")) == 3
    assert len(_csv_rows(run_dir / "analysis" / "summary.csv")) == 1


def test_evaluate_writes_report(tmp_path):
    ratings = tmp_path / "ratings.csv"
    lines = ["sample_id,model_name,rating"]
    for index, (uni, bi, tcn) in enumerate([(3, 4, 2), (3.5, 4.5, 2.5), (2.5, 3.5, 1.5), (3, 4, 2)]):
        lines += [f"s{index},uni,{uni}", f"s{index},bi,{bi}", f"s{index},tcn,{tcn}"]
    ratings.write_text("\n".join(lines) + "\n", encoding="utf-8")

    code, run_dir = _run(tmp_path, "evaluate", "--ratings", str(ratings))
    assert code == EXIT_OK
    rows = _csv_rows(run_dir / "report.csv")
    assert len(rows) == 4
    assert [row["test"] for row in rows] == ["anova", "t", "t", "t"]
    assert (run_dir / "report.json").exists()
    assert "error-bar" in (run_dir / "ratings.svg").read_text(encoding="utf-8")


def test_evaluate_rejects_two_models(tmp_path):
    ratings = tmp_path / "ratings.csv"
    ratings.write_text("sample_id,model_name,rating\ns1,uni,3\ns2,uni,4\ns1,bi,2\ns2,bi,3\n", encoding="utf-8")
    code, _ = _run(tmp_path, "evaluate", "--ratings", str(ratings))
    assert code == EXIT_USAGE


@pytest.mark.slow
def test_gradcheck_command_passes(tmp_path):
    code, run_dir = _run(tmp_path, "gradcheck")
    assert code == EXIT_OK
    rows = _csv_rows(run_dir / "gradcheck.csv")
    assert {row["model"] for row in rows} == {"uni", "bi", "tcn"}
    assert all(row["passed"] == "True" for row in rows)
