# src/main.py
# 코드 조건부 멜로디 생성 툴킷 명령줄 엔트리포인트 (ingest / train / generate / analyze / evaluate / gradcheck)

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.analysis.pipeline import chroma_rows, compare_samples, curve_rows, pattern_rows, summarize
from src.encoding.frame_io import read_frames_csv, write_frames_csv
from src.encoding.frames import decode_frames, quantize_score, transpose_frames
from src.generators.registry import build_model, model_from_checkpoint
from src.ingest.score_builder import load_score, normalize_tempo
from src.ingest.score_text import render_score_text
from src.ingest.smf_writer import write_smf
from src.models.network_models import MODEL_KINDS
from src.models.score_models import FrameSequence, SymbolicScore
from src.models.training_models import CorpusSplit, GenerationTask, TrainConfig
from src.numerics.checkpoint import checkpoint_bytes, load_checkpoint
from src.numerics.grad_check import grad_check
from src.stats.report import evaluate_models, read_ratings_csv, write_report_csv, write_report_json
from src.training.corpus import split_corpus
from src.training.sampler import build_survey_group
from src.training.trainer import train
from src.utils.config import (
    LOG_DIR_NAME,
    LOG_FILE_NAME,
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

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

SCORE_SUFFIXES = {".mid", ".midi", ".txt", ".score"}

# gradcheck 명령의 작은 모델 설정
GRADCHECK_CONFIGS: Dict[str, Dict[str, Any]] = {
    "uni": {"layers": 3, "hidden": 5},
    "bi": {"layers": 2, "hidden": 4, "encoder_layers": 2, "encoder_hidden": 3},
    "tcn": {"kernel": 2, "dilations": [1, 2, 4], "residual_channels": 4, "skip_channels": 5},
}
GRADCHECK_FRAMES = 12
GRADCHECK_SAMPLES = 6


class UsageError(Exception):
    """입력 파일이 없거나 인자가 잘못됨 (종료 코드 2)"""


class CommandContext:
    """명령 하나의 실행 디렉토리, 설정, 단계 추적기"""

    def __init__(self, command: str, config: RunConfig):
        self.command = command
        self.config = config
        self.run_dir = create_run_dir(config)
        setup_logging(config.log_level, self.run_dir / LOG_DIR_NAME / LOG_FILE_NAME)
        write_config_echo(config, self.run_dir, command)
        self.tracker = RunTracker(command)
        logger.info(f"[{command}] 실행 디렉토리: {self.run_dir}")

    def path(self, *parts: str) -> Path:
        target = self.run_dir.joinpath(*parts)
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def finish(self) -> None:
        self.tracker.save_report(self.run_dir / LOG_DIR_NAME / "run_summary.json")


# ------------------------------------------------------------------ 입력 헬퍼


def _expand_inputs(paths: List[str], suffixes: set) -> List[Path]:
    """파일/디렉토리 목록을 정렬된 파일 목록으로 펼칩니다."""
    files: List[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(p for p in path.iterdir() if p.suffix.lower() in suffixes))
        elif path.exists():
            files.append(path)
        else:
            raise UsageError(f"입력 파일이 없습니다: {path}")
    if not files:
        raise UsageError("처리할 입력 파일이 없습니다")
    return files


def _chord_track(config: RunConfig) -> Optional[int]:
    return None if config.chord_track < 0 else config.chord_track


def _load_frames(path: Path, config: RunConfig, warnings: Optional[List[str]] = None) -> FrameSequence:
    """프레임 CSV는 그대로, 악보 파일은 템포 정규화 후 양자화"""
    if path.suffix.lower() == ".csv":
        return read_frames_csv(path)
    score = load_score(path, melody_track=config.melody_track, chord_track=_chord_track(config))
    return quantize_score(normalize_tempo(score), warnings)


def _load_score(path: Path, config: RunConfig) -> SymbolicScore:
    if path.suffix.lower() == ".csv":
        return decode_frames(read_frames_csv(path))
    return load_score(path, melody_track=config.melody_track, chord_track=_chord_track(config))


def _unique_names(paths: List[Path]) -> List[str]:
    names: List[str] = []
    for path in paths:
        name = path.stem
        suffix = 2
        while name in names:
            name = f"{path.stem}_{suffix}"
            suffix += 1
        names.append(name)
    return names


# ------------------------------------------------------------------ 명령


def cmd_ingest(ctx: CommandContext, inputs: List[str]) -> int:
    """악보 파일들을 곡별 프레임 CSV와 매니페스트로 변환 (일부 실패 허용)"""
    config = ctx.config
    files = _expand_inputs(inputs, SCORE_SUFFIXES)
    storage = CorpusStorage(ctx.run_dir / "corpus")

    for path, song_id in tqdm(
        list(zip(files, _unique_names(files))), desc="ingest", disable=not config.progress
    ):
        step = ctx.tracker.start_step("ingest", str(path))
        warnings: List[str] = []
        try:
            frames = _load_frames(path, config, warnings)
        except (ValueError, OSError) as e:
            logger.warning(f"읽기 실패, 건너뜀: {path}: {e}")
            storage.record_error(str(path), str(e))
            ctx.tracker.end_step(step, success=False, error=str(e))
            continue
        storage.store_song(song_id, frames, str(path), warnings)
        if config.augment:
            for shift in range(1, 12):
                storage.store_song(
                    f"{song_id}_t{shift:02d}",
                    transpose_frames(frames, shift),
                    str(path),
                    transposition=shift,
                    origin=song_id,
                )
        ctx.tracker.end_step(step, frames=len(frames), warnings=len(warnings))

    storage.save_manifest()
    stats = storage.manifest["stats"]
    logger.info(
        f"ingest 완료: {stats['total_songs']}개 파일, {stats['total_frames']}프레임, "
        f"경고 {stats['total_warnings']}건, 오류 {stats['total_errors']}건"
    )
    if stats["total_errors"]:
        logger.warning(f"읽지 못한 파일 {stats['total_errors']}개는 manifest.json에 기록했습니다")
    if stats["total_songs"] == 0:
        raise UsageError("읽을 수 있는 악보가 하나도 없습니다")
    return EXIT_OK


def _train_one(
    kind: str, split_data: Dict[str, Any], train_config: Dict[str, Any], overrides: Dict[str, Any]
) -> Tuple[str, bytes, List[Dict[str, Any]], bool]:
    """프로세스 풀 작업: 모델 하나를 학습해 체크포인트 바이트와 손실 곡선을 돌려줍니다."""
    split = CorpusSplit(**split_data)
    config = TrainConfig(**train_config)
    result = train(build_model(kind, overrides, seed=config.seed), split, config)
    checkpoint = result.model.to_checkpoint(best_epoch=result.best_epoch, steps=result.steps)
    return kind, checkpoint_bytes(checkpoint), result.curve_rows(), result.diverged


def cmd_train(ctx: CommandContext, corpus_dir: str) -> int:
    """코퍼스를 곡 단위로 나누고 모델(들)을 학습해 체크포인트와 손실 CSV를 저장"""
    config = ctx.config
    if not (Path(corpus_dir) / "manifest.json").exists():
        raise UsageError(f"코퍼스 매니페스트가 없습니다: {corpus_dir}")
    storage = CorpusStorage(corpus_dir)
    song_ids, songs = storage.load_songs()
    if not songs:
        raise UsageError(f"코퍼스에 곡이 없습니다: {corpus_dir}")
    split = split_corpus(
        songs,
        train_fraction=config.train_fraction,
        seed=config.seed,
        augment=config.augment or storage.has_transposed,
        song_ids=song_ids,
    )
    train_config = TrainConfig(
        epochs=config.epochs,
        optimizer=config.optimizer,
        lr=config.lr,
        seed=config.seed,
        max_steps=config.max_steps,
        progress=config.progress,
    )
    kinds = list(MODEL_KINDS) if config.model == "all" else [config.model]
    jobs = [
        (kind, split.model_dump(), train_config.model_dump(), config.model_overrides.get(kind, {}))
        for kind in kinds
    ]

    workers = min(config.jobs, len(jobs))
    if workers > 1:
        logger.info(f"{len(jobs)}개 모델을 프로세스 {workers}개로 학습합니다")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_train_one, *zip(*jobs)))
    else:
        outcomes = [_train_one(*job) for job in jobs]

    diverged = []
    for kind, blob, rows, did_diverge in outcomes:
        step = ctx.tracker.start_step("train", kind)
        ctx.path("checkpoints", f"{kind}.ckpt").write_bytes(blob)
        if rows:
            write_rows_csv(rows, ctx.path(f"loss_{kind}.csv"))
        if did_diverge:
            diverged.append(kind)
        ctx.tracker.end_step(step, success=not did_diverge, epochs=len(rows))

    if diverged:
        logger.error(f"학습이 발산한 모델: {diverged}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_generate(ctx: CommandContext, checkpoints: List[str], song_path: str, smf: bool) -> int:
    """같은 프라임에서 체크포인트별 이어 생성 (설문 샘플 그룹)"""
    config = ctx.config
    models = {}
    for raw in checkpoints:
        path = Path(raw)
        if not path.exists():
            raise UsageError(f"체크포인트가 없습니다: {path}")
        model = model_from_checkpoint(load_checkpoint(path))
        name = model.kind if model.kind not in models else f"{model.kind}_{path.stem}"
        models[name] = model
    song_file = Path(song_path)
    if not song_file.exists():
        raise UsageError(f"곡 파일이 없습니다: {song_file}")

    song = _load_frames(song_file, config)
    task = GenerationTask(
        prime_beats=config.prime_beats,
        generate_beats=config.generate_beats,
        temperature=config.temperature,
        seed=config.seed,
    )
    group = build_survey_group(song, models, task)
    for name, frames in group.items():
        step = ctx.tracker.start_step("generate", name)
        score = decode_frames(frames)
        write_frames_csv(frames, ctx.path("generated", f"{name}.csv"))
        ctx.path("generated", f"{name}.txt").write_text(render_score_text(score), encoding="utf-8")
        if smf:
            ctx.path("generated", f"{name}.mid").write_bytes(write_smf(score))
        ctx.tracker.end_step(step, frames=len(frames))
    logger.info(f"생성 완료: {', '.join(group)}")
    return EXIT_OK


def cmd_analyze(ctx: CommandContext, inputs: List[str]) -> int:
    """악보(또는 프레임 CSV)별 IR 곡선, 모티프, 크로마 CSV와 SVG"""
    config = ctx.config
    files = _expand_inputs(inputs, SCORE_SUFFIXES | {".csv"})
    scores = {name: _load_score(path, config) for path, name in zip(files, _unique_names(files))}
    results = compare_samples(
        scores, theta_grid=config.theta_grid, min_len=config.min_len, symbolic=config.symbolic
    )
    for name, result in results.items():
        step = ctx.tracker.start_step("analyze", name)
        write_rows_csv(curve_rows(result.ir_curve), ctx.path("analysis", f"{name}_ir.csv"))
        write_rows_csv(
            pattern_rows(result.patterns),
            ctx.path("analysis", f"{name}_patterns.csv"),
            fieldnames=["motif", "length", "start", "end"],
        )
        write_rows_csv(chroma_rows(result.chroma), ctx.path("analysis", f"{name}_chroma.csv"))
        write_svg(ir_curve_svg(result.ir_curve, f"{name}: IR"), ctx.path("analysis", f"{name}_ir.svg"))
        write_svg(
            motif_bars_svg(result.patterns, f"{name}: motifs"),
            ctx.path("analysis", f"{name}_motifs.svg"),
        )
        ctx.tracker.end_step(step, motifs=len(result.patterns.motifs))
    write_rows_csv(
        [summary.model_dump() for summary in summarize(results)], ctx.path("analysis", "summary.csv")
    )
    return EXIT_OK


def cmd_evaluate(ctx: CommandContext, ratings_path: str) -> int:
    """평점 CSV → ANOVA + 쌍별 t-test 리포트 (CSV, JSON, 에러바 SVG)"""
    path = Path(ratings_path)
    if not path.exists():
        raise UsageError(f"평점 파일이 없습니다: {path}")
    step = ctx.tracker.start_step("evaluate", str(path))
    report = evaluate_models(read_ratings_csv(path), variant=ctx.config.t_variant)
    write_report_csv(report, ctx.path("report.csv"))
    write_report_json(report, ctx.path("report.json"))
    write_svg(error_bar_svg(report, "Ratings (mean ± MSE)"), ctx.path("ratings.svg"))
    ctx.tracker.end_step(step, anova_p=report.anova.p_value)
    return EXIT_OK


def _random_frames(rng: np.random.Generator, length: int) -> FrameSequence:
    melody: List[int] = []
    for _ in range(length):
        choices = [60, 64, 67, 128] + ([] if not melody or melody[-1] == 128 else [129])
        melody.append(int(rng.choice(choices)))
    chords = [int(c) for c in rng.integers(0, 25, size=length)]
    return FrameSequence(melody=melody, chords=chords)


def cmd_gradcheck(ctx: CommandContext) -> int:
    """작은 설정의 세 모델에 대해 해석적 기울기를 중앙 차분과 비교"""
    rng = np.random.default_rng(ctx.config.seed)
    frames = _random_frames(rng, GRADCHECK_FRAMES)
    rows = []
    for kind, overrides in GRADCHECK_CONFIGS.items():
        step = ctx.tracker.start_step("gradcheck", kind)
        model = build_model(kind, overrides, seed=ctx.config.seed)
        model.store.zero_grads()
        model.loss_and_grads(frames)
        report = grad_check(
            lambda store: model.loss(frames),
            model.store,
            samples_per_param=GRADCHECK_SAMPLES,
            seed=ctx.config.seed,
        )
        for entry in report.entries:
            rows.append(
                {
                    "model": kind,
                    "param": entry.name,
                    "relative_error": entry.relative_error,
                    "passed": entry.relative_error < report.tolerance,
                }
            )
        ctx.tracker.end_step(step, success=report.passed)
    write_rows_csv(rows, ctx.path("gradcheck.csv"))
    if ctx.tracker.failures:
        logger.error(f"기울기 검증 실패: {[s.operation for s in ctx.tracker.failures]}")
        return EXIT_CHECK_FAILED
    logger.info("기울기 검증 모두 통과")
    return EXIT_OK


# ------------------------------------------------------------------ 인자 파싱


def _theta_grid(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"θ 격자는 쉼표로 구분한 숫자여야 합니다: {text}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="난수 시드")
    common.add_argument("--config", default=None, help="JSON 설정 파일")
    common.add_argument("--out-dir", dest="out_dir", default=None, help="실행 디렉토리 상위 경로")
    common.add_argument("--run-name", dest="run_name", default=None, help="실행 디렉토리 이름")
    common.add_argument("--jobs", type=int, default=None, help="병렬 작업 수 상한")
    common.add_argument("--log-level", dest="log_level", default=None)
    common.add_argument("--progress", action="store_const", const=True, default=None)

    parser = argparse.ArgumentParser(
        prog="python -m src.main", description="코드 조건부 멜로디 생성 및 분석 툴킷"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", parents=[common], help="악보 → 프레임 CSV 코퍼스")
    ingest.add_argument("inputs", nargs="+", help="악보 파일 또는 디렉토리")
    ingest.add_argument("--melody-track", dest="melody_track", type=int, default=None)
    ingest.add_argument("--chord-track", dest="chord_track", type=int, default=None)
    ingest.add_argument("--augment", action="store_const", const=True, default=None)

    train_cmd = commands.add_parser("train", parents=[common], help="모델 학습")
    train_cmd.add_argument("--corpus", required=True, help="ingest가 만든 코퍼스 디렉토리")
    train_cmd.add_argument("--model", choices=[*MODEL_KINDS, "all"], default=None)
    train_cmd.add_argument("--epochs", type=int, default=None)
    train_cmd.add_argument("--lr", type=float, default=None)
    train_cmd.add_argument("--optimizer", choices=["adam", "sgd"], default=None)
    train_cmd.add_argument("--max-steps", dest="max_steps", type=int, default=None)
    train_cmd.add_argument("--augment", action="store_const", const=True, default=None)

    generate = commands.add_parser("generate", parents=[common], help="이어 생성")
    generate.add_argument("--checkpoint", action="append", required=True, help="체크포인트 (여러 번)")
    generate.add_argument("--song", required=True, help="프라임과 코드 진행을 줄 곡")
    generate.add_argument("--temperature", type=float, default=None)
    generate.add_argument("--prime-beats", dest="prime_beats", type=int, default=None)
    generate.add_argument("--generate-beats", dest="generate_beats", type=int, default=None)
    generate.add_argument("--smf", action="store_true", help="MIDI 파일도 저장")

    analyze = commands.add_parser("analyze", parents=[common], help="VMO 구조 분석")
    analyze.add_argument("inputs", nargs="+", help="악보/프레임 CSV 파일 또는 디렉토리")
    analyze.add_argument("--symbolic", action="store_const", const=True, default=None)
    analyze.add_argument("--theta-grid", dest="theta_grid", type=_theta_grid, default=None)
    analyze.add_argument("--min-len", dest="min_len", type=int, default=None)

    evaluate = commands.add_parser("evaluate", parents=[common], help="평점 통계 리포트")
    evaluate.add_argument("--ratings", required=True, help="sample_id,model_name,rating CSV")
    evaluate.add_argument("--variant", dest="t_variant", choices=["pooled", "welch"], default=None)

    commands.add_parser("gradcheck", parents=[common], help="기울기 검증")
    return parser


CONFIG_FLAGS = [
    "seed", "out_dir", "run_name", "jobs", "log_level", "progress", "melody_track",
    "chord_track", "augment", "model", "epochs", "lr", "optimizer", "max_steps",
    "temperature", "prime_beats", "generate_beats", "theta_grid", "min_len", "symbolic",
    "t_variant",
]


def main(argv: Optional[List[str]] = None) -> int:
    """명령줄 실행. 종료 코드 0 성공, 1 검증 실패, 2 사용법/입력 오류."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    overrides = {name: getattr(args, name) for name in CONFIG_FLAGS if hasattr(args, name)}
    try:
        config = load_run_config(args.config, overrides)
    except ConfigError as e:
        logging.getLogger().error(f"설정 오류: {e}")
        print(f"설정 오류: {e}", file=sys.stderr)
        return EXIT_USAGE

    handlers: Dict[str, Callable[[CommandContext], int]] = {
        "ingest": lambda ctx: cmd_ingest(ctx, args.inputs),
        "train": lambda ctx: cmd_train(ctx, args.corpus),
        "generate": lambda ctx: cmd_generate(ctx, args.checkpoint, args.song, args.smf),
        "analyze": lambda ctx: cmd_analyze(ctx, args.inputs),
        "evaluate": lambda ctx: cmd_evaluate(ctx, args.ratings),
        "gradcheck": cmd_gradcheck,
    }
    ctx = CommandContext(args.command, config)
    try:
        code = handlers[args.command](ctx)
    except UsageError as e:
        logger.error(str(e))
        code = EXIT_USAGE
    except (ValueError, OSError) as e:
        logger.error(f"입력 오류: {e}")
        code = EXIT_USAGE
    finally:
        ctx.finish()
    logger.info(f"[{args.command}] 종료 코드 {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
