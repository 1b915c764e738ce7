# src/utils/config.py
# 실행 설정(RunConfig) 병합, 실행 디렉토리, 로깅 초기화

import json
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import colorlog
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

# .env 파일 로드 (이미 설정된 환경 변수는 덮어쓰지 않음)
load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
COLOR_LOG_FORMAT = "%(log_color)s" + LOG_FORMAT
LOG_FILE_NAME = "run.log"
LOG_DIR_NAME = "logs"
CONFIG_ECHO_NAME = "config.json"

# 환경 변수 → RunConfig 필드
ENV_FIELDS = {
    "MELODY_SEED": "seed",
    "MELODY_OUT_DIR": "out_dir",
    "LOG_LEVEL": "log_level",
    "MELODY_JOBS": "jobs",
}


class ConfigError(ValueError):
    """설정 파일/값 오류"""


class RunConfig(BaseModel):
    """
    한 번의 CLI 실행 설정.

    우선순위: 기본값 ← 환경 변수 ← JSON 설정 파일(--config) ← 명령줄 플래그
    """

    # 공통
    seed: int = Field(default=0, description="난수 시드")
    out_dir: str = Field(default="runs", description="실행 디렉토리들의 상위 경로")
    run_name: Optional[str] = Field(default=None, description="실행 디렉토리 이름 (없으면 시각+시드)")
    jobs: int = Field(default=1, ge=1, description="병렬 작업 수 상한")
    log_level: str = Field(default="INFO")
    progress: bool = Field(default=False, description="tqdm 진행바 표시")

    # ingest
    melody_track: int = Field(default=0, ge=0)
    chord_track: int = Field(default=1, ge=-1, description="코드 트랙 번호 (-1이면 코드 없음)")
    augment: bool = Field(default=False, description="12조 전조 증강")

    # train
    model: Literal["uni", "bi", "tcn", "all"] = Field(default="uni")
    epochs: int = Field(default=10, ge=0)
    optimizer: Literal["adam", "sgd"] = Field(default="adam")
    lr: float = Field(default=1e-3, gt=0)
    max_steps: Optional[int] = Field(default=None, ge=0)
    train_fraction: float = Field(default=631 / 941, gt=0, le=1)
    model_overrides: Dict[str, Dict[str, Any]] = Field(
        default_factory=dict, description="모델 종류별 하이퍼파라미터 덮어쓰기"
    )

    # generate
    temperature: float = Field(default=1.0, ge=0)
    prime_beats: int = Field(default=20, ge=0)
    generate_beats: int = Field(default=20, ge=0)

    # analyze
    theta_grid: Optional[List[float]] = Field(default=None, description="θ 후보 (없으면 자동)")
    min_len: int = Field(default=4, ge=1)
    symbolic: bool = Field(default=False, description="합성 없는 심볼릭 크로마 사용")

    # evaluate
    t_variant: Literal["pooled", "welch"] = Field(default="pooled")


def env_overrides() -> Dict[str, Any]:
    """설정된 환경 변수만 모아 RunConfig 필드 이름으로 돌려줍니다."""
    values: Dict[str, Any] = {}
    for env_key, field_name in ENV_FIELDS.items():
        raw = os.getenv(env_key)
        if raw is not None and raw.strip() != "":
            values[field_name] = raw.strip()
    return values


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    JSON 설정 파일을 읽습니다.

    Raises:
        ConfigError: 파일이 없거나 JSON 객체가 아닌 경우
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"설정 파일이 없습니다: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"설정 파일 JSON 오류 ({path}): {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"설정 파일은 JSON 객체여야 합니다: {path}")
    unknown = sorted(set(data) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError(f"알 수 없는 설정 키: {unknown}")
    return data


def load_run_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """
    기본값, 환경 변수, 설정 파일, 명령줄 값을 차례로 병합합니다.

    Args:
        config_path: JSON 설정 파일 경로 (선택)
        overrides: 명령줄 값 (None인 항목은 무시)

    Returns:
        RunConfig: 병합된 설정

    Raises:
        ConfigError: 파일 오류나 값 검증 실패
    """
    merged: Dict[str, Any] = env_overrides()
    if config_path is not None:
        merged.update(read_config_file(config_path))
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        config = RunConfig(**merged)
    except ValidationError as e:
        raise ConfigError(f"설정 값 검증 실패: {e}") from e
    logger.debug(f"설정 병합 완료: {sorted(merged)}")
    return config


def create_run_dir(config: RunConfig, now: Optional[datetime] = None) -> Path:
    """<out_dir>/<YYYYmmdd_HHMMSS>_seed<seed> (또는 run_name) 디렉토리를 만듭니다."""
    name = config.run_name
    if not name:
        stamp = (now or datetime.now()).strftime("%Y%m%d_%H%M%S")
        name = f"{stamp}_seed{config.seed}"
    run_dir = Path(config.out_dir) / name
    (run_dir / LOG_DIR_NAME).mkdir(parents=True, exist_ok=True)
    return run_dir


def write_config_echo(config: RunConfig, run_dir: Path, command: str) -> Path:
    """실제 적용된 설정을 정렬된 키로 run_dir/config.json에 남깁니다."""
    payload = {"command": command, **config.model_dump(mode="json")}
    path = run_dir / CONFIG_ECHO_NAME
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    return path


def setup_logging(level: str = "INFO", log_file: Optional[Union[str, Path]] = None) -> None:
    """
    루트 로거를 초기화합니다: 색상 콘솔 핸들러 + (선택) UTF-8 파일 핸들러.

    여러 번 호출해도 이전에 붙인 핸들러를 교체하므로 중복 출력이 없습니다.

    Args:
        level: 로그 레벨 이름
        log_file: 로그 파일 경로 (None이면 콘솔만)
    """
    numeric_level = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.INFO

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    for handler in list(root_logger.handlers):
        if getattr(handler, "_melody_handler", False):
            root_logger.removeHandler(handler)
            handler.close()

    console = colorlog.StreamHandler()
    console.setFormatter(
        colorlog.ColoredFormatter(
            COLOR_LOG_FORMAT,
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red,bg_white",
            },
        )
    )
    console._melody_handler = True
    root_logger.addHandler(console)

    if log_file is not None:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        file_handler._melody_handler = True
        root_logger.addHandler(file_handler)

    logger.info(f"로깅 초기화 완료: 레벨={logging.getLevelName(numeric_level)}, 파일={log_file}")
