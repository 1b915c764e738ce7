# config.example.py
# 환경 변수 설정 예제 파일
# 이 파일을 참고하여 .env 파일을 생성하거나 환경 변수를 설정하세요

"""
환경 변수 설정 가이드:

1. .env 파일 생성:
   - 프로젝트 루트에 .env 파일을 만드세요
   - 아래 변수들을 복사하여 필요한 값으로 바꾸세요

2. 모든 변수는 선택 사항입니다 (기본값이 있음)
   - 우선순위: 기본값 ← 환경 변수 ← --config JSON 파일 ← 명령줄 플래그

3. .env 파일 예시:
"""

ENV_TEMPLATE = """
# 난수 시드 (같은 시드면 산출물이 바이트 단위로 같음)
MELODY_SEED=0

# 실행 디렉토리 상위 경로
MELODY_OUT_DIR=runs

# 병렬 작업 수 상한 (train --model all)
MELODY_JOBS=1

# 로깅 설정
LOG_LEVEL=INFO
"""

# --config 로 넘길 수 있는 JSON 예시
CONFIG_FILE_EXAMPLE = {
    "epochs": 30,
    "lr": 0.001,
    "model": "all",
    "model_overrides": {
        "uni": {"layers": 7, "hidden": 128},
        "bi": {"layers": 7, "hidden": 128, "encoder_layers": 2, "encoder_hidden": 64},
        "tcn": {"dilations": [1, 2, 4, 8, 16, 32, 64, 128, 256]},
    },
    "temperature": 1.0,
    "min_len": 4,
}


def print_config_guide():
    """설정 가이드 출력"""
    import json

    print("=" * 60)
    print("멜로디 생성 툴킷 - 환경 설정 가이드")
    print("=" * 60)
    print("\n📋 환경 변수:")
    print(ENV_TEMPLATE)
    print("\n🧾 --config JSON 예시:")
    print(json.dumps(CONFIG_FILE_EXAMPLE, ensure_ascii=False, indent=2))


def validate_env_file(env_path: str = ".env") -> bool:
    """
    .env 파일의 값이 RunConfig로 검증되는지 확인합니다.

    Args:
        env_path: .env 파일 경로

    Returns:
        bool: 유효한 설정인지 여부
    """
    from pathlib import Path

    from dotenv import load_dotenv

    from src.utils.config import ConfigError, load_run_config

    if not Path(env_path).exists():
        print(f"❌ .env 파일이 없습니다: {env_path}")
        return False

    load_dotenv(env_path, override=True)
    try:
        config = load_run_config()
    except ConfigError as e:
        print(f"❌ 설정 오류: {e}")
        return False

    print(f"✅ 환경 설정이 올바르게 구성되었습니다! (seed={config.seed}, out_dir={config.out_dir})")
    return True


if __name__ == "__main__":
    import sys

    if len(sys.argv) > 1 and sys.argv[1] == "validate":
        validate_env_file()
    else:
        print_config_guide()
