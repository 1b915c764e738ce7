# src/utils/__init__.py
# 설정, 로깅, 코퍼스 저장, 내보내기 유틸리티

from .config import ConfigError, RunConfig, load_run_config, setup_logging
from .corpus_storage import CorpusStorage
from .run_tracker import RunTracker

__all__ = ["ConfigError", "RunConfig", "load_run_config", "setup_logging", "CorpusStorage", "RunTracker"]
