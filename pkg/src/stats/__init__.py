# src/stats/__init__.py
# 평가 설문 통계 (ANOVA, t-test, 불완전 베타)

from .hypothesis import one_way_anova, t_test
from .report import evaluate_models, read_ratings_csv, write_report_csv, write_report_json
from .special import StatsDomainError, reg_inc_beta

__all__ = [
    "one_way_anova",
    "t_test",
    "evaluate_models",
    "read_ratings_csv",
    "write_report_csv",
    "write_report_json",
    "StatsDomainError",
    "reg_inc_beta",
]
