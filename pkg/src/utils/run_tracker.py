# src/utils/run_tracker.py
# 명령 실행 단계별 소요 시간/성공 여부 추적

import json
import time
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union


@dataclass
class StepRecord:
    """실행 단계 하나의 기록"""

    timestamp: str
    component: str  # ingest, train, analyze 등
    operation: str  # 파일 이름, 모델 종류 등
    duration_seconds: float
    success: bool
    error_message: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)


class RunTracker:
    """단계별 소요 시간과 실패를 모아 실행 요약을 만듭니다."""

    def __init__(self, command: str):
        self.command = command
        self.steps: List[StepRecord] = []
        self.session_start = datetime.now().isoformat()

    def start_step(self, component: str, operation: str) -> Dict[str, Any]:
        """단계 시작 시각 기록"""
        return {"component": component, "operation": operation, "start_time": time.time()}

    def end_step(
        self,
        start_info: Dict[str, Any],
        success: bool = True,
        error: Optional[str] = None,
        **details: Any,
    ) -> StepRecord:
        """단계 종료 및 결과 기록"""
        record = StepRecord(
            timestamp=datetime.now().isoformat(),
            component=start_info["component"],
            operation=start_info["operation"],
            duration_seconds=time.time() - start_info["start_time"],
            success=success,
            error_message=error,
            details=details,
        )
        self.steps.append(record)
        return record

    @property
    def failures(self) -> List[StepRecord]:
        return [step for step in self.steps if not step.success]

    def get_summary(self) -> Dict[str, Any]:
        """전체 실행 요약"""
        component_stats: Dict[str, Dict[str, float]] = {}
        for step in self.steps:
            stats = component_stats.setdefault(
                step.component, {"steps": 0, "failed": 0, "duration": 0.0}
            )
            stats["steps"] += 1
            stats["failed"] += 0 if step.success else 1
            stats["duration"] += step.duration_seconds

        total_duration = sum(step.duration_seconds for step in self.steps)
        return {
            "session_info": {
                "command": self.command,
                "start_time": self.session_start,
                "end_time": datetime.now().isoformat(),
                "total_steps": len(self.steps),
                "failed_steps": len(self.failures),
            },
            "performance": {
                "total_duration_seconds": round(total_duration, 2),
                "duration_by_component": {
                    k: round(v["duration"], 2) for k, v in component_stats.items()
                },
            },
            "component_breakdown": component_stats,
            "detailed_steps": [
                {
                    "timestamp": step.timestamp,
                    "component": step.component,
                    "operation": step.operation,
                    "duration_seconds": round(step.duration_seconds, 3),
                    "success": step.success,
                    "error": step.error_message,
                    "details": step.details,
                }
                for step in self.steps
            ],
        }

    def save_report(self, filepath: Union[str, Path]) -> None:
        """요약을 JSON 파일로 저장"""
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(self.get_summary(), f, ensure_ascii=False, indent=2, default=str)
