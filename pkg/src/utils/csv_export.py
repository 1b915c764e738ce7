# src/utils/csv_export.py
# 딕셔너리 행 목록을 CSV로 저장

import csv
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union


def write_rows_csv(
    rows: Sequence[Dict[str, Any]],
    path: Union[str, Path],
    fieldnames: Optional[List[str]] = None,
) -> Path:
    """
    행 목록을 CSV로 씁니다. 열 순서는 fieldnames 또는 첫 행의 키 순서를 따릅니다.

    Raises:
        ValueError: 행도 fieldnames도 없는 경우
    """
    if fieldnames is None:
        if not rows:
            raise ValueError("열 이름을 정할 수 없습니다 (빈 행 목록)")
        fieldnames = list(rows[0])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return path
