import json
import logging
import os
import sqlite3
from typing import Dict, List, Sequence

from src.homkernel.models import utc_now_iso

logger = logging.getLogger("homkernel.journal")


class ReproduceJournal:
    """Keeps one row per reproduce run (example id, field, outcome)."""

    def __init__(self, db_path: str):
        self.db_path = db_path
        self._init_db()

    def _connect(self) -> sqlite3.Connection:
        db_dir = os.path.dirname(self.db_path)
        if db_dir:
            os.makedirs(db_dir, exist_ok=True)
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        return conn

    def _init_db(self) -> None:
        conn = self._connect()
        conn.execute(
            """
            CREATE TABLE IF NOT EXISTS reproduce_runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                ts_utc TEXT NOT NULL,
                example_id TEXT NOT NULL,
                field TEXT NOT NULL,
                passed INTEGER NOT NULL,
                failures TEXT,
                elapsed_sec REAL
            )
            """
        )
        conn.commit()
        conn.close()

    def record_run(self, example_id: str, field: str, passed: bool, failures: Sequence[str] = (), elapsed_sec: float = 0.0) -> int:
        conn = self._connect()
        cursor = conn.execute(
            """
            INSERT INTO reproduce_runs (ts_utc, example_id, field, passed, failures, elapsed_sec)
            VALUES (?, ?, ?, ?, ?, ?)
            """,
            (utc_now_iso(), example_id, field, int(bool(passed)), json.dumps(list(failures)), float(elapsed_sec)),
        )
        conn.commit()
        row_id = cursor.lastrowid
        conn.close()
        logger.info("Journaled: %s over %s | %s", example_id, field, "PASS" if passed else "FAIL")
        return row_id

    def recent_runs(self, limit: int = 20) -> List[Dict]:
        conn = self._connect()
        rows = conn.execute(
            "SELECT * FROM reproduce_runs ORDER BY id DESC LIMIT ?", (limit,)
        ).fetchall()
        conn.close()
        runs = []
        for row in rows:
            payload = dict(row)
            payload["passed"] = bool(payload["passed"])
            payload["failures"] = json.loads(payload["failures"] or "[]")
            runs.append(payload)
        return runs

    def stats(self) -> Dict:
        conn = self._connect()
        total = conn.execute("SELECT COUNT(*) FROM reproduce_runs").fetchone()[0]
        if total == 0:
            conn.close()
            return {"total_runs": 0, "passed": 0, "failed": 0, "pass_rate": 0.0}
        passed = conn.execute("SELECT COUNT(*) FROM reproduce_runs WHERE passed = 1").fetchone()[0]
        conn.close()
        return {
            "total_runs": total,
            "passed": passed,
            "failed": total - passed,
            "pass_rate": (passed / total) * 100.0,
        }
