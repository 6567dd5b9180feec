"""
Check Ledger - Records conductor checks and keeps a running verdict for the corpus
"""
import json
import psutil
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Any
from dataclasses import dataclass, asdict


@dataclass
class CheckRecord:
    """Data model for one recorded conductor check"""
    check_id: str
    timestamp: str
    family: str
    field: str
    poly: str
    verdict: str  # "PASS", "FAIL" or "ERROR"
    equal: bool
    rank: Optional[int]
    expected_rank: Optional[int]
    evidence: str
    elapsed_seconds: float
    memory_rss_mb: float
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert CheckRecord to dictionary"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CheckRecord':
        """Create CheckRecord from dictionary"""
        return cls(**data)


@dataclass
class LedgerStatus:
    """Data model for the ledger status"""
    status: str  # "CLEAN" or "FAILURES"
    last_check: Optional[str]
    total_checks: int
    failed_checks: int
    uptime_seconds: int
    start_time: str

    def to_dict(self) -> Dict[str, Any]:
        """Convert LedgerStatus to dictionary"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LedgerStatus':
        """Create LedgerStatus from dictionary"""
        return cls(**data)


def _utc_now() -> str:
    return datetime.utcnow().isoformat() + 'Z'


class CheckLedger:
    """Persistent JSON ledger of conductor checks"""

    def __init__(self, logs_directory: str = "logs"):
        """
        Initialize the CheckLedger

        Args:
            logs_directory: Directory where ledger files will be stored
        """
        self.logs_directory = Path(logs_directory)
        self.logs_directory.mkdir(parents=True, exist_ok=True)

        self.checks_file = self.logs_directory / "conductor_checks.json"
        self.status_file = self.logs_directory / "ledger_status.json"

        self.start_time = _utc_now()
        self.last_write_error: Optional[str] = None
        if not self.status_file.exists():
            self._save_status(self._fresh_status())

        self.check_counter = self._get_next_check_counter()

    def _fresh_status(self) -> LedgerStatus:
        return LedgerStatus(
            status="CLEAN",
            last_check=None,
            total_checks=0,
            failed_checks=0,
            uptime_seconds=0,
            start_time=self.start_time,
        )

    def _load_checks(self) -> List[Dict[str, Any]]:
        """Raw check list; a missing or corrupt file reads as empty"""
        try:
            if self.checks_file.exists():
                with open(self.checks_file, 'r', encoding='utf-8') as f:
                    data = json.load(f)
                    return data if isinstance(data, list) else []
        except (OSError, json.JSONDecodeError) as e:
            print(f"Error reading check ledger: {e}")
        return []

    def _get_next_check_counter(self) -> int:
        """Continue numbering after the highest CHK_ id on disk"""
        max_id = 0
        for check in self._load_checks():
            check_id = str(check.get('check_id', 'CHK_000'))
            if check_id.startswith('CHK_'):
                try:
                    max_id = max(max_id, int(check_id.split('_')[1]))
                except (IndexError, ValueError):
                    continue
        return max_id + 1

    def _save_status(self, status: LedgerStatus) -> None:
        try:
            with open(self.status_file, 'w', encoding='utf-8') as f:
                json.dump(status.to_dict(), f, indent=2)
        except OSError as e:
            print(f"Error saving ledger status: {e}")

    def _load_status(self) -> LedgerStatus:
        try:
            if self.status_file.exists():
                with open(self.status_file, 'r', encoding='utf-8') as f:
                    return LedgerStatus.from_dict(json.load(f))
        except (OSError, json.JSONDecodeError, TypeError) as e:
            print(f"Error loading ledger status: {e}")
        return self._fresh_status()

    @staticmethod
    def _memory_rss_mb() -> float:
        try:
            return round(psutil.Process().memory_info().rss / (1024 * 1024), 2)
        except (psutil.NoSuchProcess, psutil.AccessDenied):
            return 0.0

    def log_check(self, report: Dict[str, Any]) -> CheckRecord:
        """
        Record a conductor check report

        Args:
            report: ConductorReport.to_dict() output, or a failed corpus entry
                carrying an 'error' key

        Returns:
            CheckRecord: The record, unsaved when last_write_error is set
        """
        family = report.get('family', {}) or {}
        error = report.get('error')
        passed = bool(report.get('passed'))
        record = CheckRecord(
            check_id=f'CHK_{self.check_counter:03d}',
            timestamp=_utc_now(),
            family=family.get('name') or family.get('poly', ''),
            field=str(family.get('field', '')),
            poly=family.get('poly', ''),
            verdict="ERROR" if error else ("PASS" if passed else "FAIL"),
            equal=bool(report.get('equal')),
            rank=report.get('rank'),
            expected_rank=report.get('expected_rank'),
            evidence=report.get('evidence', 'none'),
            elapsed_seconds=float(report.get('elapsed_seconds', 0.0)),
            memory_rss_mb=self._memory_rss_mb(),
            error=error,
        )

        checks = self._load_checks()
        checks.append(record.to_dict())
        try:
            with open(self.checks_file, 'w', encoding='utf-8') as f:
                json.dump(checks, f, indent=2, ensure_ascii=False)
        except OSError as e:
            self.last_write_error = str(e)
            print(f"Error writing check ledger: {e}")
            return record
        self.last_write_error = None

        status = self._load_status()
        status.total_checks += 1
        status.last_check = record.timestamp
        if record.verdict != "PASS":
            status.failed_checks += 1
            status.status = "FAILURES"
        self._save_status(status)

        self.check_counter += 1
        glyph = "✅" if record.verdict == "PASS" else "❌"
        print(f"{glyph} CHECK LOGGED: {record.check_id} - {record.verdict} for {record.family}")
        return record

    def get_status(self) -> LedgerStatus:
        """Current ledger status with live uptime"""
        status = self._load_status()
        try:
            start = datetime.fromisoformat(status.start_time.replace('Z', '+00:00'))
            status.uptime_seconds = int((datetime.utcnow() - start.replace(tzinfo=None)).total_seconds())
        except (ValueError, AttributeError):
            status.uptime_seconds = 0
        return status

    def get_all_checks(self) -> List[CheckRecord]:
        records = []
        for data in self._load_checks():
            try:
                records.append(CheckRecord.from_dict(data))
            except TypeError:
                continue
        return records

    def get_recent_checks(self, limit: int = 10) -> List[CheckRecord]:
        """
        Most recent checks first

        Args:
            limit: Maximum number of checks to return
        """
        records = self.get_all_checks()
        records.sort(key=lambda r: (r.timestamp, r.check_id), reverse=True)
        return records[:limit]

    def get_check(self, check_id: str) -> Optional[CheckRecord]:
        return next((r for r in self.get_all_checks() if r.check_id == check_id), None)

    def clear_checks(self) -> bool:
        """
        Remove every record and reset the status

        Returns:
            bool: True if the reset succeeded
        """
        try:
            if self.checks_file.exists():
                self.checks_file.unlink()
            self.start_time = _utc_now()
            self._save_status(self._fresh_status())
            self.check_counter = 1
            print("🔄 Check ledger cleared")
            return True
        except OSError as e:
            print(f"Error clearing check ledger: {e}")
            return False

    def get_statistics(self) -> Dict[str, Any]:
        """Totals, verdict counts and per-field counts"""
        records = self.get_all_checks()
        verdicts: Dict[str, int] = {}
        fields: Dict[str, int] = {}
        for r in records:
            verdicts[r.verdict] = verdicts.get(r.verdict, 0) + 1
            fields[r.field] = fields.get(r.field, 0) + 1
        slowest = max(records, key=lambda r: r.elapsed_seconds, default=None)
        return {
            'total_checks': len(records),
            'passed': verdicts.get('PASS', 0),
            'failed': verdicts.get('FAIL', 0),
            'errors': verdicts.get('ERROR', 0),
            'by_field': fields,
            'total_seconds': round(sum(r.elapsed_seconds for r in records), 4),
            'slowest_check': slowest.check_id if slowest else None,
        }


if __name__ == "__main__":
    print("📒 Check Ledger Demo")
    print("=" * 30)
    ledger = CheckLedger()
    record = ledger.log_check({
        'family': {'name': 'fermat cubic', 'field': 'Q', 'poly': 'x0^3 + x1^3 + x2^3'},
        'passed': True, 'equal': True, 'rank': 8, 'expected_rank': 8,
        'evidence': 'full', 'elapsed_seconds': 0.12,
    })
    print(f"   {record.check_id}: {record.verdict} at {record.timestamp}")
    print(f"   Status: {ledger.get_status().status}")
    print(f"   Statistics: {ledger.get_statistics()}")
