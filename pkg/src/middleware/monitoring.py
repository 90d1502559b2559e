"""
Run monitoring for verification suites and commands
"""

import logging
import threading
import time
from datetime import datetime, timezone
from functools import wraps
from typing import Any, Dict

import psutil

from src.services.table_cache import cache_stats

logger = logging.getLogger(__name__)


class RunMonitor:
    """Collects per-check timings and process metrics for one run"""

    def __init__(self, name: str):
        self.name = name
        self.started_at = datetime.now(timezone.utc)
        self._start = time.perf_counter()
        self._lock = threading.Lock()
        self.checks: Dict[str, Dict[str, Any]] = {}

    def record_check(self, name: str, result: Dict[str, Any]):
        with self._lock:
            self.checks[name] = result

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self._start

    def get_report(self) -> Dict[str, Any]:
        """Report with overall status, per-check results and run metrics"""
        report = {
            "status": "passed",
            "run": self.name,
            "timestamp": self.started_at.isoformat(),
            "checks": dict(self.checks),
            "metrics": {},
        }

        try:
            report["metrics"]["run"] = {
                "elapsed_seconds": round(self.elapsed, 3),
                "checks": len(self.checks),
            }
            report["metrics"]["process"] = RunMonitor._get_process_metrics()
            report["metrics"]["system"] = RunMonitor._get_system_metrics()
            report["metrics"]["caches"] = cache_stats()

            failed_checks = [
                name
                for name, check in self.checks.items()
                if check.get("gating", True) and not check.get("passed", False)
            ]
            if failed_checks:
                report["status"] = "failed"
                report["failed_checks"] = failed_checks

        except Exception as e:
            report["status"] = "error"
            report["error"] = str(e)
            logger.error(f"Run report error: {str(e)}")

        return report

    @staticmethod
    def _get_process_metrics() -> Dict[str, Any]:
        try:
            process = psutil.Process()
            return {
                "rss_mb": round(process.memory_info().rss / 1024 / 1024, 2),
                "cpu_percent": process.cpu_percent(interval=None),
                "threads": process.num_threads(),
            }
        except Exception as e:
            logger.error(f"Process metrics error: {str(e)}")
            return {"error": str(e)}

    @staticmethod
    def _get_system_metrics() -> Dict[str, Any]:
        try:
            memory = psutil.virtual_memory()
            return {
                "cpu_count": psutil.cpu_count(),
                "memory_percent": memory.percent,
                "memory_available_mb": round(memory.available / 1024 / 1024, 2),
            }
        except Exception as e:
            logger.error(f"System metrics error: {str(e)}")
            return {"error": str(e)}


def command_metrics(name: str):
    """Log duration and outcome of a command handler"""

    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            start_time = time.perf_counter()
            success = False
            try:
                result = f(*args, **kwargs)
                success = True
                return result
            finally:
                duration = time.perf_counter() - start_time
                logger.info(f"COMMAND_METRICS: {name} duration={duration:.3f}s success={success}")

        return decorated_function

    return decorator
