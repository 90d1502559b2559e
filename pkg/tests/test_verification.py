from concurrent.futures import ThreadPoolExecutor

import pytest

from src.middleware.monitoring import RunMonitor, command_metrics
from src.services.table_cache import TableCache, cache_stats, clear_all_caches, get_cache
from src.services.verification import (
    SPACE_SUITES,
    SUITES,
    Check,
    Measurement,
    VerificationRunner,
    registered_checks,
)


def find_check(name):
    for suite in SUITES:
        for item in registered_checks(suite):
            if item.name == name:
                return item
    raise KeyError(name)


def test_every_suite_has_checks_with_unique_names():
    names = [item.name for suite in SUITES for item in registered_checks(suite)]
    assert all(registered_checks(suite) for suite in SUITES)
    assert len(names) == len(set(names))


def test_diagnostics_do_not_gate():
    for name in ("rf_relation", "plane_relations", "mq2_relations_report", "minkowski_relations_report"):
        assert not find_check(name).gating


def test_space_selection(session_config):
    runner = VerificationRunner(session_config.with_overrides(space="mq2"))
    assert {item.suite for item in runner.selected_checks()} == {"core", "mq2"}
    everything = VerificationRunner(session_config.with_overrides(space="all")).selected_checks()
    assert {item.suite for item in everything} == set(SPACE_SUITES["all"])


def test_exact_checks_need_zero_deviation(session_config):
    runner = VerificationRunner(session_config)
    tiny = Measurement(1e-15, "rounding")
    assert runner._run_check(Check("tolerant", "core", lambda cfg: tiny)).passed
    assert not runner._run_check(Check("strict", "core", lambda cfg: tiny, exact=True)).passed
    assert runner._run_check(Check("strict", "core", lambda cfg: Measurement(0.0), exact=True)).passed


def test_raising_check_fails_with_infinite_deviation(session_config):
    def broken(cfg):
        raise RuntimeError("boom")

    result = VerificationRunner(session_config)._run_check(Check("broken", "core", broken))
    assert not result.passed
    assert result.max_deviation == float("inf")
    assert result.status == "FAIL"
    assert "boom" in result.details


def test_non_gating_results_are_info(session_config):
    result = VerificationRunner(session_config)._run_check(
        Check("report", "core", lambda cfg: Measurement(1.0, payload={"k": 1}), gating=False)
    )
    assert result.status == "info"
    assert result.to_dict()["payload"] == {"k": 1}
    assert "payload" not in VerificationRunner(session_config)._run_check(
        Check("plain", "core", lambda cfg: Measurement(0.0))
    ).to_dict()


@pytest.mark.parametrize(
    "name",
    ["series_ring_axioms", "qnumber_symmetries", "commutation_relations", "cg_classical_limit", "peter_weyl_dimension"],
)
def test_registered_checks_pass(session_config, name):
    result = VerificationRunner(session_config)._run_check(find_check(name))
    assert result.passed, result.details


def test_run_monitor_only_counts_gating_failures():
    monitor = RunMonitor("unit")
    monitor.record_check("a", {"passed": True, "gating": True})
    monitor.record_check("b", {"passed": False, "gating": False})
    report = monitor.get_report()
    assert report["status"] == "passed"
    assert "caches" in report["metrics"]
    monitor.record_check("c", {"passed": False, "gating": True})
    report = monitor.get_report()
    assert report["status"] == "failed"
    assert report["failed_checks"] == ["c"]


def test_command_metrics_keeps_the_result():
    @command_metrics("unit")
    def handler(value):
        return value * 2

    assert handler(21) == 42
    assert handler.__name__ == "handler"


def test_table_cache_builds_once():
    cache = TableCache("unit")
    calls = []

    def build():
        calls.append(1)
        return "table"

    assert cache.get_or_build(("k", 1), build) == "table"
    assert cache.get_or_build(("k", 1), build) == "table"
    assert calls == [1]
    assert cache.stats() == {"name": "unit", "entries": 1, "hits": 1, "misses": 1}
    assert cache.clear() == 1
    assert cache.get(("k", 1)) is None


def test_table_cache_counts_every_concurrent_lookup():
    cache = TableCache("concurrent")
    built = []
    keys = [("k", i % 40) for i in range(1000)]

    def lookup(key):
        return cache.get_or_build(key, lambda: built.append(key) or key[1])

    with ThreadPoolExecutor(max_workers=8) as pool:
        values = list(pool.map(lookup, keys))

    assert values == [key[1] for key in keys]
    assert sorted(built) == sorted(set(keys))
    stats = cache.stats()
    assert (stats["entries"], stats["hits"], stats["misses"]) == (40, 960, 40)


def test_named_caches_are_shared():
    assert get_cache("representations") is get_cache("representations")
    assert "representations" in cache_stats()


def test_clear_all_caches_empties_every_cache():
    get_cache("unit-shared").get_or_build("key", lambda: "value")
    clear_all_caches()
    assert all(stats["entries"] == 0 for stats in cache_stats().values())
