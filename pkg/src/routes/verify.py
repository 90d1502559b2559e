"""
Verify command: runs the property suites and renders the pass/fail table
"""

import logging
from typing import List

from tabulate import tabulate

from src.config.config import SessionConfig
from src.middleware.errors import EXIT_OK, ErrorHandler, VerificationFailure
from src.middleware.monitoring import command_metrics
from src.routes import CommandGroup, CommandResult, argument
from src.services.verification import SPACE_SUITES, CheckResult, VerificationRunner

logger = logging.getLogger(__name__)

verify_group = CommandGroup("verify")

TABLE_HEADERS = ["check", "suite", "status", "max deviation", "seconds", "details"]


def render_table(results: List[CheckResult]) -> str:
    rows = [
        [r.name, r.suite, r.status, f"{r.max_deviation:.3e}", f"{r.seconds:.2f}", r.details]
        for r in results
    ]
    return tabulate(rows, headers=TABLE_HEADERS, tablefmt="simple")


def render_summary(results: List[CheckResult]) -> str:
    gating = [r for r in results if r.gating]
    failed = [r for r in gating if not r.passed]
    if failed:
        return f"❌ {len(failed)} of {len(gating)} checks failed: {', '.join(r.name for r in failed)}"
    return f"✅ All {len(gating)} checks passed"


@verify_group.command("verify", help="Run the property suites for the configured space")
@argument("--list", dest="list_only", action="store_true", help="List the selected checks without running them")
@command_metrics("verify")
def verify_command(args, session: SessionConfig) -> CommandResult:
    runner = VerificationRunner(session)
    if args.list_only:
        checks = [{"name": c.name, "suite": c.suite, "gating": c.gating} for c in runner.selected_checks()]
        text = tabulate([[c["name"], c["suite"], c["gating"]] for c in checks], headers=["check", "suite", "gating"])
        return CommandResult({"space": session.space, "suites": list(SPACE_SUITES[session.space]), "checks": checks}, text=text)

    if session.is_vacuous:
        message = f"order {session.order} keeps only the classical limit; deformation checks would be vacuous"
        logger.warning(message)
        payload, code = ErrorHandler.handle_usage_error(message, "verify", field="order")
        return CommandResult(payload, code, text=f"⚠️  {message}")

    results, report = runner.run()
    report["results"] = [r.to_dict() for r in results]
    text = render_table(results) + "\n\n" + render_summary(results)
    code = EXIT_OK if report["status"] == "passed" else VerificationFailure.exit_code
    return CommandResult(report, code, text=text)
