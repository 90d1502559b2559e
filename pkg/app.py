#!/usr/bin/env python3
"""
qstar - star products on quantum spaces from twists of su2

Usage:
    poetry run qstar <command> [options]

Commands:
    cg         - Clebsch-Gordan table of V^j1 (x) V^j2 (JSON or CSV)
    repr       - Representation matrix of a generator word
    twist      - Standard twist, inverse, R-matrix, coassociator or RF report
    star       - Product of two polynomials on the plane, mq2 or Minkowski space
    relations  - Generator relations in the ordered quadratic basis
    verify     - Run the property suites and print the pass/fail table
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

from src.config.config import SPACES, config
from src.middleware.errors import EXIT_USAGE, ErrorHandler
from src.routes import Command, CommandGroup, CommandResult, spin_argument
from src.routes.products import products_group
from src.routes.tables import tables_group
from src.routes.verify import verify_group
from src.utils.logging import setup_logging
from src.utils.serialization import dumps

logger = logging.getLogger(__name__)

EPILOG = """
Examples:
  qstar verify --space plane --max-spin 3 --order 8
  qstar star x y --space plane
  qstar star a d --space minkowski --json-out ad.json
  qstar cg --j1 1/2 --j2 1 --format csv
  qstar twist --j1 1/2 --j2 1/2 --kind rmatrix
  qstar relations --space mq2
"""


class CommandApp:
    """Command-line application holding configuration and registered commands"""

    def __init__(self, config_obj, name: str = "qstar"):
        self.config = config_obj
        self.name = name
        self.commands: Dict[str, Command] = {}

    def register_group(self, group: CommandGroup):
        for name, command in group.commands.items():
            if name in self.commands:
                raise ValueError(f"command '{name}' registered twice")
            self.commands[name] = command
        logger.debug(f"Registered command group {group.name}: {', '.join(group.commands)}")

    def _common_options(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--order", type=int, default=None, help="Working order N in h (default from QSTAR_ORDER, 8)")
        common.add_argument("--tol", type=float, default=None, help="Tolerance on h-coefficients (default 1e-9)")
        common.add_argument("--space", choices=SPACES, default=None, help="Quantum space (default plane)")
        common.add_argument("--max-spin", type=spin_argument, default=None, help="Largest spin the suites visit (default 3)")
        common.add_argument("--seed", type=int, default=None, help="Seed for randomized property inputs")
        common.add_argument("--json-out", metavar="PATH", default=None, help="Also write the JSON report to PATH")
        common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
        return common

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog=self.name,
            description="Star products on quantum spaces from twists of su2",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog=EPILOG,
        )
        common = self._common_options()
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
        subparsers.required = True
        for name, command in self.commands.items():
            sub = subparsers.add_parser(name, help=command.help, description=command.help, parents=[common])
            command.configure(sub)
        return parser

    def _emit(self, result: CommandResult, json_out: Optional[str]):
        stream = sys.stderr if result.exit_code == EXIT_USAGE else sys.stdout
        print(result.text if result.text is not None else dumps(result.payload), file=stream)
        if json_out:
            directory = os.path.dirname(json_out)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(json_out, "w", encoding="utf-8") as handle:
                handle.write(dumps(result.payload) + "\n")
            logger.info(f"Report written to {json_out}")

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Parse argv, run one command and return its exit code"""
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            # argparse already printed usage (exit 2) or help (exit 0)
            return int(e.code or 0)

        if args.verbose:
            setup_logging(self.config, verbose=True)

        try:
            session = self.config.session_config.with_overrides(
                order=args.order,
                tol=args.tol,
                space=args.space,
                max_spin=args.max_spin,
                seed=args.seed,
            ).validate()
            logger.debug(f"Session: {session}")
            result = self.commands[args.command].handler(args, session)
            self._emit(result, args.json_out)
        except Exception as e:
            payload, code = ErrorHandler.handle_exception(e, args.command, debug=args.verbose)
            print(dumps(payload), file=sys.stderr)
            return code

        return result.exit_code


def create_app(config_name=None) -> CommandApp:
    """Application factory pattern"""
    config_name = config_name or os.environ.get("QSTAR_ENV", "development")
    if config_name not in config:
        config_name = "default"
    config_obj = config[config_name]()

    setup_logging(config_obj)

    app = CommandApp(config_obj)
    app.register_group(tables_group)
    app.register_group(products_group)
    app.register_group(verify_group)
    return app


def run_command(argv: List[str], config_name=None) -> int:
    return create_app(config_name).run(argv)


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
