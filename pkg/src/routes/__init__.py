"""
Command groups for the qstar command line

Handlers are registered on a CommandGroup and the group on the command
application, the way request handlers sit on a blueprint.
"""

import argparse
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.middleware.errors import EXIT_OK, DegreeLimitExceeded, InvalidSpin
from src.models.spins import SpinLabel


@dataclass
class CommandResult:
    """What a handler hands back to the application"""

    payload: Any
    exit_code: int = EXIT_OK
    text: Optional[str] = None


@dataclass
class Command:
    name: str
    help: str
    handler: Callable[..., CommandResult]
    arguments: List[Tuple[tuple, dict]] = field(default_factory=list)

    def configure(self, parser: argparse.ArgumentParser):
        for args, kwargs in self.arguments:
            parser.add_argument(*args, **kwargs)


class CommandGroup:
    """Named collection of subcommands"""

    def __init__(self, name: str):
        self.name = name
        self.commands: Dict[str, Command] = {}

    def command(self, name: str, help: str = ""):
        def decorator(f):
            arguments = list(reversed(getattr(f, "_arguments", [])))
            self.commands[name] = Command(name, help, f, arguments)
            return f

        return decorator


def argument(*args, **kwargs):
    """Attach an argparse argument to a handler (decorators apply bottom-up)"""

    def decorator(f):
        f._arguments = getattr(f, "_arguments", []) + [(args, kwargs)]
        return f

    return decorator


def spin_argument(text: str) -> SpinLabel:
    try:
        return SpinLabel.parse(text)
    except InvalidSpin as e:
        raise argparse.ArgumentTypeError(e.message)


def check_spins(session, *spins: Optional[SpinLabel]):
    """Reject requested spins past --max-spin, or whose coupling passes the degree cap"""
    given = [spin for spin in spins if spin is not None]
    for spin in given:
        if spin > session.max_spin:
            raise InvalidSpin(
                f"spin {spin} exceeds the session bound {session.max_spin}",
                {"spin": str(spin), "max_spin": str(session.max_spin)},
            )
    total = sum(spin.two_j for spin in given)
    if total > session.max_degree:
        raise DegreeLimitExceeded(
            f"spins {', '.join(str(s) for s in given)} couple up to 2j = {total}, past the cap {session.max_degree}",
            {"two_j": total, "max_degree": session.max_degree},
        )
