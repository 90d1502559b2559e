"""
Table commands: Clebsch-Gordan tables, representation matrices, twists
"""

import logging

from src.config.config import SessionConfig
from src.middleware.errors import UsageError
from src.middleware.monitoring import command_metrics
from src.models.spins import parse_word
from src.routes import CommandGroup, CommandResult, argument, check_spins, spin_argument
from src.services.clebsch_gordan import cg_table
from src.services.representations import casimir_rep, rep_antipode, rep_word, rmatrix_rep
from src.services.twists import coassociator_rep, rf_relation_diagnostic, standard_twist_rep
from src.utils.serialization import cg_table_csv, encode_cg_table, encode_matrix, encode_series, encode_twist

logger = logging.getLogger(__name__)

tables_group = CommandGroup("tables")

TWIST_KINDS = ("twist", "inverse", "rmatrix", "coassociator", "rf")


@tables_group.command("cg", help="Clebsch-Gordan table of V^j1 (x) V^j2")
@argument("--j1", type=spin_argument, required=True, help="First spin, e.g. 1/2")
@argument("--j2", type=spin_argument, required=True, help="Second spin")
@argument("--classical", action="store_true", help="Classical su2 table instead of the deformed one")
@argument("--format", choices=("json", "csv"), default="json", help="Output format")
@command_metrics("cg")
def cg_command(args, session: SessionConfig) -> CommandResult:
    check_spins(session, args.j1, args.j2)
    table = cg_table(args.j1, args.j2, not args.classical, session.order)
    payload = encode_cg_table(table)
    text = cg_table_csv(table) if args.format == "csv" else None
    return CommandResult(payload, text=text)


@tables_group.command("repr", help="Representation matrix of a generator word")
@argument("--j", type=spin_argument, required=True, help="Spin of the representation")
@argument("--word", default="E", help="Generator word such as E, EF or FHE; empty for the unit")
@argument("--classical", action="store_true", help="Classical su2 matrices")
@argument("--antipode", action="store_true", help="Represent S(word) instead of the word")
@command_metrics("repr")
def repr_command(args, session: SessionConfig) -> CommandResult:
    check_spins(session, args.j)
    word = parse_word(args.word)
    deformed = not args.classical
    if args.antipode:
        matrix = rep_antipode(word, args.j, deformed, session.order)
    else:
        matrix = rep_word(word, args.j, deformed, session.order)
    payload = {
        "j": str(args.j),
        "word": "".join(g.value for g in word),
        "deformed": deformed,
        "antipode": args.antipode,
        "casimir": encode_series(casimir_rep(args.j, session.order)),
        "matrix": encode_matrix(matrix),
    }
    return CommandResult(payload)


@tables_group.command("twist", help="Standard twist, its inverse, the R-matrix, the coassociator or the RF report")
@argument("--j1", type=spin_argument, required=True, help="First spin")
@argument("--j2", type=spin_argument, required=True, help="Second spin")
@argument("--j3", type=spin_argument, default=None, help="Third spin (coassociator only)")
@argument("--kind", choices=TWIST_KINDS, default="twist", help="What to compute")
@command_metrics("twist")
def twist_command(args, session: SessionConfig) -> CommandResult:
    check_spins(session, args.j1, args.j2, args.j3)
    order = session.order
    if args.kind in ("twist", "inverse"):
        return CommandResult(encode_twist(standard_twist_rep(args.j1, args.j2, inverse=args.kind == "inverse", order=order)))
    if args.kind == "rmatrix":
        return CommandResult({"j1": str(args.j1), "j2": str(args.j2), "matrix": encode_matrix(rmatrix_rep(args.j1, args.j2, order))})
    if args.kind == "coassociator":
        if args.j3 is None:
            raise UsageError("--kind coassociator needs --j3")
        matrix = coassociator_rep(args.j1, args.j2, args.j3, order)
        return CommandResult({"spins": [str(args.j1), str(args.j2), str(args.j3)], "matrix": encode_matrix(matrix)})
    return CommandResult(rf_relation_diagnostic(args.j1, args.j2, order))
