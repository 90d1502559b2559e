"""
Product commands: star products of polynomials and generator relations
"""

import logging

from src.config.config import SessionConfig
from src.middleware.errors import UsageError
from src.middleware.monitoring import command_metrics
from src.models.polynomials import MonomialExpansion, MonomialPoly, Mq2Poly, PlanePoly
from src.routes import CommandGroup, CommandResult, argument
from src.services import quantum_matrices, quantum_plane
from src.services.relations import RELATION_SPACES, relations_report
from src.utils.serialization import decode_polynomial, encode_polynomial

logger = logging.getLogger(__name__)

products_group = CommandGroup("products")

PRODUCT_CHOICES = ("star", "deformed", "classical")

# (space, --product) -> key in quantum_matrices.PRODUCTS
MQ2_PRODUCTS = {
    ("mq2", "star"): "star_euclid",
    ("mq2", "deformed"): "euclid",
    ("mq2", "classical"): "classical",
    ("minkowski", "star"): "star_minkowski",
    ("minkowski", "deformed"): "minkowski",
    ("minkowski", "classical"): "classical",
}


def _require_space(session: SessionConfig) -> str:
    if session.space not in RELATION_SPACES:
        raise UsageError(f"pick one space with --space ({', '.join(RELATION_SPACES)}), not '{session.space}'")
    return session.space


def _prepare(poly, space: str, product: str):
    """Bring a decoded factor into the basis the space multiplies in"""
    if space == "plane":
        if not isinstance(poly, (PlanePoly, MonomialPoly)):
            raise UsageError(f"plane factors must be plane or monomial polynomials, got {type(poly).__name__}")
        return quantum_plane.basis_convert(poly, quantum_plane.IRREDUCIBLE, product != "classical")
    if isinstance(poly, MonomialExpansion):
        expand = None if product != "classical" else quantum_matrices.PRODUCTS["classical"]
        return quantum_matrices.expansion_to_mq2(poly, expand)
    if not isinstance(poly, Mq2Poly):
        raise UsageError(f"{space} factors must be mq2 polynomials or monomial expansions, got {type(poly).__name__}")
    return poly


def multiply(space: str, product: str, p, r, max_degree: int):
    """Multiply two decoded polynomials with the named product of a space"""
    if space == "plane":
        if product == "star":
            return quantum_plane.star_plane(p, r, max_degree=max_degree)
        return quantum_plane.mul_plane(p, r, deformed=product == "deformed", max_degree=max_degree)
    return quantum_matrices.PRODUCTS[MQ2_PRODUCTS[(space, product)]](p, r, max_degree=max_degree)


@products_group.command("star", help="Product of two polynomials given as JSON or generator names")
@argument("left", help="First factor: JSON polynomial or a generator name (x, y, 1 / a, b, c, d, det, 1)")
@argument("right", help="Second factor")
@argument("--product", choices=PRODUCT_CHOICES, default="star", help="Twisted star product, deformed product or commutative product")
@argument("--monomial", action="store_true", help="Report plane results in the monomial basis x^k y^l")
@command_metrics("star")
def star_command(args, session: SessionConfig) -> CommandResult:
    space = _require_space(session)
    p, r = (_prepare(decode_polynomial(text, space, session.order), space, args.product) for text in (args.left, args.right))
    result = multiply(space, args.product, p, r, session.max_degree)
    if space == "plane" and args.monomial:
        result = quantum_plane.basis_convert(result, quantum_plane.MONOMIAL, args.product != "classical")
    logger.info(f"{args.product} product on {space}: {len(result.terms)} terms")
    return CommandResult({"space": space, "product": args.product, "result": encode_polynomial(result.pruned())})


@products_group.command("relations", help="Generator commutation relations in the ordered quadratic basis")
@command_metrics("relations")
def relations_command(args, session: SessionConfig) -> CommandResult:
    return CommandResult(relations_report(_require_space(session), session.order, session.tol))
