"""
JSON and CSV interchange for series, matrices, tables and polynomials
"""

import csv
import io
import json
import logging
from typing import Any, Dict, Mapping, Optional, Type, Union

import numpy as np

from src.middleware.errors import QStarError, UsageError
from src.models.matrices import RepMatrix
from src.models.polynomials import MonomialExpansion, MonomialPoly, Mq2Poly, PlanePoly, SeriesPolynomial
from src.models.series import DEFAULT_ORDER, HSeries
from src.models.tables import CGTable, TwistRep

logger = logging.getLogger(__name__)

POLYNOMIAL_TYPES: Dict[str, Type[SeriesPolynomial]] = {
    "plane": PlanePoly,
    "monomial": MonomialPoly,
    "mq2": Mq2Poly,
    "expansion": MonomialExpansion,
}

SPACE_TYPES = {"plane": "plane", "mq2": "mq2", "minkowski": "mq2"}

SHORTHANDS = {
    "plane": {"1": (0, 0), "x": (1, -1), "y": (1, 1)},
    "mq2": {
        "1": (0, 0, 0, 0),
        "a": (1, -1, -1, 0),
        "b": (1, -1, 1, 0),
        "c": (1, 1, -1, 0),
        "d": (1, 1, 1, 0),
        "det": (0, 0, 0, 1),
    },
}

CSV_HEADER = ["twoJ", "twoM", "twoM1", "twoM2"]


def encode_series(series: HSeries) -> Dict[str, Any]:
    return {"order": series.order, "coeffs": series.to_list()}


def decode_series(value: Any, order: int = DEFAULT_ORDER) -> HSeries:
    """A series object {"order", "coeffs"}, a number (constant series) or a coefficient list

    Every form is padded or truncated to order.
    """
    if isinstance(value, Mapping):
        try:
            own_order = int(value["order"])
            coeffs = value["coeffs"]
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"malformed series object {value!r}: {e}")
        if own_order < 1 or not isinstance(coeffs, list):
            raise UsageError(f"malformed series object {value!r}")
        return decode_series(coeffs, order)
    if isinstance(value, bool):
        raise UsageError(f"expected a number or a coefficient list, got {value!r}")
    if isinstance(value, (int, float)):
        return HSeries.constant(float(value), order)
    if isinstance(value, list) and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        if not value:
            return HSeries.zero(order)
        coeffs = np.zeros(max(order, len(value)))
        coeffs[: len(value)] = value
        return HSeries(coeffs[:order])
    raise UsageError(f"expected a number or a coefficient list, got {value!r}")


def encode_matrix(matrix: RepMatrix) -> Dict[str, Any]:
    return {
        "order": matrix.order,
        "rows": [list(label) for label in matrix.row_basis],
        "cols": [list(label) for label in matrix.col_basis],
        "entries": [
            [encode_series(matrix.entry(row, col)) for col in range(matrix.shape[1])]
            for row in range(matrix.shape[0])
        ],
    }


def encode_cg_table(table: CGTable) -> Dict[str, Any]:
    return {
        "j1": str(table.j1),
        "j2": str(table.j2),
        "deformed": table.deformed,
        "order": table.order,
        "entries": [
            {"twoJ": two_j, "twoM": two_m, "twoM1": two_m1, "twoM2": two_m2, "coeffs": value.to_list()}
            for (two_j, two_m, two_m1, two_m2), value in sorted(table.entries.items())
        ],
    }


def cg_table_csv(table: CGTable) -> str:
    """CSV with columns twoJ, twoM, twoM1, twoM2, c0..c{N-1}"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER + [f"c{k}" for k in range(table.order)])
    for row in table.csv_rows():
        writer.writerow(row[:4] + [repr(float(c)) for c in row[4:]])
    return buffer.getvalue()


def encode_twist(twist: TwistRep) -> Dict[str, Any]:
    data = {
        "j1": str(twist.j1),
        "j2": str(twist.j2),
        "inverse": twist.inverse,
        "matrix": encode_matrix(twist.matrix),
    }
    if twist.block_factors:
        data["block_factors"] = {str(k): encode_series(v) for k, v in sorted(twist.block_factors.items())}
    return data


def encode_polynomial(poly: SeriesPolynomial) -> Dict[str, Any]:
    """{"type", "order", "terms": [{<key fields>, "coeffs"}]} with terms in key order"""
    type_name = next(name for name, cls in POLYNOMIAL_TYPES.items() if type(poly) is cls)
    terms = []
    for key, value in poly.sorted_items():
        term = dict(zip(poly.key_names, key))
        term["coeffs"] = value.to_list()
        terms.append(term)
    return {"type": type_name, "order": poly.order, "terms": terms}


def decode_polynomial(data: Union[str, Mapping[str, Any]], space: str = "plane", order: Optional[int] = None) -> SeriesPolynomial:
    """
    Parse a polynomial from JSON, a decoded JSON object or a generator shorthand

    Args:
        data: JSON text, dict, or a shorthand name ('x', 'y', '1' on the plane;
            'a', 'b', 'c', 'd', 'det', '1' on mq2 and minkowski)
        space: Space the shorthand names and the default type refer to
        order: Working order; defaults to the document's order or 8

    Returns:
        Polynomial of the type named in the document (or the space's type)
    """
    if space not in SPACE_TYPES:
        raise UsageError(f"unknown space '{space}', expected one of {', '.join(SPACE_TYPES)}")
    default_type = SPACE_TYPES[space]

    if isinstance(data, str):
        text = data.strip()
        if text in SHORTHANDS[default_type]:
            cls = POLYNOMIAL_TYPES[default_type]
            return cls.basis_element(*SHORTHANDS[default_type][text], order=order or DEFAULT_ORDER)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"'{text}' is neither a generator name nor valid JSON: {e.msg}")

    if not isinstance(data, Mapping):
        raise UsageError("polynomial JSON must be an object with a 'terms' list")
    type_name = data.get("type", default_type)
    if type_name not in POLYNOMIAL_TYPES:
        raise UsageError(f"unknown polynomial type '{type_name}'")
    cls = POLYNOMIAL_TYPES[type_name]
    order = order or int(data.get("order", DEFAULT_ORDER))
    terms = {}
    for term in data.get("terms", []):
        try:
            key = tuple(int(term[name]) for name in cls.key_names)
            value = decode_series(term["coeffs"], order)
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"malformed term {term!r}: {e}")
        terms[key] = terms[key] + value if key in terms else value
    try:
        return cls(terms, order)
    except QStarError:
        raise
    except (TypeError, ValueError) as e:
        raise UsageError(f"malformed polynomial: {e}")


def to_jsonable(value: Any) -> Any:
    """Recursively convert package types and numpy values for json.dumps"""
    if isinstance(value, HSeries):
        return encode_series(value)
    if isinstance(value, RepMatrix):
        return encode_matrix(value)
    if isinstance(value, CGTable):
        return encode_cg_table(value)
    if isinstance(value, TwistRep):
        return encode_twist(value)
    if isinstance(value, SeriesPolynomial):
        return encode_polynomial(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dumps(value: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(to_jsonable(value), indent=indent, sort_keys=True)
