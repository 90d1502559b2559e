"""
Clebsch-Gordan tables and twist representations
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

import numpy as np

from src.models.matrices import RepMatrix
from src.models.series import HSeries
from src.models.spins import SpinLabel, coupled_spins

CGKey = Tuple[int, int, int, int]


@dataclass(frozen=True)
class CGTable:
    """Clebsch-Gordan basis change for V^{j1} (x) V^{j2}

    `matrix` has the tensor basis (2m1, 2m2) as rows and the coupled basis
    (2j, 2m) as columns, blocks ascending in j; it is orthogonal.
    """

    j1: SpinLabel
    j2: SpinLabel
    deformed: bool
    matrix: RepMatrix

    @property
    def order(self) -> int:
        return self.matrix.order

    @property
    def spins(self) -> Tuple[SpinLabel, ...]:
        return coupled_spins(self.j1, self.j2)

    def coefficient(self, two_j: int, two_m: int, two_m1: int, two_m2: int) -> HSeries:
        """C(j1 j2 j; m1 m2 m), zero outside the selection rule"""
        try:
            row = self.matrix.row_basis.index((two_m1, two_m2))
            col = self.matrix.col_basis.index((two_j, two_m))
        except ValueError:
            return HSeries.zero(self.order)
        return self.matrix.entry(row, col)

    @property
    def entries(self) -> Dict[CGKey, HSeries]:
        """(2j, 2m, 2m1, 2m2) -> coefficient, for every m = m1 + m2"""
        out: Dict[CGKey, HSeries] = {}
        for col, (two_j, two_m) in enumerate(self.matrix.col_basis):
            for row, (two_m1, two_m2) in enumerate(self.matrix.row_basis):
                if two_m1 + two_m2 == two_m:
                    out[(two_j, two_m, two_m1, two_m2)] = self.matrix.entry(row, col)
        return out

    def block_columns(self, j: SpinLabel) -> slice:
        """Column range of the spin-j block"""
        start = 0
        for spin in self.spins:
            if spin == j:
                return slice(start, start + spin.dim)
            start += spin.dim
        raise KeyError(f"spin {j} does not occur in {self.j1} x {self.j2}")

    def block(self, j: SpinLabel) -> np.ndarray:
        """Series array (order, dim1*dim2, 2j+1) of the spin-j columns"""
        return self.matrix.coeffs[:, :, self.block_columns(j)]

    def csv_rows(self) -> List[List[object]]:
        rows: List[List[object]] = []
        for (two_j, two_m, two_m1, two_m2), value in sorted(self.entries.items()):
            rows.append([two_j, two_m, two_m1, two_m2] + value.to_list())
        return rows


@dataclass(frozen=True)
class TwistRep:
    """Twist (or inverse twist) represented on V^{j1} (x) V^{j2}"""

    j1: SpinLabel
    j2: SpinLabel
    matrix: RepMatrix
    inverse: bool = False
    block_factors: Mapping[int, HSeries] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.matrix.order
