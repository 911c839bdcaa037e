# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""A-priori sparsity patterns for sparse approximate inverses."""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import enum
from dataclasses import dataclass

from ..linalg import RowOracle, SparseMatrixOracle


class Side(enum.Enum):
    """Which side of the system matrix the approximate inverse multiplies."""

    LEFT = "left"
    """Solve `M A x = M b`; each local problem computes a row of `M`."""

    RIGHT = "right"
    """Solve `A M y = b`, `x = M y`; each local problem computes a column of `M`."""


def source_oracle(matrix: SparseMatrixOracle, side: Side) -> SparseMatrixOracle:
    """Get the oracle the local problems of a given side query rows of.

    Both sides reduce to minimizing `‖Bᵀ m − e_k‖` with rows of `B` known:
    `B = A` for the left side and `B = Aᵀ` for the right side.

    Args:
        matrix: the system matrix `A`.
        side: the preconditioning side.

    Returns:
        The oracle `B`.
    """
    return matrix if side is Side.LEFT else matrix.transpose()


@dataclass(frozen=True)
class SparsityPattern:
    """The allowed support of every row (left) or column (right) of `M`."""

    level: int
    """The pattern level: 0, 1 or 2."""

    side: Side
    """The preconditioning side the pattern was built for."""

    supports: tuple[tuple[int, ...], ...]
    """For every unit vector index `k`, the sorted support of `m_k`."""

    def __post_init__(self) -> None:
        """Check the pattern is well formed.

        Raises:
            ValueError: if the level is unknown or a support is empty, unsorted
                or out of range.
        """
        if self.level not in (0, 1, 2):
            raise ValueError(f"pattern level ({self.level}) must be 0, 1 or 2")
        dim = len(self.supports)
        for k, support in enumerate(self.supports):
            if not support:
                raise ValueError(f"support of index {k} is empty")
            if list(support) != sorted(set(support)):
                raise ValueError(f"support of index {k} is not sorted and unique")
            if support[0] < 0 or support[-1] >= dim:
                raise ValueError(f"support of index {k} is out of range")

    @property
    def dim(self) -> int:
        """The dimension of the matrix the pattern is for."""
        return len(self.supports)

    def support(self, k: int) -> tuple[int, ...]:
        """Get the support of `m_k`.

        Args:
            k: the unit vector index.

        Returns:
            The sorted support.
        """
        return self.supports[k]

    @property
    def nnz(self) -> int:
        """The total number of allowed nonzero entries."""
        return sum(len(support) for support in self.supports)


def _row_pattern(oracle: RowOracle, k: int) -> set[int]:
    return {j for j, _ in oracle.query_row(k)} | {k}


def support_for_index(oracle: RowOracle, k: int, level: int) -> tuple[int, ...]:
    """Compute the support of a single `m_k` from row queries only.

    Level 0 is `{k}`, level 1 the row pattern of `B` at `k` and level 2 the
    row pattern of the boolean square of `B`'s pattern. The index `k` is in
    every support, so supports grow with the level.

    Args:
        oracle: the oracle `B` the local problem reads rows of.
        k: the unit vector index.
        level: the pattern level.

    Returns:
        The sorted support.

    Raises:
        ValueError: if the level is unknown.
    """
    if level == 0:
        return (k,)
    if level not in (1, 2):
        raise ValueError(f"pattern level ({level}) must be 0, 1 or 2")
    support = _row_pattern(oracle, k)
    if level == 2:
        for j in sorted(support):
            support = support | _row_pattern(oracle, j)
    return tuple(sorted(support))


def build_pattern(
    matrix: SparseMatrixOracle, level: int, side: Side = Side.LEFT
) -> SparsityPattern:
    """Build the a-priori sparsity pattern of a given level.

    Args:
        matrix: the system matrix `A`.
        level: 0 (diagonal), 1 (pattern of `A`) or 2 (pattern of the boolean
            square of `A`).
        side: the preconditioning side.

    Returns:
        The pattern.
    """
    oracle = source_oracle(matrix, side)
    supports = tuple(
        support_for_index(oracle, k, level) for k in range(oracle.dim)
    )
    return SparsityPattern(level=level, side=side, supports=supports)
