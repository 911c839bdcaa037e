# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Decomposition of sparse Hermitian matrices into 1-sparse terms.

Each off-diagonal nonzero `(i, j)` of a Hermitian matrix is an edge of its
sparsity graph. A proper edge colouring groups edges that share no endpoint,
and every colour class is then a 1-sparse Hermitian matrix whose exponential
is a product of independent 2x2 rotations. The diagonal forms one extra term.
"""

# For use of the class type hint inside the class itself.
from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import networkx as nx
import numpy as np
import numpy.typing as npt
import scipy.sparse

from ._exceptions import ContractViolationError
from ._oracle import ComplexArray, SparseMatrixOracle

_logger = logging.getLogger(__name__)

IndexArray = npt.NDArray[np.int64]


@dataclass(frozen=True)
class OneSparseTerm:
    """A Hermitian matrix with at most one nonzero entry per row and column.

    The term is stored as a list of disjoint index pairs `(rows[p], cols[p])`
    with `rows[p] <= cols[p]`. A pair with `rows[p] < cols[p]` stands for the
    entries `values[p]` at `(rows[p], cols[p])` and its conjugate at
    `(cols[p], rows[p])`; a pair with equal indices is a real diagonal entry.
    """

    dim: int
    """The dimension of the matrix."""

    rows: IndexArray
    """The smaller index of every pair."""

    cols: IndexArray
    """The larger index of every pair."""

    values: ComplexArray
    """The value at `(rows[p], cols[p])`."""

    def __post_init__(self) -> None:
        """Check the term is 1-sparse and Hermitian.

        Raises:
            ContractViolationError: if an index appears in more than one pair,
                a pair is not ordered, or a diagonal value is not real.
        """
        if not len(self.rows) == len(self.cols) == len(self.values):
            raise ContractViolationError("rows, cols and values must have equal length")
        if np.any(self.rows > self.cols):
            raise ContractViolationError("pairs must satisfy rows <= cols")
        off_diagonal = self.rows != self.cols
        touched = np.concatenate([self.rows, self.cols[off_diagonal]])
        if len(np.unique(touched)) != len(touched):
            raise ContractViolationError("an index appears in more than one pair")
        diagonal_values = self.values[~off_diagonal]
        if np.any(np.abs(diagonal_values.imag) > 0.0):
            raise ContractViolationError("diagonal entries of a term must be real")

    @property
    def is_diagonal(self) -> bool:
        """Whether the term only has diagonal entries."""
        return bool(np.all(self.rows == self.cols))

    def to_csr(self) -> scipy.sparse.csr_matrix:
        """Get the term as a sparse matrix.

        Returns:
            The Hermitian matrix this term stands for.
        """
        off_diagonal = self.rows != self.cols
        rows = np.concatenate([self.rows, self.cols[off_diagonal]])
        cols = np.concatenate([self.cols, self.rows[off_diagonal]])
        values = np.concatenate([self.values, np.conj(self.values[off_diagonal])])
        return scipy.sparse.csr_matrix(
            (values, (rows, cols)), shape=(self.dim, self.dim), dtype=np.complex128
        )

    def exponential_action(self, vectors: ComplexArray, time: float) -> ComplexArray:
        """Apply `exp(i·time·term)` to a stack of vectors.

        A 2x2 block `K = [[0, v], [v*, 0]]` satisfies `K² = |v|² I`, so
        `exp(itK) = cos(|v|t) I + i sin(|v|t) K / |v|`, applied exactly.

        Args:
            vectors: an array whose first axis has length `dim`.
            time: the evolution time.

        Returns:
            A new array with the exponential applied along the first axis.
        """
        source = np.asarray(vectors, dtype=np.complex128)
        result = source.copy()
        extra = (1,) * (result.ndim - 1)
        diagonal = self.rows == self.cols
        if np.any(diagonal):
            index = self.rows[diagonal]
            phases = np.exp(1j * time * self.values[diagonal].real)
            result[index] = phases.reshape((-1,) + extra) * result[index]
        pairs = ~diagonal
        if np.any(pairs):
            upper, lower = self.rows[pairs], self.cols[pairs]
            values = self.values[pairs]
            magnitude = np.abs(values)
            unit = (values / magnitude).reshape((-1,) + extra)
            cos = np.cos(magnitude * time).reshape((-1,) + extra)
            sin = np.sin(magnitude * time).reshape((-1,) + extra)
            first, second = source[upper], source[lower]
            result[upper] = cos * first + 1j * sin * unit * second
            result[lower] = 1j * sin * np.conj(unit) * first + cos * second
        return result


def _row_major(graph: Any, _colors: Any) -> Iterable[tuple[int, int]]:
    return sorted(graph.nodes, key=lambda edge: (min(edge), max(edge)))


def one_sparse_decomposition(hamiltonian: SparseMatrixOracle) -> list[OneSparseTerm]:
    """Split a Hermitian matrix into a deterministic list of 1-sparse terms.

    The off-diagonal entries are grouped by a greedy colouring of the edges of
    the sparsity graph, visiting edges in row-major order and assigning the
    smallest colour free at both endpoints. The diagonal, if nonzero, is the
    first term. Greedy edge colouring needs at most `2d - 1` colours, well
    under the `6d²` terms the complexity estimates budget for.

    Args:
        hamiltonian: the Hermitian matrix.

    Returns:
        The terms, which sum exactly to the matrix.

    Raises:
        ContractViolationError: if the matrix is not Hermitian.
    """
    if not hamiltonian.hermitian:
        raise ContractViolationError("1-sparse decomposition needs a Hermitian matrix")

    dim = hamiltonian.dim
    graph = nx.Graph()
    graph.add_nodes_from(range(dim))
    diagonal: dict[int, float] = {}
    for k in range(dim):
        for j, value in hamiltonian.query_row(k):
            if j == k:
                diagonal[k] = value.real
            elif j > k:
                graph.add_edge(k, j, value=value)

    terms: list[OneSparseTerm] = []
    if diagonal:
        index = np.fromiter(diagonal.keys(), dtype=np.int64, count=len(diagonal))
        terms.append(
            OneSparseTerm(
                dim=dim,
                rows=index,
                cols=index.copy(),
                values=np.fromiter(
                    diagonal.values(), dtype=np.complex128, count=len(diagonal)
                ),
            )
        )

    if graph.number_of_edges():
        colouring = nx.greedy_color(nx.line_graph(graph), strategy=_row_major)
        classes: dict[int, list[tuple[int, int]]] = {}
        for edge, colour in colouring.items():
            classes.setdefault(colour, []).append((min(edge), max(edge)))
        for colour in sorted(classes):
            edges = sorted(classes[colour])
            terms.append(
                OneSparseTerm(
                    dim=dim,
                    rows=np.array([i for i, _ in edges], dtype=np.int64),
                    cols=np.array([j for _, j in edges], dtype=np.int64),
                    values=np.array(
                        [graph.edges[i, j]["value"] for i, j in edges],
                        dtype=np.complex128,
                    ),
                )
            )

    bound = 6 * hamiltonian.sparsity**2
    _logger.debug(
        "decomposed %s into %d one-sparse terms (bound %d)",
        hamiltonian,
        len(terms),
        bound,
    )
    assert len(terms) <= bound, f"{len(terms)} terms exceed the 6d² bound {bound}"
    return terms
