# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Sparse approximate inverse preconditioning.

A sparse approximate inverse `M` minimizes `‖MA − I‖_F` over matrices with an
a-priori sparsity pattern. The minimization splits into one small, independent
least-squares problem per row (left preconditioner) or column (right
preconditioner) of `M`. The largest local residual `eps_pre` bounds the
condition number of the preconditioned matrix, and rows of `MA` can be
evaluated from local row queries of `A`, which is what the quantum solver
needs.
"""

from ._local import LocalSolution, SpaiLocalProblem, solve_local
from ._oracles import (
    PreconditionedOracle,
    local_preconditioned_row,
    preconditioned_rhs,
    preconditioned_rhs_element,
    preconditioned_row_oracle,
)
from ._pattern import (
    Side,
    SparsityPattern,
    build_pattern,
    source_oracle,
    support_for_index,
)
from ._preconditioner import (
    Preconditioner,
    SpectralBound,
    assemble_preconditioner,
    bound_check,
)
from ._serialization import (
    FILE_FORMAT_VERSION,
    load_preconditioner,
    save_preconditioner,
)

__all__ = [
    "FILE_FORMAT_VERSION",
    "LocalSolution",
    "PreconditionedOracle",
    "Preconditioner",
    "Side",
    "SpaiLocalProblem",
    "SparsityPattern",
    "SpectralBound",
    "assemble_preconditioner",
    "bound_check",
    "build_pattern",
    "load_preconditioner",
    "local_preconditioned_row",
    "preconditioned_rhs",
    "preconditioned_rhs_element",
    "preconditioned_row_oracle",
    "save_preconditioner",
    "solve_local",
    "source_oracle",
    "support_for_index",
]
