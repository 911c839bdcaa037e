# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Performance test for the sparse approximate inverse."""

import timeit

import numpy as np

from frequenz.qlsa.linalg import SparseMatrixOracle, cg_solve, random_sparse
from frequenz.qlsa.spai import Side, assemble_preconditioner, build_pattern

SIZES = (256, 1024, 4096)
SPARSITY = 5


def assembly(
    matrix: SparseMatrixOracle, level: int, max_workers: int | None, num_runs: int
) -> float:
    """Time the assembly of one preconditioner, in seconds per run."""
    pattern = build_pattern(matrix, level, Side.LEFT)
    timer = timeit.Timer(
        lambda: assemble_preconditioner(matrix, pattern, max_workers=max_workers)
    )
    return timer.timeit(number=num_runs) / num_runs


def solve(matrix: SparseMatrixOracle, level: int | None) -> tuple[int, float]:
    """Count the iterations and time one solve, preconditioned if a level is given."""
    rhs = np.random.default_rng(0).normal(size=matrix.dim).astype(np.complex128)
    precond = (
        None
        if level is None
        else assemble_preconditioner(matrix, build_pattern(matrix, level, Side.LEFT))
    )
    start = timeit.default_timer()
    result = cg_solve(matrix, rhs, tol=1e-10, preconditioner=precond)
    return result.iterations, timeit.default_timer() - start


def main() -> None:
    """Run the benchmark."""
    num_runs = 3
    for size in SIZES:
        matrix = random_sparse(size, SPARSITY, np.random.default_rng(size))
        print(f"N={size}, d={SPARSITY}")
        for level in (0, 1, 2):
            serial = assembly(matrix, level, None, num_runs)
            parallel = assembly(matrix, level, 4, num_runs)
            print(
                f"  level {level}: assembly {serial:.4f}s serial, "
                f"{parallel:.4f}s with 4 workers"
            )
        for level in (None, 1, 2):
            iterations, elapsed = solve(matrix, level)
            label = "plain" if level is None else f"level {level}"
            print(f"  {label}: {iterations} iterations in {elapsed:.4f}s")


if __name__ == "__main__":
    main()
