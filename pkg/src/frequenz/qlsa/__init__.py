# License: MIT
# Copyright © 2023 Frequenz Energy-as-a-Service GmbH

"""Frequenz preconditioned quantum linear system simulator.

The package is split in one subpackage per concern:

* [`linalg`][frequenz.qlsa.linalg]: sparse matrix oracles, dilation, 1-sparse
  decomposition, condition numbers and classical solvers.
* [`spai`][frequenz.qlsa.spai]: sparse approximate inverse preconditioning.
* [`qsim`][frequenz.qlsa.qsim]: statevector simulation of the quantum linear
  system algorithm and its readout.
* [`fem`][frequenz.qlsa.fem]: finite-element Helmholtz scattering front-end.
* [`harness`][frequenz.qlsa.harness]: experiment driver and command line.
"""
