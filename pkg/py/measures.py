#
# Licensed under the BSD license.  See full license in LICENSE file.
#

"""Pure-state entanglement measures M_e(n) = 1 - Tr rho_A^n.

The same number is computed several ways:

direct       trace of the matrix power of the reduced state
braket       1 - <rho|rho^(n-2)|rho> through the Hilbert-Schmidt product
chain        nested sum over expectation values of n-1 complete bases
closed forms n = 2 specializations for the Gell-Mann and clock/shift
             bases, the two-qubit concurrence and the identical-particle
             single-particle form

The chain form only needs expectation values <O> = Tr(rho_A O), which is
what makes the measure accessible to measurement.  All forms must agree
with direct to within imag_tol.

Third party dependencies:

numpy: for array support - http://www.numpy.org/
"""

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from bases import OperatorBasis, clock_shift, gellmann_basis, gellmann_matrices
from configuration_manager import tolerances
from numerics import (ArgumentError, IdentityCheckError, hs_inner, mat_power_trace,
                      normalize_keep)
from schemas import MeasureMethod, MeasureResult, complex_pairs
from states import PureState, as_pure, reduced_density, symmetry_report

log = logging.getLogger(__name__)


def _require_order(n: int):
    if int(n) != n or n < 2:
        raise ArgumentError("measure order n must be an integer >= 2, got %r" % (n,))


def _reduced(psi, keep) -> Tuple[np.ndarray, List[int]]:
    psi = as_pure(psi)
    kept = normalize_keep(psi.structure, keep)
    return reduced_density(psi, kept).matrix, kept


def upper_bound(d: int, n: int) -> float:
    """Largest value of M_e(n) for a d-dimensional reduced state."""
    return 1.0 - float(d) ** (1 - n)


def _finish(trace_value: complex, n: int, d: int, method: MeasureMethod, kept: List[int],
            basis_labels: Sequence[str] = (), **extra) -> MeasureResult:
    """Turn Tr rho^n (possibly with round-off imaginary part) into a checked result."""
    tols = tolerances()
    imag_residual = abs(complex(trace_value).imag)
    if imag_residual > tols.imag_tol:
        raise IdentityCheckError("%s: imaginary residual %.3e exceeds %.1e"
                                 % (method.value, imag_residual, tols.imag_tol))
    value = 1.0 - complex(trace_value).real
    if value < -tols.imag_tol or value > upper_bound(d, n) + tols.imag_tol:
        raise IdentityCheckError("%s: M_e(%d) = %.12g outside [0, %.12g]"
                                 % (method.value, n, value, upper_bound(d, n)))
    return MeasureResult(n=n, value=value, method=method, basis_labels=list(basis_labels),
                         imag_residual=imag_residual, keep=kept, **extra)


def expectations(rho, basis: OperatorBasis) -> np.ndarray:
    """<O_i> = Tr(rho O_i) for every basis element."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (basis.dim, basis.dim):
        raise ArgumentError("basis dimension %d does not match state dimension %d"
                            % (basis.dim, rho.shape[0]))
    return np.einsum('ij,kji->k', rho, basis.stack())


def me_direct(psi: PureState, n: int, keep: Sequence[int] = (0,)) -> MeasureResult:
    _require_order(n)
    rho, kept = _reduced(psi, keep)
    return _finish(mat_power_trace(rho, n), n, rho.shape[0], MeasureMethod.DIRECT, kept)


def me_braket(psi: PureState, n: int, keep: Sequence[int] = (0,)) -> MeasureResult:
    """1 - <rho|rho^(n-2)|rho>, the operator-space form."""
    _require_order(n)
    rho, kept = _reduced(psi, keep)
    middle = np.linalg.matrix_power(rho, n - 2) @ rho
    return _finish(hs_inner(rho, middle), n, rho.shape[0], MeasureMethod.BRAKET, kept)


def _chain_tables(rho: np.ndarray, bases: Sequence[OperatorBasis]):
    """First vector, transfer matrices and last vector of the chain contraction."""
    stacks = [b.stack() for b in bases]
    first = np.einsum('ij,kji->k', rho, stacks[0])
    # M[i, j] = Tr(rho O^{k+1}_j (O^k_i)^dagger)
    transfers = [np.einsum('ab,jbc,iac->ij', rho, nxt, cur.conj())
                 for cur, nxt in zip(stacks, stacks[1:])]
    # Tr(rho O^dagger) = sum_ab rho_ab conj(O_ab)
    last = np.einsum('ab,kab->k', rho, stacks[-1].conj())
    return first, transfers, last


def _chain_naive(rho: np.ndarray, bases: Sequence[OperatorBasis]) -> complex:
    first, transfers, last = _chain_tables(rho, bases)
    total = 0j
    for indices in itertools.product(*(range(len(b)) for b in bases)):
        term = first[indices[0]]
        for step, matrix in enumerate(transfers):
            term *= matrix[indices[step], indices[step + 1]]
        term *= last[indices[-1]]
        total += term
    return total


def me_chain(psi: PureState,
             n: int,
             bases: Sequence[OperatorBasis],
             keep: Sequence[int] = (0,),
             naive: bool = False) -> MeasureResult:
    """M_e(n) from expectation values of n-1 complete operator sets.

    :param psi: bipartite (or multipartite) pure state
    :type psi: PureState

    :param n: measure order, n >= 2
    :type n: int

    :param bases: one complete basis per chain slot, each of dimension d_A
    :type bases: list of OperatorBasis

    :param keep: factors forming subsystem A
    :type keep: list

    :param naive: evaluate the full nested sum term by term (n <= 3, d <= 3)
    :type naive: bool

    :return: the chain value, which equals me_direct up to round-off
    :rtype: MeasureResult
    """
    _require_order(n)
    bases = list(bases)
    if len(bases) != n - 1:
        raise ArgumentError("order %d needs %d bases, got %d" % (n, n - 1, len(bases)))
    rho, kept = _reduced(psi, keep)
    d = rho.shape[0]
    for b in bases:
        if b.dim != d:
            raise ArgumentError("basis %s has dimension %d, subsystem has %d" % (b.name, b.dim, d))
        if b.truncated:
            raise ArgumentError("basis %s is not complete" % b.name)

    if naive:
        if n > 3 or d > 3:
            raise ArgumentError("naive chain evaluation is limited to n <= 3 and d <= 3")
        total = _chain_naive(rho, bases)
    else:
        first, transfers, last = _chain_tables(rho, bases)
        vector = first
        for matrix in transfers:
            vector = vector @ matrix
        total = complex(vector @ last)

    log.debug("chain M_e(%d) over %s: Tr rho^n = %s", n, [b.name for b in bases], total)
    return _finish(total, n, d, MeasureMethod.CHAIN, kept, [b.name for b in bases])


def me2_expectations(psi: PureState,
                     basis: OperatorBasis,
                     keep: Sequence[int] = (0,)) -> Tuple[MeasureResult, np.ndarray]:
    """M_e(2) = 1 - sum_i |<O_i>|^2 together with the expectations themselves."""
    rho, kept = _reduced(psi, keep)
    if basis.dim != rho.shape[0]:
        raise ArgumentError("basis %s has dimension %d, subsystem has %d"
                            % (basis.name, basis.dim, rho.shape[0]))
    values = expectations(rho, basis)
    purity = float(np.sum(np.abs(values) ** 2))
    result = _finish(purity, 2, basis.dim, MeasureMethod.CHAIN, kept, [basis.name],
                     expectations=complex_pairs(values))
    result.i_concurrence = float(np.sqrt(max(2.0 * result.value, 0.0)))
    return result, values


def concurrence_2qubit(psi: PureState) -> float:
    """C = 2 |a_00 a_11 - a_01 a_10|."""
    psi = as_pure(psi)
    if tuple(psi.dims) != (2, 2):
        raise ArgumentError("concurrence needs a two-qubit state, got dims %s" % (list(psi.dims),))
    a = psi.amplitudes
    return float(2.0 * abs(a[0] * a[3] - a[1] * a[2]))


def me2_concurrence(psi: PureState) -> MeasureResult:
    c = concurrence_2qubit(psi)
    result = _finish(1.0 - c * c / 2.0, 2, 2, MeasureMethod.CONCURRENCE_SQUARED, [0])
    result.i_concurrence = c
    return result


def me2_gellmann_closed_form(psi: PureState, keep: Sequence[int] = (0,)) -> MeasureResult:
    """(d-1)/d - 1/2 sum_i <l_i>^2 over the traceless Gell-Mann generators.

    With Tr(l_i l_j) = 2 delta_ij the weight of the sum is 1/2 for every d
    (it equals 1/d only at d = 2).
    """
    rho, kept = _reduced(psi, keep)
    d = rho.shape[0]
    if d < 2:
        raise ArgumentError("closed form needs a subsystem of dimension >= 2")
    lam = np.stack([m for _, m in gellmann_matrices(d)])
    values = np.einsum('ij,kji->k', rho, lam)
    imag = float(np.max(np.abs(values.imag)))
    total = (d - 1.0) / d - 0.5 * float(np.sum(values.real ** 2))
    return _finish(complex(1.0 - total, imag), 2, d, MeasureMethod.CLOSED_FORM_GELLMANN, kept,
                   ["gellmann"])


def me2_weyl_closed_form(psi: PureState, keep: Sequence[int] = (0,)) -> MeasureResult:
    """1 - (1/d) sum_{m,n} |<Z^m X^n>|^2."""
    rho, kept = _reduced(psi, keep)
    d = rho.shape[0]
    if d < 2:
        raise ArgumentError("closed form needs a subsystem of dimension >= 2")
    z, x = clock_shift(d)
    total = 0.0
    for m in range(d):
        zm = np.linalg.matrix_power(z, m)
        for k in range(d):
            total += abs(np.trace(rho @ zm @ np.linalg.matrix_power(x, k))) ** 2
    return _finish(total / d, 2, d, MeasureMethod.CLOSED_FORM_WEYL, kept, ["weyl"])


def me2_identical(psi_n: PureState, basis: Optional[OperatorBasis] = None) -> MeasureResult:
    """Single-particle form 1 - sum_i |<O_i>|^2 for N identical particles.

    Expectations are taken in the reduced state of particle 0.  When the
    other particles' reduced states give a different value (inputs that
    are not exchange (anti)symmetric), every particle's value is reported.
    """
    psi_n = as_pure(psi_n)
    dims = psi_n.dims
    if len(dims) < 2:
        raise ArgumentError("identical-particle measure needs at least 2 particles")
    if len(set(dims)) != 1:
        raise ArgumentError("identical particles need equal local dimensions, got %s"
                            % (list(dims),))
    d = dims[0]
    basis = basis or gellmann_basis(d)
    if basis.dim != d:
        raise ArgumentError("basis dimension %d does not match particle dimension %d"
                            % (basis.dim, d))

    per_particle = []
    for k in range(len(dims)):
        rho_k = reduced_density(psi_n, [k]).matrix
        per_particle.append(1.0 - float(np.sum(np.abs(expectations(rho_k, basis)) ** 2)))

    rho_1 = reduced_density(psi_n, [0]).matrix
    values = expectations(rho_1, basis)
    result = _finish(float(np.sum(np.abs(values) ** 2)), 2, d, MeasureMethod.IDENTICAL, [0],
                     [basis.name], expectations=complex_pairs(values))

    advisory = symmetry_report(psi_n).advisory()
    if advisory:
        log.warning(advisory)
        result.warnings.append(advisory)
    if max(per_particle) - min(per_particle) > tolerances().imag_tol:
        log.warning("single-particle values differ by particle: %s", per_particle)
        result.per_particle = per_particle
        result.warnings.append("single-particle values differ by particle")
    return result
