#
# Licensed under the BSD license.  See full license in LICENSE file.
#

"""Entanglement tests for mixed and many-particle states.

uncertainty identity   sum_i var(O_i) = d - Tr rho^2 for a complete Hermitian set
local uncertainty      sum_i var(O_i x I - I x O'_i) >= 2(d-1) on separable d x d
collective uncertainty sum_i var(sum_K O_iK) >= N(d-1) on separable N-particle states
ppt                    smallest eigenvalue of the partial transpose >= 0 on separable

A value below its threshold (by more than verdict_margin) certifies
entanglement.  Equality is not a violation, so product pure states, which
sit exactly on the collective bound, are reported as not detected.

Third party dependencies:

numpy: for array support - http://www.numpy.org/
"""

import itertools
import logging
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from bases import OperatorBasis, basis_by_name
from configuration_manager import get_configuration, tolerances
from numerics import (ArgumentError, DomainError, IdentityCheckError, eigh, partial_trace,
                      partial_transpose, pure_partial_trace, tensor_all)
from schemas import BSide, CriterionKind, CriterionReport, Verdict
from states import DensityMatrix, PureState, as_density, werner_state

log = logging.getLogger(__name__)

CRITERION_ALIASES = {
    "identity": CriterionKind.UNCERTAINTY_IDENTITY,
    "local": CriterionKind.LOCAL_UNCERTAINTY,
    "collective": CriterionKind.COLLECTIVE_UNCERTAINTY,
    "ppt": CriterionKind.PPT,
}


def criterion_kind(name: Union[str, CriterionKind]) -> CriterionKind:
    """Resolve a short name ("local") or a full kind ("local_uncertainty")."""
    if isinstance(name, CriterionKind):
        return name
    key = str(name).strip().lower()
    if key in CRITERION_ALIASES:
        return CRITERION_ALIASES[key]
    try:
        return CriterionKind(key)
    except ValueError:
        raise ArgumentError("unknown criterion %r (choose from %s)"
                            % (name, ", ".join(CRITERION_ALIASES)))


def resolve_b_side(b_side: Optional[Union[str, BSide]]) -> BSide:
    if b_side is None:
        b_side = get_configuration().criteria.b_side
    try:
        return BSide(b_side)
    except ValueError:
        raise ArgumentError("b_side must be 'same' or 'conjugate', got %r" % (b_side,))


def _verdict(value: float, threshold: float, margin: float) -> Verdict:
    if value < threshold - margin:
        return Verdict.ENTANGLED_DETECTED
    return Verdict.NOT_DETECTED


def _require_hermitian(basis: OperatorBasis):
    if not basis.is_hermitian:
        raise DomainError("uncertainty sums need a Hermitian basis; %s is not" % basis.name)


def variance(rho, op) -> float:
    """<O^dagger O> - |<O>|^2, which is the usual variance for Hermitian O."""
    rho = np.asarray(rho, dtype=np.complex128)
    op = np.asarray(op, dtype=np.complex128)
    mean = np.trace(rho @ op)
    second = np.trace(rho @ op.conj().T @ op)
    return float(second.real - abs(mean) ** 2)


# ----------------------------------------------------------------------------
# Uncertainty identity
# ----------------------------------------------------------------------------

def uncertainty_identity(rho, basis: OperatorBasis):
    """Summed variances over a complete Hermitian basis and their residual against d - Tr rho^2.

    :param rho: single-system state of dimension basis.dim
    :type rho: DensityMatrix or PureState

    :param basis: complete Hermitian operator basis
    :type basis: OperatorBasis

    :return: (sum, residual)
    :rtype: (float, float)
    """
    _require_hermitian(basis)
    matrix = as_density(rho).matrix
    if matrix.shape[0] != basis.dim:
        raise ArgumentError("basis dimension %d does not match state dimension %d"
                            % (basis.dim, matrix.shape[0]))
    total = sum(variance(matrix, o) for o in basis)
    purity = float(np.real(np.vdot(matrix, matrix)))
    return total, abs(total - (basis.dim - purity))


def uncertainty_identity_report(rho, basis: OperatorBasis,
                                keep: Optional[Sequence[int]] = None) -> CriterionReport:
    """Identity check as a report; keep selects the factors to reduce to first."""
    state = rho if isinstance(rho, PureState) else as_density(rho)
    if keep is not None:
        matrix = _reducer(state)(keep)
    else:
        matrix = as_density(state).matrix
    reduced = DensityMatrix(matrix, [matrix.shape[0]], check_positive=False)

    total, residual = uncertainty_identity(reduced, basis)
    tol = tolerances().eq_tol
    if residual > tol:
        raise IdentityCheckError("uncertainty identity residual %.3e exceeds %.1e" % (residual, tol))
    threshold = basis.dim - 1.0
    return CriterionReport(criterion=CriterionKind.UNCERTAINTY_IDENTITY,
                           value=total,
                           threshold=threshold,
                           # the bound d - 1 holds for every state, so it never detects
                           verdict=_verdict(total, threshold, tolerances().verdict_margin),
                           basis_name=basis.name,
                           residual=residual,
                           variances=[variance(matrix, o) for o in basis])


# ----------------------------------------------------------------------------
# Local uncertainty
# ----------------------------------------------------------------------------

def local_uncertainty_criterion(rho,
                                basis: OperatorBasis,
                                b_side: Optional[Union[str, BSide]] = None) -> CriterionReport:
    """sum_i var(O_i x I - I x O'_i) against 2(d-1).

    :param rho: bipartite d x d state
    :type rho: DensityMatrix or PureState

    :param basis: complete Hermitian basis of dimension d
    :type basis: OperatorBasis

    :param b_side: 'same' uses O'_i = O_i, 'conjugate' its entrywise
                   conjugate; None takes [criteria] b_side
    :type b_side: str

    :return: report carrying the convention used
    :rtype: CriterionReport
    """
    state = as_density(rho)
    if not state.structure.is_bipartite():
        raise ArgumentError("local uncertainty needs a bipartite state, got dims %s"
                            % (list(state.dims),))
    d_a, d_b = state.dims
    if d_a != d_b:
        raise ArgumentError("local uncertainty needs equal local dimensions, got %d x %d"
                            % (d_a, d_b))
    _require_hermitian(basis)
    if basis.dim != d_a:
        raise ArgumentError("basis dimension %d does not match local dimension %d"
                            % (basis.dim, d_a))
    side = resolve_b_side(b_side)

    eye = np.eye(d_a)
    variances = []
    for o in basis:
        partner = o.conj() if side == BSide.CONJUGATE else o
        difference = np.kron(o, eye) - np.kron(eye, partner)
        variances.append(variance(state.matrix, difference))
    value = float(sum(variances))
    threshold = 2.0 * (d_a - 1)
    verdict = _verdict(value, threshold, tolerances().verdict_margin)
    log.debug("local uncertainty (%s, %s): %.12g vs %g", basis.name, side.value, value, threshold)
    return CriterionReport(criterion=CriterionKind.LOCAL_UNCERTAINTY, value=value,
                           threshold=threshold, verdict=verdict, basis_name=basis.name,
                           b_side_convention=side, variances=variances)


# ----------------------------------------------------------------------------
# Collective uncertainty
# ----------------------------------------------------------------------------

def _collective_full(matrix: np.ndarray, basis: OperatorBasis, n: int) -> List[float]:
    eye = np.eye(basis.dim)
    variances = []
    for o in basis:
        collective = sum(tensor_all([o if k == slot else eye for k in range(n)])
                         for slot in range(n))
        variances.append(variance(matrix, collective))
    return variances


def _reducer(state: Union[PureState, DensityMatrix]) -> Callable[[Sequence[int]], np.ndarray]:
    """keep -> reduced matrix; pure states are reduced from their amplitudes."""
    if isinstance(state, PureState):
        return lambda keep: pure_partial_trace(state.amplitudes, state.structure, keep)
    return lambda keep: partial_trace(state.matrix, state.structure, keep)


def _collective_implicit(state: Union[PureState, DensityMatrix],
                         basis: OperatorBasis) -> List[float]:
    """Variances from one- and two-particle reduced states; no d^N operator is built."""
    n = state.structure.n_factors
    reduce = _reducer(state)
    singles = [reduce([k]) for k in range(n)]
    pairs = [reduce([k, l]) for k, l in itertools.combinations(range(n), 2)]
    variances = []
    for o in basis:
        square = o @ o
        mean = sum(np.trace(r @ o) for r in singles)
        second = sum(np.trace(r @ square) for r in singles)
        # each unordered pair contributes O_K O_L and O_L O_K
        second += 2.0 * sum(np.trace(r @ np.kron(o, o)) for r in pairs)
        variances.append(float(np.real(second) - np.real(mean) ** 2))
    return variances


def collective_uncertainty_criterion(rho,
                                     basis: OperatorBasis,
                                     materialize: Optional[bool] = None) -> CriterionReport:
    """sum_i var(sum_K O_iK) against N(d-1) for N particles of equal dimension d.

    materialize=None builds the full collective operators while N*d is at
    most [criteria] collective_materialize_limit and uses the reduced-state
    path beyond it.  Pure inputs stay as vectors on the reduced-state path.
    """
    state = rho if isinstance(rho, PureState) else as_density(rho)
    dims = state.dims
    if len(dims) < 2:
        raise ArgumentError("collective criterion needs at least 2 particles")
    if len(set(dims)) != 1:
        raise ArgumentError("collective criterion needs equal local dimensions, got %s"
                            % (list(dims),))
    _require_hermitian(basis)
    d = dims[0]
    n = len(dims)
    if basis.dim != d:
        raise ArgumentError("basis dimension %d does not match particle dimension %d"
                            % (basis.dim, d))

    if materialize is None:
        materialize = n * d <= get_configuration().criteria.collective_materialize_limit
    if materialize:
        variances = _collective_full(as_density(state).matrix, basis, n)
    else:
        variances = _collective_implicit(state, basis)

    value = float(sum(variances))
    threshold = float(n * (d - 1))
    log.debug("collective uncertainty N=%d d=%d (%s path): %.12g vs %g",
              n, d, "full" if materialize else "implicit", value, threshold)
    return CriterionReport(criterion=CriterionKind.COLLECTIVE_UNCERTAINTY, value=value,
                           threshold=threshold,
                           verdict=_verdict(value, threshold, tolerances().verdict_margin),
                           basis_name=basis.name, n_particles=n, variances=variances,
                           metadata={"path": "full" if materialize else "implicit"})


# ----------------------------------------------------------------------------
# PPT
# ----------------------------------------------------------------------------

def ppt_criterion(rho) -> CriterionReport:
    """Smallest eigenvalue of the partial transpose on the second factor."""
    state = as_density(rho)
    if not state.structure.is_bipartite():
        raise ArgumentError("PPT criterion needs a bipartite state, got dims %s"
                            % (list(state.dims),))
    transposed = partial_transpose(state.matrix, state.structure, 1)
    smallest = float(eigh(transposed)[0][-1])
    return CriterionReport(criterion=CriterionKind.PPT, value=smallest, threshold=0.0,
                           verdict=_verdict(smallest, 0.0, tolerances().ppt_tol))


# ----------------------------------------------------------------------------
# Scans
# ----------------------------------------------------------------------------

def werner_family(p: float) -> DensityMatrix:
    return werner_state(p)


FAMILIES: Dict[str, Callable[[float], DensityMatrix]] = {
    "werner": werner_family,
}


def evaluate_criterion(kind: Union[str, CriterionKind],
                       rho,
                       basis: Optional[OperatorBasis] = None,
                       b_side: Optional[Union[str, BSide]] = None,
                       keep: Optional[Sequence[int]] = None) -> CriterionReport:
    """Run one criterion by name; basis defaults to [criteria] default_basis."""
    kind = criterion_kind(kind)
    if kind == CriterionKind.PPT:
        return ppt_criterion(rho)

    state = rho if isinstance(rho, PureState) else as_density(rho)
    if basis is None:
        if kind == CriterionKind.UNCERTAINTY_IDENTITY:
            d = state.structure.subsystem(keep).total if keep is not None \
                else state.structure.total
        else:
            d = state.dims[0]
        basis = basis_by_name(get_configuration().criteria.default_basis, d)

    if kind == CriterionKind.UNCERTAINTY_IDENTITY:
        return uncertainty_identity_report(state, basis, keep)
    if kind == CriterionKind.LOCAL_UNCERTAINTY:
        return local_uncertainty_criterion(state, basis, b_side)
    return collective_uncertainty_criterion(state, basis)


def criterion_scan(family: Union[str, Callable[[float], DensityMatrix]],
                   criteria: Sequence[Union[str, CriterionKind]],
                   grid: Sequence[float],
                   basis: Optional[OperatorBasis] = None,
                   b_side: Optional[Union[str, BSide]] = None) -> List[CriterionReport]:
    """Evaluate each criterion at each grid point.

    :param family: name in FAMILIES or a callable p -> state
    :type family: str or callable

    :param criteria: criteria in output order, e.g. ["local", "ppt"]
    :type criteria: list

    :param grid: parameter values, nonempty
    :type grid: list

    :return: one report per (grid point, criterion), grid-major, each
             carrying its parameter
    :rtype: list of CriterionReport
    """
    if not grid:
        raise ArgumentError("scan grid is empty")
    if not criteria:
        raise ArgumentError("scan needs at least one criterion")
    if isinstance(family, str):
        if family not in FAMILIES:
            raise ArgumentError("unknown family %r (choose from %s)"
                                % (family, ", ".join(sorted(FAMILIES))))
        family = FAMILIES[family]
    kinds = [criterion_kind(c) for c in criteria]

    rows = []
    for p in grid:
        state = family(float(p))
        for kind in kinds:
            report = evaluate_criterion(kind, state, basis,
                                        b_side if kind == CriterionKind.LOCAL_UNCERTAINTY else None)
            report.parameter = float(p)
            rows.append(report)
    log.info("scan over %d points x %d criteria", len(grid), len(kinds))
    return rows


def parse_grid(text: str) -> List[float]:
    """'start:stop:step' (stop included within step/1e6) or a comma list."""
    text = text.strip()
    if ":" not in text:
        try:
            return [float(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise ArgumentError("bad grid value list %r" % text)
    parts = text.split(":")
    if len(parts) != 3:
        raise ArgumentError("grid must be start:stop:step, got %r" % text)
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError:
        raise ArgumentError("grid must be start:stop:step, got %r" % text)
    if step <= 0.0:
        raise ArgumentError("grid step must be positive, got %r" % step)
    count = int(np.floor((stop - start) / step + 1e-6)) + 1
    # 0.1-step grids land on 0.3, 0.4, ... exactly
    return [round(start + k * step, 12) for k in range(max(count, 0))]
