#
# Licensed under the BSD license.  See full license in LICENSE file.
#

"""Pure states, density matrices and the samplers that feed the test suites.

Every sampler takes an explicit seed.  Generators are numpy PCG64 bit
generators; seeds are split with SeedSequence.spawn.  Gaussian variates
come from a Box-Muller transform of the uniform stream.

Third party dependencies:

numpy: for array support and the PCG64 generator - http://www.numpy.org/
"""

import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from configuration_manager import tolerances
from numerics import (ArgumentError, DomainError, ShapeError, StateValidationError,
                      TensorStructure, eigh, hermitian_residual, normalize_keep,
                      pure_partial_trace, tensor_all)

log = logging.getLogger(__name__)

RNG_ALGORITHM = "PCG64"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def _structure(dims) -> TensorStructure:
    if isinstance(dims, TensorStructure):
        return dims
    return TensorStructure(dims)


class PureState(object):
    """Normalized state vector over a tensor-factored Hilbert space."""

    def __init__(self, amplitudes, structure):
        structure = _structure(structure)
        amplitudes = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.size != structure.total:
            raise StateValidationError("%d amplitudes do not fit structure %s"
                                       % (amplitudes.size, list(structure.dims)))
        if not np.all(np.isfinite(amplitudes)):
            raise StateValidationError("amplitudes contain NaN or Inf")
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > tolerances().norm_tol:
            raise StateValidationError("state is not normalized (sum |a|^2 = %.12g)" % norm)

        self.amplitudes = _frozen(amplitudes)
        self.structure = structure

    @classmethod
    def normalized(cls, vector, structure) -> 'PureState':
        vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0.0:
            raise StateValidationError("cannot normalize the zero vector")
        return cls(vector / norm, structure)

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.structure.dims

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __repr__(self):
        return "PureState(dims=%s)" % (list(self.dims),)


class DensityMatrix(object):
    """Hermitian, unit-trace, positive-semidefinite operator."""

    def __init__(self, matrix, structure, check_positive: bool = True):
        structure = _structure(structure)
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise StateValidationError("density matrix must be square, got %s" % (matrix.shape,))
        try:
            structure.check(matrix.shape[0])
        except ShapeError as error:
            raise StateValidationError(str(error))
        if not np.all(np.isfinite(matrix)):
            raise StateValidationError("density matrix contains NaN or Inf")

        tols = tolerances()
        residual = hermitian_residual(matrix)
        if residual > tols.herm_tol:
            raise StateValidationError("density matrix is not Hermitian (residual %.3e)" % residual)
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > tols.norm_tol:
            raise StateValidationError("density matrix trace is %s, expected 1" % trace)
        if check_positive:
            smallest = eigh(matrix)[0][-1]
            if smallest < -tols.psd_tol:
                raise StateValidationError("density matrix has negative eigenvalue %.3e" % smallest)

        self.matrix = _frozen(matrix)
        self.structure = structure

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.structure.dims

    def purity(self) -> float:
        """Tr rho^2 (real for Hermitian rho)."""
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def __repr__(self):
        return "DensityMatrix(dims=%s)" % (list(self.dims),)


def pure_density(psi: PureState) -> DensityMatrix:
    """|psi><psi| as a DensityMatrix; positive by construction."""
    return DensityMatrix(psi.projector(), psi.structure, check_positive=False)


def as_density(state) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return pure_density(state)
    raise ArgumentError("expected a PureState or DensityMatrix, got %s" % type(state).__name__)


class SchmidtSpectrum(object):
    """Squared Schmidt coefficients, descending."""

    def __init__(self, coefficients: Sequence[float]):
        coefficients = [float(c) for c in coefficients]
        if any(b > a for a, b in zip(coefficients, coefficients[1:])):
            raise ArgumentError("Schmidt coefficients must be sorted in descending order")
        if abs(sum(coefficients) - 1.0) > tolerances().norm_tol:
            raise StateValidationError("Schmidt coefficients sum to %.12g" % sum(coefficients))
        self.coefficients = tuple(coefficients)

    @property
    def rank(self) -> int:
        cutoff = tolerances().eq_tol
        return sum(1 for c in self.coefficients if c > cutoff)

    def entropy(self) -> float:
        """Von Neumann entropy of the reduced state, in bits."""
        return float(-sum(c * np.log2(c) for c in self.coefficients if c > 0.0))

    def me(self, n: int) -> float:
        return 1.0 - float(sum(c ** n for c in self.coefficients))

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __repr__(self):
        return "SchmidtSpectrum(%s)" % (list(self.coefficients),)


def reduced_density(psi: PureState, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density operator of psi on the kept factors."""
    if not isinstance(psi, PureState):
        raise ArgumentError("reduced_density expects a PureState")
    kept = normalize_keep(psi.structure, keep)
    reduced = pure_partial_trace(psi.amplitudes, psi.structure, kept)
    # reduced states of a pure state are positive by construction
    return DensityMatrix(reduced, psi.structure.subsystem(kept), check_positive=False)


def schmidt_spectrum(psi: PureState) -> SchmidtSpectrum:
    if not psi.structure.is_bipartite():
        raise ArgumentError("Schmidt spectrum needs a bipartite state, got dims %s"
                            % (list(psi.dims),))
    d_a, d_b = psi.dims
    values = eigh(reduced_density(psi, [0]).matrix)[0][:min(d_a, d_b)]
    # tiny negative round-off from the eigensolver
    values = np.clip(values, 0.0, None)
    values = values / np.sum(values)
    return SchmidtSpectrum(values)


# ----------------------------------------------------------------------------
# Random sampling
# ----------------------------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def spawn_seeds(seed: int, count: int) -> List[int]:
    """Split one seed into count independent child seeds."""
    children = np.random.SeedSequence(int(seed)).spawn(int(count))
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians (real and imaginary parts N(0, 1)) by Box-Muller."""
    size = int(np.prod(shape))
    u1 = 1.0 - rng.random(size)  # (0, 1], keeps log finite
    u2 = rng.random(size)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return (radius * np.cos(angle) + 1j * radius * np.sin(angle)).reshape(shape)


def haar_random_pure(structure, seed: int) -> PureState:
    structure = _structure(structure)
    vector = complex_gaussian(make_rng(seed), (structure.total,))
    return PureState.normalized(vector, structure)


def haar_random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar-distributed d x d unitary: QR of a Ginibre matrix with the R-phase fixed."""
    if d < 1:
        raise ArgumentError("unitary dimension must be positive")
    z = complex_gaussian(make_rng(seed), (d, d))
    q, r = np.linalg.qr(z)
    diagonal = np.diag(r)
    phases = diagonal / np.abs(diagonal)
    return q * phases


def random_mixed(dim: int, ancilla_dim: int, seed: int) -> DensityMatrix:
    """Reduced state of a Haar-random purification on dim x ancilla_dim."""
    if dim < 1 or ancilla_dim < 1:
        raise ArgumentError("dimensions must be >= 1, got dim=%r ancilla_dim=%r"
                            % (dim, ancilla_dim))
    psi = haar_random_pure([dim, ancilla_dim], seed)
    return reduced_density(psi, [0])


def random_separable(structure, n_terms: int, seed: int) -> DensityMatrix:
    """Convex mixture of n_terms Haar-random product pure states, Dirichlet(1) weights."""
    structure = _structure(structure)
    if n_terms < 1:
        raise ArgumentError("a separable mixture needs at least one term")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    child_seeds = spawn_seeds(seed, n_terms * structure.n_factors)

    rho = np.zeros((structure.total, structure.total), dtype=np.complex128)
    for term, weight in enumerate(weights):
        factors = []
        for k, d in enumerate(structure.dims):
            local = haar_random_pure([d], child_seeds[term * structure.n_factors + k])
            factors.append(local.projector())
        rho += weight * tensor_all(factors)
    return DensityMatrix(rho, structure, check_positive=False)


def werner_state(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    if not 0.0 <= p <= 1.0:
        raise ArgumentError("Werner parameter must be in [0, 1], got %r" % (p,))
    bell = bell_state().projector()
    return DensityMatrix(p * bell + (1.0 - p) * np.eye(4) / 4.0, [2, 2], check_positive=False)


def apply_local_unitaries(psi: PureState, unitaries: Sequence) -> PureState:
    if len(unitaries) != psi.structure.n_factors:
        raise ArgumentError("need one unitary per factor (%d), got %d"
                            % (psi.structure.n_factors, len(unitaries)))
    for k, (u, d) in enumerate(zip(unitaries, psi.dims)):
        if np.shape(u) != (d, d):
            raise ShapeError("unitary %d has shape %s, factor dimension is %d"
                             % (k, np.shape(u), d))
    vector = tensor_all(unitaries) @ psi.amplitudes
    return PureState.normalized(vector, psi.structure)


# ----------------------------------------------------------------------------
# Named states
# ----------------------------------------------------------------------------

def basis_state(indices: Sequence[int], dims: Sequence[int]) -> PureState:
    structure = _structure(dims)
    if len(indices) != structure.n_factors:
        raise ArgumentError("need one index per factor")
    if any(not 0 <= i < d for i, d in zip(indices, structure.dims)):
        raise ArgumentError("basis index out of range: %s for dims %s"
                            % (list(indices), list(structure.dims)))
    vector = np.zeros(structure.total, dtype=np.complex128)
    vector[np.ravel_multi_index(tuple(indices), structure.dims)] = 1.0
    return PureState(vector, structure)


def product_state(local_vectors: Sequence) -> PureState:
    """|v_1> (x) ... (x) |v_k> from (not necessarily normalized) local vectors."""
    if not local_vectors:
        raise ArgumentError("product state needs at least one factor")
    locals_ = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in local_vectors]
    vector = locals_[0]
    for v in locals_[1:]:
        vector = np.kron(vector, v)
    return PureState.normalized(vector, [v.size for v in locals_])


def schmidt_state(coefficients: Sequence[float], d_b: Optional[int] = None) -> PureState:
    """sum_k sqrt(c_k) |k>|k> for squared Schmidt coefficients c_k."""
    coefficients = np.asarray(coefficients, dtype=float)
    d_a = coefficients.size
    d_b = d_b or d_a
    if d_b < d_a:
        raise ArgumentError("second factor must be at least as large as the first")
    vector = np.zeros(d_a * d_b, dtype=np.complex128)
    for k, c in enumerate(coefficients):
        vector[k * d_b + k] = np.sqrt(c)
    return PureState(vector, [d_a, d_b])


def maximally_entangled(d: int) -> PureState:
    if d < 1:
        raise ArgumentError("dimension must be positive")
    return schmidt_state(np.full(d, 1.0 / d))


def bell_state() -> PureState:
    """|Phi+> = (|00> + |11>)/sqrt(2)."""
    return maximally_entangled(2)


def singlet_state() -> PureState:
    """(|01> - |10>)/sqrt(2)."""
    return PureState.normalized([0.0, 1.0, -1.0, 0.0], [2, 2])


def ghz_state(n: int, d: int = 2) -> PureState:
    if n < 2:
        raise ArgumentError("GHZ state needs at least 2 particles")
    vector = np.zeros(d ** n, dtype=np.complex128)
    for k in range(d):
        vector[np.ravel_multi_index((k,) * n, (d,) * n)] = 1.0
    return PureState.normalized(vector, [d] * n)


def w_state(n: int) -> PureState:
    if n < 2:
        raise ArgumentError("W state needs at least 2 particles")
    vector = np.zeros(2 ** n, dtype=np.complex128)
    for k in range(n):
        vector[1 << (n - 1 - k)] = 1.0
    return PureState.normalized(vector, [2] * n)


# ----------------------------------------------------------------------------
# Exchange symmetry advisory
# ----------------------------------------------------------------------------

class SymmetryReport(object):
    """Residuals of psi against every particle transposition."""

    def __init__(self, symmetric_residual: float, antisymmetric_residual: float, tol: float):
        self.symmetric_residual = symmetric_residual
        self.antisymmetric_residual = antisymmetric_residual
        if symmetric_residual <= tol:
            self.kind = "symmetric"
        elif antisymmetric_residual <= tol:
            self.kind = "antisymmetric"
        else:
            self.kind = "none"

    def advisory(self) -> Optional[str]:
        if self.kind != "none":
            return None
        return ("state is neither symmetric nor antisymmetric under particle exchange "
                "(residuals %.3e / %.3e); single-particle values may differ by particle"
                % (self.symmetric_residual, self.antisymmetric_residual))


def symmetry_report(psi: PureState) -> SymmetryReport:
    dims = psi.dims
    if len(dims) < 2 or len(set(dims)) != 1:
        raise ArgumentError("exchange symmetry needs >= 2 factors of equal dimension, got %s"
                            % (list(dims),))
    tensor_form = psi.amplitudes.reshape(dims)
    sym = 0.0
    anti = 0.0
    for i, j in itertools.combinations(range(len(dims)), 2):
        swapped = np.swapaxes(tensor_form, i, j)
        sym = max(sym, float(np.max(np.abs(swapped - tensor_form))))
        anti = max(anti, float(np.max(np.abs(swapped + tensor_form))))
    report = SymmetryReport(sym, anti, tolerances().eq_tol)
    log.debug("exchange symmetry of %s: %s", list(dims), report.kind)
    return report


def as_pure(state) -> PureState:
    """Reject mixed inputs for pure-state-only quantities."""
    if isinstance(state, PureState):
        return state
    if isinstance(state, DensityMatrix):
        raise DomainError("this measure is defined for pure states only; "
                          "use the criteria module for mixed states")
    raise ArgumentError("expected a PureState, got %s" % type(state).__name__)
