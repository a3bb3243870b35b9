#
# Licensed under the BSD license.  See full license in LICENSE file.
#

"""Dense complex linear algebra for small tensor-factored Hilbert spaces.

Matrices are plain numpy complex128 arrays (row-major, dense).  Composite
indices follow the Kronecker convention: for dims [d_1, ..., d_k] the
index is sum_j i_j * (product of later dims), factor 0 slowest, which is
what numpy.kron and a C-order reshape both produce.

The Hermitian eigensolver is a cyclic Jacobi method with complex
rotations, so Schmidt spectra and PPT verdicts do not depend on a LAPACK
build.

Third party dependencies:

numpy: for array support - http://www.numpy.org/
"""

import logging
import string
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from configuration_manager import tolerances

log = logging.getLogger(__name__)

_LETTERS = string.ascii_letters


class EntanglementError(Exception):
    """Base class for every error raised by EntangleOps."""


class ShapeError(EntanglementError, ValueError):
    """Operand shapes do not fit the operation."""


class ArgumentError(EntanglementError, ValueError):
    """An argument is outside the operation's domain (bad index, order, range)."""


class DomainError(EntanglementError, ValueError):
    """The input is mathematically unsuitable (non-Hermitian, mixed where pure needed)."""


class StateValidationError(DomainError):
    """A state violates its invariants (norm, trace, positivity, layout)."""


class IdentityCheckError(EntanglementError, ArithmeticError):
    """A numerical health check exceeded its tolerance."""


class TensorStructure(object):
    """Ordered local dimensions of a tensor-factored Hilbert space."""

    __slots__ = ('_dims',)

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise ArgumentError("tensor structure needs at least one factor")
        if any(d < 1 for d in dims):
            raise ArgumentError("local dimensions must be positive, got %s" % (list(dims),))
        self._dims = dims

    @property
    def dims(self) -> Tuple[int, ...]:
        return self._dims

    @property
    def n_factors(self) -> int:
        return len(self._dims)

    @property
    def total(self) -> int:
        return int(np.prod(self._dims))

    def check(self, dim: int):
        """Raise ShapeError unless the structure annotates a space of size dim."""
        if dim != self.total:
            raise ShapeError("dimension %d does not match tensor structure %s (product %d)"
                             % (dim, list(self._dims), self.total))

    def is_bipartite(self) -> bool:
        return len(self._dims) == 2

    def subsystem(self, keep: Iterable[int]) -> 'TensorStructure':
        return TensorStructure(self._dims[k] for k in normalize_keep(self, keep))

    def __eq__(self, other):
        return isinstance(other, TensorStructure) and other._dims == self._dims

    def __hash__(self):
        return hash(self._dims)

    def __repr__(self):
        return "TensorStructure(%s)" % (list(self._dims),)


def normalize_keep(structure: TensorStructure, keep: Iterable[int]) -> List[int]:
    """Validate a factor index set and return it sorted (factor order preserved)."""
    try:
        indices = sorted(set(int(k) for k in keep))
    except (TypeError, ValueError):
        raise ArgumentError("factor indices must be integers, got %r" % (keep,))
    if not indices:
        raise ArgumentError("at least one factor must be kept")
    bad = [k for k in indices if k < 0 or k >= structure.n_factors]
    if bad:
        raise ArgumentError("factor indices %s out of range for %d factors"
                            % (bad, structure.n_factors))
    return indices


def as_matrix(data) -> np.ndarray:
    """Return data as a finite 2-D complex128 array."""
    a = np.asarray(data, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError("expected a 2-D matrix, got an array with shape %s" % (a.shape,))
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError("matrix dimensions must be positive, got %s" % (a.shape,))
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix contains NaN or Inf entries")
    return a


def _require_square(a: np.ndarray, name: str = "matrix"):
    if a.shape[0] != a.shape[1]:
        raise ShapeError("%s must be square, got %s" % (name, a.shape))


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError("cannot multiply %s by %s" % (a.shape, b.shape))
    return a @ b


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def hs_inner(p, q) -> complex:
    """Hilbert-Schmidt inner product Tr(p^dagger q)."""
    p = as_matrix(p)
    q = as_matrix(q)
    _require_square(p, "p")
    _require_square(q, "q")
    if p.shape != q.shape:
        raise ShapeError("inner product of %s and %s" % (p.shape, q.shape))
    # vdot conjugates its first argument and flattens: sum conj(p_ij) q_ij
    return complex(np.vdot(p, q))


def tensor(a, b) -> np.ndarray:
    """Kronecker product, a's indices slowest."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(factors: Sequence) -> np.ndarray:
    result = as_matrix(factors[0])
    for factor in factors[1:]:
        result = tensor(result, factor)
    return result


def hermitian_residual(a) -> float:
    a = as_matrix(a)
    _require_square(a)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, tol: float = None) -> bool:
    if tol is None:
        tol = tolerances().herm_tol
    return hermitian_residual(a) <= tol


def partial_trace(rho, structure: TensorStructure, keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not in keep; kept factors stay in their order."""
    rho = as_matrix(rho)
    _require_square(rho, "rho")
    structure.check(rho.shape[0])
    kept = normalize_keep(structure, keep)
    n = structure.n_factors
    if n > len(_LETTERS) // 2:
        raise ArgumentError("too many tensor factors (%d)" % n)

    rows = _LETTERS[:n]
    cols = [rows[k] if k not in kept else _LETTERS[n + k] for k in range(n)]
    spec = "%s%s->%s%s" % (rows, "".join(cols),
                           "".join(rows[k] for k in kept), "".join(cols[k] for k in kept))

    kept_dim = int(np.prod([structure.dims[k] for k in kept]))
    reduced = np.einsum(spec, rho.reshape(structure.dims + structure.dims))
    return reduced.reshape(kept_dim, kept_dim)


def pure_partial_trace(vector, structure: TensorStructure, keep: Iterable[int]) -> np.ndarray:
    """Reduced state of |psi><psi| on the kept factors, without forming the projector.

    The amplitudes are regrouped into a (kept, traced) matrix M; the result
    is M M^dagger.
    """
    psi = np.asarray(vector, dtype=np.complex128)
    if psi.ndim != 1:
        raise ShapeError("expected a state vector, got an array with shape %s" % (psi.shape,))
    structure.check(psi.shape[0])
    kept = normalize_keep(structure, keep)
    traced = [k for k in range(structure.n_factors) if k not in kept]

    kept_dim = int(np.prod([structure.dims[k] for k in kept]))
    m = psi.reshape(structure.dims).transpose(kept + traced).reshape(kept_dim, -1)
    return m @ m.conj().T


def partial_transpose(rho, structure: TensorStructure, factor: int) -> np.ndarray:
    """Transpose the indices of one factor of a bipartite operator."""
    rho = as_matrix(rho)
    _require_square(rho, "rho")
    if not structure.is_bipartite():
        raise ArgumentError("partial transpose needs a bipartite structure, got %s"
                            % (list(structure.dims),))
    structure.check(rho.shape[0])
    if factor not in (0, 1):
        raise ArgumentError("factor must be 0 or 1, got %r" % (factor,))

    d_a, d_b = structure.dims
    blocks = rho.reshape(d_a, d_b, d_a, d_b)
    # axes are (row_A, row_B, col_A, col_B)
    axes = (2, 1, 0, 3) if factor == 0 else (0, 3, 2, 1)
    return blocks.transpose(axes).reshape(d_a * d_b, d_a * d_b)


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def eigh(a) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    :param a: Hermitian matrix (within herm_tol); symmetrized as (a + a^dagger)/2
    :type a: array_like

    :return: eigenvalues in descending order and the matching orthonormal
             eigenvectors as columns
    :rtype: (numpy.ndarray, numpy.ndarray)
    """
    a = as_matrix(a)
    _require_square(a)
    tols = tolerances()
    residual = hermitian_residual(a)
    if residual > tols.herm_tol:
        raise DomainError("matrix is not Hermitian (residual %.3e > %.1e)"
                          % (residual, tols.herm_tol))

    n = a.shape[0]
    work = (a + a.conj().T) / 2
    vectors = np.eye(n, dtype=np.complex128)
    threshold = tols.eig_tol * max(1.0, float(np.linalg.norm(work)))

    sweeps = 0
    off = _offdiag_norm(work)
    while off >= threshold and sweeps < tols.max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = work[p, q]
                magnitude = abs(beta)
                if magnitude == 0.0:
                    continue
                alpha = work[p, p].real
                gamma = work[q, q].real
                phase = beta / magnitude

                theta = (gamma - alpha) / (2.0 * magnitude)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                # W = diag(1, conj(phase)) @ [[c, s], [-s, c]] zeroes work[p, q]
                w = np.array([[c, s],
                              [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                work[:, idx] = work[:, idx] @ w
                work[idx, :] = w.conj().T @ work[idx, :]
                work[p, q] = 0.0
                work[q, p] = 0.0
                vectors[:, idx] = vectors[:, idx] @ w
        off = _offdiag_norm(work)

    if off >= threshold:
        log.warning("Jacobi eigensolver did not converge in %d sweeps (off-diagonal %.3e)",
                    sweeps, off)
    else:
        log.debug("Jacobi eigensolver converged: n=%d sweeps=%d", n, sweeps)

    values = np.real(np.diag(work)).copy()
    order = np.argsort(-values, kind='stable')
    return values[order], vectors[:, order]


def mat_power_trace(a, n: int) -> complex:
    """Tr(a^n) by repeated matrix multiplication; the imaginary part is kept for diagnostics."""
    a = as_matrix(a)
    _require_square(a)
    if int(n) != n or n < 1:
        raise ArgumentError("power must be an integer >= 1, got %r" % (n,))
    return complex(np.trace(np.linalg.matrix_power(a, int(n))))
