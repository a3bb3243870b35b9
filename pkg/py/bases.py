#
# Licensed under the BSD license.  See full license in LICENSE file.
#

"""Complete operator bases on a d-dimensional Hilbert space.

Three families are built here:

pauli     {I, X, Y, Z}/sqrt(2), d = 2 only
gellmann  I/sqrt(d) followed by the generalized Gell-Mann matrices / sqrt(2):
          symmetric pairs, antisymmetric pairs, then the diagonal ones
weyl      clock and shift monomials Z^m X^n / sqrt(d), lexicographic (m, n)

Every basis is orthonormal under Tr(P^dagger Q), so it resolves the
identity on operator space; equivalently sum_i O_i^dagger Y O_i = Tr(Y) I
for every Y.  The verify_* functions check these identities numerically.

Third party dependencies:

numpy: for array support - http://www.numpy.org/
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from configuration_manager import get_configuration
from numerics import ArgumentError, DomainError, ShapeError, as_matrix
from states import complex_gaussian, make_rng

log = logging.getLogger(__name__)

BASIS_NAMES = ("pauli", "gellmann", "weyl")


class OperatorBasis(object):
    """Ordered set of d^2 Hilbert-Schmidt orthonormal d x d operators."""

    def __init__(self,
                 name: str,
                 dim: int,
                 elements: Sequence,
                 labels: Sequence[str],
                 is_hermitian: bool,
                 is_unitary_scaled: bool = False,
                 truncated: bool = False):
        """
        :param name: family name reported in results ("pauli", "gellmann", ...)
        :type name: str

        :param dim: local dimension d
        :type dim: int

        :param elements: the operators, each d x d
        :type elements: list

        :param labels: display label per element
        :type labels: list

        :param is_hermitian: every element is Hermitian
        :type is_hermitian: bool

        :param is_unitary_scaled: elements are unitaries divided by sqrt(d)
        :type is_unitary_scaled: bool

        :param truncated: allow fewer than d^2 elements (negative controls only)
        :type truncated: bool
        """
        if dim < 1:
            raise ArgumentError("basis dimension must be positive")
        if len(labels) != len(elements):
            raise ArgumentError("need one label per element")
        if not truncated and len(elements) != dim * dim:
            raise ShapeError("a complete basis in dimension %d has %d elements, got %d"
                             % (dim, dim * dim, len(elements)))
        frozen = []
        for k, element in enumerate(elements):
            m = np.array(as_matrix(element), copy=True)
            if m.shape != (dim, dim):
                raise ShapeError("element %d has shape %s, expected (%d, %d)"
                                 % (k, m.shape, dim, dim))
            m.setflags(write=False)
            frozen.append(m)

        self.name = name
        self.dim = dim
        self.elements = tuple(frozen)
        self.labels = tuple(labels)
        self.is_hermitian = is_hermitian
        self.is_unitary_scaled = is_unitary_scaled
        self.truncated = truncated

    def stack(self) -> np.ndarray:
        """Elements as one (k, d, d) array."""
        return np.stack(self.elements)

    def without(self, index: int) -> 'OperatorBasis':
        """Copy with one element removed; no longer complete."""
        keep = [k for k in range(len(self.elements)) if k != index]
        return OperatorBasis("%s-without-%d" % (self.name, index), self.dim,
                             [self.elements[k] for k in keep], [self.labels[k] for k in keep],
                             self.is_hermitian, self.is_unitary_scaled, truncated=True)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return "OperatorBasis(%s, d=%d)" % (self.name, self.dim)


def _require_dim(d: int):
    if int(d) != d or d < 2:
        raise ArgumentError("basis dimension must be an integer >= 2, got %r" % (d,))


def pauli_basis() -> OperatorBasis:
    sigma = [np.eye(2),
             np.array([[0, 1], [1, 0]]),
             np.array([[0, -1j], [1j, 0]]),
             np.array([[1, 0], [0, -1]])]
    return OperatorBasis("pauli", 2, [s / np.sqrt(2) for s in sigma],
                         ["I", "X", "Y", "Z"], is_hermitian=True)


def gellmann_matrices(d: int) -> List[Tuple[str, np.ndarray]]:
    """The d^2 - 1 generalized Gell-Mann matrices, Tr(l_i l_j) = 2 delta_ij.

    Order: symmetric S_jk for j < k, antisymmetric A_jk for j < k, then
    diagonal D_l for l = 1 .. d-1.
    """
    _require_dim(d)
    symmetric = []
    antisymmetric = []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1.0
            symmetric.append(("S%d%d" % (j, k), s))

            a = np.zeros((d, d), dtype=np.complex128)
            a[j, k] = -1j
            a[k, j] = 1j
            antisymmetric.append(("A%d%d" % (j, k), a))

    diagonal = []
    for l in range(1, d):
        entries = np.zeros(d)
        entries[:l] = 1.0
        entries[l] = -l
        diagonal.append(("D%d" % l, np.sqrt(2.0 / (l * (l + 1))) * np.diag(entries)
                         .astype(np.complex128)))

    return symmetric + antisymmetric + diagonal


def gellmann_basis(d: int) -> OperatorBasis:
    _require_dim(d)
    generators = gellmann_matrices(d)
    elements = [np.eye(d, dtype=np.complex128) / np.sqrt(d)]
    elements += [m / np.sqrt(2) for _, m in generators]
    labels = ["I"] + [label for label, _ in generators]
    return OperatorBasis("gellmann", d, elements, labels, is_hermitian=True)


def clock_shift(d: int) -> Tuple[np.ndarray, np.ndarray]:
    """Z = sum_k q^k |k><k| and X = sum_k |k><k+1 mod d|, q = exp(2 pi i / d)."""
    _require_dim(d)
    q = np.exp(2j * np.pi / d)
    z = np.diag(q ** np.arange(d))
    x = np.zeros((d, d), dtype=np.complex128)
    for k in range(d):
        x[k, (k + 1) % d] = 1.0
    return z, x


def weyl_basis(d: int) -> OperatorBasis:
    z, x = clock_shift(d)
    elements = []
    labels = []
    for m in range(d):
        for n in range(d):
            elements.append(np.linalg.matrix_power(z, m) @ np.linalg.matrix_power(x, n)
                            / np.sqrt(d))
            labels.append("Z^%dX^%d" % (m, n))
    return OperatorBasis("weyl", d, elements, labels,
                         is_hermitian=False, is_unitary_scaled=True)


def conjugate_basis(basis: OperatorBasis) -> OperatorBasis:
    """Entrywise complex conjugate of every element."""
    return OperatorBasis(basis.name + "*", basis.dim,
                         [e.conj() for e in basis.elements],
                         [label + "*" for label in basis.labels],
                         basis.is_hermitian, basis.is_unitary_scaled, basis.truncated)


def basis_by_name(name: str, d: int) -> OperatorBasis:
    name = name.strip().lower()
    if name == "pauli":
        if d != 2:
            raise ArgumentError("pauli basis exists for d = 2 only, got d = %d" % d)
        return pauli_basis()
    if name == "gellmann":
        return gellmann_basis(d)
    if name == "weyl":
        return weyl_basis(d)
    raise ArgumentError("unknown basis %r (choose from %s)" % (name, ", ".join(BASIS_NAMES)))


# ----------------------------------------------------------------------------
# Identity checks
# ----------------------------------------------------------------------------

def gram_residual(basis: OperatorBasis) -> float:
    """max |Tr(O_i^dagger O_j) - delta_ij|."""
    flat = basis.stack().reshape(len(basis), -1)
    gram = flat.conj() @ flat.T
    return float(np.max(np.abs(gram - np.eye(len(basis)))))


def completeness_residual(basis: OperatorBasis, probe) -> float:
    """max-norm of sum_i O_i^dagger Y O_i - Tr(Y) I for one probe Y."""
    y = as_matrix(probe)
    e = basis.stack()
    total = np.einsum('kji,jl,klm->im', e.conj(), y, e)
    return float(np.max(np.abs(total - np.trace(y) * np.eye(basis.dim))))


def expansion_residual(basis: OperatorBasis, operator) -> float:
    """max-norm of P - sum_i Tr(O_i^dagger P) O_i."""
    p = as_matrix(operator)
    e = basis.stack()
    coefficients = np.einsum('kij,ij->k', e.conj(), p)
    return float(np.max(np.abs(p - np.einsum('k,kij->ij', coefficients, e))))


def verify_completeness(basis: OperatorBasis, trials: int, seed: Optional[int] = None) -> float:
    """Worst residual over random complex probes of both completeness forms.

    :param basis: basis under test
    :type basis: OperatorBasis

    :param trials: number of random probes (>= 1)
    :type trials: int

    :param seed: probe seed, defaults to [sampling] default_seed
    :type seed: int

    :return: max of the sum_i O_i^dagger Y O_i = Tr(Y) I residual and the
             expansion residual over all probes
    :rtype: float
    """
    if trials < 1:
        raise ArgumentError("need at least one probe, got %r" % (trials,))
    if seed is None:
        seed = get_configuration().sampling.default_seed
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(trials):
        probe = complex_gaussian(rng, (basis.dim, basis.dim))
        worst = max(worst, completeness_residual(basis, probe), expansion_residual(basis, probe))
    log.debug("completeness of %s (d=%d) over %d probes: %.3e",
              basis.name, basis.dim, trials, worst)
    return worst


def verify_hermitian_sum_rule(basis: OperatorBasis) -> float:
    """max-norm of sum_i O_i^2 - d I for a Hermitian basis."""
    if not basis.is_hermitian:
        raise DomainError("sum rule sum O_i^2 = d I needs a Hermitian basis; %s is not"
                          % basis.name)
    e = basis.stack()
    total = np.einsum('kij,kjl->il', e, e)
    return float(np.max(np.abs(total - basis.dim * np.eye(basis.dim))))


def gellmann_completeness_residual(d: int) -> float:
    """sum_i (l_i)_kl (l_i)_pq = 2 (delta_kq delta_lp - delta_kl delta_pq / d)."""
    lam = np.stack([m for _, m in gellmann_matrices(d)])
    lhs = np.einsum('ikl,ipq->klpq', lam, lam)
    eye = np.eye(d)
    rhs = 2.0 * (np.einsum('kq,lp->klpq', eye, eye) - np.einsum('kl,pq->klpq', eye, eye) / d)
    return float(np.max(np.abs(lhs - rhs)))


def weyl_commutation_residual(d: int) -> float:
    """max-norm of XZ - q ZX."""
    z, x = clock_shift(d)
    q = np.exp(2j * np.pi / d)
    return float(np.max(np.abs(x @ z - q * (z @ x))))
