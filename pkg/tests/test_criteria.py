"""
Tests for criteria.py - uncertainty identity, local and collective criteria, PPT and scans.
"""
import numpy as np
import pytest

from bases import gellmann_basis, pauli_basis, weyl_basis
from criteria import (collective_uncertainty_criterion, criterion_kind, criterion_scan,
                      evaluate_criterion, local_uncertainty_criterion, parse_grid, ppt_criterion,
                      uncertainty_identity, uncertainty_identity_report, variance)
from numerics import ArgumentError, DomainError, tensor_all
from schemas import CriterionKind
from states import (DensityMatrix, basis_state, ghz_state, haar_random_pure, product_state,
                    pure_density, random_mixed, random_separable, werner_state)

GRID = [round(0.1 * k, 1) for k in range(11)]


def collective_oracle(rho, basis, n):
    """Brute-force sum of variances of sum_K O_iK."""
    eye = np.eye(basis.dim)
    total = 0.0
    for o in basis:
        s = np.zeros((basis.dim ** n, basis.dim ** n), dtype=complex)
        for slot in range(n):
            factors = [eye] * n
            factors[slot] = o
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            s += term
        mean = np.trace(rho @ s).real
        total += np.trace(rho @ s @ s).real - mean ** 2
    return total


def local_oracle(rho, basis, conjugate):
    total = 0.0
    eye = np.eye(basis.dim)
    for o in basis:
        b = o.conj() if conjugate else o
        diff = np.kron(o, eye) - np.kron(eye, b)
        mean = np.trace(rho @ diff).real
        total += np.trace(rho @ diff @ diff).real - mean ** 2
    return total


def mixed_on(dims, seed):
    total = int(np.prod(dims))
    return DensityMatrix(random_mixed(total, total, seed).matrix, dims, check_positive=False)


@pytest.mark.unit
class TestVariance:
    """Test the variance helper."""

    def test_eigenstate_has_zero_variance(self):
        """Test that an eigenstate has zero variance."""
        rho = np.diag([1.0, 0.0])
        assert variance(rho, np.diag([1.0, -1.0])) == pytest.approx(0.0)

    def test_maximally_mixed(self):
        """Test the maximally mixed value of the variance or criterion."""
        assert variance(np.eye(2) / 2, np.array([[0, 1], [1, 0]])) == pytest.approx(1.0)


@pytest.mark.unit
class TestUncertaintyIdentity:
    """Test sum_i var(O_i) = d - Tr rho^2."""

    def test_pure_qubit(self):
        """Test that a pure qubit sums to d - 1 over the Pauli basis."""
        psi = haar_random_pure([2], 3)
        total, residual = uncertainty_identity(psi, pauli_basis())
        assert total == pytest.approx(1.0, abs=1e-12)
        assert residual <= 1e-12

    def test_maximally_mixed_qutrit(self):
        """Test that I/3 sums to 3 - 1/3 over the Gell-Mann basis."""
        total, _ = uncertainty_identity(DensityMatrix(np.eye(3) / 3, [3]), gellmann_basis(3))
        assert total == pytest.approx(8 / 3, abs=1e-12)

    def test_random_mixed_d4(self):
        """Test the identity residual on a random d=4 mixed state."""
        _, residual = uncertainty_identity(random_mixed(4, 2, 8), gellmann_basis(4))
        assert residual <= 1e-10

    def test_basis_independence_d2(self):
        """Test that Pauli and Gell-Mann bases give the same sum for d=2."""
        rho = random_mixed(2, 2, 4)
        total_p, _ = uncertainty_identity(rho, pauli_basis())
        total_g, _ = uncertainty_identity(rho, gellmann_basis(2))
        assert total_p == pytest.approx(total_g, abs=1e-10)

    def test_non_hermitian_basis(self):
        """Test that a non-Hermitian basis is a DomainError."""
        with pytest.raises(DomainError):
            uncertainty_identity(random_mixed(3, 3, 1), weyl_basis(3))

    def test_dimension_mismatch(self):
        """Test that the basis dimension must match the state."""
        with pytest.raises(ArgumentError):
            uncertainty_identity(random_mixed(3, 3, 1), gellmann_basis(2))

    def test_report_with_keep(self):
        """Test the identity report on a reduced Werner state."""
        report = uncertainty_identity_report(werner_state(0.5), pauli_basis(), keep=[0])
        assert report.criterion == "uncertainty_identity"
        # reduced state of a Werner state is I/2
        assert report.value == pytest.approx(1.5)
        assert report.threshold == 1.0
        assert report.verdict == "not_detected"
        assert len(report.variances) == 4

    def test_report_with_keep_on_pure_state(self, bell):
        """Test that a pure state is reduced straight from its amplitudes."""
        report = uncertainty_identity_report(bell, pauli_basis(), keep=[1])
        assert report.value == pytest.approx(1.5, abs=1e-12)
        assert report.residual <= 1e-12


@pytest.mark.unit
class TestLocalUncertainty:
    """Test the bipartite local uncertainty criterion."""

    def test_bell_conjugate_is_zero(self, bell):
        """Test that the Bell state has zero total variance with conjugated B operators."""
        report = local_uncertainty_criterion(bell, pauli_basis(), "conjugate")
        assert report.value == pytest.approx(0.0, abs=1e-12)
        assert report.threshold == 2.0
        assert report.verdict == "entangled_detected"
        assert report.b_side_convention == "conjugate"

    @pytest.mark.parametrize("p", GRID)
    def test_werner_conjugate(self, p):
        """Test 3(1-p) on the Werner family and detection above p = 1/3."""
        report = local_uncertainty_criterion(werner_state(p), pauli_basis(), "conjugate")
        assert report.value == pytest.approx(3 * (1 - p), abs=1e-10)
        assert (report.verdict == "entangled_detected") == (p > 1 / 3)

    @pytest.mark.parametrize("p", GRID)
    def test_werner_same(self, p):
        """Test 3 - p on the Werner family when B uses the same operators."""
        rho = werner_state(p)
        report = local_uncertainty_criterion(rho, pauli_basis(), "same")
        assert report.value == pytest.approx(local_oracle(rho.matrix, pauli_basis(), False),
                                              abs=1e-10)
        assert report.value == pytest.approx(3 - p, abs=1e-10)
        assert report.verdict == "not_detected"

    @pytest.mark.parametrize("b_side", ["same", "conjugate"])
    def test_maximally_mixed(self, b_side):
        """Test the maximally mixed value of the variance or criterion."""
        report = local_uncertainty_criterion(werner_state(0.0), pauli_basis(), b_side)
        assert report.value == pytest.approx(3.0)
        assert report.verdict == "not_detected"

    def test_default_convention_from_config(self, bell):
        """Test that b_side defaults to the configured convention."""
        assert local_uncertainty_criterion(bell, gellmann_basis(2)).b_side_convention == "conjugate"

    def test_unequal_dimensions(self):
        """Test that unequal local dimensions are refused."""
        with pytest.raises(ArgumentError):
            local_uncertainty_criterion(mixed_on([2, 3], 1), pauli_basis())

    def test_bad_b_side(self, bell):
        """Test that an unknown convention is an ArgumentError."""
        with pytest.raises(ArgumentError):
            local_uncertainty_criterion(bell, pauli_basis(), "mirror")

    def test_qutrit_oracle(self):
        """Test both conventions against explicit operators on two qutrits."""
        rho = mixed_on([3, 3], 5)
        for conjugate, side in ((True, "conjugate"), (False, "same")):
            value = local_uncertainty_criterion(rho, gellmann_basis(3), side).value
            assert value == pytest.approx(local_oracle(rho.matrix, gellmann_basis(3), conjugate),
                                          abs=1e-10)


@pytest.mark.unit
class TestCollectiveUncertainty:
    """Test the collective operator criterion."""

    def test_singlet(self, singlet):
        """Test that the singlet has zero collective variance."""
        report = collective_uncertainty_criterion(singlet, pauli_basis())
        assert report.value <= 1e-12
        assert report.threshold == 2.0
        assert report.verdict == "entangled_detected"
        assert report.n_particles == 2

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_product_sits_on_bound(self, n):
        """Test that product qubit states land exactly on N(d-1)."""
        psi = product_state([[1, 1j]] * n)
        report = collective_uncertainty_criterion(psi, pauli_basis())
        assert report.value == pytest.approx(n, abs=1e-10)
        assert report.verdict == "not_detected"

    def test_product_qutrits(self):
        """Test that a product of two qutrits lands on 2(d-1)."""
        psi = product_state([[1, 2, 0], [0, 1, 1j]])
        report = collective_uncertainty_criterion(psi, gellmann_basis(3))
        assert report.value == pytest.approx(4.0, abs=1e-10)

    def test_ghz_against_oracle(self):
        """Test the three-qubit GHZ value against explicit collective operators."""
        psi = ghz_state(3)
        rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
        report = collective_uncertainty_criterion(psi, pauli_basis())
        assert report.value == pytest.approx(collective_oracle(rho, pauli_basis(), 3), abs=1e-10)
        assert report.threshold == 3.0

    @pytest.mark.parametrize("dims", [[2, 2], [2, 2, 2], [3, 3, 3]])
    def test_paths_agree(self, dims):
        """Test that the full and reduced-state paths agree."""
        rho = mixed_on(dims, 7)
        basis = gellmann_basis(dims[0])
        full = collective_uncertainty_criterion(rho, basis, materialize=True)
        implicit = collective_uncertainty_criterion(rho, basis, materialize=False)
        assert full.value == pytest.approx(implicit.value, abs=1e-10)
        assert full.metadata["path"] == "full"
        assert implicit.metadata["path"] == "implicit"

    def test_large_n_uses_implicit_path(self):
        """Test that many particles switch to the reduced-state path."""
        psi = basis_state([0] * 7, [2] * 7)
        report = collective_uncertainty_criterion(psi, pauli_basis())
        assert report.metadata["path"] == "implicit"
        assert report.value == pytest.approx(7.0, abs=1e-10)

    @pytest.mark.parametrize("dims", [[2, 2, 2], [3, 3, 3]])
    def test_pure_input_matches_density_input(self, dims):
        """Test that a pure state gives the same value as its density matrix."""
        psi = haar_random_pure(dims, 17)
        basis = gellmann_basis(dims[0])
        for materialize in (True, False):
            from_vector = collective_uncertainty_criterion(psi, basis, materialize=materialize)
            from_matrix = collective_uncertainty_criterion(pure_density(psi), basis,
                                                           materialize=materialize)
            assert from_vector.value == pytest.approx(from_matrix.value, abs=1e-10)

    def test_many_qubit_pure_state(self):
        """Test a 16-qubit product state, whose projector would not fit in memory."""
        psi = product_state([[1, 1j]] * 16)
        report = collective_uncertainty_criterion(psi, pauli_basis())
        assert report.metadata["path"] == "implicit"
        assert report.value == pytest.approx(16.0, abs=1e-9)
        assert report.verdict == "not_detected"

    def test_heterogeneous_dims(self):
        """Test that particles of different dimension are refused."""
        with pytest.raises(ArgumentError):
            collective_uncertainty_criterion(mixed_on([2, 3], 2), pauli_basis())

    def test_non_hermitian_basis(self, singlet):
        """Test that a non-Hermitian basis is a DomainError."""
        with pytest.raises(DomainError):
            collective_uncertainty_criterion(singlet, weyl_basis(2))


@pytest.mark.unit
class TestPPT:
    """Test the partial transpose baseline."""

    @pytest.mark.parametrize("p", GRID)
    def test_werner_min_eigenvalue(self, p):
        """Test (1-3p)/4 as the smallest partial transpose eigenvalue."""
        report = ppt_criterion(werner_state(p))
        assert report.value == pytest.approx((1 - 3 * p) / 4, abs=1e-12)

    def test_werner_half(self):
        """Test detection at p = 1/2."""
        report = ppt_criterion(werner_state(0.5))
        assert report.value == pytest.approx(-0.125, abs=1e-12)
        assert report.verdict == "entangled_detected"

    def test_werner_quarter(self):
        """Test no detection at p = 1/4."""
        report = ppt_criterion(werner_state(0.25))
        assert report.value == pytest.approx(1 / 16, abs=1e-12)
        assert report.verdict == "not_detected"

    def test_werner_boundary(self):
        """Test that the partial transpose is singular but not negative at p = 1/3."""
        report = ppt_criterion(werner_state(1 / 3))
        assert report.value == pytest.approx(0.0, abs=1e-12)
        assert report.verdict == "not_detected"

    def test_product_state(self):
        """Test that a product of mixed states is not detected."""
        a = random_mixed(2, 2, 1).matrix
        b = random_mixed(3, 3, 2).matrix
        rho = DensityMatrix(tensor_all([a, b]), [2, 3], check_positive=False)
        assert ppt_criterion(rho).verdict == "not_detected"

    def test_requires_bipartite(self):
        """Test that three factors are refused."""
        with pytest.raises(ArgumentError):
            ppt_criterion(ghz_state(3))


@pytest.mark.unit
class TestScan:
    """Test criterion scans over the Werner family."""

    def test_local_and_ppt_flip_together(self):
        """Test that local and PPT verdicts change between p = 0.3 and 0.4."""
        rows = criterion_scan("werner", ["local", "ppt"], GRID, pauli_basis(), "conjugate")
        assert len(rows) == 2 * len(GRID)
        for kind in ("local_uncertainty", "ppt"):
            detected = {r.parameter: r.verdict == "entangled_detected"
                        for r in rows if r.criterion == kind}
            assert not detected[0.3]
            assert detected[0.4]

    def test_rows_in_grid_order(self):
        """Test that rows follow the grid, then the criteria order."""
        rows = criterion_scan("werner", ["ppt", "local"], [0.5, 0.1])
        assert [(r.parameter, r.criterion) for r in rows] == [
            (0.5, "ppt"), (0.5, "local_uncertainty"), (0.1, "ppt"), (0.1, "local_uncertainty")]

    def test_same_convention_detects_nothing(self):
        """Test that the same-operator convention never detects a Werner state."""
        rows = criterion_scan("werner", ["local"], GRID, pauli_basis(), "same")
        assert all(r.verdict == "not_detected" for r in rows)

    def test_single_point(self):
        """Test a one-point grid."""
        assert len(criterion_scan("werner", ["ppt"], [0.2])) == 1

    def test_empty_grid(self):
        """Test that an empty grid is an ArgumentError."""
        with pytest.raises(ArgumentError):
            criterion_scan("werner", ["ppt"], [])

    def test_unknown_family(self):
        """Test that an unknown family name is refused."""
        with pytest.raises(ArgumentError):
            criterion_scan("isotropic", ["ppt"], [0.2])

    def test_callable_family(self):
        """Test that a callable can stand in for a family name."""
        rows = criterion_scan(werner_state, ["ppt"], [1.0])
        assert rows[0].value == pytest.approx(-0.5)

    def test_parse_grid(self):
        """Test range and list grid strings."""
        assert parse_grid("0:1:0.1") == GRID
        assert parse_grid("0.2,0.5") == [0.2, 0.5]
        assert parse_grid("1:0:0.1") == []
        with pytest.raises(ArgumentError):
            parse_grid("0:1")
        with pytest.raises(ArgumentError):
            parse_grid("0:1:0")


@pytest.mark.unit
class TestDispatch:
    """Test criterion lookup by name."""

    def test_aliases(self):
        """Test short and full criterion names."""
        assert criterion_kind("local") == CriterionKind.LOCAL_UNCERTAINTY
        assert criterion_kind("collective_uncertainty") == CriterionKind.COLLECTIVE_UNCERTAINTY
        with pytest.raises(ArgumentError):
            criterion_kind("bell")

    def test_default_basis(self, singlet):
        """Test that the configured default basis is used."""
        report = evaluate_criterion("collective", singlet)
        assert report.basis_name == "gellmann"

    def test_pure_state_with_keep(self):
        """Test the identity check on one qubit of a GHZ state passed as a vector."""
        report = evaluate_criterion("identity", ghz_state(3), keep=[0])
        assert report.value == pytest.approx(1.5, abs=1e-12)
        assert report.threshold == 1.0


@pytest.mark.slow
class TestEnsembles:
    """Soundness and identity checks over random ensembles."""

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_identity_and_bound(self, d, seeds):
        """Test the identity and the d - 1 bound over random mixed states."""
        bases = [gellmann_basis(d)] + ([pauli_basis()] if d == 2 else [])
        for seed in seeds(100, base=d):
            rho = random_mixed(d, d, seed)
            for basis in bases:
                total, residual = uncertainty_identity(rho, basis)
                assert residual <= 1e-10
                assert total >= d - 1 - 1e-10

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("b_side", ["same", "conjugate"])
    def test_local_soundness(self, d, b_side, seeds):
        """Test that no random separable state is detected by the local criterion."""
        rng = np.random.default_rng(d)
        for seed in seeds(500, base=10 * d):
            rho = random_separable([d, d], int(rng.integers(1, d * d + 1)), seed)
            report = local_uncertainty_criterion(rho, gellmann_basis(d), b_side)
            assert report.verdict == "not_detected"

    @pytest.mark.parametrize("n", [2, 3])
    def test_collective_soundness(self, n, seeds):
        """Test that no random separable state is detected by the collective criterion."""
        rng = np.random.default_rng(n)
        for seed in seeds(500, base=100 * n):
            rho = random_separable([2] * n, int(rng.integers(1, 5)), seed)
            assert collective_uncertainty_criterion(rho, pauli_basis()).verdict == "not_detected"
