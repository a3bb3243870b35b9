"""
Tests for schemas.py - result models, state files and reports.
"""
import json

import numpy as np
import pytest
from pydantic import ValidationError

from numerics import StateValidationError
from schemas import (CriterionReport, MeasureResult, Report, StateFile, complex_pairs,
                     load_state_file, save_state_file)
from states import DensityMatrix, PureState, haar_random_pure, random_mixed


@pytest.mark.unit
class TestStateFile:
    """Test the on-disk state format."""

    def test_sampled_state_reloads_bit_for_bit(self, tmp_path):
        """Test that a sampled pure state survives save and load exactly."""
        psi = haar_random_pure([3, 2], 99)
        path = str(tmp_path / "psi.json")
        written = save_state_file(psi, path)
        loaded, read = load_state_file(path)
        assert isinstance(loaded, PureState)
        assert np.array_equal(loaded.amplitudes, psi.amplitudes)
        assert loaded.dims == (3, 2)
        assert written == read

    def test_mixed_state_reloads_bit_for_bit(self, tmp_path):
        """Test that a sampled density matrix survives save and load exactly."""
        rho = random_mixed(3, 3, 5)
        path = str(tmp_path / "rho.json")
        save_state_file(rho, path)
        loaded, _ = load_state_file(path)
        assert isinstance(loaded, DensityMatrix)
        assert np.array_equal(loaded.matrix, rho.matrix)

    def test_layout(self):
        """Test the kind, dims and data keys of the written JSON."""
        text = StateFile(kind="pure", dims=[2], data=[[1.0, 0.0], [0.0, 0.0]]).to_json()
        assert json.loads(text) == {"kind": "pure", "dims": [2], "data": [[1.0, 0.0], [0.0, 0.0]]}

    def test_wrong_length(self):
        """Test that data must hold one pair per amplitude."""
        with pytest.raises(StateValidationError, match="needs 4 entries"):
            StateFile.parse('{"kind": "pure", "dims": [2, 2], "data": [[1, 0]]}')

    def test_bad_pair(self):
        """Test that complex entries must have exactly two parts."""
        with pytest.raises(StateValidationError):
            StateFile.parse('{"kind": "pure", "dims": [1], "data": [[1, 0, 0]]}')

    def test_unknown_kind(self):
        """Test that only pure and mixed kinds are accepted."""
        with pytest.raises(StateValidationError):
            StateFile.parse('{"kind": "thermal", "dims": [1], "data": [[1, 0]]}')

    def test_extra_field_rejected(self):
        """Test that unknown top-level keys are rejected."""
        with pytest.raises(StateValidationError, match="extra"):
            StateFile.parse('{"kind": "pure", "dims": [1], "data": [[1, 0]], "extra": 1}')

    def test_quoted_numbers_rejected(self):
        """Test that string-typed dims and data are not coerced to numbers."""
        with pytest.raises(StateValidationError):
            StateFile.parse('{"kind":"pure","dims":["2"],"data":[["1","0"],[false,"0"]]}')

    def test_quoted_data_rejected(self):
        """Test that a quoted amplitude is rejected even with valid dims."""
        with pytest.raises(StateValidationError, match="data"):
            StateFile.parse('{"kind": "pure", "dims": [2], "data": [["1", 0], [0, 0]]}')

    def test_quoted_dims_rejected(self):
        """Test that a quoted local dimension is rejected."""
        with pytest.raises(StateValidationError, match="dims"):
            StateFile.parse('{"kind": "pure", "dims": ["2"], "data": [[1, 0], [0, 0]]}')

    def test_boolean_entries_rejected(self):
        """Test that true and false are not read as 1 and 0."""
        with pytest.raises(StateValidationError, match="data"):
            StateFile.parse('{"kind": "pure", "dims": [2], "data": [[true, 0], [false, 0]]}')
        with pytest.raises(StateValidationError, match="dims"):
            StateFile.parse('{"kind": "pure", "dims": [true], "data": [[1, 0]]}')

    def test_integer_entries_accepted(self):
        """Test that JSON integers are valid amplitudes."""
        psi = StateFile.parse('{"kind": "pure", "dims": [2], "data": [[1, 0], [0, 0]]}').to_state()
        assert np.array_equal(psi.amplitudes, [1, 0])

    def test_invalid_json(self):
        """Test that truncated JSON is a state error."""
        with pytest.raises(StateValidationError):
            StateFile.parse('{"kind": ')

    def test_unnormalized_state(self):
        """Test that an unnormalized vector fails when the state is built."""
        with pytest.raises(StateValidationError):
            StateFile.parse('{"kind": "pure", "dims": [2], "data": [[1, 0], [1, 0]]}').to_state()

    def test_missing_file(self, tmp_path):
        """Test that an unreadable path is a state error."""
        with pytest.raises(StateValidationError):
            load_state_file(str(tmp_path / "missing.json"))


@pytest.mark.unit
class TestResultModels:
    """Test result model validation."""

    def test_measure_order(self):
        """Test that M_e orders below 2 are rejected."""
        with pytest.raises(ValidationError):
            MeasureResult(n=1, value=0.0, method="direct")

    def test_enum_values_serialize_as_strings(self):
        """Test that enum fields dump as plain strings."""
        result = MeasureResult(n=2, value=0.5, method="chain")
        assert result.model_dump()["method"] == "chain"

    def test_b_side_only_for_local(self):
        """Test that b_side_convention is refused outside the local criterion."""
        with pytest.raises(ValidationError):
            CriterionReport(criterion="ppt", value=0.0, threshold=0.0, verdict="not_detected",
                            b_side_convention="same")

    def test_complex_pairs(self):
        """Test conversion of complex values to [re, im] pairs."""
        assert complex_pairs([1 + 2j, -0.5]) == [[1.0, 2.0], [-0.5, 0.0]]


@pytest.mark.unit
class TestReport:
    """Test the top-level report."""

    def make(self):
        result = CriterionReport(criterion="local_uncertainty", value=1.5, threshold=2.0,
                                 verdict="entangled_detected", basis_name="pauli",
                                 b_side_convention="conjugate")
        return Report(version="1.0.0", command=["criterion", "--type", "local"], results=[result])

    def test_schema_field(self):
        """Test the schema, tool and result keys of a report."""
        data = json.loads(self.make().to_json())
        assert data["schema"] == 1
        assert data["tool"] == "entangleops"
        assert data["results"][0]["b_side_convention"] == "conjugate"

    def test_deterministic(self):
        """Test that equal reports serialize identically."""
        assert self.make().to_json() == self.make().to_json()

    def test_indent(self):
        """Test that the indent argument reaches the JSON output."""
        assert self.make().to_json(indent=4).splitlines()[1].startswith("    ")
