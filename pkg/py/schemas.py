"""
Pydantic models for EntangleOps results, state files and reports.

These models give every result a validated, versioned JSON shape; the
CLI only ever writes what these models serialize.
"""

import hashlib
import json
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import (BaseModel, ConfigDict, Field, StrictFloat, StrictInt, ValidationError,
                      field_validator, model_validator)

from numerics import StateValidationError
from states import DensityMatrix, PureState

SCHEMA_VERSION = 1


# Enums for controlled values
class MeasureMethod(str, Enum):
    """How an M_e(n) value was obtained."""
    DIRECT = "direct"
    CHAIN = "chain"
    BRAKET = "braket"
    CLOSED_FORM_GELLMANN = "closed_form_gellmann"
    CLOSED_FORM_WEYL = "closed_form_weyl"
    CONCURRENCE_SQUARED = "concurrence_squared"
    IDENTICAL = "identical"


class CriterionKind(str, Enum):
    UNCERTAINTY_IDENTITY = "uncertainty_identity"
    LOCAL_UNCERTAINTY = "local_uncertainty"
    COLLECTIVE_UNCERTAINTY = "collective_uncertainty"
    PPT = "ppt"


class Verdict(str, Enum):
    ENTANGLED_DETECTED = "entangled_detected"
    NOT_DETECTED = "not_detected"


class BSide(str, Enum):
    """Operator used on the second factor of the local uncertainty criterion."""
    SAME = "same"            # O_iB = O_iA
    CONJUGATE = "conjugate"  # O_iB = entrywise conjugate of O_iA


class StateKind(str, Enum):
    PURE = "pure"
    MIXED = "mixed"


def complex_pairs(values) -> List[List[float]]:
    """Complex numbers as [re, im] pairs of plain floats."""
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=np.complex128).ravel()]


# Result models
class MeasureResult(BaseModel):
    """One evaluation of M_e(n) = 1 - Tr rho_A^n."""
    model_config = ConfigDict(use_enum_values=True)

    n: int = Field(..., ge=2)
    value: float
    method: MeasureMethod
    basis_labels: List[str] = Field(default_factory=list)
    imag_residual: float = Field(0.0, ge=0.0)
    keep: List[int] = Field(default_factory=lambda: [0])
    i_concurrence: Optional[float] = None
    expectations: Optional[List[List[float]]] = None
    per_particle: Optional[List[float]] = None
    warnings: List[str] = Field(default_factory=list)


class CriterionReport(BaseModel):
    """Value, threshold and verdict of one entanglement test."""
    model_config = ConfigDict(use_enum_values=True)

    criterion: CriterionKind
    value: float
    threshold: float
    verdict: Verdict
    basis_name: str = ""
    b_side_convention: Optional[BSide] = None
    parameter: Optional[float] = None
    residual: Optional[float] = None
    n_particles: Optional[int] = None
    variances: Optional[List[float]] = None
    seed: Optional[int] = None
    metadata: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def b_side_only_for_local(self):
        """b_side_convention belongs to the local uncertainty criterion only."""
        if self.b_side_convention is not None and \
                self.criterion != CriterionKind.LOCAL_UNCERTAINTY.value:
            raise ValueError("b_side_convention is only meaningful for local_uncertainty")
        return self


class BasisCheckResult(BaseModel):
    basis: str
    dim: int = Field(..., ge=2)
    probes: int = Field(..., ge=1)
    seed: int
    gram_residual: float
    completeness_residual: float
    sum_rule_residual: Optional[float] = None
    structure_constant_residual: Optional[float] = None
    commutation_residual: Optional[float] = None
    notices: List[str] = Field(default_factory=list)


class SchmidtResult(BaseModel):
    coefficients: List[float]
    rank: int
    entropy_bits: float
    measures: List[MeasureResult]


class SampleResult(BaseModel):
    kind: str
    dims: List[int]
    path: str
    digest: str
    seed: Optional[int] = None
    parameter: Optional[float] = None


# State file model
class StateFile(BaseModel):
    """On-disk JSON form of a pure state or density matrix."""
    model_config = ConfigDict(use_enum_values=True, extra="forbid")

    kind: StateKind
    # strict: quoted numbers and booleans are rejected, JSON ints still pass as floats
    dims: List[StrictInt] = Field(..., min_length=1)
    data: List[List[StrictFloat]]

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, v):
        """Local dimensions must be positive."""
        if not all(d >= 1 for d in v):
            raise ValueError("dims must be positive integers")
        return v

    @field_validator("data")
    @classmethod
    def validate_pairs(cls, v):
        """Every complex number is a two-element [re, im] array."""
        if not all(len(pair) == 2 for pair in v):
            raise ValueError("complex entries must be [re, im] pairs")
        return v

    @model_validator(mode="after")
    def validate_length(self):
        """data length matches kind and product of dims."""
        total = int(np.prod(self.dims))
        expected = total if self.kind == StateKind.PURE.value else total * total
        if len(self.data) != expected:
            raise ValueError("%s state with dims %s needs %d entries, got %d"
                             % (self.kind, self.dims, expected, len(self.data)))
        return self

    def values(self) -> np.ndarray:
        raw = np.asarray(self.data, dtype=float)
        return raw[:, 0] + 1j * raw[:, 1]

    def to_state(self) -> Union[PureState, DensityMatrix]:
        """Build and validate the state; failures raise StateValidationError."""
        values = self.values()
        if self.kind == StateKind.PURE.value:
            return PureState(values, self.dims)
        total = int(np.prod(self.dims))
        return DensityMatrix(values.reshape(total, total), self.dims)

    @classmethod
    def from_state(cls, state: Union[PureState, DensityMatrix]) -> 'StateFile':
        if isinstance(state, PureState):
            return cls(kind=StateKind.PURE, dims=list(state.dims),
                       data=complex_pairs(state.amplitudes))
        return cls(kind=StateKind.MIXED, dims=list(state.dims),
                   data=complex_pairs(state.matrix))

    def to_json(self) -> str:
        # json writes floats with repr, the shortest string that reloads bit-exact
        return json.dumps(self.model_dump(mode="json"), indent=1) + "\n"

    @classmethod
    def parse(cls, text: str) -> 'StateFile':
        try:
            return cls.model_validate_json(text)
        except ValidationError as error:
            first = error.errors()[0]
            location = ".".join(str(part) for part in first.get("loc", ())) or "file"
            raise StateValidationError("invalid state file (%s): %s" % (location, first["msg"]))


def digest(content: bytes) -> str:
    return "sha256:" + hashlib.sha256(content).hexdigest()


def load_state_file(path: str):
    """Read a state file; returns (state, digest of the raw bytes)."""
    try:
        with open(path, 'rb') as state_fp:
            content = state_fp.read()
    except OSError as error:
        raise StateValidationError("cannot read state file %s: %s" % (path, error.strerror))
    try:
        text = content.decode('utf-8')
    except UnicodeDecodeError:
        raise StateValidationError("state file %s is not UTF-8 text" % path)
    return StateFile.parse(text).to_state(), digest(content)


def save_state_file(state: Union[PureState, DensityMatrix], path: str) -> str:
    """Write a state file; returns the digest of what was written."""
    content = StateFile.from_state(state).to_json().encode('utf-8')
    with open(path, 'wb') as state_fp:
        state_fp.write(content)
    return digest(content)


# Report model
class Report(BaseModel):
    """Top-level CLI output."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    tool: str = "entangleops"
    version: str
    command: List[str]
    input_digest: Optional[str] = None
    rng_algorithm: Optional[str] = None
    seeds: List[int] = Field(default_factory=list)
    results: List[Union[MeasureResult, CriterionReport, BasisCheckResult,
                        SchmidtResult, SampleResult]] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    def to_json(self, indent: int = 2) -> str:
        return self.model_dump_json(indent=indent, by_alias=True) + "\n"
