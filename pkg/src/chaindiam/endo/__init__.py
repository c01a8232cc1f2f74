"""Executable endomorphism programs and their verification."""
from .checks import (
    Report,
    SampleSpec,
    check_monotone,
    check_right_inverse,
    construct_left_inverse,
    is_regular_finite,
    is_right_unit_finite,
    lemma_shifting,
    regular_oracle,
    right_inverse_value_check,
    right_inverse_value_report,
)
from .intervals import Unsupported
from .ladder import LadderFold, LadderSection
from .programs import (
    CantorIso,
    CollapseToPoint,
    Compose,
    Const,
    EndoProgram,
    ExtendIdentity,
    GuardedCompose,
    Identity,
    Inject,
    LeftInverseChoice,
    OnFactor,
    PairConst,
    Power,
    PredClampNat,
    PrefixQuotient,
    ProgramError,
    ProjectFirst,
    Regroup,
    RightInverseFromImage,
    StepMap,
    StepThreshold,
    SuccNat,
    SumPiece,
    TableMap,
    Transport,
    conjugate_regroup,
    table_map,
)
from .serialize import program_from_json, program_to_json

__all__ = [
    "Report",
    "SampleSpec",
    "check_monotone",
    "check_right_inverse",
    "construct_left_inverse",
    "is_regular_finite",
    "is_right_unit_finite",
    "lemma_shifting",
    "regular_oracle",
    "right_inverse_value_check",
    "right_inverse_value_report",
    "CantorIso",
    "CollapseToPoint",
    "Compose",
    "Const",
    "EndoProgram",
    "ExtendIdentity",
    "GuardedCompose",
    "Identity",
    "Inject",
    "LeftInverseChoice",
    "OnFactor",
    "PairConst",
    "Power",
    "PredClampNat",
    "PrefixQuotient",
    "ProgramError",
    "ProjectFirst",
    "Regroup",
    "RightInverseFromImage",
    "StepMap",
    "StepThreshold",
    "SuccNat",
    "SumPiece",
    "TableMap",
    "Transport",
    "conjugate_regroup",
    "table_map",
    "Unsupported",
    "LadderFold",
    "LadderSection",
    "program_from_json",
    "program_to_json",
]
