"""Exception hierarchy with stable machine-readable codes.

Every domain error carries a ``code`` attribute that the CLI emits in its
error records, so scripts can match on codes instead of messages.
"""


class OrdlabError(Exception):
    """Base class for all domain errors."""

    code = "error"


class NegativeProbability(OrdlabError):
    code = "negative_probability"


class MassOutOfTolerance(OrdlabError):
    code = "mass_out_of_tolerance"


class ArityMismatch(OrdlabError):
    code = "arity_mismatch"


class NonStochasticRow(OrdlabError):
    code = "non_stochastic_row"


class UnknownRole(OrdlabError):
    code = "unknown_role"


class RoleOverlap(OrdlabError):
    code = "role_overlap"


class NotAPermutation(OrdlabError):
    code = "not_a_permutation"


class NonMonotoneTransducer(OrdlabError):
    code = "non_monotone_transducer"


class PositionOutOfRange(OrdlabError):
    code = "position_out_of_range"


class UnsupportedSource(OrdlabError):
    code = "unsupported_source"


class DegenerateRow(OrdlabError):
    code = "degenerate_row"


class EmptySequence(OrdlabError):
    code = "empty_sequence"


class InsufficientData(OrdlabError):
    code = "insufficient_data"


class DegenerateProfile(OrdlabError):
    code = "degenerate_profile"


class UnsupportedModelSize(OrdlabError):
    code = "unsupported_model_size"


class ZeroProbability(OrdlabError):
    code = "zero_probability"


class ZeroTargetMass(OrdlabError):
    code = "zero_target_mass"


class UnknownTarget(OrdlabError):
    code = "unknown_target"


class AllTied(OrdlabError):
    code = "all_tied"


class InputParseError(OrdlabError):
    code = "input_parse_error"
