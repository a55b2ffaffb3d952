"""Exception types shared across the package.

Every error carries a stable machine-readable ``code`` so the CLI can emit
structured error JSON.
"""


class PoslabError(Exception):
    code = "ERROR"


class SingularMetricError(PoslabError):
    code = "SINGULAR_METRIC"


class StencilOutOfChartError(PoslabError):
    code = "STENCIL_OUT_OF_CHART"


class FrameNotNormalizedError(PoslabError):
    code = "FRAME_NOT_NORMALIZED"


class LengthMismatchError(PoslabError):
    code = "LENGTH_MISMATCH"


class DimMismatchError(PoslabError):
    code = "DIM_MISMATCH"


class ParamDomainError(PoslabError):
    code = "PARAM_DOMAIN"


class UnsupportedError(PoslabError):
    code = "UNSUPPORTED"


class NonpositivePolarizationError(PoslabError):
    code = "NONPOSITIVE_POLARIZATION"


class BidegreeError(PoslabError):
    code = "BIDEGREE_OUT_OF_RANGE"
