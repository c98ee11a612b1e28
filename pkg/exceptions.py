"""Error types raised by the verification pipeline.

Each error carries an ``error_code`` so the CLI and the HTTP service can
report failures the same way.
"""
from typing import Optional


class VerificationError(Exception):
    error_code = 'VERIFICATION_FAILED'


class CertificateInvalidError(VerificationError):
    error_code = 'CERTIFICATE_INVALID'


class RankDeficientError(VerificationError):
    error_code = 'RANK_DEFICIENT'


class UnboundedProblemError(VerificationError):
    error_code = 'LP_UNBOUNDED'


class ConstructionMismatchError(VerificationError):
    error_code = 'CONSTRUCTION_MISMATCH'


class ConvexityRefutedError(VerificationError):
    error_code = 'CONVEXITY_REFUTED'


class SdpConvergenceError(VerificationError):
    error_code = 'SDP_NOT_CONVERGED'


class UndefinedGapError(VerificationError):
    error_code = 'UNDEFINED_GAP'


class FormParseError(VerificationError):
    error_code = 'PARSE_ERROR'

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
