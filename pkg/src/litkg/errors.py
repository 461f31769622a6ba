"""Exception types shared across the pipeline."""


class LitkgError(Exception):
    """Base class for all litkg errors."""


class MalformedLine(LitkgError):
    """Raised on an N-Triples syntax violation in strict mode.

    ``byte_offset`` is the 0-based offset of the offending byte within the
    line (UTF-8 encoding of the line).
    """

    def __init__(self, line_no: int, byte_offset: int, reason: str = ""):
        self.line_no = line_no
        self.byte_offset = byte_offset
        self.reason = reason
        msg = f"malformed triple at line {line_no}, byte {byte_offset}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class UnknownTerm(LitkgError, KeyError):
    """A TermId or term string that is not in the vocabulary."""


class TermKindError(LitkgError):
    """A term was re-interned with a different kind."""


class SeedNotFound(LitkgError):
    """PPR seed id is not a node of the adjacency view."""


class EmptyMatrix(LitkgError):
    """Operation requires a matrix with at least one entry."""


class DimensionMismatch(LitkgError):
    """Two matrices over different vocabulary sizes cannot be combined."""


class NonPositiveCount(LitkgError):
    """Co-occurrence counts fed to the trainer must be strictly positive."""


class DivergenceDetected(LitkgError):
    """A trained parameter became NaN or infinite."""

    def __init__(self, epoch: int, detail: str = ""):
        self.epoch = epoch
        msg = f"non-finite parameter after epoch {epoch}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConfigError(LitkgError):
    """Invalid pipeline configuration; maps to CLI exit code 2."""


class StageError(LitkgError):
    """A pipeline stage failed; maps to CLI exit code 1."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
