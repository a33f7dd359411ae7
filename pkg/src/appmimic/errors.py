"""Exception hierarchy shared across the package.

ValidationError maps to CLI exit code 1, PipelineError (and its
ProtocolError subclass) to exit code 2.
"""


class AppMimicError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(AppMimicError):
    """Bad arguments or malformed input data."""


class CorpusDecodeError(ValidationError):
    """The input byte stream is not valid UTF-8."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class PipelineError(AppMimicError):
    """A pipeline stage or provider failed at runtime."""


class ProtocolError(PipelineError):
    """A remote peer violated the embedding wire contract."""
