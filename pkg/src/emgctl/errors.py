"""Exception types for the binary codecs and config parsing."""


class FormatError(ValueError):
    """Base class for malformed records, weight files and command frames."""


class BadMagicError(FormatError):
    """Payload does not start with the expected magic bytes."""


class TruncatedError(FormatError):
    """Payload ends before the declared content does."""


class HeaderError(FormatError):
    """A header field holds an unusable value (zero channels, bad version, ...)."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ArchitectureMismatchError(FormatError):
    """Weight file fingerprint does not match the network it is loaded into."""


class FrameSyncError(FormatError):
    """Command frame does not start with the sync byte."""


class FrameChecksumError(FormatError):
    """Command frame checksum does not match its contents."""


class FrameValueError(FormatError):
    """Command frame carries a finger value outside {0, 1}."""


class ConfigError(ValueError):
    """Unusable key=value config file."""
