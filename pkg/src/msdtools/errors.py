"""Exception hierarchy shared by every msdtools module."""


class MsdToolsError(Exception):
    """Base class for all errors raised by msdtools."""


class SpecError(MsdToolsError):
    """A specification could not be loaded or violates its invariants."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class LookupFailed(MsdToolsError):
    """A category, position or language section is not defined."""


class MsdError(MsdToolsError):
    """An MSD string or feature structure cannot be interpreted."""

    def __init__(self, message, reason="invalid", position=None):
        self.reason = reason
        self.position = position
        super().__init__(message)


class MergeConflict(MsdToolsError):
    """A language section cannot be reconciled with the common tables."""


class LexiconError(MsdToolsError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class CorpusError(MsdToolsError):
    pass


class AlignmentError(MsdToolsError):
    pass
