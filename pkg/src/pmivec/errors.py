"""Exception types shared across the package."""


class PmivecError(Exception):
    """Base class for all errors raised by this package."""


class EmptyVocabularyError(PmivecError):
    """No token survived vocabulary construction."""


class ConfigError(PmivecError):
    """Invalid or incompatible configuration."""


class IntegrityError(PmivecError):
    """Counts, marginals, or files contradict each other."""


class EvaluationError(PmivecError):
    """An evaluation has no defined result (e.g. zero coverage)."""


class ParseError(PmivecError):
    """A data file is malformed. Carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no
