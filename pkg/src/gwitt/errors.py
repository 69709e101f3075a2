"""Exception hierarchy; ``exit_code`` is what the CLI returns for each kind."""


class GwittError(Exception):
    exit_code = 2
    kind = "error"


class ValidationError(GwittError):
    kind = "validation"


class GroupError(ValidationError):
    kind = "group"


class TruncationError(ValidationError):
    kind = "truncation"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(ValidationError):
    kind = "parse"


class ContextError(ValidationError):
    kind = "context"


class SizeBoundError(GwittError):
    exit_code = 4
    kind = "resource"


class VerificationError(GwittError):
    exit_code = 3
    kind = "verification"


class DworkError(VerificationError):
    kind = "dwork"

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict
