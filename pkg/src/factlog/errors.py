"""Exception hierarchy shared across the pipeline."""


class FactlogError(Exception):
    """Base class for all errors raised by this package."""


class ConlluError(FactlogError):
    """Malformed CoNLL-U input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(FactlogError):
    """A parse is not a well-formed tree (missing head, cycle, bad reference)."""


class LookupError_(FactlogError):
    """Unknown token, node, or lemma."""


class AnnotationError(FactlogError):
    """A training annotation cannot be turned into a valence pattern."""


class UnknownWordError(FactlogError):
    """A lemma has no senses in the lexical graph."""


class MixedCoordinationError(FactlogError):
    """A sentence mixes and/or connectives; homogeneous connectives required."""


class UnrecognizedSentenceError(FactlogError):
    """No valence pattern produced a candidate parse for a clause."""


class NonFactualError(FactlogError):
    """No parse of the sentence passed factual validation.

    Carries the best verdict found so the caller can explain the rejection
    and ask the user to rephrase.
    """

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class SafetyError(FactlogError):
    """A rule head or effect variable is not bound by a positive premise."""


class RuleSyntaxError(FactlogError):
    """Malformed rule, fluent statement, or query."""


class CapacityError(FactlogError):
    """A configured size cap (ground instances, variants) was exceeded."""


class UnsupportedProgramError(FactlogError):
    """The program falls outside the solvable fragment (non-stratified naf)."""


class ProviderError(FactlogError):
    """Transport or contract failure of an external provider."""


class ConfigError(FactlogError):
    """Missing or inconsistent configuration."""
