"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ResourceError -> 1, everything
else under LexiforgeError -> 2.
"""


class LexiforgeError(Exception):
    """Base class for all lexiforge errors."""


class ResourceError(LexiforgeError):
    """A required file could not be read, written, or parsed."""


class LexiconFormatError(ResourceError):
    """The lexicon file violates the record format."""


class OntologyFormatError(ResourceError):
    """The ontology file is malformed, cyclic, or has dangling references."""


class CorpusError(ResourceError):
    """The corpus file could not be read or indexed."""


class TranscriptError(ResourceError):
    """A replay transcript file is missing or malformed."""


class ConfigError(LexiforgeError):
    """A run was configured inconsistently."""


class DuplicateSenseError(LexiforgeError):
    """A sense id is already present in the lexicon."""


class UnknownConceptError(LexiforgeError):
    """A concept name does not exist in the ontology."""


class MissingSlotError(LexiforgeError):
    """A concept has no constraint slot for the requested case role."""


class TemplateBuildError(LexiforgeError):
    """A semantic template could not be derived from a seed sense."""


class RenderError(LexiforgeError):
    """A prompt template could not be rendered strictly."""


class ResponseFormatError(LexiforgeError):
    """An LLM response did not contain the expected structure."""


class BackendError(LexiforgeError):
    """An LLM backend failed to produce a usable response."""


class UnrecordedPromptError(BackendError):
    """A replay backend was asked a prompt absent from its transcript.

    Carries the prompt's content digest so fixtures can be updated.
    """

    def __init__(self, message: str, prompt_digest: str):
        super().__init__(message)
        self.prompt_digest = prompt_digest
