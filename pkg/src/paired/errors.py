"""Exception hierarchy shared across the package.

Every error that crosses a module boundary lives here so the service
layer can map exception type -> HTTP status in one place.
"""


class PairedError(Exception):
    """Base class for all domain errors."""


# -- framework ---------------------------------------------------------------

class ParseError(PairedError):
    """Document is malformed or names an unknown subject."""


class ValidationError(PairedError):
    """Document parsed but violates a structural invariant."""


class UnknownLevel(PairedError):
    """Level ordinal does not exist in the framework."""


# -- library -----------------------------------------------------------------

class MissingManifest(PairedError):
    """Bundle directory lacks book.json."""


class BrokenImageRef(PairedError):
    """A page references an image that is not in the bundle."""


class VisualContextMismatch(PairedError):
    """visual_context.json disagrees with the book structure."""


class UnknownBook(PairedError):
    pass


class UnknownPage(PairedError):
    pass


# -- content generation ------------------------------------------------------

class ConceptNotInFramework(PairedError):
    """Concept id does not resolve in the active framework."""


class ProviderUnavailable(PairedError):
    """LLM endpoint unreachable or misconfigured."""


class GenerationFailed(PairedError):
    """Provider output still invalid after the retry budget.

    Carries the last validation report, and for bulk generation the
    page indices that failed.
    """

    def __init__(self, message: str, report=None, failed_pages=None):
        super().__init__(message)
        self.report = report
        self.failed_pages = list(failed_pages or [])


# -- activity editor ---------------------------------------------------------

class UnknownActivity(PairedError):
    pass


class ActivityLaunched(PairedError):
    """Write attempted on a launched (immutable) activity."""


class ContentInvalid(PairedError):
    """Edit or launch rejected; carries the validation report."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


# -- session engine ----------------------------------------------------------

class ActivityNotLaunched(PairedError):
    """Sessions may only reference launched activity snapshots."""


class SessionCompleted(PairedError):
    """Operation on a session that already reached Completed."""


class UnknownSession(PairedError):
    pass


class DelegationLockedInTakeover(PairedError):
    """set_delegation is only legal in the two led modes."""


class CorruptLog(PairedError):
    """Event log has a seq gap or an event illegal in its state."""


# -- robot / tts -------------------------------------------------------------

class AdapterUnreachable(PairedError):
    """Robot adapter could not accept the command; session unchanged."""


class TtsUnavailable(PairedError):
    """TTS provider failed; caller degrades to text passthrough."""


# -- service / storage -------------------------------------------------------

class ConfigError(PairedError):
    pass


class StorageUnavailable(PairedError):
    pass


class NotFound(PairedError):
    pass


class ImmutableViolation(PairedError):
    """New version written for a record that is frozen."""


class ScriptError(PairedError):
    """Simulation script failed to parse or is out of order."""
