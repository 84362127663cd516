"""Exception hierarchy shared by all pipeline stages."""


class TeeportError(Exception):
    """Base class for every error raised by this package."""


class WorkspaceError(TeeportError):
    pass


class ConfigConflictError(WorkspaceError):
    """Re-opening a workspace with a config that differs from the stored one."""


class InvariantError(TeeportError):
    """A domain value failed its own type invariants."""


class AnalysisError(TeeportError):
    pass


class UnsupportedLanguageError(AnalysisError):
    pass


class GatewayError(TeeportError):
    pass


class BackendUnreachableError(GatewayError):
    """Transport failed for every attempt of the bounded retry policy."""


class ReplayDivergenceError(GatewayError):
    """A replayed prompt did not match the recorded transcript."""

    def __init__(self, message: str, turn_index: int):
        super().__init__(message)
        self.turn_index = turn_index


class PromptBindingError(GatewayError):
    """A template was rendered without all of its required bindings."""

    def __init__(self, template_id: str, missing: list[str]):
        super().__init__(f"template {template_id!r} missing bindings: {missing}")
        self.template_id = template_id
        self.missing = missing


class ClassificationError(TeeportError):
    """Round-1 reply could not be normalised to yes/no; function is UNRESOLVED."""


class CoverageError(TeeportError):
    pass


class DriverBuildError(TeeportError):
    """A generated execution driver failed to build or import."""


class ToolchainError(TeeportError):
    """The native toolchain is missing or broken on this host.

    Distinct from a compile failure, which is a CompileReport value.
    """


class TransformError(TeeportError):
    pass


class ValidationError(TeeportError):
    pass


class UnshimmableRandomnessError(TeeportError):
    """The function draws randomness through an API with no mockable entry."""


class VectorFormatError(TeeportError):
    """Malformed typed-literal input vector text."""


class EnclaveError(TeeportError):
    pass


class LaunchRefusedError(EnclaveError):
    """Image signature did not verify; the enclave was never started."""


class AttestationError(EnclaveError):
    pass


class ChannelError(EnclaveError):
    pass


class ChannelNotBoundError(ChannelError):
    """Server presented a channel key that is not the one bound in the quote."""


class ProtocolViolationError(EnclaveError):
    """A frame arrived in a session state that does not permit it."""


class EnclaveCallError(EnclaveError):
    """The enclave reported an execution error for a remote call."""


class BenchmarkError(TeeportError):
    pass


class StatsError(TeeportError):
    pass
