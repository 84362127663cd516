"""teeport: identify sensitive leaf functions in managed-language projects,
transform them into native implementations, validate equivalence
differentially, and link them into a simulated trusted execution
environment with attestation."""

__version__ = "0.1.0"

from .config import PipelineConfig
from .workspace import init_workspace, open_workspace, Workspace

__all__ = [
    "PipelineConfig",
    "init_workspace",
    "open_workspace",
    "Workspace",
    "__version__",
]
