"""Error taxonomy shared across the package.

Three families, matching the three nonzero exit codes of the command line
tool: trace/parse problems (1), configuration problems (2), and runtime
engine misuse (3).
"""


class TraceError(ValueError):
    """Malformed trace or report text.  Messages name the offending line."""


class ConfigError(ValueError):
    """Invalid mapping, gain, or generator configuration."""


class EngineError(RuntimeError):
    """Session misuse at runtime: bad ticks, non-finite samples, wrong state."""
