"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, RegimeError and its
subclasses -> 3, SizeLimitError -> 4. Plain ValueError from library misuse
(mismatched layouts, bad indices) is a bug in the caller, not a runtime
condition, and is not translated.
"""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration input (file, JSON, CLI args)."""


class RegimeError(RuntimeError):
    """The requested computation left its validity regime."""


class CalibrationError(RegimeError):
    """Phase-pattern fit residual too large to trust the extracted rates."""


class ConvergenceError(RegimeError):
    """Fock-cutoff convergence check failed; results would be unreliable."""


class EvolutionError(RegimeError):
    """State norm drifted beyond tolerance during time stepping."""


class SizeLimitError(RuntimeError):
    """Requested system size exceeds the configured limits."""
