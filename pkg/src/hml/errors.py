"""Exception hierarchy for hml.

Every error raised on purpose by the library derives from :class:`HmlError`,
so callers (the CLI in particular) can catch one type and map it to an exit
code.
"""


class HmlError(Exception):
    """Base class for library errors."""

    code = "hml-error"


class InvalidRange(HmlError, ValueError):
    code = "invalid-range"


class InvalidSize(HmlError, ValueError):
    code = "invalid-size"


class DomainMismatch(HmlError, ValueError):
    code = "domain-mismatch"


class NonFiniteSample(HmlError, ValueError):
    code = "non-finite-sample"


class GridMismatch(HmlError, ValueError):
    code = "grid-mismatch"


class NegativeDegree(HmlError, ValueError):
    code = "negative-degree"


class NotUnimodular(HmlError, ValueError):
    code = "not-unimodular"


class NoConvergence(HmlError, RuntimeError):
    code = "no-convergence"


class SingularNode(HmlError, ValueError):
    code = "singular-node"


class StepMisaligned(HmlError, ValueError):
    code = "step-misaligned"


class NegativeTime(HmlError, ValueError):
    code = "negative-time"


class InsufficientOrbit(HmlError, ValueError):
    code = "insufficient-orbit"


class UnboundedSymbol(HmlError, ValueError):
    code = "unbounded-symbol"


class NotAnalytic(HmlError, ValueError):
    code = "not-analytic"


class UnknownExperiment(HmlError, KeyError):
    code = "unknown-experiment"

    def __str__(self):  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else self.code


class ConfigInvalid(HmlError, ValueError):
    code = "config-invalid"
