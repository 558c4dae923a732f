"""
Exception hierarchy for cftnvm
Every error derives from CftNvmError and from the builtin callers would expect
"""


class CftNvmError(Exception):
    """Base class for all cftnvm errors"""


class ConfigError(CftNvmError, ValueError):
    """Invalid configuration file or environment override"""


class OrderOverflowError(CftNvmError, ArithmeticError):
    """Common cyclotomic order exceeds the configured cap"""


class ShapeError(CftNvmError, ValueError):
    """Matrix has the wrong shape for the requested operation"""


class FieldError(CftNvmError, ValueError):
    """Invalid finite field parameters or mixed-field operands"""


class CharacterError(CftNvmError, ValueError):
    """Invalid character, subgroup or Gauss-sum arity"""


class RepresentativeError(CftNvmError, ValueError):
    """Invalid orbit representatives or an element outside the subgroup"""


class SymmetryError(CftNvmError, ValueError):
    """Element is zero or not chi-symmetric where that is required"""


class CriterionNotApplicableError(CftNvmError, ValueError):
    """No published closed-form criterion covers the requested instance"""


class SizeCapError(CftNvmError, ValueError):
    """Input exceeds a configured size cap"""


class WitnessError(CftNvmError, ValueError):
    """A violation witness was requested for a nonsingular submatrix"""


class InconsistencyError(CftNvmError, RuntimeError):
    """An exact self-check failed; this signals a bug and must not be ignored"""
