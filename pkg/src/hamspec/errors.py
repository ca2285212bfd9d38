"""Exception hierarchy shared by every hamspec module."""


class HamspecError(Exception):
    """Base class for all errors raised by hamspec."""


class InvalidCoefficients(HamspecError, ValueError):
    pass


class DegenerateCoefficients(HamspecError, ValueError):
    pass


class StructureViolation(HamspecError):
    """``H23 = -H33*H13`` does not hold within tolerance."""

    def __init__(self, residual: float):
        super().__init__(f"|H23 + H33*H13| = {residual:.3e} exceeds tolerance")
        self.residual = residual


class InadmissibleRho(HamspecError, ValueError):
    """rho lies outside the region ``rho < rho_max`` where the tangent forms hold."""

    def __init__(self, rho: float, rho_max: float):
        super().__init__(f"rho={rho!r} is not below rho_max={rho_max!r}")
        self.rho = rho
        self.rho_max = rho_max


class OutsideDomain(HamspecError, ValueError):
    pass


class InvalidSign(HamspecError, ValueError):
    pass


class EmptyInput(HamspecError, ValueError):
    pass


# oracle failures

class OracleError(HamspecError):
    pass


class BlowUpBeforeTEnd(OracleError):
    def __init__(self, t_star: float, trajectory):
        super().__init__(f"solution blows up near t={t_star!r} before reaching t_end")
        self.t_star = t_star
        self.trajectory = trajectory


class NoBlowUpWithinHorizon(OracleError):
    pass


class StepUnderflow(OracleError):
    pass


class MaxStepsExceeded(OracleError):
    pass


class InsufficientSamples(OracleError, ValueError):
    pass


# root finding

class SolveError(HamspecError):
    pass


class RootOutOfClosedFormRange(SolveError):
    """The n-th root sits in [rho0 + rho_star, rho0), where no tangent form applies."""

    def __init__(self, n: int, f_hi: float):
        super().__init__(
            f"F_{n}(rho_hi) = {f_hi:.6g} < 0: root lies beyond the closed-form region"
        )
        self.n = n
        self.f_hi = f_hi


class BracketExpansionFailed(SolveError):
    pass


# config parsing

class ConfigError(HamspecError, ValueError):
    pass


class MissingKey(ConfigError):
    def __init__(self, name: str):
        super().__init__(f"missing key {name!r}")
        self.name = name


class DuplicateKey(ConfigError):
    def __init__(self, name: str):
        super().__init__(f"duplicate key {name!r}")
        self.name = name


class UnknownKey(ConfigError):
    def __init__(self, name: str):
        super().__init__(f"unknown key {name!r}")
        self.name = name


class ParseError(ConfigError):
    def __init__(self, line: int, text: str = ""):
        super().__init__(f"line {line}: cannot parse {text!r}")
        self.line = line
