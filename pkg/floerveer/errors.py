""" Custom exceptions """


class FloerveerError(Exception):
    """ Base floerveer error """

    def __init__(self, message: str):
        """ Exception constructor """
        self.message = message

    def __str__(self):
        return self.message


# INPUT ERRORS
class SurfaceSyntaxError(FloerveerError):
    """ A surface file could not be parsed. """

    def __init__(self, message: str, line: int = None, column: int = None):
        """ Exception constructor """

        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"Syntax error{where}: {message}")


class DuplicateId(FloerveerError):
    """ Two records of one section share an id. """

    def __init__(self, section: str, ident: int):
        """ Exception constructor """

        self.section = section
        self.ident = ident
        super().__init__(f"Duplicate id {ident} in section '{section}'")


class MissingSection(FloerveerError):
    """ A required top-level section is absent. """

    def __init__(self, section: str):
        """ Exception constructor """

        self.section = section
        super().__init__(f"Missing section '{section}'")


class MalformedSignature(FloerveerError):
    """ Not a valid taut isomorphism signature. """

    def __init__(self, signature: str, reason: str):
        """ Exception constructor """

        self.signature = signature
        super().__init__(f"Malformed signature {signature!r}: {reason}")


class UnsupportedVersion(FloerveerError):
    """ Signature uses an encoding feature this decoder does not read. """

    def __init__(self, signature: str, reason: str):
        """ Exception constructor """

        self.signature = signature
        super().__init__(f"Unsupported signature {signature!r}: {reason}")


class NonVeeringInput(FloerveerError):
    """ Triangulation data inconsistent with a veering structure. """

    def __init__(self, reason: str):
        """ Exception constructor """

        super().__init__(f"Not a taut veering triangulation: {reason}")


# SURFACE VIOLATIONS
class SurfaceViolation(FloerveerError):
    """ One violated axiom of a veering branched surface. """

    kind = "SurfaceViolation"

    def __init__(self, detail: str):
        """ Exception constructor """

        self.detail = detail
        super().__init__(f"{self.kind}: {detail}")


class DanglingId(SurfaceViolation):
    """ A reference to an id that does not exist. """

    kind = "DanglingId"


class ValenceViolation(SurfaceViolation):
    """ A triple point is not (2,2)-valent. """

    kind = "ValenceViolation"


class EdgeIncidenceViolation(SurfaceViolation):
    """ An edge is not on exactly three sector sides, one of them a bottom side. """

    kind = "EdgeIncidenceViolation"


class CornerCensusViolation(SurfaceViolation):
    """ Corner counts at a triple point are not (top 1, bottom 1, side 2). """

    kind = "CornerCensusViolation"


class DiamondViolation(SurfaceViolation):
    """ A sector boundary is not a diamond. """

    kind = "DiamondViolation"


class SmoothPairingViolation(SurfaceViolation):
    """ Smooth pairing missing, not a bijection, or contradicted by a sector path. """

    kind = "SmoothPairingViolation"


class MonochromeBranchLoop(SurfaceViolation):
    """ A branch loop meets triple points of a single color. """

    kind = "MonochromeBranchLoop"


class ColoringViolation(SurfaceViolation):
    """ Triple point colors disagree with the toggle/fan structure of the sectors. """

    kind = "ColoringViolation"


class InvalidSurface(FloerveerError):
    """ Validation failed; carries every violation found. """

    def __init__(self, violations: list):
        """ Exception constructor """

        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"Invalid veering branched surface ({len(self.violations)} violations): {lines}")


# COMPUTATION ERRORS
class NotACycle(FloerveerError):
    """ An edge vector with nonzero boundary. """

    def __init__(self, vertex: int, boundary: int):
        """ Exception constructor """

        super().__init__(f"Not a cycle: boundary {boundary} at vertex {vertex}")


class InternalInconsistency(FloerveerError):
    """ A construction produced data violating its own conventions. """


class SearchBudgetExceeded(FloerveerError):
    """ An enumeration hit its configured cap. """

    def __init__(self, what: str, budget: int):
        """ Exception constructor """

        self.budget = budget
        super().__init__(f"Search budget exceeded while enumerating {what} (budget {budget})")


class GcdBudgetExceeded(FloerveerError):
    """ Too many maximal minors for the configured budget. """

    def __init__(self, minors: int, budget: int):
        """ Exception constructor """

        super().__init__(f"{minors} maximal minors exceed the gcd budget of {budget}")


class NotConnecting(FloerveerError):
    """ Domain does not satisfy the corner equations for the given states. """


class NotEmbedded(FloerveerError):
    """ Domain coefficients are not all 0 or 1, or it covers a basepoint. """


class NotConeSupported(FloerveerError):
    """ Polynomial has a term of negative functional degree. """


class NotUnitConstantTerm(FloerveerError):
    """ Degree-zero part of a polynomial is not +1 or -1. """


class NoPositiveFunctional(FloerveerError):
    """ No functional is positive on every cycle class. """


# CLI ERRORS
class ConfigError(FloerveerError):
    """ Invalid run configuration. """


class IoError(FloerveerError):
    """ Input or output path problem. """
