"""Exception hierarchy shared by every module.

Three families matter to callers:

* ``EscalatePrecision`` subclasses mean "the answer exists but the current
  bit budget cannot resolve it"; drivers catch these and restart from exact
  seeds at doubled precision.
* ``PreconditionError`` subclasses mean the input violates an operation's
  contract (rational point where an irrational one is needed, singular seed,
  ...). Retrying cannot help.
* ``PrecisionExhausted`` / ``CertificationFailed`` are raised once the restart
  budget is spent.
"""


class HartogsError(Exception):
    pass


class EscalatePrecision(HartogsError, ArithmeticError):
    pass


class DivisorStraddlesZero(EscalatePrecision):
    pass


class LogOfNonpositive(EscalatePrecision):
    pass


class TieStraddle(EscalatePrecision):
    """Ball overlaps a half-integer, so the nearest integer is ambiguous."""


class PrecisionExhausted(HartogsError):
    pass


class CertificationFailed(HartogsError):
    def __init__(self, n, link=None):
        self.n = n
        self.link = link
        msg = f"certification failed at n={n}"
        if link:
            msg += f" (link: {link})"
        super().__init__(msg)


class PreconditionError(HartogsError, ValueError):
    pass


class RationalInput(PreconditionError):
    pass


class RationalPoint(PreconditionError):
    pass


class IrrationalPoint(PreconditionError):
    pass


class NonpositiveImTau(PreconditionError):
    pass


class CutoffOverflow(PreconditionError):
    pass


class ZeroLeadingCoefficient(PreconditionError):
    pass


class NotMonic(PreconditionError):
    pass


class DegreeTooSmall(PreconditionError):
    pass


class NotARoot(PreconditionError):
    pass


class SingularInitialRoot(PreconditionError):
    pass


class RootNotCertified(PreconditionError):
    pass


class DiscriminantVanishesIdentically(PreconditionError):
    pass


class ZeroPolynomial(PreconditionError):
    pass


class NotPolynomialInX(PreconditionError):
    pass


class DegreeCapExceeded(PreconditionError):
    pass


class ParseError(HartogsError, ValueError):
    """Syntax error; ``offset`` is a byte offset into the source text."""

    def __init__(self, message, offset, source=None):
        self.offset = offset
        self.source = source
        super().__init__(f"{message} (at byte {offset})")
