"""Exception hierarchy.

Every error a user can trigger through bad input derives from
:class:`UserError`; the CLI maps those to exit code 2.  Anything else
(including :class:`InternalError`) is treated as an internal failure.
"""


class SuperFermatError(Exception):
    """Base class for all errors raised by this package."""


class UserError(SuperFermatError):
    """Invalid input: wrong signature, parity, syntax, domain, ..."""


class InternalError(SuperFermatError):
    """An internal invariant was violated or a resource cap was hit."""


class DivisionByZero(UserError, ZeroDivisionError):
    pass


class SignatureMismatch(UserError):
    pass


class ParityMismatch(UserError):
    pass


class TheoryMismatch(UserError):
    pass


class OddGeneratorPresent(UserError):
    pass


class InhomogeneousRelation(UserError):
    def __init__(self, message, relation=None, span=None):
        super().__init__(message)
        self.relation = relation
        self.span = span


class NotFiniteDimensional(UserError):
    pass


class NoAugmentation(UserError):
    pass


class NotWeilAlgebra(UserError):
    pass


class AlgebraMismatch(UserError):
    pass


class DomainError(UserError, ArithmeticError):
    """A smooth function was evaluated outside its domain."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node

    @property
    def span(self):
        node = self.node
        while node is not None:
            span = getattr(node, "span", None)
            if span is not None:
                return span
            node = getattr(node, "arg", None)
        return None


class SyntaxProblem(UserError):
    """Base for errors that point into source text."""

    def __init__(self, message, span=None):
        super().__init__(message)
        self.span = span


class LexError(SyntaxProblem):
    def __init__(self, span, found):
        super().__init__(f"unexpected character {found!r}", span)
        self.found = found


class ParseError(SyntaxProblem):
    def __init__(self, span, expected, found=None):
        msg = f"expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg, span)
        self.expected = expected


class UnknownGenerator(SyntaxProblem):
    def __init__(self, name, span=None):
        super().__init__(f"unknown generator {name!r}", span)
        self.name = name


class UnknownFunction(SyntaxProblem):
    def __init__(self, name, span=None):
        super().__init__(f"unknown function {name!r}", span)
        self.name = name


class GroebnerStepLimit(InternalError):
    pass
