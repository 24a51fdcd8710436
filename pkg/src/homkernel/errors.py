from typing import Iterable, Optional


class HomkernelError(Exception):
    """Base class for every error raised by the kernel."""


class DivisionByZero(HomkernelError, ZeroDivisionError):
    pass


class NotPrime(HomkernelError, ValueError):
    pass


class InhomogeneousInput(HomkernelError, ValueError):
    def __init__(self, generator: str, detail: str = ""):
        self.generator = generator
        message = f"inhomogeneous input: {generator}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class RingMismatch(HomkernelError, ValueError):
    pass


class RankMismatch(HomkernelError, ValueError):
    pass


class ZeroDivisorIdeal(HomkernelError, ValueError):
    pass


class ZeroModule(HomkernelError, ValueError):
    pass


class IndexOutOfRange(HomkernelError, IndexError):
    pass


class UnitIdeal(HomkernelError, ValueError):
    pass


class NotRegularSequence(HomkernelError, RuntimeError):
    def __init__(self, step: int, element: str, witness: str):
        self.step = step
        self.element = element
        self.witness = witness
        super().__init__(f"step {step}: {element} is a zero divisor on the quotient (witness {witness})")


class NotMonomial(HomkernelError, ValueError):
    pass


class PdNotOne(HomkernelError, RuntimeError):
    pass


class NotBurch(HomkernelError, RuntimeError):
    pass


class UnknownExampleId(HomkernelError, KeyError):
    pass


class ParseError(HomkernelError):
    def __init__(self, message: str, line: int = 0, column: int = 0, expected: Optional[Iterable[str]] = None):
        self.line = line
        self.column = column
        self.expected = sorted(set(expected or []))
        self.message = message
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


class UndeclaredIdentifier(ParseError):
    pass


class TypeMismatch(ParseError):
    pass
