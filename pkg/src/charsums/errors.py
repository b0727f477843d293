"""Exception hierarchy shared by all charsums modules."""


class CharSumError(Exception):
    """Base class for every error raised by charsums."""


class NotPrime(CharSumError, ValueError):
    pass


class TooLarge(CharSumError, ValueError):
    pass


class ZeroArgument(CharSumError, ValueError):
    pass


class IndexOutOfRange(CharSumError, ValueError):
    pass


class ContextMismatch(CharSumError, ValueError):
    """Operands live in fields with different moduli."""


class ZeroDilation(CharSumError, ValueError):
    pass


class SizeTooLarge(CharSumError, ValueError):
    pass


class TrivialCharacter(CharSumError, ValueError):
    """A nontrivial character was required."""


class KTooLarge(CharSumError, ValueError):
    pass


class ZeroInMultiplicativeSet(CharSumError, ValueError):
    pass


class PreconditionFailed(CharSumError, ValueError):
    pass


class ConvolutionOverflow(CharSumError, ArithmeticError):
    """Exact convolution would exceed the CRT working modulus."""


class InternalError(CharSumError, RuntimeError):
    """A self-check failed; indicates a bug, never a user error."""
