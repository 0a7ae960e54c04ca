class PralibError(Exception):
    """Base class for errors raised by pralib."""


class DimensionError(PralibError, ValueError):
    """A grid is not square, or the orders of two operands do not match."""


class BudgetExceededError(PralibError, RuntimeError):
    """A construction or search would exceed its configured size budget."""


class UnknownSymbolError(PralibError, ValueError):
    def __init__(self, symbol: str, alphabet):
        self.symbol = symbol
        self.alphabet = tuple(alphabet)
        super().__init__(f'Unknown symbol {symbol!r}. alphabet={self.alphabet}')


class RegexSyntaxError(PralibError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f'{message} at position {position}: {text!r}')


class FormatError(PralibError, ValueError):
    """A JSON document does not have the expected shape."""
