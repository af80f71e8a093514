"""Errors raised by the library; each maps to a command exit code."""


class IwasawaError(Exception):
    exit_code = 1

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self):
        return self.message


class ParseError(IwasawaError, ValueError):
    exit_code = 2

    def __init__(self, message, position=None, text=None):
        super().__init__(message, position=position, text=text)
        self.position = position
        self.text = text

    def __str__(self):
        if self.position is None:
            return self.message
        return f"{self.message} (at position {self.position})"


class LevelError(IwasawaError, ValueError):
    exit_code = 2


class PrecisionMismatch(IwasawaError, ValueError):
    exit_code = 2


class InvalidGenerators(IwasawaError, ValueError):
    exit_code = 2


class UnsupportedIdeal(IwasawaError, ValueError):
    exit_code = 2


class CapExceeded(IwasawaError):
    exit_code = 3


class CompatibilityError(IwasawaError):
    """A structural invariant failed; `witness` names the offending generator."""

    exit_code = 4

    def __init__(self, message, witness=None):
        super().__init__(message, witness=witness)
        self.witness = witness

    def __str__(self):
        if self.witness is None:
            return self.message
        return f"{self.message}; witness: {self.witness}"
