# SPDX-License-Identifier: Apache-2.0.

from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit status associated with each error category."""

    SUCCESS = 0
    """Command finished and every check held."""

    DOMAIN = 2
    """Input or precondition error."""

    NUMERIC = 3
    """Numerical procedure failed to converge or factorize."""

    TOLERANCE = 4
    """An acceptance check fell outside its tolerance."""


def from_code(code, message=None):
    """Given an exit code, return the matching exception.

    Args:
        code (int): exit code, usually an :class:`ExitCode` member.
        message (Optional[str]): Message about error.

    Returns:
        AffdimError:
    """
    cls = _CODE_TO_CLASS.get(code)
    if cls is not None:
        return cls(message or cls.__doc__.strip().splitlines()[0])

    return AffdimError(code=code, name='AFFDIM_ERROR_UNKNOWN', message=message or 'Unknown error')


class AffdimError(Exception):
    """
    Base exception class for affdim exceptions.

    Args:
        code (int): Int value of error, used as process exit status.
        name (str): Name of error.
        message (str): Message about error.

    Attributes:
        code (int): Int value of error, used as process exit status.
        name (str): Name of error.
        message (str): Message about error.
    """

    def __init__(self, code, name, message):
        super().__init__(message)
        self.code = code
        self.name = name
        self.message = message

    def __repr__(self):
        return "{0}(name={1}, message={2}, code={3})".format(
            self.__class__.__name__, repr(self.name), repr(self.message), int(self.code))

    def __str__(self):
        return "{}: {}".format(self.name, self.message)


class DomainError(AffdimError):
    """Input violates a precondition."""

    def __init__(self, message):
        super().__init__(ExitCode.DOMAIN, 'AFFDIM_ERROR_DOMAIN', message)


class UnsupportedModelError(DomainError):
    """Model parameters fall outside what the simulators support."""

    def __init__(self, message):
        super().__init__(message)
        self.name = 'AFFDIM_ERROR_UNSUPPORTED_MODEL'


class NotApplicableError(DomainError):
    """Formula family not applicable to this spectrum."""

    def __init__(self, message):
        super().__init__(message)
        self.name = 'AFFDIM_ERROR_NOT_APPLICABLE'


class NumericError(AffdimError):
    """
    Numerical procedure failed.

    Args:
        message (str): Message about error.
        diagnostics (Optional[dict]): Values useful for reproducing the failure.

    Attributes:
        diagnostics (dict): Values useful for reproducing the failure.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(ExitCode.NUMERIC, 'AFFDIM_ERROR_NUMERIC', message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self):
        if not self.diagnostics:
            return super().__str__()
        details = ', '.join('{}={!r}'.format(k, v) for k, v in self.diagnostics.items())
        return "{}: {} ({})".format(self.name, self.message, details)


class ToleranceError(AffdimError):
    """Acceptance tolerance breached."""

    def __init__(self, message):
        super().__init__(ExitCode.TOLERANCE, 'AFFDIM_ERROR_TOLERANCE', message)


_CODE_TO_CLASS = {
    ExitCode.DOMAIN: DomainError,
    ExitCode.NUMERIC: NumericError,
    ExitCode.TOLERANCE: ToleranceError,
}
