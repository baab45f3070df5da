"""Exception hierarchy shared by every fincast module."""


class FincastError(Exception):
    """Base class for all errors raised by fincast."""


# -- transport ---------------------------------------------------------------

class NetworkError(FincastError):
    """The request never produced an HTTP response."""

    def __init__(self, url, reason):
        super().__init__(f"network failure for {url}: {reason}")
        self.url = url
        self.reason = reason


class HttpStatusError(FincastError):
    def __init__(self, status, url):
        super().__init__(f"HTTP {status} from {url}")
        self.status = status
        self.url = url


# -- data --------------------------------------------------------------------

class ParseError(FincastError, ValueError):
    pass


class NoData(FincastError, ValueError):
    pass


class InsufficientData(FincastError, ValueError):
    pass


class DegenerateRange(FincastError, ValueError):
    pass


class SingularDesign(FincastError, ArithmeticError):
    pass


class ShapeError(FincastError, ValueError):
    pass


class LengthMismatch(FincastError, ValueError):
    pass


class ConstantActual(FincastError, ValueError):
    """R^2 is undefined when the actual values have zero variance."""


# -- model files -------------------------------------------------------------

class ModelIOError(FincastError, OSError):
    pass


class FormatVersionError(FincastError):
    pass


class ChecksumError(FincastError):
    pass


# -- plotting ----------------------------------------------------------------

class EmptySeries(FincastError, ValueError):
    pass


class NonFiniteValue(FincastError, ValueError):
    pass


# -- agents ------------------------------------------------------------------

class EmptyContent(FincastError):
    pass


class MissingPlaceholder(FincastError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class BackendError(FincastError):
    def __init__(self, message, task_id=None):
        super().__init__(message if task_id is None else f"task {task_id!r}: {message}")
        self.task_id = task_id


class MalformedResponse(BackendError):
    pass


class ToolError(FincastError):
    pass


class NoTasks(FincastError, ValueError):
    pass
