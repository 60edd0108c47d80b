"""Exception types shared across the package."""


class NumrangeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(NumrangeError):
    """Raised when arguments or input files are invalid.

    Kept distinct from ``ValueError`` so callers (and the CLI, which maps
    it to exit code 2) can tell usage errors from library bugs.
    """


class NormalizationError(InputError):
    """Raised when a reference assignment g fails the sup-norm-one requirement.

    Carries the measured supremum so error messages can report it.
    """

    def __init__(self, measured_sup, msg=None):
        self.measured_sup = float(measured_sup)
        if msg is None:
            msg = (
                "reference assignment must have sup-norm 1, "
                f"measured sup is {self.measured_sup!r}"
            )
        super().__init__(msg)
