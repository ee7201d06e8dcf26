"""Exception hierarchy shared by every stage of the codec."""


class DTLEError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DTLEError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class ParameterError(DTLEError, ValueError):
    pass


class RangeError(DTLEError, ValueError):
    pass


class ShapeError(DTLEError, ValueError):
    pass


class PositionError(DTLEError, IndexError):
    pass


class CorruptionError(DTLEError):
    """The stego data or side information is inconsistent (tampered or wrong parameters)."""


class PixelOverflowError(DTLEError, OverflowError):
    """An embedding step pushed an HSB value outside the plane range."""


class HeaderSpaceError(DTLEError):
    pass


class InsufficientCapacity(DTLEError):
    def __init__(self, needed: int, available: int):
        super().__init__(f"payload needs {needed} bits but the cover only offers {available}")
        self.needed = needed
        self.available = available
