"""Exception types shared across the package."""


class FrostreeError(Exception):
    """Base class for all frostree errors."""


class SequenceSyntaxError(FrostreeError):
    """Malformed sequence text. Carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class InvalidSequence(FrostreeError):
    """The choice sequence violates a builder's precondition."""


class NotReducible(FrostreeError):
    """The sequence has no leading attach run followed by a freeze."""


class TargetUnreachable(FrostreeError):
    """Iterated reduction ran out of freeze steps before reaching the target prefix."""


class StateSpaceExceeded(FrostreeError):
    """An exact computation would visit more states than the configured cap."""


class SelfGraft(FrostreeError):
    """Attempted to graft a tree onto itself."""


class DomainError(FrostreeError):
    """Numeric argument outside the valid domain."""
