"""Exception hierarchy shared by all layers."""


class MwktError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1


class UsageError(MwktError):
    exit_code = 2


class MalformedSpec(UsageError):
    def __init__(self, spec, pos, msg):
        self.spec = spec
        self.pos = pos
        super().__init__(f"malformed ring spec {spec!r} at position {pos}: {msg}")


class NotIrreducible(UsageError):
    pass


class NotLocal(UsageError):
    pass


class TooLarge(MwktError):
    """A resource cap was exceeded; `cap` names the cap."""

    exit_code = 3

    def __init__(self, cap, value, limit):
        self.cap = cap
        self.value = value
        self.limit = limit
        super().__init__(f"cap {cap} exceeded: {value} > {limit}")


class RingMismatch(MwktError):
    pass


class BadWitness(MwktError):
    pass


class BadLambda(MwktError):
    pass


class IllFormedHom(MwktError):
    pass


class CharTwo(MwktError):
    pass


class TransversalNotFound(MwktError):
    def __init__(self, msg, covered=None):
        self.covered = covered or []
        super().__init__(msg)
