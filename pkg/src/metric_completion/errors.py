"""Exception hierarchy shared by every module."""


class MetricCompletionError(Exception):
    """Base class; ``code`` is the stable name reported by the CLI."""

    @property
    def code(self):
        return type(self).__name__


class MixedRings(MetricCompletionError):
    pass


class WrongRing(MetricCompletionError):
    pass


class UnsupportedRing(MetricCompletionError):
    pass


class UnsupportedField(MetricCompletionError):
    pass


class ProjectiveArgument(MetricCompletionError):
    pass


class InjectiveArgument(MetricCompletionError):
    pass


class NonIntertwining(MetricCompletionError):
    pass


class NotRepresentable(MetricCompletionError):
    pass


class NotCountablyGenerated(MetricCompletionError):
    pass


class NotFinitelyGenerated(MetricCompletionError):
    """Raised when a Hom group out of a formal colimit object is requested."""


class InvalidSchedule(MetricCompletionError):
    pass


class UnverifiableWitness(MetricCompletionError):
    pass


class WitnessLost(MetricCompletionError):
    pass


class UnsupportedStart(MetricCompletionError):
    pass


class UnsupportedFamily(MetricCompletionError):
    pass


class BoundsExceeded(MetricCompletionError):
    pass


class SpecParseError(MetricCompletionError):
    def __init__(self, message, line=0, column=0, rule=""):
        super().__init__(f"line {line}, column {column}: {message} [{rule}]")
        self.line = line
        self.column = column
        self.rule = rule
        self.detail = message
