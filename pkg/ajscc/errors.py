"""Exceptions raised by the ajscc library and command-line tool."""


class AjsccError(Exception):
    """Base class for all errors reported by ajscc."""


class ValidationError(AjsccError, ValueError):
    """Raised when a configuration value is invalid.

    The 'field' attribute names the offending configuration field.
    """

    def __init__(self, field, message):
        # type: (str, str) -> None
        super(ValidationError, self).__init__('%s: %s' % (field, message))
        self.field = field
        self.message = message

    def __reduce__(self):
        # errors raised in worker processes are pickled back to the parent
        return (self.__class__, (self.field, self.message))


class SourceRangeError(ValidationError):
    """Raised when a source component lies outside [0, R_k]."""


class SearchSpaceError(AjsccError):
    """Raised when an exhaustive stage-count search would exceed its budget."""


class CapacityError(AjsccError):
    """Raised when more nodes are requested than the band can hold."""

    def __init__(self, n_node, n_node_max):
        # type: (int, int) -> None
        super(CapacityError, self).__init__(
            'n_node=%d exceeds the maximum of %d nodes for this band and window'
            % (n_node, n_node_max))
        self.n_node = n_node
        self.n_node_max = n_node_max

    def __reduce__(self):
        return (self.__class__, (self.n_node, self.n_node_max))


class ResolutionError(AjsccError):
    """Raised when the observation window cannot resolve adjacent positions."""


class DistanceError(ValidationError):
    """Raised for a distance shorter than the path-loss reference distance."""


class SpecError(AjsccError):
    """Raised on any invalid experiment specification.

    The 'field' attribute names the offending key.
    """

    def __init__(self, field, message):
        # type: (str, str) -> None
        super(SpecError, self).__init__('%s: %s' % (field, message))
        self.field = field
        self.message = message

    def __reduce__(self):
        return (self.__class__, (self.field, self.message))
