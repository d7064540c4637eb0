"""Exception hierarchy.

Every error carries a ``code`` (its class name) and an ``exit_code`` used by
the command line tool: 2 for usage errors, 3 for bad data, 4 when a resource
cap is exceeded.
"""


class NetClustError(Exception):
    exit_code = 3

    @property
    def code(self) -> str:
        return type(self).__name__


class DataError(NetClustError):
    exit_code = 3


class UsageError(NetClustError):
    exit_code = 2


class ResourceCapExceeded(NetClustError):
    exit_code = 4


# network validation
class ShapeMismatch(DataError):
    pass


class NonZeroDiagonal(DataError):
    pass


class NonPositiveOffDiagonal(DataError):
    pass


class NonFinite(DataError):
    pass


class DuplicateLabel(DataError):
    pass


class UnknownLabel(DataError):
    pass


class EmptySubset(DataError):
    pass


class NonPositiveScale(DataError):
    pass


class SingletonNetwork(DataError):
    pass


class NotSymmetric(DataError):
    pass


class NotUltrametric(DataError):
    pass


class InvalidDendrogram(DataError):
    pass


class InvalidPartition(DataError):
    pass


# methods
class InvalidHopBound(UsageError):
    pass


class InvalidMethodSpec(UsageError):
    pass


# representers
class InvalidSize(DataError):
    pass


class NonPositiveWeight(DataError):
    pass


class InvalidRepresenter(DataError):
    pass


class NotWeaklyConnected(DataError):
    pass


class EmptyFamily(DataError):
    pass


class InvalidNodeMap(DataError):
    pass


class RepresenterTooLarge(ResourceCapExceeded):
    pass


# metric
class InvalidCorrespondence(DataError):
    pass


class InstanceTooLarge(ResourceCapExceeded):
    pass


# audits
class NotDissimilarityReducing(DataError):
    pass


class UnknownProperty(UsageError):
    pass


# ingestion
class ParseError(DataError):
    pass


class ZeroColumnSum(DataError):
    pass


class NegativeSimilarity(DataError):
    pass


class ZeroSimilarity(DataError):
    pass
