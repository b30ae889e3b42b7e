"""Exception hierarchy shared by all rqa modules."""


class RQAError(Exception):
    """Base class for every error raised by rqa."""


# -- corpus -----------------------------------------------------------------


class ParseError(RQAError):
    pass


class DuplicateRequirementId(ParseError):
    def __init__(self, req_id: str):
        super().__init__(f"duplicate requirement id {req_id!r}")
        self.req_id = req_id


class MalformedHeader(ParseError):
    def __init__(self, line: str):
        super().__init__(f"section header lacks a numeric label: {line!r}")
        self.line = line


class MalformedRequirement(ParseError):
    def __init__(self, req_id: str):
        super().__init__(f"requirement {req_id!r} has an empty body")
        self.req_id = req_id


class SchemaError(ParseError):
    def __init__(self, path: str, detail: str = "missing or mistyped"):
        super().__init__(f"{path}: {detail}")
        self.path = path


# -- lingo ------------------------------------------------------------------


class InvalidK(RQAError):
    def __init__(self, k):
        super().__init__(f"shingle length must be >= 1, got {k}")
        self.k = k


class MixedShingleLength(RQAError):
    def __init__(self, a: int, b: int):
        super().__init__(f"cannot compare shingle sets with k={a} and k={b}")


class EmptySet(RQAError):
    def __init__(self):
        super().__init__("MinHash signature is undefined for an empty shingle set")


# -- taxonomy ---------------------------------------------------------------


class ModelError(RQAError):
    pass


class UnknownAttribute(ModelError):
    def __init__(self, attribute_id: str):
        super().__init__(f"unknown quality attribute {attribute_id!r}")
        self.attribute_id = attribute_id


class DuplicateAttribute(ModelError):
    def __init__(self, attribute_id: str):
        super().__init__(f"duplicate quality attribute {attribute_id!r}")
        self.attribute_id = attribute_id


class DuplicateEdge(ModelError):
    def __init__(self, source: str, target: str):
        super().__init__(f"more than one influence edge {source!r} -> {target!r}")


class SelfLoop(ModelError):
    def __init__(self, attribute_id: str):
        super().__init__(f"influence edge from {attribute_id!r} to itself")
        self.attribute_id = attribute_id


class BallotError(RQAError):
    pass


class BadBallotSum(BallotError):
    def __init__(self, voter_id: str, actual: int, expected: int = 100):
        super().__init__(f"ballot of {voter_id!r} sums to {actual}, expected {expected}")
        self.voter_id = voter_id
        self.actual = actual


class NoBallots(BallotError):
    def __init__(self):
        super().__init__("at least one ballot is required")


# -- operators --------------------------------------------------------------


class UnknownOperator(RQAError):
    def __init__(self, op_id: str):
        super().__init__(f"unknown operator {op_id!r}")
        self.op_id = op_id


class ConfigError(RQAError):
    def __init__(self, key: str, detail: str = "invalid value"):
        super().__init__(f"config {key!r}: {detail}")
        self.key = key


class MissingDictionary(ConfigError):
    def __init__(self, path: str):
        super().__init__("dictionary", f"cannot read {path}")
        self.path = path


class InvalidThreshold(ConfigError):
    def __init__(self, value):
        super().__init__("threshold", f"must satisfy 0 < threshold <= 1, got {value}")


# -- evalharness ------------------------------------------------------------


class NotClean(RQAError):
    def __init__(self, op_id: str, doc_id: str = ""):
        where = f" in {doc_id!r}" if doc_id else ""
        super().__init__(f"corpus is not clean: {op_id} already reports findings{where}")
        self.op_id = op_id
        self.doc_id = doc_id


class InsufficientSites(RQAError):
    def __init__(self, kind: str, wanted: int = 0, available: int = 0):
        super().__init__(f"{kind}: {wanted} injection(s) requested, {available} site(s) available")
        self.kind = kind


class CorpusTooSmall(RQAError):
    def __init__(self, n: int):
        super().__init__(f"correlation needs at least 2 requirements, got {n}")
