from enum import auto
from enum import Enum


class LowercasedStrEnum(Enum):
    def _generate_next_value_(name, start, count, last_values):
        return name.lower()


class CoeffKind(LowercasedStrEnum):
    DENSITY = auto()
    DISTRIBUTION = auto()


class EvalMode(LowercasedStrEnum):
    RECURRENCE = auto()
    EXPLICIT = auto()


class Algorithm(Enum):
    MOMENT = 1
    DIRECT = 2


class Target(Enum):
    DENSITY = "g"
    DISTRIBUTION = "f"


class BoundFlavor(LowercasedStrEnum):
    POWER_LAW = auto()
    GAMMA_RATIO = auto()


class SamplingMethod(LowercasedStrEnum):
    AUTO = auto()
    GENERIC = auto()
    CLOSED = auto()


class OutputFormat(LowercasedStrEnum):
    CSV = auto()
    JSON = auto()


class Mode(LowercasedStrEnum):
    EXACT = auto()
    TABLE = auto()
    FIT = auto()
    OPTIMIZE = auto()
    SAMPLE = auto()
    ESTIMATE = auto()
