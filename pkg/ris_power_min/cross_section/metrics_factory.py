"""
Factory methods for the counters of solver runs, solution statuses and result rows.
Each counter has exactly one label; all values of its label enum are registered at creation
so that a scrape reports zeros instead of missing series.
"""
from enum import Enum
from typing import Type

from prometheus_client import CollectorRegistry, REGISTRY, Counter

EVENT_LABEL_NAME = 'type'
OBJECT_LABEL_NAME = 'action'
OUTCOME_LABEL_NAME = 'status'


class LabelEnum(Enum):
    """
    Base of the label value enums.
    """


class EventCounterTypes(LabelEnum):
    """
    Call phases of a counted function.
    AVAILABLE: call started
    FAILURE: call raised
    SUCCESSFUL: call returned
    """
    AVAILABLE = 'available'
    FAILURE = 'failure'
    SUCCESSFUL = 'successful'


class ObjectCounterTypes(LabelEnum):
    """
    What happened to a result row: written to a result file or dropped while reading one.
    """
    STORED = 'stored'
    SKIPPED = 'skipped'


class OutcomeCounterTypes(LabelEnum):
    """
    Statuses of beamforming solutions, spelled as in the result files.
    """
    OPTIMAL = 'Optimal'
    FEASIBLE = 'Feasible'
    INFEASIBLE = 'Infeasible'
    NUMERICAL_FAILURE = 'NumericalFailure'


LABEL_NAMES: dict[Type[LabelEnum], str] = {
    EventCounterTypes: EVENT_LABEL_NAME,
    ObjectCounterTypes: OBJECT_LABEL_NAME,
    OutcomeCounterTypes: OUTCOME_LABEL_NAME,
}


def create_event_counter(name: str, description: str, registry: CollectorRegistry = REGISTRY) -> Counter:
    """
    Creates a counter of started, failed and successful calls.
    :param name: the base name, without the `_total` suffix
    :param description: the help text
    :param registry: the registry to register with; the global one by default
    :return: the counter
    """
    return create_labelled_counter(name, description, EventCounterTypes, registry)


def create_object_counter(name: str, description: str, registry: CollectorRegistry = REGISTRY) -> Counter:
    return create_labelled_counter(name, description, ObjectCounterTypes, registry)


def create_outcome_counter(name: str, description: str, registry: CollectorRegistry = REGISTRY) -> Counter:
    return create_labelled_counter(name, description, OutcomeCounterTypes, registry)


def create_labelled_counter(name: str, description: str, label_type: Type[LabelEnum],
                            registry: CollectorRegistry = REGISTRY) -> Counter:
    """
    Creates a counter labelled by the values of the specified enum.
    """
    counter = Counter(name, description, [LABEL_NAMES[label_type]], registry=registry)
    for member in label_type:
        counter.labels(member.value)
    return counter
