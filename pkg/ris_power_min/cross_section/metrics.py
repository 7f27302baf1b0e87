"""
Process-wide Prometheus counters of the solver and the experiment runner, together with the decorators
feeding them. Worker processes count into their own registry; the runner only logs the counts
of the process it runs in.

See https://github.com/prometheus/client_python for the client library.
"""
from functools import wraps
from typing import TypeVar, Any, Callable, Type

from prometheus_client import Counter

from ris_power_min.cross_section.metrics_factory import create_event_counter, create_object_counter, \
    create_outcome_counter, EventCounterTypes, ObjectCounterTypes, OutcomeCounterTypes, LabelEnum, LABEL_NAMES

sdp_solve_counter = create_event_counter('sdp_solves', 'Number of semidefinite program solves')
beamforming_run_counter = create_event_counter('beamforming_runs', 'Number of beamforming method runs')
beamforming_outcome_counter = create_outcome_counter('beamforming_outcomes', 'Statuses of beamforming solutions')
result_row_counter = create_object_counter('result_rows', 'Result rows written or skipped')

L = TypeVar('L', bound=LabelEnum)
F = TypeVar('F', bound=Callable[..., Any])


def event_counting(counter: Counter) -> Callable[[F], F]:
    """
    Counts every call of the decorated function as available, and then as successful or as failure
    depending on whether it returns or raises. Exceptions are re-raised unchanged.
    :param counter: an event counter
    """

    def decorate(func: F) -> F:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            counter.labels(EventCounterTypes.AVAILABLE.value).inc()
            try:
                result = func(*args, **kwargs)
            except BaseException:
                counter.labels(EventCounterTypes.FAILURE.value).inc()
                raise
            counter.labels(EventCounterTypes.SUCCESSFUL.value).inc()
            return result

        return wrapper  # type: ignore[return-value]

    return decorate


def outcome_counting(counter: Counter) -> Callable[[F], F]:
    """
    Counts the `status` of every object returned by the decorated function.
    :param counter: an outcome counter
    """

    def decorate(func: F) -> F:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            solution = func(*args, **kwargs)
            counter.labels(solution.status.value).inc()
            return solution

        return wrapper  # type: ignore[return-value]

    return decorate


def count_objects(counter: Counter, action: ObjectCounterTypes, amount: float = 1) -> None:
    if not isinstance(action, ObjectCounterTypes):
        raise AssertionError(f'Unknown action specified for object counting: {action}')
    counter.labels(action.value).inc(amount)


def get_event_counts(counter: Counter, name: str) -> dict[EventCounterTypes, float]:
    return get_counts(counter, name, EventCounterTypes)


def get_object_counts(counter: Counter, name: str) -> dict[ObjectCounterTypes, float]:
    return get_counts(counter, name, ObjectCounterTypes)


def get_outcome_counts(counter: Counter, name: str) -> dict[OutcomeCounterTypes, float]:
    return get_counts(counter, name, OutcomeCounterTypes)


def get_counts(counter: Counter, name: str, label_type: Type[L]) -> dict[L, float]:
    """
    Reads the current value per label of a counter.
    :param counter: the counter
    :param name: the expected base name of the counter
    :param label_type: the label enum the counter was created with
    :return: the values, zero for labels never incremented
    :raises AssertionError: if the counter does not have the expected name
    """
    families = list(counter.collect())
    assert len(families) == 1 and families[0].name == name, f'Expected counter {name}'

    label_name = LABEL_NAMES[label_type]
    counts = dict.fromkeys(label_type, 0.0)
    for sample in families[0].samples:
        if sample.name == f'{name}_total' and sample.labels.get(label_name):
            counts[label_type(sample.labels[label_name])] = sample.value
    return counts
