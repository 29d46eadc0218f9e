import itertools
import json
import logging
import re
import threading
from datetime import datetime, timedelta, timezone
from enum import Enum, unique

from .. import settings

logger = logging.getLogger(__name__)


class ELabelled(Enum):
    """Enumeration of ``(value, label)`` pairs; members compare and pickle by value."""

    def __new__(cls, value, label):
        obj = object.__new__(cls)
        obj._value_ = value
        obj.label = label
        return obj

    @classmethod
    def choices(cls):
        return tuple((e.value, e.label) for e in cls)


class ExperimentJob(object):
    """
    A monitored run of one experiment.

    Jobs are kept in an in-process registry from their creation on. Without ``settings.TTL`` a job leaves it when it
    completes; with a TTL it gets a `closure` and stays until `remove_old_jobs` finds the closure has passed.

    Parameters
    ----------
    identifier : str, optional
        Human readable identifier, letters and digits only
    config : ExperimentConfig, optional
        What the job runs
    """

    @unique
    class EState(ELabelled):
        # Creation codes
        CREATED = (0, 'Created')
        # Submission codes
        SUBMITTED = (100, 'Submitted')
        # Computation codes
        RUNNING = (200, 'Running')
        # Completion codes
        COMPLETED = (300, 'Completed')

    @unique
    class EStatus(ELabelled):
        ACTIVE = (0, 'Active')
        SUCCESS = (10, 'Succeeded')
        FAILURE = (20, 'Failed')

    IDENTIFIER_MAX_LENGTH = 32
    IDENTIFIER_REGEX = re.compile("[a-zA-Z0-9]{{0,{}}}$".format(IDENTIFIER_MAX_LENGTH))

    registry = {}
    _ids = itertools.count(1)
    _lock = threading.Lock()

    def __init__(self, identifier='', config=None):
        if not self.IDENTIFIER_REGEX.match(identifier):
            raise ValueError("invalid job identifier {!r}".format(identifier))
        with self._lock:
            self.id = next(self._ids)
        self.identifier = identifier
        self.config = config
        self.timestamp = datetime.now(timezone.utc)
        self.state = self.EState.CREATED
        self.status = self.EStatus.ACTIVE
        self.started = None
        self.duration = None
        self.closure = self.timestamp + timedelta(seconds=settings.TTL) if settings.TTL > 0 else None
        self.error = None
        self.save()

    def __str__(self):
        return str('{} {} ({} and {})'.format(self.__class__.__name__, self.id, self.state.label, self.status.label))

    def save(self):
        with self._lock:
            self.registry[self.id] = self

    def delete(self):
        with self._lock:
            return self.registry.pop(self.id, None) is not None

    @classmethod
    def expired(cls, now=None):
        """Registered jobs whose closure is before `now`."""
        now = now or datetime.now(timezone.utc)
        with cls._lock:
            return [job for job in cls.registry.values() if job.closure is not None and job.closure < now]

    def progress(self, new_state):
        """
        Signal a change in the pipeline

        Parameters
        ----------
        new_state : EState

        Returns
        -------
        EState
            The previous state

        """
        old_state = self.state
        self.state = new_state
        self.save()
        return old_state

    def start(self):
        """
        To be called when the job is to be started.

        Returns
        -------
        state : EState
        status : EStatus
        started : datetime

        """
        self.started = datetime.now(timezone.utc)
        self.progress(self.EState.RUNNING)
        logger.debug("Starting {} at {}".format(self, self.started))
        return self.state, self.status, self.started

    def stop(self):
        """
        To be called when the job is completed. Can be called multiple times, will only be applied once.

        A job without closure is dropped from the registry here.

        Returns
        -------
        state : EState
        status : EStatus
        duration : datetime.timedelta
            Duration of the job

        """
        self._set_duration()
        if self.state is not self.EState.COMPLETED:
            self.status = self.EStatus.FAILURE if self.has_failed() else self.EStatus.SUCCESS
            self.progress(self.EState.COMPLETED)
            logger.debug(
                "{} terminated in {}s with status '{}'".format(self, self.duration, self.status.label))
            if self.closure is None:
                self.delete()
        return self.state, self.status, self.duration

    def failed(self, task, exception):
        """
        Mark the job as failed and stop it.

        Note that it may not stop the chain, though.

        Parameters
        ----------
        task
            The failing task (or any callable)
        exception : Exception

        Returns
        -------
        state : EState
        status : EStatus
        duration : datetime.timedelta

        """
        self._set_duration()
        name = getattr(task, 'name', None) or getattr(task, '__name__', str(task))
        self.error = json.dumps(
            dict(task=name, exception="{}".format(type(exception).__name__), msg="{}".format(exception)))
        logger.exception("Task %s failed with following exception: %s", name, exception)
        return self.stop()

    def has_failed(self):
        return bool(self.error)

    def _set_duration(self):
        if not self.duration:
            self.duration = datetime.now(timezone.utc) - (self.started or self.timestamp)
            self.save()
        return self.duration
