"""
Celery workflows wrapping experiments in job monitoring.
"""
import logging

from celery.canvas import chain as celery_chain

from . import settings
from .models import ExperimentJob
from .tasks import remove_old_jobs, run_experiment, start, stop

logger = logging.getLogger(__name__)


def monitoring(job: ExperimentJob, *tasks):
    """
    Signatures of a monitored workflow: `start`, the `tasks`, `stop`, then the job cleanup when jobs expire.

    Returns
    -------
    tuple of celery.canvas.Signature
    """
    flow = (start.s(job),) + tasks + (stop.s(),)
    if settings.TTL > 0:
        flow += (remove_old_jobs.s(),)
    return flow


def chain(job: ExperimentJob, *tasks):
    """
    Chain `tasks` between the monitoring tasks of `job`.

    Each task receives the `ReturnTuple` of the previous one, the first receives the job itself.

    Returns
    -------
    celery.canvas.chain
    """
    return celery_chain(*monitoring(job, *tasks))


def experiment(config, identifier=''):
    """
    The monitored chain running one experiment.

    Returns
    -------
    job : ExperimentJob
    workflow : celery.canvas.chain
    """
    job = ExperimentJob(identifier, config)
    return job, chain(job, run_experiment.s())


def run_monitored(config, identifier=''):
    """
    Run an experiment through its monitored chain and wait for its records.

    Returns
    -------
    job : ExperimentJob
    records : list of ExperimentRecord

    Raises
    ------
    Exception
        Whatever the experiment raised; the job is then marked as failed
    """
    job, workflow = experiment(config, identifier)
    job.progress(job.EState.SUBMITTED)
    logger.debug("submitting {} for {}".format(job, config.kind.value))
    returned = workflow.apply_async().get(disable_sync_subtasks=False)
    return job, returned.results[0]
