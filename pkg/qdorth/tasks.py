"""
Celery tasks of experiment jobs.

Tasks of a monitored chain pass a `ReturnTuple` along: the job first, then the results gathered so far.
"""
from collections import namedtuple

from celery import shared_task

from . import expgen
from .models import ExperimentJob
from .models.task import JobFailedOnFailureTask
from .taskapp import app  # noqa: F401, binds shared tasks to the qdorth application

ReturnTuple = namedtuple('ReturnTuple', ['job', 'results'])


def _compat_return(job: ExperimentJob, *args):
    return ReturnTuple(job, args)


def extract_job(previous_task_results, *args):
    """
    Split what the previous task of a chain returned into the job and its results, appending `args`.

    Parameters
    ----------
    previous_task_results : ExperimentJob, ReturnTuple or tuple
    args

    Returns
    -------
    ReturnTuple
    """
    if isinstance(previous_task_results, ReturnTuple):
        return _compat_return(previous_task_results.job, *(previous_task_results.results + args))
    elif isinstance(previous_task_results, tuple):
        return _compat_return(previous_task_results[0], *(previous_task_results[1:] + args))
    return _compat_return(previous_task_results, *args)


# ==================================================
#   MONITORING TASKS
# ==================================================

@shared_task
def start(job):
    """
    First task of a monitored chain: the job is running from here on.

    Parameters
    ----------
    job : ExperimentJob

    Returns
    -------
    ExperimentJob
    """
    job.start()
    return job


@shared_task
def stop(job, *args):
    """
    Last task of a monitored chain; the duration of the job ends here.

    Parameters
    ----------
    job : ExperimentJob, ReturnTuple or tuple
    args

    Returns
    -------
    ReturnTuple
    """
    job, args = extract_job(job, *args)
    job.stop()
    return _compat_return(job, *args)


# ==================================================
#   MAINTENANCE TASKS
# ==================================================

@shared_task
def remove_old_jobs(job, *args):
    """
    Drop the registered jobs whose closure has passed.

    Parameters
    ----------
    job : ExperimentJob, ReturnTuple or tuple
    args

    Returns
    -------
    ReturnTuple
    """
    job, args = extract_job(job, *args)
    for candidate in ExperimentJob.expired():
        candidate.delete()
    return _compat_return(job, *args)


# ==================================================
#   EXPERIMENT TASKS
# ==================================================

@shared_task
def run_trial(config, precision, g, trial):
    """
    One factorization of an accuracy cell.

    Returns
    -------
    float or None
        log10 of the residual, None when the trial broke down
    """
    return expgen.trial_log_error(config, precision, g, trial)


@shared_task(base=JobFailedOnFailureTask)
def run_experiment(job, *args):
    """
    Run the experiment configured on the job.

    Parameters
    ----------
    job : ExperimentJob, ReturnTuple or tuple

    Returns
    -------
    ReturnTuple
        The records of the experiment are the first result
    """
    job, args = extract_job(job, *args)
    records = expgen.run(job.config)
    return _compat_return(job, records, *args)
