from celery import Task


class JobFailedOnFailureTask(Task):
    """
    Task whose first argument is its job, or a tuple starting with it; a failure of the task marks the job failed.
    """

    def on_failure(self, exc, task_id, args, kwargs, einfo):
        super(JobFailedOnFailureTask, self).on_failure(exc, task_id, args, kwargs, einfo)
        job = args[0]
        if isinstance(job, tuple):
            job = job[0]
        job.failed(self, exc)
