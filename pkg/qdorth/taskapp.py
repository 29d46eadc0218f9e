"""
The Celery application running experiment jobs.

Without ``QDORTH_BROKER_URL`` every task runs eagerly in the calling process; with a broker, workers started with
``celery -A qdorth.taskapp worker`` pick up trials and experiments.
"""
from celery import Celery

from . import settings

app = Celery('qdorth', include=['qdorth.tasks'])
app.conf.update(
    broker_url=settings.BROKER_URL or 'memory://',
    result_backend=settings.RESULT_BACKEND or None,
    task_always_eager=settings.ALWAYS_EAGER,
    # configurations and jobs are plain python objects
    task_serializer='pickle',
    result_serializer='pickle',
    accept_content=['pickle'],
    worker_hijack_root_logger=False,
)
app.set_default()
