import os
from celery import Celery

# Set the default Django settings module for the 'celery' program.
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'overlap_lab.settings')

app = Celery('overlap_lab')

# Using a string here means the worker doesn't have to serialize
# the configuration object to child processes.
app.config_from_object('django.conf:settings', namespace='CELERY')

# Load task modules from all registered Django apps.
app.autodiscover_tasks()

# Annealing chains are CPU bound; one task at a time per worker process.
app.conf.worker_prefetch_multiplier = 1
# Chain and trial results are gathered by the submitting command right away.
app.conf.result_expires = 3600
