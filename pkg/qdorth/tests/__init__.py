#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os

# test chains run in-process, with the eager in-memory Celery application
os.environ.setdefault('QDORTH_ALWAYS_EAGER', '1')
os.environ.setdefault('QDORTH_BROKER_URL', '')
