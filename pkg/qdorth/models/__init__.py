#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .experiment import EKind, ExperimentConfig, ExperimentRecord, TABLE_G_GRID
from .job import ELabelled, ExperimentJob
