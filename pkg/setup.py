#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
from codecs import open

from setuptools import find_packages, setup

from qdorth import __version__

README = ''
for ext in ['md', 'rst']:
    try:
        with open(os.path.join(os.path.dirname(__file__), 'README.' + ext)) as readme:
            README = readme.read()
    except FileNotFoundError as fnfe:
        pass

# allow setup.py to be run from any path
os.chdir(os.path.normpath(os.path.join(os.path.abspath(__file__), os.pardir)))

setup(
    name='qdorth',
    version=__version__,
    author='qdorth developers',
    license='GNU GPLv3',
    description='Least squares by modified Gram-Schmidt in double, double double and quad double complex arithmetic',
    long_description=README,
    packages=find_packages(exclude=['qdorth.tests', 'qdorth.tests.*']),
    include_package_data=True,
    python_requires='>=3.7',
    install_requires=[
        'numpy>=1.17',
        'mpmath>=1.1.0',
        'celery>=4.0.2',
    ],
    extras_require={
        'fma': ['pyfma>=0.1.0'],
        'test': ['hypothesis>=4.0'],
    },
    entry_points={
        'console_scripts': ['qdorth=qdorth.cli:main'],
    },
    test_suite='qdorth.tests',
    keywords='least-squares gram-schmidt qr double-double quad-double multiprecision celery',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
