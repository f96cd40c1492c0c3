"""setuptools based setup module for dsdirac.

See:
https://packaging.python.org/en/latest/distributing.html
"""

# Always prefer setuptools over distutils
from setuptools import setup, find_packages
# To use a consistent encoding
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='dsdirac',

    version='0.1.0',

    description='Dirac and Klein-Gordon solvers in de Sitter spacetime by integral transforms, with oracle checks',
    long_description=long_description,
    long_description_content_type='text/markdown',

    license='Apache 2.0',

    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
        'Programming Language :: Python :: 3.6',
    ],

    keywords='dirac klein-gordon de-sitter hypergeometric quadrature',

    packages=find_packages(exclude=['tests']),

    # run-time dependencies; numerical work is numpy + scipy, the cli runs cells on a uvloop event loop
    install_requires=[
        'numpy',
        'scipy',
        'python-dotenv',
        'json-tricks',
        'uvloop',
    ],

    # $ pip install -e .[dev,test]
    extras_require={
        'dev': ['check-manifest'],
        'test': ['pytest', 'coverage', 'mpmath'],
    },

    package_data={
        'dsdirac': ['.app.env'],
    },

    entry_points={
        'console_scripts': [
            'dsdirac=dsdirac:main',
        ],
    },
)
