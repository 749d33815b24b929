#!/usr/bin/env python3

from os import path

from setuptools import setup

from wh_ensembles import __version__

this_directory = path.abspath(path.dirname(__file__))
with open(path.join(this_directory, 'README.md'), mode="r", encoding="utf-8") as f:
    long_description = f.read()

with open(path.join(this_directory, 'requirements', 'requirements.txt'), mode="r", encoding="utf-8") as f:
    install_requires = [line.strip() for line in f if line.strip() and not line.startswith('#')]

setup(
    name='wh-ensembles',
    version=__version__,
    description='Finite Weyl-Heisenberg determinantal point processes from spectra of time-frequency localization operators',
    long_description=long_description,
    long_description_content_type='text/markdown',
    license='MIT',
    keywords='determinantal point process, time-frequency analysis, Ginibre ensemble, polyanalytic functions',
    packages=['wh_ensembles'],
    entry_points={
        'console_scripts': [
            'wh-ensembles = wh_ensembles.bin:main'
        ]
    },
    python_requires='>=3.8, <4',
    install_requires=install_requires,
    extras_require={
        # Only `--svg` needs a plotting backend.
        'plot': ['matplotlib>=3.5'],
    },
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Mathematics'
    ],
    options={'bdist_wheel': {'universal': False}},
    include_package_data=True
)
