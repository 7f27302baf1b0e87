"""A setuptools based setup module.
"""

from pathlib import Path
from setuptools import setup, find_namespace_packages

here = Path(__file__).parent.absolute()

# Get the long description from the README file
with open(here.joinpath('README.md'), encoding='utf-8') as f:
    long_description = f.read()


setup(
    name='ris_power_min',

    version='0.1.0',

    description='Sum transmit power minimization for RIS-based multiuser transmitters',

    long_description=long_description,
    long_description_content_type="text/markdown",

    license='OSI Approved :: GNU Lesser General Public License v3 (GPLv3)',

    classifiers=[
        'Programming Language :: Python :: 3.9',
    ],

    keywords='reconfigurable intelligent surface beamforming power control semidefinite programming',

    python_requires=">=3.9,<3.13",

    install_requires=[
        'clarabel',
        'cvxpy>=1.4',
        'numpy',
        'pandas',
        'prometheus_client',
        'pydantic>=2',
        'pydantic-settings',
        'scipy',
        'statsmodels',
        'typing_extensions',
    ],

    extras_require={
        'test': ['pytest'],
    },

    entry_points={
        'console_scripts': [
            'ris-power-min=ris_power_min.cli.main:main',
        ],
    },

    packages=find_namespace_packages(include=['ris_power_min*']),

    setup_requires=['setuptools_scm'],
    include_package_data=True,
)
