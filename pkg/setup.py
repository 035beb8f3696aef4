#!/usr/bin/env python
"""
Date: 2024-05-06 10:02:11
LastEditTime: 2024-06-28 11:30:05
Description: The setup script
FilePath: /grouptest/setup.py
"""
import io
import pathlib
from os import path as op
from setuptools import setup, find_packages

readme = pathlib.Path("README.md").read_text(encoding="utf-8")
here = op.abspath(op.dirname(__file__))

# get the dependencies and installs
with io.open(op.join(here, "requirements.txt"), encoding="utf-8") as f:
    all_reqs = f.read().split("\n")

install_requires = [x.strip() for x in all_reqs if x.strip() and "git+" not in x]

setup_requirements = [
    "pytest-runner",
]

test_requirements = [
    "pytest>=3",
    "pytest-mock",
    "hypothesis",
]

setup(
    python_requires=">=3.10",
    classifiers=[
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Natural Language :: English",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    description="non-adaptive group testing with block doubly-regular designs, COMP and DD",
    entry_points={
        "console_scripts": [
            "grouptest=grouptest.cli:main",
        ],
    },
    install_requires=install_requires,
    license="GNU General Public License v3",
    long_description=readme,
    long_description_content_type="text/markdown",
    include_package_data=True,
    package_data={"grouptest.designs": ["param.yaml"]},
    keywords="grouptest",
    name="grouptest",
    packages=find_packages(include=["grouptest", "grouptest.*"]),
    setup_requires=setup_requirements,
    test_suite="test",
    tests_require=test_requirements,
    version="0.1.0",
    zip_safe=False,
)
