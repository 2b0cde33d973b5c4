#!/usr/bin/env python3
# coding=utf-8
"""A setuptools-based script for installing legproj."""
from setuptools import find_packages
from setuptools import setup

setup(packages=find_packages(include=["legproj*"]))
