# coding=utf-8
"""Randomized projection estimates of a density and its distribution function."""
