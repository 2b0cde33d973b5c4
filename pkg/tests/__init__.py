# coding=utf-8
"""Unit tests for legproj.

These tests check the numerical building blocks against exact values and
closed forms. They run in seconds and need no configuration file.
"""
