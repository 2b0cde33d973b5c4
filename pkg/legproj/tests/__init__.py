# coding=utf-8
"""Statistical sweeps exercising the estimators end to end."""
