# coding=utf-8
"""Compensated summation of partial sums.

Samples are reduced in fixed-size chunks. Each chunk is summed with numpy's
pairwise summation and the chunk totals are combined with Neumaier's variant
of Kahan summation, in chunk order. The result therefore only depends on the
sample values and the chunk size.
"""
import numpy as np


class CompensatedAccumulator(object):
    """Accumulate arrays of partial sums with a running compensation term.

    :param shape: The shape of the accumulated array.
    """

    def __init__(self, shape):
        """Initialize a new object."""
        self._sum = np.zeros(shape, dtype=np.float64)
        self._compensation = np.zeros(shape, dtype=np.float64)
        self.count = 0

    def add(self, partial, count=1):
        """Add ``partial`` to the running total.

        :param partial: An array broadcastable to the accumulated shape.
        :param count: How many samples ``partial`` summarises.
        """
        partial = np.asarray(partial, dtype=np.float64)
        total = self._sum + partial
        big = np.abs(self._sum) >= np.abs(partial)
        self._compensation += np.where(
            big, (self._sum - total) + partial, (partial - total) + self._sum
        )
        self._sum = total
        self.count += count

    @property
    def total(self):
        """Return the compensated total."""
        return self._sum + self._compensation

    def mean(self):
        """Return the compensated total divided by the number of samples."""
        return self.total / self.count


def chunked(values, chunk_size):
    """Yield consecutive slices of ``values`` with at most ``chunk_size`` items."""
    for start in range(0, len(values), chunk_size):
        yield values[start : start + chunk_size]
