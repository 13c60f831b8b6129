"""
Uniform grid over segment bounding boxes.

Each segment is registered in every cell its bounding box touches. A pair is
reported by exactly one cell: the one holding the lower-left corner of the
intersection of the two boxes, so pairs are unique without a hash set.
"""
import logging

import numpy as np

from .. import config

logger = logging.getLogger(__name__)


class SegmentGrid:
    def __init__(self, p0: np.ndarray, p1: np.ndarray, cell_size: float):
        if not cell_size > 0:
            raise ValueError(f"cell size must be positive, got {cell_size}")
        self.lo = np.minimum(p0, p1)
        self.hi = np.maximum(p0, p1)
        self.cell = float(cell_size)
        self.origin = self.lo.min(axis=0) if len(self.lo) else np.zeros(2)

        c0 = self._cell_of(self.lo)
        c1 = self._cell_of(self.hi)
        self.ny = int(c1[:, 1].max()) + 1 if len(c1) else 1

        w = c1[:, 0] - c0[:, 0] + 1
        h = c1[:, 1] - c0[:, 1] + 1
        counts = w * h
        seg = np.repeat(np.arange(len(counts)), counts)
        starts = np.cumsum(counts) - counts
        offset = np.arange(counts.sum()) - np.repeat(starts, counts)
        cx = c0[seg, 0] + offset % w[seg]
        cy = c0[seg, 1] + offset // w[seg]
        keys = cx * self.ny + cy

        order = np.argsort(keys, kind='stable')
        self.keys = keys[order]
        self.members = seg[order]
        logger.debug("[Grid] %d segments, %d registrations, cell %.3g",
                     len(counts), len(self.keys), self.cell)

    def _cell_of(self, pts: np.ndarray) -> np.ndarray:
        return np.floor((pts - self.origin) / self.cell).astype(np.int64)

    def candidate_pairs(self, chunk: int = config.PAIR_CHUNK):
        """Yield (i, j) index arrays of segment pairs with overlapping boxes."""
        n = len(self.keys)
        if n < 2:
            return
        boundaries = np.flatnonzero(np.diff(self.keys)) + 1
        group_end = np.repeat(np.append(boundaries, n),
                              np.diff(np.concatenate(([0], boundaries, [n]))))
        partners = group_end - np.arange(n) - 1
        cum = np.cumsum(partners)

        start = 0
        while start < n:
            base = cum[start - 1] if start else 0
            stop = int(np.searchsorted(cum, base + chunk, side='right'))
            stop = max(stop, start + 1)
            idx = np.arange(start, stop)
            cnt = partners[idx]
            total = int(cnt.sum())
            if total:
                a = np.repeat(idx, cnt)
                first = np.cumsum(cnt) - cnt
                b = a + 1 + (np.arange(total) - np.repeat(first, cnt))
                yield from self._filter(a, b)
            start = stop

    def _filter(self, a: np.ndarray, b: np.ndarray):
        i, j = self.members[a], self.members[b]
        overlap = ((self.lo[i, 0] <= self.hi[j, 0]) & (self.lo[j, 0] <= self.hi[i, 0])
                   & (self.lo[i, 1] <= self.hi[j, 1]) & (self.lo[j, 1] <= self.hi[i, 1]))
        a, i, j = a[overlap], i[overlap], j[overlap]
        corner = np.maximum(self.lo[i], self.lo[j])
        cc = self._cell_of(corner)
        owner = (cc[:, 0] * self.ny + cc[:, 1]) == self.keys[a]
        if np.any(owner):
            yield i[owner], j[owner]
