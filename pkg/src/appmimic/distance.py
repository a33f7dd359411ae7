"""Levenshtein edit distance and normalized similarity.

Distances and lengths are measured in Unicode code points. The bounded
variant keeps the computation inside a diagonal band of half-width
``max_dist`` and abandons a pair as soon as every cell in the current row
exceeds the bound; both prunes are lossless because a cell (i, j) can
never drop below |i - j| and rows are non-decreasing in cost floor.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from .errors import ValidationError


def levenshtein_distance(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions or
    substitutions turning ``a`` into ``b``."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    n = len(b)
    if n == 0:
        return len(a)
    previous = list(range(n + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        append = current.append
        for j, cb in enumerate(b, start=1):
            cost = previous[j - 1] if ca == cb else previous[j - 1] + 1
            above = previous[j] + 1
            if above < cost:
                cost = above
            left = current[j - 1] + 1
            if left < cost:
                cost = left
            append(cost)
        previous = current
    return previous[n]


def bounded_levenshtein(a: str, b: str, max_dist: int) -> Optional[int]:
    """Exact distance if it is <= ``max_dist``, else None.

    Only the diagonal band |i - j| <= max_dist is evaluated; cells outside
    it are >= max_dist + 1 by the |i - j| lower bound, so the result is
    identical to the unbounded computation whenever it is returned.
    """
    if max_dist < 0:
        return None
    if a == b:
        return 0
    if len(a) > len(b):
        a, b = b, a
    m, n = len(a), len(b)
    if n - m > max_dist:
        return None
    if m == 0:
        return n if n <= max_dist else None

    big = max_dist + 1
    # previous row covers columns prev_lo .. prev_lo + len(prev) - 1; an
    # appended `big` sentinel stands in for the one column above the band
    prev_lo = 0
    prev = list(range(min(n, max_dist) + 1))
    for i in range(1, m + 1):
        ca = a[i - 1]
        lo = i - max_dist
        if lo < 1:
            lo = 1
        hi = i + max_dist
        if hi > n:
            hi = n
        prev.append(big)
        current = []
        append = current.append
        if i <= max_dist:
            left = i  # column 0 sits inside the band on this row
            append(left)
            best = left
            next_lo = 0
        else:
            left = big
            best = big
            next_lo = lo
        index = lo - 1 - prev_lo
        for j in range(lo, hi + 1):
            diag = prev[index]
            index += 1
            cost = diag if ca == b[j - 1] else diag + 1
            above = prev[index] + 1
            if above < cost:
                cost = above
            beside = left + 1
            if beside < cost:
                cost = beside
            append(cost)
            left = cost
            if cost < best:
                best = cost
        if best > max_dist:
            return None
        prev, prev_lo = current, next_lo
    result = prev[n - prev_lo]
    return result if result <= max_dist else None


def levenshtein_similarity(a: str, b: str) -> float:
    """1 - distance / length of the longer string, in [0, 1]."""
    longer = max(len(a), len(b))
    if longer == 0:
        raise ValidationError("similarity is undefined for two empty strings")
    return 1.0 - levenshtein_distance(a, b) / longer


def as_fraction(threshold: Union[float, str, Fraction]) -> Fraction:
    """Exact rational form of a threshold.

    Floats are read at their shortest decimal representation, so 0.95
    becomes exactly 19/20 rather than the nearest binary double.
    """
    if isinstance(threshold, Fraction):
        return threshold
    if isinstance(threshold, float):
        return Fraction(str(threshold))
    return Fraction(threshold)


def max_edits_for(threshold: Fraction, longer_len: int) -> int:
    """Largest edit count d with 1 - d/longer_len >= threshold."""
    return int((1 - threshold) * longer_len)
