"""Brute-force Levenshtein oracles, independent of the shipped code.

``wagner_fischer`` is a plain full-matrix DP for small inputs. The numba
pipeline oracle scores every eligible pair with a full (two-row,
unbanded) DP; the only pair it skips analytically is one with
|len(a) - len(b)| > floor((1-t)*L) + 2, justified by the elementary fact
that every edit changes the length by at most one, so d >= |len diff|.
The +2 slack keeps all boundary pairs on the fully-computed path.
Membership is decided in exact integer arithmetic:
sim >= num/den  <=>  (L - d) * den >= num * L.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from numba import njit

from appmimic import Corpus
from appmimic.clonedetect import TextField, field_text


def wagner_fischer(a: str, b: str) -> int:
    rows = len(a) + 1
    cols = len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        table[i][0] = i
    for j in range(cols):
        table[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + cost,
            )
    return table[rows - 1][cols - 1]


@njit(cache=True)
def _scored_pairs(buf, offsets, lengths, thr_num, thr_den, slack):  # pragma: no cover
    out = []
    n = lengths.shape[0]
    maxlen = 0
    for i in range(n):
        if lengths[i] > maxlen:
            maxlen = lengths[i]
    prev = np.empty(maxlen + 1, np.int32)
    cur = np.empty(maxlen + 1, np.int32)
    for j in range(n):
        len_j = lengths[j]
        bound = ((thr_den - thr_num) * len_j) // thr_den + slack
        for i in range(j):
            len_i = lengths[i]
            diff = len_j - len_i if len_j > len_i else len_i - len_j
            if diff > bound:
                continue
            a0 = offsets[i]
            b0 = offsets[j]
            for y in range(len_j + 1):
                prev[y] = y
            for x in range(1, len_i + 1):
                cur[0] = x
                ax = buf[a0 + x - 1]
                for y in range(1, len_j + 1):
                    c = prev[y - 1] + (0 if ax == buf[b0 + y - 1] else 1)
                    if prev[y] + 1 < c:
                        c = prev[y] + 1
                    if cur[y - 1] + 1 < c:
                        c = cur[y - 1] + 1
                    cur[y] = c
                for y in range(len_j + 1):
                    prev[y] = cur[y]
            d = prev[len_j]
            longer = len_j if len_j > len_i else len_i
            if (longer - d) * thr_den >= thr_num * longer:
                out.append((i, j, d))
    return out


def brute_force_lev_edges(
    corpus: Corpus,
    field: TextField,
    threshold: Fraction,
    min_chars: int,
    exclude_exact: bool,
) -> set[tuple[tuple[str, str], tuple[str, str], int]]:
    """All-pairs ground-truth edge set as {(key_a, key_b, distance)}."""
    eligible = []
    for rec in corpus:
        text = field_text(rec, field)
        if text is not None and len(text) >= min_chars:
            eligible.append((text, rec.key))
    if not eligible:
        return set()
    codes = [np.array([ord(c) for c in text], dtype=np.int32) for text, _ in eligible]
    lengths = np.array([len(c) for c in codes], dtype=np.int32)
    offsets = np.zeros(len(codes), dtype=np.int64)
    position = 0
    for index, chunk in enumerate(codes):
        offsets[index] = position
        position += len(chunk)
    buf = np.concatenate(codes)
    edges = set()
    for i, j, d in _scored_pairs(buf, offsets, lengths, threshold.numerator, threshold.denominator, 2):
        if d == 0 and exclude_exact:
            continue
        key_i, key_j = eligible[i][1], eligible[j][1]
        a, b = (key_i, key_j) if key_i < key_j else (key_j, key_i)
        edges.add((a, b, d))
    return edges


def warm_up() -> None:
    """Trigger the numba compile (cached on disk) before forking workers."""
    buf = np.array([97, 98, 97, 99], dtype=np.int32)
    offsets = np.array([0, 2], dtype=np.int64)
    lengths = np.array([2, 2], dtype=np.int32)
    _scored_pairs(buf, offsets, lengths, 1, 2, 2)
