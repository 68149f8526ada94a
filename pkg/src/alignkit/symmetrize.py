"""Combine forward and reverse directional alignments into one link set.

Six heuristics: forward, reverse, union, intersection, grow-diag and
grow-diag-final.  The grow procedure starts from the intersection and
repeatedly scans the current set in row-major order, adopting any
8-neighbor of a current link that lies in the union and whose row or
column is still uncovered.  The final pass then sweeps the forward links
and the reverse links (row-major, in that order) under the same
either-endpoint-uncovered condition.  Scan order, the neighbor order
(-1,0),(0,-1),(1,0),(0,1),(-1,-1),(-1,1),(1,-1),(1,1), and live coverage
updates are all fixed, so outputs are fully deterministic.
"""

from __future__ import annotations

from collections import Counter
from enum import Enum
from typing import Iterable

from .corpus import AlignmentSet, ParallelCorpus

__all__ = ["Heuristic", "symmetrize", "symmetrize_corpus"]

Link = tuple[int, int]

NEIGHBOR_OFFSETS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


class Heuristic(str, Enum):
    FORWARD = "forward"
    REVERSE = "reverse"
    UNION = "union"
    INTERSECTION = "intersection"
    GROW_DIAG = "grow-diag"
    GROW_DIAG_FINAL = "grow-diag-final"


class _Coverage:
    """Row/column link counts for O(1) uncovered checks under live updates."""

    def __init__(self, links: Iterable[Link]):
        self.rows: Counter[int] = Counter()
        self.cols: Counter[int] = Counter()
        for i, j in links:
            self.rows[i] += 1
            self.cols[j] += 1

    def add(self, link: Link) -> None:
        self.rows[link[0]] += 1
        self.cols[link[1]] += 1

    def admits(self, link: Link) -> bool:
        return self.rows[link[0]] == 0 or self.cols[link[1]] == 0


def _grow(fwd: frozenset[Link], rev: frozenset[Link], final: bool) -> frozenset[Link]:
    union = fwd | rev
    current = set(fwd & rev)
    cov = _Coverage(current)
    while True:
        added = False
        for i, j in sorted(current):
            for di, dj in NEIGHBOR_OFFSETS:
                cand = (i + di, j + dj)
                if cand in union and cand not in current and cov.admits(cand):
                    current.add(cand)
                    cov.add(cand)
                    added = True
        if not added:
            break
    if final:
        for source in (sorted(fwd), sorted(rev)):
            for cand in source:
                if cand in union and cand not in current and cov.admits(cand):
                    current.add(cand)
                    cov.add(cand)
    return frozenset(current)


def symmetrize(
    fwd: Iterable[Link],
    rev: Iterable[Link],
    heuristic: Heuristic,
    n: int | None = None,
    m: int | None = None,
) -> frozenset[Link]:
    """Symmetrize one sentence pair's directional links.

    Both inputs must already be in (source index, target index) orientation.
    When ``n``/``m`` are given, out-of-bounds links are an error.
    """
    fwd = frozenset((int(i), int(j)) for i, j in fwd)
    rev = frozenset((int(i), int(j)) for i, j in rev)
    if n is not None and m is not None:
        for name, links in (("forward", fwd), ("reverse", rev)):
            for i, j in links:
                if not (0 <= i < n and 0 <= j < m):
                    raise ValueError(
                        f"{name} link ({i},{j}) out of range for sizes {n}x{m}"
                    )
    if heuristic is Heuristic.FORWARD:
        return fwd
    if heuristic is Heuristic.REVERSE:
        return rev
    if heuristic is Heuristic.UNION:
        return fwd | rev
    if heuristic is Heuristic.INTERSECTION:
        return fwd & rev
    if heuristic is Heuristic.GROW_DIAG:
        return _grow(fwd, rev, final=False)
    if heuristic is Heuristic.GROW_DIAG_FINAL:
        return _grow(fwd, rev, final=True)
    raise ValueError(f"unknown heuristic {heuristic!r}")


def symmetrize_corpus(
    fwd: AlignmentSet,
    rev: AlignmentSet,
    heuristic: Heuristic,
    corpus: ParallelCorpus | None = None,
) -> AlignmentSet:
    """Apply ``symmetrize`` pair by pair over two directional alignment sets.

    Operates on the sure links; the result is a sure-only set.  A corpus,
    when supplied, provides sentence sizes for bounds checking.
    """
    if len(fwd) != len(rev):
        raise ValueError(f"direction pair counts differ: {len(fwd)} vs {len(rev)}")
    if corpus is not None and len(corpus) != len(fwd):
        raise ValueError(
            f"alignments cover {len(fwd)} pairs but corpus has {len(corpus)}"
        )
    out = []
    for k in range(len(fwd)):
        n = m = None
        if corpus is not None:
            n, m = len(corpus[k].src), len(corpus[k].tgt)
        out.append(symmetrize(fwd[k].sure, rev[k].sure, heuristic, n, m))
    return AlignmentSet.from_sure(out)
