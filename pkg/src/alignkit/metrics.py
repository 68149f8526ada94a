"""Alignment scoring: AER, precision, recall and F-measure.

Counts are aggregated over the whole corpus before dividing (sum the link
counts, then compute each ratio), not averaged per sentence.  With
predicted links A and gold sure/possible sets S and P:

    precision = |A & P| / |A|
    recall    = |A & S| / |S|
    F         = 2 P R / (P + R)
    AER       = 1 - (|A & S| + |A & P|) / (|A| + |S|)

Empty-denominator conventions: |A| = 0 gives precision 1, |S| = 0 gives
recall 1, P + R = 0 gives F 0, and |A| + |S| = 0 gives AER 0.  For
sure-only gold (S = P) these definitions make AER equal 1 - F exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .corpus import AlignmentSet

__all__ = ["EvalCounts", "EvalReport", "evaluate", "report_table"]


@dataclass(frozen=True)
class EvalCounts:
    predicted: int
    sure: int
    possible: int
    hits_sure: int
    hits_possible: int


@dataclass(frozen=True)
class EvalReport:
    aer: float
    precision: float
    recall: float
    f_measure: float
    counts: EvalCounts

    def to_dict(self) -> dict:
        return {
            "aer": self.aer,
            "precision": self.precision,
            "recall": self.recall,
            "f_measure": self.f_measure,
            "counts": vars(self.counts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_tsv(self) -> str:
        """Percent-scale metric lines followed by the raw counts."""
        lines = [
            f"AER\t{100.0 * self.aer:.2f}",
            f"precision\t{100.0 * self.precision:.2f}",
            f"recall\t{100.0 * self.recall:.2f}",
            f"f_measure\t{100.0 * self.f_measure:.2f}",
            f"predicted\t{self.counts.predicted}",
            f"sure\t{self.counts.sure}",
            f"possible\t{self.counts.possible}",
            f"hits_sure\t{self.counts.hits_sure}",
            f"hits_possible\t{self.counts.hits_possible}",
        ]
        return "\n".join(lines) + "\n"


def evaluate(pred: AlignmentSet, gold: AlignmentSet) -> EvalReport:
    """Score predicted links (the sure set of ``pred``) against gold."""
    if len(pred) != len(gold):
        raise ValueError(
            f"prediction covers {len(pred)} pairs but gold covers {len(gold)}"
        )
    a = s = p = hit_s = hit_p = 0
    for ps, gs in zip(pred, gold):
        a += len(ps.sure)
        s += len(gs.sure)
        p += len(gs.possible)
        hit_s += len(ps.sure & gs.sure)
        hit_p += len(ps.sure & gs.possible)
    precision = hit_p / a if a > 0 else 1.0
    recall = hit_s / s if s > 0 else 1.0
    f = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    aer = 1.0 - (hit_s + hit_p) / (a + s) if a + s > 0 else 0.0
    return EvalReport(aer, precision, recall, f, EvalCounts(a, s, p, hit_s, hit_p))


def report_table(reports: Mapping[str, Mapping[str, EvalReport]]) -> str:
    """TSV of AER percentages (2 decimals) per method and language.

    Columns are the union of language keys in sorted order plus an
    unweighted average over the languages each method actually covers;
    absent runs render as ``-``.
    """
    if not reports:
        raise ValueError("no reports to tabulate")
    languages = sorted({lang for by_lang in reports.values() for lang in by_lang})
    lines = ["method\t" + "\t".join(languages) + "\tavg."]
    for method, by_lang in reports.items():
        cells = []
        present = []
        for lang in languages:
            rep = by_lang.get(lang)
            if rep is None:
                cells.append("-")
            else:
                cells.append(f"{100.0 * rep.aer:.2f}")
                present.append(rep.aer)
        avg = f"{100.0 * sum(present) / len(present):.2f}" if present else "-"
        lines.append(method + "\t" + "\t".join(cells) + f"\t{avg}")
    return "\n".join(lines) + "\n"
