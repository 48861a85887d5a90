"""Bundled corpus of symbol pairs and the checker/classifier agreement run."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..domains import ProductDomain
from ..errors import DomainError
from ..symbols import LaurentSymbol
from .compactness import DECAYING, INCONCLUSIVE, NON_DECAYING, ClassifierConfig, classify_compactness
from .slices import thm1_check

EXPECTED = ("compact", "noncompact", None)


@dataclass
class CorpusEntry:
    name: str
    phi: LaurentSymbol
    psi: LaurentSymbol
    expected: str | None


def parse_corpus(obj) -> list[CorpusEntry]:
    if not isinstance(obj, list):
        raise DomainError("corpus must be a JSON list")
    out = []
    for i, item in enumerate(obj):
        where = f"corpus[{i}]"
        if not isinstance(item, dict):
            raise DomainError(f"{where}: entry must be an object")
        try:
            dom = ProductDomain.from_json(item.get("domain"))
        except DomainError as exc:
            raise DomainError(f"{where}.domain: {exc}") from None
        phi = LaurentSymbol.from_json(dom, item.get("phi"), f"{where}.phi")
        psi = LaurentSymbol.from_json(dom, item.get("psi"), f"{where}.psi")
        exp = item.get("expected")
        if exp not in EXPECTED:
            raise DomainError(f"{where}.expected: must be 'compact', 'noncompact' or null")
        out.append(CorpusEntry(item.get("name", f"pair{i}"), phi, psi, exp))
    return out


def bundled_corpus_path() -> Path:
    return Path(str(resources.files("hankelscope") / "data" / "corpus.json"))


def load_corpus(path: str | Path | None = None) -> list[CorpusEntry]:
    p = Path(path) if path is not None else bundled_corpus_path()
    with open(p) as fh:
        return parse_corpus(json.load(fh))


def run_corpus(entries: list[CorpusEntry], config: ClassifierConfig = ClassifierConfig()) -> dict:
    """Run the slice checker and the classifier on every pair; report agreement."""
    rows = []
    for e in entries:
        report = thm1_check(e.phi, e.psi)
        verdict = classify_compactness(e.phi, e.psi, config)
        v = verdict.verdict
        if v == INCONCLUSIVE:
            agree = None
        else:
            agree = (report.passed and v == DECAYING) or (not report.passed and v == NON_DECAYING)
        terms = [t for t in verdict.terminal_values() if t is not None]
        rows.append({
            "name": e.name,
            "expected": e.expected,
            "thm1_pass": report.passed,
            "hypothesis_warnings": len(report.hypothesis_warnings),
            "classifier": v,
            "agree": agree,
            "max_terminal": max(terms) if terms else None,
            "sv_drift": verdict.sv_scan.drift(),
        })
    n_inc = sum(1 for r in rows if r["agree"] is None)
    return {
        "pairs": rows,
        "inconclusive": n_inc,
        "disagreements": sum(1 for r in rows if r["agree"] is False),
        "all_agree": all(r["agree"] is not False for r in rows),
    }
