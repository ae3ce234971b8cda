"""Deterministic JSON/CSV emission for check reports and norm results.

Identical inputs and seed produce byte-identical JSON; the run timestamp is
a separate top-level field so consumers can strip it before comparing.
Floats are serialized with repr (shortest round-trip, up to 17 significant
digits).
"""

from __future__ import annotations

import csv
import json
import os
import time
from typing import Iterable


def _sanitize(obj):
    import numpy as np
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    return obj


def dump_json(document: dict, path: str, timestamp: bool = True,
              volatile: dict = None) -> None:
    """Write the document; run-dependent data (wall clock, runtimes) all live
    inside the single `timestamp` field so the rest is reproducible."""
    doc = _sanitize(document)
    if timestamp or volatile:
        stamp = {"written_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
        if volatile:
            stamp.update(_sanitize(volatile))
        doc = {"timestamp": stamp, **doc}
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def strip_timestamp(path: str) -> bytes:
    """The document bytes with the timestamp field removed (for comparisons)."""
    with open(path) as fh:
        doc = json.load(fh)
    doc.pop("timestamp", None)
    return json.dumps(doc, sort_keys=True, indent=1).encode()


def write_rollup_csv(reports: Iterable, path: str) -> None:
    """One row per check: id, passed, worst constant, violations, runtime."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["check_id", "passed", "n_configurations", "max_constant",
                    "n_violations", "runtime_s"])
        for r in reports:
            consts = [v for v in r.constants.values()]
            w.writerow([r.check_id, r.passed, len(r.configurations),
                        repr(max(consts) if consts else 0.0),
                        len(r.violations), repr(round(r.runtime_s, 3))])
