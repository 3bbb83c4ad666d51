"""Evaluation report over directories of reference and generated complexes."""

from __future__ import annotations

import json
import math
import os

from ..molgraph.serialize import load_dataset
from ..molgraph.types import ComplexRecord
from .interactions import detect_interactions
from .scores import aar, diversity, ism, ito, mean_ignoring_nan, rmsd_ca

REPORT_SCHEMA_VERSION = 1


def evaluate_pair(gen: ComplexRecord, ref: ComplexRecord) -> dict:
    gen_seq = gen.binder.sequence()
    ref_seq = ref.binder.sequence()
    case = {
        "gen_id": gen.id,
        "ref_id": ref.id,
        "aar": aar(gen_seq, ref_seq),
        "rmsd_ca": (
            rmsd_ca(gen.binder, ref.binder, gen.site, ref.site)
            if len(gen.binder) == len(ref.binder) and len(gen.site) == len(ref.site)
            else float("nan")
        ),
    }
    ref_inter = detect_interactions(ref.binder, ref.site)
    gen_inter = detect_interactions(gen.binder, gen.site)
    case["ism"] = ism(gen_inter, ref_inter)
    case["ito"] = ito(gen_inter, ref_inter)
    return case


def evaluate_records(
    gen_records: list[ComplexRecord],
    ref_records: list[ComplexRecord],
    diversity_mode: str = "sequence",
) -> dict:
    """Pairwise metrics plus aggregates; a single reference broadcasts."""
    if not gen_records or not ref_records:
        raise ValueError("need at least one generated and one reference record")
    if len(ref_records) not in (1, len(gen_records)):
        raise ValueError(
            f"{len(ref_records)} references cannot pair with {len(gen_records)} generations"
        )
    pairs = [
        (g, ref_records[0] if len(ref_records) == 1 else ref_records[i])
        for i, g in enumerate(gen_records)
    ]
    cases = [evaluate_pair(g, r) for g, r in pairs]

    aggregate = {}
    for name in ("aar", "rmsd_ca", "ism", "ito"):
        mean, excluded = mean_ignoring_nan([c[name] for c in cases])
        aggregate[name] = {"mean": mean, "nan_excluded": excluded}
    aggregate["diversity"] = diversity(
        [(g.binder.sequence(), g.binder.ca_coords()) for g in gen_records],
        mode=diversity_mode,
    )
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "n_gen": len(gen_records),
        "n_ref": len(ref_records),
        "cases": cases,
        "aggregate": aggregate,
    }


def _nan_to_none(obj):
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, dict):
        return {k: _nan_to_none(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_nan_to_none(v) for v in obj]
    return obj


def write_report(report: dict, path: str | os.PathLike) -> None:
    """Write the report as strict JSON; excluded NaN values become null."""
    with open(path, "w") as fh:
        json.dump(_nan_to_none(report), fh, indent=1, allow_nan=False)
        fh.write("\n")


def evaluate_directories(gen_dir: str, ref_dir: str, diversity_mode: str = "sequence") -> dict:
    return evaluate_records(
        load_dataset(gen_dir), load_dataset(ref_dir), diversity_mode=diversity_mode
    )
