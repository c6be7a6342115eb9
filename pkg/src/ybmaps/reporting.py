"""Cross-map checks and the JSON report document."""
from __future__ import annotations

import json

from .catalog import (
    ADLER_YAMILOV,
    DNLS4,
    DNLS6_REPARAM,
    NLS6,
    REGISTRY,
    VECTOR_NLS_CONVENTIONS,
    MapDescriptor,
    Registry,
    vector_nls,
    vector_z2,
)
from .leaves import check_leaf_commutation
from .verify import CHECKS, CheckReport, run_check, sample_state, to_jsonable

REPORT_VERSION = "1"

# (4-dimensional map, 6-dimensional map on the affine leaves)
LEAF_PAIRS = ((ADLER_YAMILOV, NLS6), (DNLS4, DNLS6_REPARAM))


def resolve_vector_nls_sign(trials: int = 100, seed: int = 0) -> dict:
    """Pick the vector-NLS sign convention whose map refactorises the Lax matrix."""
    outcomes = {}
    for conv in VECTOR_NLS_CONVENTIONS:
        rep = run_check(vector_nls(2, conv), "lax", trials, seed)
        outcomes[conv] = {"trials": rep.trials, "failures": rep.failures}
    passing = [c for c, o in outcomes.items() if o["failures"] == 0]
    return {"resolved": passing[0] if len(passing) == 1 else None, "outcomes": outcomes}


def leaf_pairing(map4: MapDescriptor, map6: MapDescriptor, trials: int = 100,
                 seed: int = 0) -> dict:
    """Test both image-side parameter pairings on ``trials`` random rational states."""
    counts = {"ab": 0, "ba": 0}
    for i in range(trials):
        res = {}

        def probe(s):
            for k in counts:
                res[k] = check_leaf_commutation(map4, map6, s, k)

        sample_state(map4, seed, i, check=probe)
        for k in counts:
            counts[k] += res[k]
    passing = [k for k, c in counts.items() if c == trials]
    return {"map4": map4.name, "map6": map6.name, "trials": trials,
            "passes": counts, "pairing": passing[0] if len(passing) == 1 else None}


def vector_scalar_agreement(trials: int = 100, seed: int = 0) -> list[dict]:
    """Vector maps at N=1 against their scalar counterparts, exactly."""
    out = []
    for vec, scalar in ((vector_nls(1), ADLER_YAMILOV), (vector_z2(1), DNLS4)):
        failures = 0
        for i in range(trials):
            s = sample_state(scalar, seed, i, check=scalar.evaluate)
            failures += vec.evaluate(s) != scalar.evaluate(s)
        out.append({"vector": vec.name, "scalar": scalar.name, "trials": trials,
                    "failures": failures})
    return out


def map_section(desc: MapDescriptor, reports: list[CheckReport]) -> dict:
    sec = {"name": desc.name}
    if desc.n is not None:
        sec["n"] = desc.n
    sec["checks"] = [r.to_json() for r in reports]
    return sec


def context_sections(trials: int, seed: int) -> dict:
    return {
        "vector_nls_sign": resolve_vector_nls_sign(trials, seed),
        "leaf_pairings": [leaf_pairing(m4, m6, trials, seed) for m4, m6 in LEAF_PAIRS],
    }


def build_report(trials: int = 100, seed: int = 0, tolerance: float = 1e-9,
                 registry: Registry = REGISTRY, checks=CHECKS) -> dict:
    maps = [map_section(d, [run_check(d, c, trials, seed) for c in checks]) for d in registry]
    doc = {"version": REPORT_VERSION, "seed": seed, "trials": trials, "tolerance": tolerance,
           "maps": maps}
    doc.update(context_sections(trials, seed))
    doc["vector_scalar"] = vector_scalar_agreement(trials, seed)
    return doc


def report_ok(doc: dict) -> bool:
    checks_ok = all(c["status"] != "fail" for m in doc["maps"] for c in m["checks"])
    sign_ok = doc.get("vector_nls_sign", {}).get("resolved", "") is not None
    pair_ok = all(p["pairing"] is not None for p in doc.get("leaf_pairings", ()))
    vs_ok = all(v["failures"] == 0 for v in doc.get("vector_scalar", ()))
    return checks_ok and sign_ok and pair_ok and vs_ok


def dumps(doc: dict) -> str:
    return json.dumps(to_jsonable(doc), indent=2) + "\n"
