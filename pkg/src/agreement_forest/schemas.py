"""JSON Schemas for the CLI's ``--json`` reports."""
from __future__ import annotations

_forest = {"type": "array", "items": {"type": "string"}}
_count = {"type": "integer", "minimum": 0}

STATS_SCHEMA = {
    "type": "object",
    "required": ["nodes", "rounds", "pruned", "nodesPerDepth", "lowerBound", "upperBound"],
    "properties": {
        "nodes": _count,
        "rounds": _count,
        "pruned": _count,
        "nodesPerDepth": {"type": "object", "additionalProperties": _count},
        "lowerBound": _count,
        "upperBound": _count,
    },
}

MAF_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "maf report",
    "type": "object",
    "required": ["mode", "forest", "components", "k", "cutCount", "valid", "stats"],
    "properties": {
        "mode": {"enum": ["approx", "exact"]},
        "forest": _forest,
        "components": {"type": "integer", "minimum": 1},
        "k": _count,
        "cutCount": _count,
        "valid": {"type": "boolean"},
        "stats": {"oneOf": [{"type": "null"}, STATS_SCHEMA]},
    },
}

MAAF_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "maaf report",
    "type": "object",
    "required": [
        "forest", "components", "k", "mafSize", "dfvsWeight",
        "proper", "acyclic", "identityHolds",
    ],
    "properties": {
        "mode": {"enum": ["approx", "exact"]},
        "dfvs": {"enum": ["exact", "greedy"]},
        "forest": _forest,
        "components": {"type": "integer", "minimum": 1},
        "k": _count,
        "hybridizationUpperBound": _count,
        "mafSize": {"type": "integer", "minimum": 1},
        "initialMafSize": {"type": "integer", "minimum": 1},
        "dfvsWeight": _count,
        "dfvsVertices": _count,
        "proper": {"type": "boolean"},
        "acyclic": {"type": "boolean"},
        "identityHolds": {"type": "boolean"},
        "inheritanceGraph": {
            "type": "array",
            "items": {"type": "array", "items": _count, "minItems": 2, "maxItems": 2},
        },
    },
}

VALIDATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "validate report",
    "type": "object",
    "required": ["agreementForest", "acyclic", "reason", "witness"],
    "properties": {
        "agreementForest": {"type": "boolean"},
        "acyclic": {"type": ["boolean", "null"]},
        "reason": {"type": ["string", "null"]},
        "witness": {"type": "object"},
        "inheritanceGraph": {"type": "array"},
    },
}

GEN_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "gen report",
    "type": "object",
    "required": ["t1", "t2", "n", "moves", "seed", "kUpperBound"],
    "properties": {
        "t1": {"type": "string"},
        "t2": {"type": "string"},
        "n": {"type": "integer", "minimum": 2},
        "moves": _count,
        "seed": {"type": "integer"},
        "kUpperBound": _count,
    },
}

ORACLE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "oracle report",
    "type": "object",
    "required": ["problem", "k", "forest"],
    "properties": {
        "problem": {"enum": ["maf", "maaf"]},
        "k": _count,
        "forest": _forest,
    },
}
