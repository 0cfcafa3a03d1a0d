"""
JSON schemas for run configurations and comparison reports.
Defines validation schemas for the config document and the report artifact.
"""

ROUTES = ["simulate", "resonant", "near-resonant"]

WALK_SCHEMA = {
    "type": "object",
    "properties": {
        "kick_strength": {"type": "number"},
        "steps": {"type": "integer", "minimum": 0},
        "quasimomentum": {"type": "number"},
        "kick_period": {"type": "number", "exclusiveMinimum": 0},
        "momentum_cutoff": {"type": ["integer", "null"], "minimum": 1},
        "free_evolution_mode": {"type": "string", "enum": ["simplified", "full"]}
    },
    "required": ["kick_strength", "steps"],
    "additionalProperties": False
}

RATCHET_SCHEMA = {
    "type": "object",
    "properties": {
        "classes": {
            "type": "array",
            "items": {"type": "integer"},
            "minItems": 1,
            "uniqueItems": True
        },
        "level_weights": {
            "type": "array",
            "items": {"type": "number"},
            "minItems": 2,
            "maxItems": 2
        },
        "ladder_phase": {"type": "number"}
    },
    "additionalProperties": False
}

ENSEMBLE_SCHEMA = {
    "type": "object",
    "properties": {
        "fwhm": {"type": "number", "minimum": 0},
        "n_samples": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0, "maximum": 18446744073709551615}
    },
    "additionalProperties": False
}

RUN_SCHEMA = {
    "type": "object",
    "properties": {
        "route": {"type": "string", "enum": ROUTES},
        "against": {"type": ["string", "null"], "enum": ROUTES + [None]},
        "out": {"type": "string", "minLength": 1},
        "plot": {"type": "boolean"},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "exclude_initial": {"type": "boolean"},
        "workers": {"type": "integer", "minimum": 1}
    },
    "additionalProperties": False
}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "walk": WALK_SCHEMA,
        "ratchet": RATCHET_SCHEMA,
        "ensemble": ENSEMBLE_SCHEMA,
        "run": RUN_SCHEMA
    },
    "required": ["walk", "ratchet", "ensemble", "run"],
    "additionalProperties": False
}

COMPARISON_REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "routes": {
            "type": "array",
            "items": {"type": "string", "enum": ROUTES},
            "minItems": 2,
            "maxItems": 2
        },
        "config": {"type": "object"},
        "max_norm": {"type": "number", "minimum": 0},
        "l1": {"type": "number", "minimum": 0},
        "max_norm_excluded": {"type": "number", "minimum": 0},
        "l1_excluded": {"type": "number", "minimum": 0},
        "excluded_classes": {"type": "array", "items": {"type": "integer"}},
        "worst_n": {"type": "integer"},
        "initial_deviation": {
            "type": "object",
            "additionalProperties": {"type": "number", "minimum": 0}
        },
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "exclude_initial": {"type": "boolean"},
        "judgment": {"type": "string", "enum": ["Pass", "Fail"]}
    },
    "required": [
        "routes", "config", "max_norm", "l1", "max_norm_excluded", "l1_excluded",
        "worst_n", "tolerance", "exclude_initial", "judgment"
    ]
}

COMPARISON_CASES_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {
            "name": {"type": "string", "minLength": 1},
            "description": {"type": "string"},
            "config": {"type": "object"}
        },
        "required": ["name", "config"],
        "additionalProperties": False
    }
}
