from .filter import (
    DEFAULT_WEIGHTING,
    Estimate,
    NoiseParams,
    ParticleFilter,
    ParticleSet,
    UpdateResult,
    associate,
    estimate,
    normalize_weighting,
    partition_counts,
    predict,
    update,
)

__all__ = [
    "DEFAULT_WEIGHTING",
    "Estimate",
    "NoiseParams",
    "ParticleFilter",
    "ParticleSet",
    "UpdateResult",
    "associate",
    "estimate",
    "normalize_weighting",
    "partition_counts",
    "predict",
    "update",
]
