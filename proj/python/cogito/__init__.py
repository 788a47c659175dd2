"""Python access to the cogito thinking loop."""

from ._cogito import (
    CogitoError,
    best_match,
    build_prompt,
    cosine_similarity,
    dodge_sketch,
    encode_pgm,
    format_ranking,
    gaussian_kernel,
    hash_embed,
    parse_actions,
    procedural_image,
    rank_contexts,
    run_cli,
    run_scenario,
    sketchify,
    template_generate,
    to_grayscale,
    validate_scenario,
)

__all__ = [
    "CogitoError",
    "best_match",
    "build_prompt",
    "cosine_similarity",
    "dodge_sketch",
    "encode_pgm",
    "format_ranking",
    "gaussian_kernel",
    "hash_embed",
    "parse_actions",
    "procedural_image",
    "rank_contexts",
    "run_cli",
    "run_scenario",
    "sketchify",
    "template_generate",
    "to_grayscale",
    "validate_scenario",
]
