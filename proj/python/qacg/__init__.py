"""Python bindings for the qacg claim generation toolkit."""

from ._qacg import (
    BackendError,
    Claim,
    ConflictError,
    DataError,
    Error,
    Label,
    LabelSpace,
    ParseError,
    UsageError,
    bleu4,
    claims_to_jsonl,
    dedup,
    filter_balanced,
    generate_claims,
    macro_prf,
    overlaps,
    perplexity_bands,
    random_guess,
    read_claims,
    rouge_l,
    run_cli,
    write_claims,
)

__all__ = [
    "BackendError",
    "Claim",
    "ConflictError",
    "DataError",
    "Error",
    "Label",
    "LabelSpace",
    "ParseError",
    "UsageError",
    "bleu4",
    "claims_to_jsonl",
    "dedup",
    "filter_balanced",
    "generate_claims",
    "macro_prf",
    "overlaps",
    "perplexity_bands",
    "random_guess",
    "read_claims",
    "rouge_l",
    "run_cli",
    "write_claims",
]
