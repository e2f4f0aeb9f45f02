from .documents import (
    DocumentError,
    build_runtime,
    run_simulate,
    run_sweep_document,
    validate_document,
)

__all__ = [
    "DocumentError",
    "build_runtime",
    "run_simulate",
    "run_sweep_document",
    "validate_document",
]
