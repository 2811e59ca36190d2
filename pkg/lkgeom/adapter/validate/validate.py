# lkgeom/adapter/validate/validate.py
from pathlib import Path

from lkgeom.adapter.error.error import InputOutputError, ValidationError

ALLOWED_EXTENSIONS = {"json"}


def allowed_file(filename: str) -> bool:
    return "." in filename and filename.rsplit(".", 1)[1].lower() in ALLOWED_EXTENSIONS


def check_input_path(path: str) -> Path:
    """Existence and extension check for a CLI input file."""
    if not allowed_file(path):
        raise ValidationError(f"Input must be a .json file, got {path!r}", error_code="BAD_EXTENSION")
    p = Path(path)
    if not p.is_file():
        raise InputOutputError(f"Input file not found: {path}", error_code="FILE_NOT_FOUND")
    return p
