from .fields import extract_fields
from .lexer import ParseError
from .splitter import (
    MethodUnit,
    UnencodableName,
    method_file_name,
    render_method_file,
    split_compilation_unit,
)

__all__ = [
    "MethodUnit",
    "ParseError",
    "UnencodableName",
    "extract_fields",
    "method_file_name",
    "render_method_file",
    "split_compilation_unit",
]
