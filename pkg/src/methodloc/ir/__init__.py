from .index import (
    ALL_FIELDS,
    CONTENT_FIELD,
    EmptyCorpus,
    Index,
    UnknownDoc,
    minmax01,
    query_tokens,
)
from .kernels import BACKEND
from .text import TOKENIZER_VERSION, stream_cosine, tokenize

__all__ = [
    "ALL_FIELDS",
    "BACKEND",
    "CONTENT_FIELD",
    "EmptyCorpus",
    "Index",
    "TOKENIZER_VERSION",
    "UnknownDoc",
    "minmax01",
    "query_tokens",
    "stream_cosine",
    "tokenize",
]
