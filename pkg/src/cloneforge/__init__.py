"""Clone-aware source transformation and contrastive pre-training toolkit.

The package covers the full pipeline: parsing C/C++/Java functions into
concrete syntax trees, generating semantics-preserving clones and subtly
buggy variants, labeling tokens with their syntactic context, subword
tokenization, the pre-training objectives (masked token recovery, token
type prediction, clone-contrastive loss), a small trainable encoder, and
retrieval-style evaluation metrics.
"""

from .lang import AstNode, Language, SourceFunction, parse, parse_file

__version__ = "0.1.0"

__all__ = [
    "AstNode",
    "Language",
    "SourceFunction",
    "parse",
    "parse_file",
    "__version__",
]
