"""chatgraph: conversational-graph extraction and structure-only abuse classification.

The pipeline: parse a chat corpus, extract weighted directed graphs around
targeted messages (Before/After/Full), compute a catalog of topological
features, then train/evaluate a linear hinge-loss classifier, with feature
elimination and feature-correlation analyses plus a calibrated synthetic
corpus generator for end-to-end validation.
"""

from .corpus import (Corpus, ContextPeriod, CorpusError, Message,
                     detect_references, parse_corpus, parse_corpus_file,
                     write_corpus)
from .extraction import (ExtractionParams, ExtractionError, GraphTriple,
                         extract, receiver_list, score, scores)
from .graph import ConversationalGraph, GraphError, GraphView

__all__ = [
    "Corpus", "ContextPeriod", "CorpusError", "Message",
    "detect_references", "parse_corpus", "parse_corpus_file", "write_corpus",
    "ExtractionParams", "ExtractionError", "GraphTriple", "extract",
    "receiver_list", "score", "scores",
    "ConversationalGraph", "GraphError", "GraphView",
]

__version__ = "0.1.0"
