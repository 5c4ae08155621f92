"""Positional morphosyntactic tags: specification tables, tag codecs, lexicons,
annotated corpora and sentence alignments."""

__version__ = "0.1.0"
