"""Exact K-theory of root stacks over affine curves via extendable pairs."""

__version__ = "0.1.0"
