"""Corpus forensics for wiki article dumps.

Analyzes article text and edit metadata to surface the fingerprints of
mass template translation: shallow-length distributions, depressed lexical
diversity, anomalously flat n-gram decay, and misleading creator/editor
typing. On top of the exploratory metrics it provides a heuristic labeling
rule engine, metadata/embedding feature assembly, five from-scratch
classifiers, three clusterers, and a scanner service that classifies a
single article on demand.
"""

__version__ = "0.1.0"
