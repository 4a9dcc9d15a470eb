"""Knowledge authoring from factual-English dependency parses.

The pipeline validates ranked dependency parses against the factual
fragment, repairs tagger errors, normalizes voice/coordination/adnominal
structure, extracts frame instances through learned valence patterns,
disambiguates role fillers, and emits unique logical representations
that a disjunctive answer-set engine with event-calculus inertia can
reason over.
"""

__version__ = "0.1.0"
