"""Counterexample-guided repair of small C programs with a language-model
generator, formula-based fault localization and test-suite verification."""

__version__ = "0.1.0"
