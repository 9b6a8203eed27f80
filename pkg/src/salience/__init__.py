"""Entity salience detection: data model, enrichment, models, evaluation."""

__version__ = "0.1.0"
