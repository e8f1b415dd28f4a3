"""Three-sorted Denef-Pas language: syntax, parser and bounded evaluator."""
