"""Data model, windows and NDJSON persistence."""
