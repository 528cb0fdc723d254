"""
Command-line commands of dftn.

Each command lives in its own module; ``dftn.main`` registers them on the
Typer application.
"""
