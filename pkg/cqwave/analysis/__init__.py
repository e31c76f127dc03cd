"""Persistence and loading of run artifacts."""
