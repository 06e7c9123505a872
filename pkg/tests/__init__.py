"""Test package for gs-forge."""
