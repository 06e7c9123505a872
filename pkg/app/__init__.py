"""gs-forge package."""
