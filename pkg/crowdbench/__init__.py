"""crowdbench package."""
