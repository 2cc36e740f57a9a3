"""Reading-activity service: grounded content generation, parent review,
and four-mode parent/robot session orchestration."""

__version__ = "0.1.0"
