"""Multi-agent robot orchestration: behavior-tree strategies, a deterministic
field simulation, navigation and localization, question answering over
execution outcomes, and an evaluation harness."""

__version__ = "0.1.0"
