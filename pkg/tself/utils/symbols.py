"""
tself.utils.symbols - Common Unicode symbols for CLI output
===========================================================

Centralized constants so all commands use consistent
status markers (success, warnings, errors, pointers).
"""

# Status
CHECK = "✔"   # U+2714: success / passed check
FAIL  = "✘"   # U+2718: error / failed check
WARN  = "⚠"   # U+26A0: clamped, saturated, flagged

# Flow
ARROW = "➜"   # U+279C: artifact written to

# Numbers
PLUSMINUS = "±"  # U+00B1: mean ± std

__all__ = ["CHECK", "FAIL", "WARN", "ARROW", "PLUSMINUS"]
