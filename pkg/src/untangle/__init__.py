"""Untangle drawings: separator recursion plus crossing surgery."""
