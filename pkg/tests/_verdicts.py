"""Shared accumulator for the acceptance gate's verdict lines.

The conftest terminal-summary hook prints whatever lands here, so the one
line per criterion survives output capture in any pytest mode.
"""

LINES = []
