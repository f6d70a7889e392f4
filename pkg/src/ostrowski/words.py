"""Digit-word plumbing.

Internally a digit word is a tuple of small nonnegative integers stored
least-significant-first: index ``k-1`` holds the digit at position ``k``,
the coefficient of ``q_{k-1}``.  All text rendering is most-significant
digit first, space separated, because digits may exceed 9 (``"12 0 3"``).
The empty word renders as ``"0"``.
"""

from __future__ import annotations

Word = tuple[int, ...]


def from_text(text: str) -> Word:
    """Parse a space-separated, MSD-first digit string into an LSD-first word."""
    tokens = text.split()
    digits = []
    for tok in tokens:
        try:
            d = int(tok)
        except ValueError:
            raise ValueError(f"bad digit token {tok!r}") from None
        if d < 0:
            raise ValueError(f"bad digit token {tok!r}")
        digits.append(d)
    return tuple(reversed(digits))


def to_text(word: Word) -> str:
    if not word:
        return "0"
    return " ".join(str(d) for d in reversed(word))


def strip(word: Word) -> Word:
    """Drop leading (most significant) zeros."""
    n = len(word)
    while n > 0 and word[n - 1] == 0:
        n -= 1
    return tuple(word[:n])


def pad(word: Word, length: int) -> Word:
    """Left-pad with zeros (in MSD terms) to at least the given length."""
    if len(word) >= length:
        return tuple(word)
    return tuple(word) + (0,) * (length - len(word))
