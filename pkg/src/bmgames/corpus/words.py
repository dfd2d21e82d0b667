"""Word-level helpers shared by several bundles."""

from __future__ import annotations

from itertools import count, product


def triangular(n: int) -> int:
    return n * (n + 1) // 2


def is_triangular_index(i: int) -> int | None:
    """``n`` with ``triangular(n) == i``, else ``None``."""
    n = int(((8 * i + 1) ** 0.5 - 1) / 2)
    for k in (n - 1, n, n + 1):
        if k >= 1 and triangular(k) == i:
            return k
    return None


def next_triangular(pos: int, least_n: int = 2) -> tuple[int, int]:
    """Smallest ``(n, a_n)`` with ``a_n >= pos`` and ``n >= least_n``."""
    n = least_n
    while triangular(n) < pos:
        n += 1
    return n, triangular(n)


def word_stream(alphabet=(0, 1)):
    """All nonempty words over ``alphabet`` in length-lex order."""
    for n in count(1):
        yield from product(alphabet, repeat=n)


class EnumerationWord:
    """The infinite concatenation of :func:`word_stream`, optionally behind a head."""

    def __init__(self, head=(), alphabet=(0, 1)):
        self._buf = list(head)
        self._src = word_stream(alphabet)

    def at(self, i: int):
        """Letter at 1-based position ``i``."""
        while len(self._buf) < i:
            self._buf.extend(next(self._src))
        return self._buf[i - 1]

    def slice(self, i: int, j: int) -> tuple:
        """Letters at positions ``i..j`` inclusive."""
        self.at(j)
        return tuple(self._buf[i - 1 : j])

    def find(self, pattern: tuple, start: int, horizon: int) -> int | None:
        """First position ``p >= start`` where ``pattern`` begins, within ``horizon`` letters."""
        k = len(pattern)
        self.at(start + horizon + k)
        buf = self._buf
        for p in range(start, start + horizon + 1):
            if tuple(buf[p - 1 : p - 1 + k]) == pattern:
                return p
        return None


def runs(word, letter) -> list[int]:
    """Lengths of the maximal runs of ``letter``."""
    out, cur = [], 0
    for a in word:
        if a == letter:
            cur += 1
        elif cur:
            out.append(cur)
            cur = 0
    if cur:
        out.append(cur)
    return out


def even_palindrome_split(word) -> list[int] | None:
    """Cut points splitting ``word`` into blocks ``w w^R`` (nonempty ``w``), or ``None``."""
    n = len(word)
    back = [None] * (n + 1)
    back[0] = -1
    for j in range(2, n + 1, 2):
        for i in range(j - 2, -1, -2):
            if back[i] is None:
                continue
            block = word[i:j]
            if block == block[::-1]:
                back[j] = i
                break
    if back[n] is None:
        return None
    cuts, j = [], n
    while j > 0:
        cuts.append(j)
        j = back[j]
    return sorted(cuts)
