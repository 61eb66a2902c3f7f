"""Word combinatorics for the free semigroup on d generators.

A word is a tuple of generator indices, each in 1..d; the empty tuple is
the neutral element. All index sets used by the kernel pipeline are the
truncations Lambda_N (words of length <= N) in length-lexicographic order,
so Gram matrices and reports have a deterministic block layout.
"""

from dataclasses import dataclass
from itertools import product

from .errors import WordOutOfRange

Word = tuple[int, ...]

EMPTY: Word = ()


def lambda_count(d: int, max_len: int) -> int:
    """Number of words of length <= max_len over an alphabet of size d."""
    if d < 1:
        raise ValueError(f"alphabet size must be >= 1, got {d}")
    if max_len < 0:
        raise ValueError(f"level must be >= 0, got {max_len}")
    if d == 1:
        return max_len + 1
    return (d ** (max_len + 1) - 1) // (d - 1)


def words_of_length(d: int, length: int) -> list[Word]:
    """All words of exactly the given length, in lexicographic order."""
    if d < 1:
        raise ValueError(f"alphabet size must be >= 1, got {d}")
    return list(product(range(1, d + 1), repeat=length))


@dataclass(frozen=True)
class WordSet:
    """The truncation Lambda_N: all words of length <= max_len, length-lex ordered.

    The suffix of entries of length exactly max_len is the boundary; the
    prefix of entries of length <= m is Lambda_m for every m <= max_len.
    """

    d: int
    max_len: int
    words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __getitem__(self, i):
        return self.words[i]

    def index(self, w: Word) -> int:
        k = len(w)
        if k > self.max_len or any(not (1 <= a <= self.d) for a in w):
            raise WordOutOfRange(
                f"word {w} is not in Lambda_{self.max_len} over alphabet 1..{self.d}"
            )
        off = lambda_count(self.d, k - 1) if k > 0 else 0
        rank = 0
        for a in w:
            rank = rank * self.d + (a - 1)
        return off + rank

    def boundary(self) -> tuple[Word, ...]:
        """Words of length exactly max_len."""
        start = lambda_count(self.d, self.max_len - 1) if self.max_len > 0 else 0
        return self.words[start:]

    def up_to(self, m: int) -> tuple[Word, ...]:
        """The prefix Lambda_m, for -1 <= m <= max_len (m = -1 is empty)."""
        if m < -1 or m > self.max_len:
            raise ValueError(f"level {m} not in [-1, {self.max_len}]")
        if m == -1:
            return ()
        return self.words[: lambda_count(self.d, m)]


def enumerate_words(d: int, max_len: int) -> WordSet:
    """Enumerate Lambda_{max_len} in length-lexicographic order."""
    if d < 1:
        raise ValueError(f"alphabet size must be >= 1, got {d}")
    if max_len < 0:
        raise ValueError(f"level must be >= 0, got {max_len}")
    words: list[Word] = []
    for length in range(max_len + 1):
        words.extend(words_of_length(d, length))
    return WordSet(d=d, max_len=max_len, words=tuple(words))


def reverse_word(w: Word) -> Word:
    """Reversal i_1...i_k -> i_k...i_1; an involution fixing the empty word."""
    return w[::-1]
