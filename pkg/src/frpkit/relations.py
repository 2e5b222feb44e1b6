"""Binary relations over a finite base ``{0, ..., n-1}``.

A relation is an ``n*n`` bit matrix packed into one integer: pair ``(x, y)``
lives at bit ``x*n + y``.  Row ``x`` is therefore the ``n``-bit slice starting
at ``x*n``, and composition is a boolean matrix product done row by row.

The raw-integer helpers (``compose_bits`` and friends) are what the search
module uses in its inner loop; :class:`Relation` wraps them for everyone else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

Pair = tuple[int, int]


class BaseMismatch(ValueError):
    """Raised when relations over different bases are combined."""


@lru_cache(maxsize=None)
def full_bits(n: int) -> int:
    return (1 << (n * n)) - 1


@lru_cache(maxsize=None)
def identity_bits(n: int) -> int:
    bits = 0
    for x in range(n):
        bits |= 1 << (x * n + x)
    return bits


def row_bits(bits: int, x: int, n: int) -> int:
    return (bits >> (x * n)) & ((1 << n) - 1)


def compose_bits(r: int, s: int, n: int) -> int:
    mask = (1 << n) - 1
    srows = [(s >> (y * n)) & mask for y in range(n)]
    out = 0
    for x in range(n):
        row = (r >> (x * n)) & mask
        acc = 0
        y = 0
        while row:
            if row & 1:
                acc |= srows[y]
            row >>= 1
            y += 1
        out |= acc << (x * n)
    return out


@lru_cache(maxsize=None)
def _transpose_table(n: int) -> tuple[int, ...] | None:
    # only worth it while the table stays small
    if n * n > 16:
        return None
    return tuple(_transpose_slow(b, n) for b in range(1 << (n * n)))


def _transpose_slow(r: int, n: int) -> int:
    out = 0
    for x in range(n):
        for y in range(n):
            if r >> (x * n + y) & 1:
                out |= 1 << (y * n + x)
    return out


def converse_bits(r: int, n: int) -> int:
    table = _transpose_table(n)
    if table is not None:
        return table[r]
    return _transpose_slow(r, n)


def pairs_of(bits: int, n: int) -> list[Pair]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(divmod(i, n))
        bits >>= 1
        i += 1
    return out


def least_pair(bits: int, n: int) -> Pair | None:
    if not bits:
        return None
    low = (bits & -bits).bit_length() - 1
    return divmod(low, n)


@dataclass(frozen=True)
class Relation:
    """A binary relation on ``{0, ..., size-1}``."""

    size: int
    bits: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"base size must be >= 1, got {self.size}")
        if self.bits < 0 or self.bits > full_bits(self.size):
            raise ValueError(f"pair outside base of size {self.size}")

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Pair]) -> Relation:
        bits = 0
        for x, y in pairs:
            if not (0 <= x < size and 0 <= y < size):
                raise ValueError(f"pair ({x},{y}) outside base of size {size}")
            bits |= 1 << (x * size + y)
        return cls(size, bits)

    @classmethod
    def empty(cls, size: int) -> Relation:
        return cls(size, 0)

    @classmethod
    def full(cls, size: int) -> Relation:
        return cls(size, full_bits(size))

    @classmethod
    def identity(cls, size: int) -> Relation:
        return cls(size, identity_bits(size))

    def pairs(self) -> list[Pair]:
        return pairs_of(self.bits, self.size)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, pair) -> bool:
        x, y = pair
        if not (0 <= x < self.size and 0 <= y < self.size):
            return False
        return bool(self.bits >> (x * self.size + y) & 1)

    def _same_base(self, other: Relation) -> None:
        if self.size != other.size:
            raise BaseMismatch(
                f"relations over bases of size {self.size} and {other.size}"
            )

    def compose(self, other: Relation) -> Relation:
        self._same_base(other)
        return Relation(self.size, compose_bits(self.bits, other.bits, self.size))

    def converse(self) -> Relation:
        return Relation(self.size, converse_bits(self.bits, self.size))

    def union(self, other: Relation) -> Relation:
        self._same_base(other)
        return Relation(self.size, self.bits | other.bits)

    def intersection(self, other: Relation) -> Relation:
        self._same_base(other)
        return Relation(self.size, self.bits & other.bits)

    def complement(self) -> Relation:
        return Relation(self.size, full_bits(self.size) ^ self.bits)

    def difference(self, other: Relation) -> Relation:
        self._same_base(other)
        return Relation(self.size, self.bits & ~other.bits)

    def issubset(self, other: Relation) -> bool:
        self._same_base(other)
        return self.bits & ~other.bits == 0

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __le__ = issubset
    __neg__ = complement

    def padded(self, size: int) -> Relation:
        """The same pairs viewed over a larger base."""
        if size < self.size:
            raise ValueError("cannot shrink a base")
        return Relation.from_pairs(size, self.pairs())

    def render(self, labels=None) -> str:
        if labels is None:
            return " ".join(f"({x},{y})" for x, y in self.pairs())
        return " ".join(f"({labels[x]},{labels[y]})" for x, y in self.pairs())

    def __str__(self) -> str:
        return "{" + self.render() + "}"


def rel_compose(r: Relation, s: Relation) -> Relation:
    return r.compose(s)


def rel_converse(r: Relation) -> Relation:
    return r.converse()


def rel_identity(size: int) -> Relation:
    return Relation.identity(size)


def rel_boolean(kind: str, r: Relation, s: Relation | None = None) -> Relation:
    """Union, intersection, difference or complement (relative to ``base x base``)."""
    if kind == "complement":
        if s is not None:
            raise TypeError("complement takes one relation")
        return r.complement()
    if s is None:
        raise TypeError(f"{kind} takes two relations")
    if kind == "union":
        return r.union(s)
    if kind == "intersection":
        return r.intersection(s)
    if kind == "difference":
        return r.difference(s)
    raise ValueError(f"unknown boolean operation {kind!r}")


@dataclass(frozen=True)
class ProperStructure:
    """A finite base together with named concrete relations."""

    size: int
    relations: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"base size must be >= 1, got {self.size}")
        for name, rel in self.relations.items():
            if rel.size != self.size:
                raise BaseMismatch(
                    f"relation {name!r} lives on base {rel.size}, not {self.size}"
                )

    def __getitem__(self, name: str) -> Relation:
        return self.relations[name]
