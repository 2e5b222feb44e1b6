"""Built-in algebras: the Point Algebra and complex algebras of finite groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import AtomStructure, build_algebra

# Point Algebra atoms: e is "=", l is "<", g is ">"
POINT_ATOMS = ("e", "l", "g")

# Names for all eight Point Algebra elements, as atom lists.
POINT_ELEMENTS = {
    "zero": (),
    "eq": ("e",),
    "lt": ("l",),
    "gt": ("g",),
    "le": ("e", "l"),
    "ge": ("e", "g"),
    "ne": ("l", "g"),
    "one": ("e", "l", "g"),
}


def point_algebra_table() -> dict[tuple[str, str], tuple[str, ...]]:
    table = {}
    for a in POINT_ATOMS:
        table[("e", a)] = (a,)
        table[(a, "e")] = (a,)
    table[("l", "l")] = ("l",)
    table[("g", "g")] = ("g",)
    table[("l", "g")] = POINT_ATOMS
    table[("g", "l")] = POINT_ATOMS
    return table


def point_algebra() -> AtomStructure:
    """The eight-element algebra of =, <, > on the rationals."""
    return build_algebra(
        POINT_ATOMS,
        {"e": "e", "l": "g", "g": "l"},
        ["e"],
        point_algebra_table(),
        name="point",
    )


def point_env(A: AtomStructure | None = None) -> dict:
    """Named Point Algebra elements (``le``, ``gt``, ...) for term evaluation."""
    A = A or point_algebra()
    return {name: A.element(atoms) for name, atoms in POINT_ELEMENTS.items()}


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupTable:
    """A finite group given by its multiplication table on ``0..order-1``."""

    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    labels: tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return len(self.table)

    def __post_init__(self):
        n = len(self.table)
        if n == 0:
            raise GroupError("group of order 0")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i}" for i in range(n)))
        if len(self.labels) != n:
            raise GroupError("one label per group element required")
        rng = set(range(n))
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise GroupError(f"row {i} has length {len(row)}, expected {n}")
            if set(row) != rng:
                raise GroupError(f"not a Latin square: row {i} is not a permutation")
        for j in range(n):
            if {self.table[i][j] for i in range(n)} != rng:
                raise GroupError(f"not a Latin square: column {j} is not a permutation")
        for a, b, c in itertools.product(range(n), repeat=3):
            t = self.table
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"associativity fails at ({a},{b},{c})")
        e = self.identity
        if not 0 <= e < n:
            raise GroupError(f"identity index {e} out of range")
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise GroupError(f"identity law fails at {a}")
        if len(self.inverse) != n:
            raise GroupError("inverse map has the wrong length")
        for a in range(n):
            if self.table[a][self.inverse[a]] != e or self.table[self.inverse[a]][a] != e:
                raise GroupError(f"inverse law fails at {a}")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]


def cyclic_group(n: int) -> GroupTable:
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return GroupTable(table, 0, tuple((-a) % n for a in range(n)), tuple(f"z{i}" for i in range(n)))


def group_from_table(table: Sequence[Sequence[int]], labels=()) -> GroupTable:
    """Find identity and inverses from a bare multiplication table."""
    t = tuple(tuple(row) for row in table)
    n = len(t)
    ident = next((e for e in range(n) if all(t[e][a] == a == t[a][e] for a in range(n))), None)
    if ident is None:
        raise GroupError("identity law fails: no two-sided identity")
    inv = []
    for a in range(n):
        b = next((b for b in range(n) if t[a][b] == ident == t[b][a]), None)
        if b is None:
            raise GroupError(f"inverse law fails at {a}")
        inv.append(b)
    return GroupTable(t, ident, tuple(inv), tuple(labels))


def group_complex_algebra(g: GroupTable, name: str | None = None) -> AtomStructure:
    """Atoms are group elements, ``a;b = {ab}``, converse is inverse."""
    labels = g.labels
    comp = {
        (labels[a], labels[b]): (labels[g.mul(a, b)],)
        for a in range(g.order)
        for b in range(g.order)
    }
    return build_algebra(
        labels,
        {labels[a]: labels[g.inverse[a]] for a in range(g.order)},
        [labels[g.identity]],
        comp,
        name=name or f"group{g.order}",
    )


def cyclic_algebra(n: int) -> AtomStructure:
    return group_complex_algebra(cyclic_group(n), name=f"z{n}")


def one_atom_algebra() -> AtomStructure:
    return build_algebra(["e"], {"e": "e"}, ["e"], {("e", "e"): ["e"]}, name="trivial")


ZOO = {
    "point": point_algebra,
    "trivial": one_atom_algebra,
    "z1": lambda: cyclic_algebra(1),
    "z2": lambda: cyclic_algebra(2),
    "z3": lambda: cyclic_algebra(3),
}
