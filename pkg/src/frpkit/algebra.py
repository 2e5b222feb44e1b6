"""Finite relation algebras given by atom structures.

Elements are sets of atoms, stored as bitmasks over the atom ordering (atom
``i`` is bit ``i``).  The Boolean operations are bit operations; converse and
composition are defined on atoms and lifted additively.

``check_ra_axioms`` verifies the five axiom groups by exhaustive enumeration.
For small algebras every law is checked over all elements; past
``exhaustive_limit`` elements the laws are checked on atoms, which is
equivalent because composition and converse are lifted additively.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

ATOM_CAP = 16
EXHAUSTIVE_LIMIT = 16

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class AlgebraError(ValueError):
    """Malformed atom structure data."""


class MixedAlgebraError(ValueError):
    """Operands belong to different algebras."""


class TooLargeError(ValueError):
    pass


def _bits(mask: int) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True, eq=False)
class AtomStructure:
    """Atoms, their converses, the identity atoms and the atom composition table.

    Use :func:`build_algebra` to construct one from names; the fields here
    are the validated index form.
    """

    name: str
    atoms: tuple[str, ...]
    converse_index: tuple[int, ...]
    identity_mask: int
    comp_masks: tuple[tuple[int, ...], ...]
    _index: dict = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.atoms)})
        object.__setattr__(
            self,
            "_hash",
            hash((self.atoms, self.converse_index, self.identity_mask, self.comp_masks)),
        )

    # structural equality; the name is a label only
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AtomStructure):
            return NotImplemented
        return (
            self.atoms == other.atoms
            and self.converse_index == other.converse_index
            and self.identity_mask == other.identity_mask
            and self.comp_masks == other.comp_masks
        )

    def __hash__(self):
        return self._hash

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def n_elements(self) -> int:
        return 1 << len(self.atoms)

    @property
    def top_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    def atom_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown atom {name!r}") from None

    # -- mask-level operations (no wrapping, used by the hot paths) --

    def compose_masks(self, x: int, y: int) -> int:
        out = 0
        for a in _bits(x):
            row = self.comp_masks[a]
            for b in _bits(y):
                out |= row[b]
        return out

    def converse_mask(self, x: int) -> int:
        out = 0
        for a in _bits(x):
            out |= 1 << self.converse_index[a]
        return out

    def negate_mask(self, x: int) -> int:
        return self.top_mask ^ x

    def domain_mask(self, x: int) -> int:
        return self.identity_mask & self.compose_masks(x, self.converse_mask(x))

    def mask_of(self, names: Iterable[str]) -> int:
        m = 0
        for a in names:
            m |= 1 << self.atom_index(a)
        return m

    def names_of(self, mask: int) -> list[str]:
        return [self.atoms[i] for i in _bits(mask)]

    def render_mask(self, mask: int) -> str:
        if mask == 0:
            return "0"
        return "+".join(self.names_of(mask))

    # -- Element views --

    def element(self, spec) -> Element:
        """Build an element from a mask, an atom name, or an iterable of names."""
        if isinstance(spec, Element):
            if spec.algebra != self:
                raise MixedAlgebraError("element belongs to a different algebra")
            return spec
        if isinstance(spec, int):
            if spec < 0 or spec > self.top_mask:
                raise ValueError(f"mask {spec} outside algebra {self.name!r}")
            return Element(self, spec)
        if isinstance(spec, str):
            return Element(self, self.mask_of([spec]))
        return Element(self, self.mask_of(spec))

    def elements(self) -> list[Element]:
        return [Element(self, m) for m in range(self.n_elements)]

    def atom_elements(self) -> list[Element]:
        return [Element(self, 1 << i) for i in range(self.n_atoms)]

    @property
    def zero(self) -> Element:
        return Element(self, 0)

    @property
    def one(self) -> Element:
        return Element(self, self.top_mask)

    @property
    def identity(self) -> Element:
        return Element(self, self.identity_mask)

    def comp_table(self) -> dict[tuple[str, str], frozenset[str]]:
        return {
            (a, b): frozenset(self.names_of(self.comp_masks[i][j]))
            for i, a in enumerate(self.atoms)
            for j, b in enumerate(self.atoms)
        }

    def converse_map(self) -> dict[str, str]:
        return {a: self.atoms[self.converse_index[i]] for i, a in enumerate(self.atoms)}


@dataclass(frozen=True)
class Element:
    """A set of atoms of one algebra."""

    algebra: AtomStructure
    mask: int

    def _check(self, other: Element) -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected an Element, got {type(other).__name__}")
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise MixedAlgebraError("operands belong to different algebras")

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.mask == other.mask and (
            self.algebra is other.algebra or self.algebra == other.algebra
        )

    def __hash__(self):
        return hash((self.algebra, self.mask))

    def __or__(self, other: Element) -> Element:
        return join(self, other)

    def __and__(self, other: Element) -> Element:
        return meet(self, other)

    def __neg__(self) -> Element:
        return negate(self)

    def __le__(self, other: Element) -> bool:
        return leq(self, other)

    def compose(self, other: Element) -> Element:
        return compose(self, other)

    def converse(self) -> Element:
        return converse_of(self)

    @property
    def atom_names(self) -> list[str]:
        return self.algebra.names_of(self.mask)

    def __str__(self) -> str:
        return self.algebra.render_mask(self.mask)

    def __repr__(self) -> str:
        return f"Element({self.algebra.name}:{self})"


def build_algebra(
    atoms: Sequence[str],
    converse_map: Mapping[str, str],
    identity_atoms: Iterable[str],
    comp_table: Mapping[tuple[str, str], Iterable[str]],
    name: str = "algebra",
) -> AtomStructure:
    """Validate the generating data of a finite algebra.

    Only well-formedness is checked here (distinct names, involutive converse,
    a nonempty converse-closed identity set, a total composition table).  The
    relation algebra axioms are the job of :func:`check_ra_axioms`.
    """
    atoms = tuple(atoms)
    if not atoms:
        raise AlgebraError("an algebra needs at least one atom")
    seen = set()
    for a in atoms:
        if not isinstance(a, str) or not _NAME.match(a):
            raise AlgebraError(f"atom name {a!r} is not an identifier")
        if a in seen:
            raise AlgebraError(f"duplicate atom name {a!r}")
        seen.add(a)
    index = {a: i for i, a in enumerate(atoms)}

    def lookup(a, where):
        try:
            return index[a]
        except KeyError:
            raise AlgebraError(f"unknown atom {a!r} in {where}") from None

    conv = []
    for a in atoms:
        if a not in converse_map:
            raise AlgebraError(f"converse of atom {a!r} not given")
        conv.append(lookup(converse_map[a], f"converse of {a!r}"))
    for a in converse_map:
        lookup(a, "converse map")
    for i, a in enumerate(atoms):
        if conv[conv[i]] != i:
            raise AlgebraError(
                f"converse not involutive: {a} -> {atoms[conv[i]]} -> {atoms[conv[conv[i]]]}"
            )

    ident = 0
    for a in identity_atoms:
        ident |= 1 << lookup(a, "identity atoms")
    if ident == 0:
        raise AlgebraError("identity atom set is empty")
    for i in _bits(ident):
        if not ident >> conv[i] & 1:
            raise AlgebraError(
                f"identity atoms not closed under converse: {atoms[i]} -> {atoms[conv[i]]}"
            )

    for a, b in comp_table:
        lookup(a, f"composition entry ({a},{b})")
        lookup(b, f"composition entry ({a},{b})")
    rows = []
    for a in atoms:
        row = []
        for b in atoms:
            if (a, b) not in comp_table:
                raise AlgebraError(f"composition table missing entry ({a},{b})")
            m = 0
            for c in comp_table[(a, b)]:
                m |= 1 << lookup(c, f"composition entry ({a},{b})")
            row.append(m)
        rows.append(tuple(row))
    return AtomStructure(name, atoms, tuple(conv), ident, tuple(rows))


# -- element operations --------------------------------------------------


def _same(x: Element, y: Element) -> AtomStructure:
    x._check(y)
    return x.algebra


def join(x: Element, y: Element) -> Element:
    return Element(_same(x, y), x.mask | y.mask)


def meet(x: Element, y: Element) -> Element:
    return Element(_same(x, y), x.mask & y.mask)


def negate(x: Element) -> Element:
    return Element(x.algebra, x.algebra.top_mask ^ x.mask)


def leq(x: Element, y: Element) -> bool:
    _same(x, y)
    return x.mask & ~y.mask == 0


def compose(x: Element, y: Element) -> Element:
    A = _same(x, y)
    return Element(A, A.compose_masks(x.mask, y.mask))


def converse_of(x: Element) -> Element:
    return Element(x.algebra, x.algebra.converse_mask(x.mask))


def identity_element(A: AtomStructure) -> Element:
    return A.identity


def atoms_below(x: Element) -> list[Element]:
    return [Element(x.algebra, 1 << i) for i in _bits(x.mask)]


def is_atom(x: Element) -> bool:
    return x.mask != 0 and x.mask & (x.mask - 1) == 0


def domain(x: Element) -> Element:
    """``1' . (x ; x~)``."""
    return meet(identity_element(x.algebra), compose(x, converse_of(x)))


# -- axiom checking -------------------------------------------------------

GROUP_TITLES = {
    1: "boolean algebra",
    2: "additivity of ; and ~",
    3: "complement/converse and a;1 laws",
    4: "converse, associativity and identity laws",
    5: "peircean law",
}


@dataclass(frozen=True)
class AxiomFailure:
    algebra: AtomStructure
    group: int
    law: str
    witness: tuple[Element, ...]

    def recheck(self) -> bool:
        """True iff the witness still violates the law."""
        A = self.algebra
        masks = tuple(w.mask for w in self.witness)
        return not _LAWS_BY_NAME[self.law](_Ops(A), *masks)

    def describe(self) -> str:
        args = ", ".join(str(w) for w in self.witness)
        return f"{self.law} fails at ({args})"


@dataclass
class AxiomReport:
    algebra: AtomStructure
    verdicts: dict[int, bool]
    failures: dict[int, AxiomFailure]
    exhaustive: bool
    note: str = ""

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def first_failure(self) -> AxiomFailure | None:
        for g in sorted(self.failures):
            return self.failures[g]
        return None

    def lines(self) -> list[str]:
        out = []
        for g in sorted(self.verdicts):
            status = "pass" if self.verdicts[g] else "FAIL"
            line = f"group {g} ({GROUP_TITLES[g]}): {status}"
            if g in self.failures:
                line += f": {self.failures[g].describe()}"
            out.append(line)
        return out


class _Ops:
    """Mask-level operations with an element composition cache."""

    def __init__(self, A: AtomStructure, table: bool = False):
        self.A = A
        self.top = A.top_mask
        self.ident = A.identity_mask
        self._comp = None
        if table:
            n = A.n_elements
            self._comp = [[A.compose_masks(x, y) for y in range(n)] for x in range(n)]
        self._conv = None
        if table:
            self._conv = [A.converse_mask(x) for x in range(A.n_elements)]

    def comp(self, x: int, y: int) -> int:
        if self._comp is not None:
            return self._comp[x][y]
        return self.A.compose_masks(x, y)

    def conv(self, x: int) -> int:
        if self._conv is not None:
            return self._conv[x]
        return self.A.converse_mask(x)

    def neg(self, x: int) -> int:
        return self.top ^ x


# Each law takes the ops object and its variables and returns True when it holds.


def _bool_distributive(o, x, y, z):
    return x & (y | z) == (x & y) | (x & z)


def _bool_complement(o, x):
    return x & o.neg(x) == 0 and x | o.neg(x) == o.top and o.neg(o.neg(x)) == x


def _bool_de_morgan(o, x, y):
    return o.neg(x | y) == o.neg(x) & o.neg(y)


def _comp_additive_left(o, x, y, z):
    return o.comp(x | y, z) == o.comp(x, z) | o.comp(y, z)


def _comp_additive_right(o, x, y, z):
    return o.comp(x, y | z) == o.comp(x, y) | o.comp(x, z)


def _conv_additive(o, x, y):
    return o.conv(x | y) == o.conv(x) | o.conv(y)


def _neg_conv(o, x):
    return o.neg(o.conv(x)) == o.conv(o.neg(x))


def _unit_or_co_unit(o, x):
    return o.comp(x, o.top) == o.top or o.comp(o.neg(x), o.top) == o.top


def _conv_of_comp(o, x, y):
    return o.conv(o.comp(x, y)) == o.comp(o.conv(y), o.conv(x))


def _conv_involution(o, x):
    return o.conv(o.conv(x)) == x


def _conv_identity(o):
    return o.conv(o.ident) == o.ident


def _associativity(o, x, y, z):
    return o.comp(o.comp(x, y), z) == o.comp(x, o.comp(y, z))


def _identity_law(o, x):
    return o.comp(o.ident, x) == x and o.comp(x, o.ident) == x


def _peircean(o, a, b, c):
    return (a & o.comp(b, c) == 0) == (b & o.comp(a, o.conv(c)) == 0)


# (group, law name, function, arity) in checking order
_LAWS: list[tuple[int, str, Callable, int]] = [
    (1, "distributivity", _bool_distributive, 3),
    (1, "complementation", _bool_complement, 1),
    (1, "de morgan", _bool_de_morgan, 2),
    (2, "left additivity of ;", _comp_additive_left, 3),
    (2, "right additivity of ;", _comp_additive_right, 3),
    (2, "additivity of ~", _conv_additive, 2),
    (3, "-(a~) = (-a)~", _neg_conv, 1),
    (3, "a;1 = 1 or (-a);1 = 1", _unit_or_co_unit, 1),
    (4, "(a;b)~ = b~;a~", _conv_of_comp, 2),
    (4, "a~~ = a", _conv_involution, 1),
    (4, "1'~ = 1'", _conv_identity, 0),
    (4, "associativity", _associativity, 3),
    (4, "identity law", _identity_law, 1),
    (5, "peircean law", _peircean, 3),
]
_LAWS_BY_NAME = {name: fn for _, name, fn, _ in _LAWS}

# laws whose atom-level check implies the element-level one by additivity
_ATOMWISE = {
    "left additivity of ;",
    "right additivity of ;",
    "additivity of ~",
    "(a;b)~ = b~;a~",
    "a~~ = a",
    "associativity",
    "identity law",
    "peircean law",
    "-(a~) = (-a)~",
}


def _tuples(domain: Sequence[int], arity: int):
    if arity == 0:
        yield ()
        return
    if arity == 1:
        for x in domain:
            yield (x,)
        return
    for x in domain:
        for rest in _tuples(domain, arity - 1):
            yield (x,) + rest


def check_ra_axioms(
    A: AtomStructure,
    atom_cap: int = ATOM_CAP,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> AxiomReport:
    """Check the five relation algebra axiom groups on ``A``.

    Every law of a group is tried in turn; the first failing law supplies the
    group's witness, the least failing tuple in mask order.
    """
    if A.n_atoms > atom_cap:
        raise TooLargeError(
            f"algebra {A.name!r} has {A.n_atoms} atoms: too large for exhaustive check "
            f"(cap {atom_cap})"
        )
    exhaustive = A.n_elements <= exhaustive_limit
    ops = _Ops(A, table=exhaustive)
    if exhaustive:
        everything = list(range(A.n_elements))
    else:
        atoms = [1 << i for i in range(A.n_atoms)]
        # non-additive laws still need 0 and the complements of atoms
        small = sorted({0, A.top_mask, *atoms, *(A.top_mask ^ a for a in atoms)})

    verdicts = {g: True for g in GROUP_TITLES}
    failures: dict[int, AxiomFailure] = {}
    for group, law, fn, arity in _LAWS:
        if not verdicts[group]:
            continue
        if exhaustive:
            domain_ = everything
        elif law in _ATOMWISE:
            domain_ = atoms
        else:
            domain_ = small
        for args in _tuples(domain_, arity):
            if not fn(ops, *args):
                verdicts[group] = False
                failures[group] = AxiomFailure(
                    A, group, law, tuple(Element(A, m) for m in args)
                )
                break
    note = ""
    if not exhaustive:
        note = (
            f"{A.n_elements} elements exceed the exhaustive limit {exhaustive_limit}; "
            "additive laws checked on atoms, the rest on atoms, complements of atoms, 0 and 1"
        )
    return AxiomReport(A, verdicts, failures, exhaustive, note)
