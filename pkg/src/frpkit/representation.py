"""Candidate maps from algebra elements to concrete relations.

A :class:`CandidateMap` assigns a relation over ``{0..size-1}`` to each element
of an algebra.  :func:`theta_construction` builds the canonical map over the
atom base, where ``s`` goes to ``{(a, b) : b <= a;s}``, and
:func:`check_representation` tests any map against a signature, returning the
concrete :class:`Violation` instances it finds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .algebra import GROUP_TITLES, AtomStructure, Element, check_ra_axioms, is_atom
from .relations import (
    ProperStructure,
    Relation,
    compose_bits,
    converse_bits,
    full_bits,
    identity_bits,
    least_pair,
)
from .terms import SYMBOLS, Signature

FULL_TABLE_LIMIT = 4096
DEFAULT_VIOLATION_CAP = 10


class RepresentationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CandidateMap:
    """An assignment of relations to algebra elements.

    ``images`` maps element masks to relations.  When ``additive`` is set only
    atoms (and optionally 0) are stored and every other element is the union
    of the images of its atoms.
    """

    algebra: AtomStructure
    size: int
    images: Mapping[int, Relation]
    additive: bool = False
    labels: tuple[str, ...] = ()
    _bits: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise RepresentationError("empty base not admitted")
        A = self.algebra
        bits = {}
        for mask, rel in self.images.items():
            if not 0 <= mask <= A.top_mask:
                raise RepresentationError(f"mask {mask} is not an element of {A.name!r}")
            if rel.size != self.size:
                raise RepresentationError(
                    f"image of {A.render_mask(mask)} lives on base {rel.size}, not {self.size}"
                )
            bits[mask] = rel.bits
        if self.additive:
            for i in range(A.n_atoms):
                if (1 << i) not in bits:
                    raise RepresentationError(f"additive map lacks atom {A.atoms[i]!r}")
            extra = [m for m in bits if m != 0 and m & (m - 1)]
            if extra:
                raise RepresentationError("additive map stores only atoms and 0")
        if self.labels and len(self.labels) != self.size:
            raise RepresentationError("one label per base point required")
        object.__setattr__(self, "_bits", bits)

    @classmethod
    def from_function(
        cls, A: AtomStructure, size: int, fn: Callable[[Element], Relation], labels=()
    ) -> CandidateMap:
        return cls(A, size, {x.mask: fn(x) for x in A.elements()}, labels=tuple(labels))

    @classmethod
    def from_atoms(
        cls,
        A: AtomStructure,
        size: int,
        atom_images: Mapping,
        zero: Relation | None = None,
        labels=(),
    ) -> CandidateMap:
        images = {A.element(k).mask: v for k, v in atom_images.items()}
        if zero is not None:
            images[0] = zero
        return cls(A, size, images, additive=True, labels=tuple(labels))

    def domain(self) -> list[int]:
        if self.additive:
            return list(range(self.algebra.n_elements))
        return sorted(self._bits)

    def image_bits(self, x: int) -> int:
        b = self._bits.get(x)
        if b is not None:
            return b
        if not self.additive:
            raise KeyError(f"{self.algebra.render_mask(x)} is outside the map's domain")
        out = 0
        m = x
        while m:
            low = m & -m
            out |= self._bits[low]
            m ^= low
        return out

    def image(self, x) -> Relation:
        mask = x.mask if isinstance(x, Element) else x
        return Relation(self.size, self.image_bits(mask))

    def __getitem__(self, x) -> Relation:
        return self.image(x)

    def point_label(self, p: int) -> str:
        return self.labels[p] if self.labels else str(p)

    def render_pair(self, pair) -> str:
        x, y = pair
        return f"({self.point_label(x)},{self.point_label(y)})"

    def materialized(self) -> CandidateMap:
        """The same map with every element stored explicitly."""
        if not self.additive:
            return self
        return CandidateMap(
            self.algebra,
            self.size,
            {x: self.image(x) for x in range(self.algebra.n_elements)},
            labels=self.labels,
        )

    def restrict(self, elements: Iterable) -> CandidateMap:
        masks = sorted({e.mask if isinstance(e, Element) else e for e in elements})
        return CandidateMap(
            self.algebra, self.size, {m: self.image(m) for m in masks}, labels=self.labels
        )

    def padded(self, size: int) -> CandidateMap:
        """The same relations over a base with extra, unused points."""
        return CandidateMap(
            self.algebra,
            size,
            {m: Relation(self.size, b).padded(size) for m, b in self._bits.items()},
            additive=self.additive,
        )

    def __eq__(self, other):
        if not isinstance(other, CandidateMap):
            return NotImplemented
        if self.algebra != other.algebra or self.size != other.size:
            return False
        if self.domain() != other.domain():
            return False
        return all(self.image_bits(m) == other.image_bits(m) for m in self.domain())


@dataclass(frozen=True)
class Violation:
    """One concrete failure of a map to be a representation.

    ``kind`` is ``"operation"``, ``"injectivity"`` or ``"order"``.  For
    operation failures, ``expected`` says whether ``pair`` lies in the image of
    the abstract result and ``actual`` whether it lies in the result of the
    concrete operation applied to the operands' images.
    """

    kind: str
    symbol: str | None
    operands: tuple[Element, ...]
    pair: tuple[int, int] | None = None
    expected: bool | None = None
    actual: bool | None = None

    def sort_key(self):
        sym = -1 if self.symbol is None else SYMBOLS.index(self.symbol)
        return (sym, tuple(o.mask for o in self.operands), self.pair or (-1, -1))

    def verify(self, m: CandidateMap) -> bool:
        """Recompute the cited instance against ``m``; True iff it still fails."""
        if self.kind == "injectivity":
            s, t = self.operands
            return s != t and m.image_bits(s.mask) == m.image_bits(t.mask)
        if self.kind == "order":
            s, t = self.operands
            sub = m.image_bits(s.mask) & ~m.image_bits(t.mask) == 0
            if s <= t:
                if sub or self.pair is None:
                    return False
                return self.pair in m.image(s) and self.pair not in m.image(t)
            return sub
        result = abstract_op(m.algebra, self.symbol, self.operands)
        expected = self.pair in m.image(result)
        actual = self.pair in Relation(m.size, concrete_op(m, self.symbol, self.operands))
        return expected != actual and expected == self.expected and actual == self.actual

    def describe(self, m: CandidateMap | None = None) -> str:
        raw = [str(o) for o in self.operands]
        ops = [f"({o})" if "+" in o else o for o in raw]
        rp = m.render_pair if m else (lambda p: f"({p[0]},{p[1]})")
        if self.kind == "injectivity":
            return f"injectivity: {ops[0]} and {ops[1]} have the same image"
        if self.kind == "order":
            if self.pair is None:
                return f"order: {ops[1]} does not contain {ops[0]} but its image contains the image of {ops[0]}"
            return (
                f"order: {ops[0]} <= {ops[1]} but {rp(self.pair)} is in the image "
                f"of {ops[0]} and not of {ops[1]}"
            )
        abstract = _op_text(self.symbol, ops)
        concrete = _op_text(self.symbol, [f"img({o})" for o in raw], concrete=True)
        if self.operands:
            result = abstract_op(self.operands[0].algebra, self.symbol, self.operands)
        else:
            result = self.symbol
        yes = {True: "in", False: "not in"}
        return (
            f"operation {self.symbol}: {rp(self.pair)} {yes[self.expected]} img({abstract} = {result}) "
            f"but {yes[self.actual]} {concrete}"
        )


def _op_text(symbol: str, ops: list[str], concrete: bool = False) -> str:
    if symbol in ("0", "1", "1'"):
        if concrete:
            return {"0": "the empty relation", "1": "the full relation", "1'": "the identity relation"}[symbol]
        return symbol
    if symbol == "-":
        return f"-{ops[0]}" if not concrete else f"complement of {ops[0]}"
    if symbol == "~":
        return f"{ops[0]}~"
    return f"{ops[0]} {symbol} {ops[1]}"


def abstract_op(A: AtomStructure | None, symbol: str, operands) -> Element:
    masks = [o.mask for o in operands]
    if symbol == "0":
        return A.zero
    if symbol == "1":
        return A.one
    if symbol == "1'":
        return A.identity
    A = operands[0].algebra
    if symbol == "-":
        return Element(A, A.negate_mask(masks[0]))
    if symbol == "~":
        return Element(A, A.converse_mask(masks[0]))
    if symbol == "+":
        return Element(A, masks[0] | masks[1])
    if symbol == ".":
        return Element(A, masks[0] & masks[1])
    if symbol == ";":
        return Element(A, A.compose_masks(masks[0], masks[1]))
    raise ValueError(f"no operation for symbol {symbol!r}")


def concrete_op(m: CandidateMap, symbol: str, operands) -> int:
    n = m.size
    if symbol == "0":
        return 0
    if symbol == "1":
        return full_bits(n)
    if symbol == "1'":
        return identity_bits(n)
    imgs = [m.image_bits(o.mask) for o in operands]
    if symbol == "-":
        return full_bits(n) ^ imgs[0]
    if symbol == "~":
        return converse_bits(imgs[0], n)
    if symbol == "+":
        return imgs[0] | imgs[1]
    if symbol == ".":
        return imgs[0] & imgs[1]
    if symbol == ";":
        return compose_bits(imgs[0], imgs[1], n)
    raise ValueError(f"no operation for symbol {symbol!r}")


class _Collector:
    def __init__(self, cap):
        self.cap = cap
        self.items: list[Violation] = []

    @property
    def full(self) -> bool:
        return self.cap is not None and len(self.items) >= self.cap

    def add(self, v: Violation) -> None:
        self.items.append(v)


def check_representation(
    m: CandidateMap,
    signature: Iterable[str],
    injective: bool = True,
    cap: int | None = DEFAULT_VIOLATION_CAP,
) -> list[Violation]:
    """Return the violations of ``m`` as a representation for ``signature``.

    An empty list means ``m`` passes.  Violations come out in canonical order
    (injectivity first, then by symbol, operand masks and pair), at most one
    per operand tuple, truncated to ``cap`` (``None`` for all).
    """
    sig = Signature(signature)
    if m.additive and sig & {"-", "."}:
        raise RepresentationError(
            "map is stored on atoms only; - and . cannot be checked on an additive extension"
        )
    A = m.algebra
    n = m.size
    dom = m.domain()
    in_dom = set(dom)
    out = _Collector(cap)

    def el(x):
        return Element(A, x)

    def closed(result: int, what: str):
        if result not in in_dom:
            raise RepresentationError(
                f"domain not closed under {what}: {A.render_mask(result)} missing"
            )

    if injective:
        by_image: dict[int, list[int]] = {}
        for x in dom:
            by_image.setdefault(m.image_bits(x), []).append(x)
        pairs = []
        for group in by_image.values():
            for i, s in enumerate(group):
                for t in group[i + 1 :]:
                    pairs.append((s, t))
        for s, t in sorted(pairs):
            if out.full:
                break
            out.add(Violation("injectivity", None, (el(s), el(t))))

    def report(symbol, operands, want: int, got: int):
        diff = want ^ got
        if diff:
            p = least_pair(diff, n)
            out.add(
                Violation(
                    "operation",
                    symbol,
                    tuple(el(o) for o in operands),
                    p,
                    bool(want >> (p[0] * n + p[1]) & 1),
                    bool(got >> (p[0] * n + p[1]) & 1),
                )
            )

    for symbol in sig.ordered():
        if out.full:
            break
        if symbol in ("0", "1", "1'"):
            target = {"0": 0, "1": A.top_mask, "1'": A.identity_mask}[symbol]
            if target not in in_dom:
                continue
            concrete = {"0": 0, "1": full_bits(n), "1'": identity_bits(n)}[symbol]
            report(symbol, (), m.image_bits(target), concrete)
        elif symbol in ("-", "~"):
            for s in dom:
                if out.full:
                    break
                r = A.negate_mask(s) if symbol == "-" else A.converse_mask(s)
                closed(r, symbol)
                img = m.image_bits(s)
                got = full_bits(n) ^ img if symbol == "-" else converse_bits(img, n)
                report(symbol, (s,), m.image_bits(r), got)
        elif symbol in ("+", ".", ";"):
            for s in dom:
                if out.full:
                    break
                si = m.image_bits(s)
                for t in dom:
                    if out.full:
                        break
                    ti = m.image_bits(t)
                    if symbol == "+":
                        r, got = s | t, si | ti
                    elif symbol == ".":
                        r, got = s & t, si & ti
                    else:
                        r, got = A.compose_masks(s, t), compose_bits(si, ti, n)
                    closed(r, symbol)
                    report(symbol, (s, t), m.image_bits(r), got)
        elif symbol == "<=":
            for s in dom:
                if out.full:
                    break
                si = m.image_bits(s)
                for t in dom:
                    if out.full:
                        break
                    ti = m.image_bits(t)
                    below = s & ~t == 0
                    sub = si & ~ti == 0
                    if below and not sub:
                        out.add(Violation("order", "<=", (el(s), el(t)), least_pair(si & ~ti, n), True, False))
                    elif sub and not below:
                        out.add(Violation("order", "<=", (el(s), el(t))))
    return out.items


def theta_construction(A: AtomStructure, check: bool = True) -> CandidateMap:
    """The map over the atom base sending ``s`` to ``{(a, b) : b <= a;s}``.

    Refuses algebras failing the axiom check; the correctness of the
    construction rests on associativity, the identity and converse laws and
    the peircean law.
    """
    if check:
        report = check_ra_axioms(A)
        if not report.ok:
            f = report.first_failure()
            raise RepresentationError(
                f"axiom group {f.group} ({GROUP_TITLES[f.group]}) fails: {f.describe()}"
            )
    k = A.n_atoms

    def theta_bits(s: int) -> int:
        bits = 0
        for a in range(k):
            bits |= A.compose_masks(1 << a, s) << (a * k)
        return bits

    if A.n_elements <= FULL_TABLE_LIMIT:
        images = {s: Relation(k, theta_bits(s)) for s in range(A.n_elements)}
        return CandidateMap(A, k, images, labels=A.atoms)
    images = {1 << a: Relation(k, theta_bits(1 << a)) for a in range(k)}
    images[0] = Relation(k, 0)
    return CandidateMap(A, k, images, additive=True, labels=A.atoms)


def separating_pair(A: AtomStructure, s: Element, t: Element) -> tuple[int, int]:
    """For ``s`` not below ``t``: the atom-base pair ``(D(a), a)`` in theta(s) - theta(t).

    ``a`` is the least atom below ``s - t`` and ``D(a) = 1' . (a;a~)``.
    """
    rest = s.mask & ~t.mask
    if not rest:
        raise ValueError(f"{s} is below {t}; nothing separates them")
    a = rest & -rest
    d = A.domain_mask(a)
    if not is_atom(Element(A, d)):
        raise RepresentationError(f"domain of atom {A.render_mask(a)} is not an atom")
    return (d.bit_length() - 1, a.bit_length() - 1)


def image_of(m: CandidateMap, names: Mapping[str, object]) -> ProperStructure:
    rels = {}
    for name, x in names.items():
        rels[name] = m.image(m.algebra.element(x))
    return ProperStructure(m.size, rels)
