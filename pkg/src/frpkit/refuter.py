"""Refuting finite candidate representations of the Point Algebra for {-, ;}.

Any map from the Point Algebra into relations over a finite base that is
claimed to preserve complement and composition must break one of them.  The
procedure that finds the break runs in three stages:

1. find a pair in the image of 1 (or a violation explaining why none exists);
2. pump that pair along a path of image-of-1 edges, using ``1 = 1;1`` at every
   step, until a point repeats; the repeat yields a reflexive point;
3. from the reflexive point, grow a chain ``x0, x1, ...`` with ``(xi, xj)`` in
   the image of <= and ``(xj, xi)`` in the image of > for ``i < j``, using
   ``1 = <=;>``, ``>;<= = 1``, ``<=;<= = <=``, ``>;> = >`` and ``> = -<=``.

A base of ``n`` points cannot hold ``n + 1`` distinct chain points, so stage 3
always stops at a concrete violation.  Every existential choice picks the
least point, which makes traces deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AtomStructure, Element
from .relations import Relation
from .representation import CandidateMap, Violation


class NotPointAlgebra(ValueError):
    pass


class RefuterError(ValueError):
    pass


@dataclass(frozen=True)
class PointRoles:
    """The elements the argument needs: 0, 1, <= and > (its complement)."""

    zero: Element
    one: Element
    le: Element
    gt: Element


def point_roles(A: AtomStructure) -> PointRoles:
    """Locate <= and > in ``A`` and confirm the identities the argument uses.

    Among elements ``x`` with ``x;x = x``, ``-x;-x = -x`` and
    ``x;-x = -x;x = 1``, one containing the identity is preferred, least mask
    first; in the Point Algebra that picks ``e+l`` (the relation <=).
    """
    top = A.top_mask
    comp = A.compose_masks
    if comp(top, top) != top:
        raise NotPointAlgebra("1 = 1;1 fails")
    if comp(top, 0) != 0:
        raise NotPointAlgebra("0 = 1;0 fails")
    candidates = []
    for le in range(A.n_elements):
        gt = top ^ le
        if (
            comp(le, le) == le
            and comp(gt, gt) == gt
            and comp(le, gt) == top
            and comp(gt, le) == top
        ):
            candidates.append(le)
    if not candidates:
        raise NotPointAlgebra(
            "no element x with x;x = x, -x;-x = -x and x;-x = -x;x = 1"
        )
    with_id = [c for c in candidates if A.identity_mask & ~c == 0]
    le = (with_id or candidates)[0]
    return PointRoles(A.zero, A.one, Element(A, le), Element(A, top ^ le))


@dataclass(frozen=True)
class Fact:
    """``pair`` lies in the image of ``element`` (or not, when ``holds`` is False)."""

    element: Element
    pair: tuple[int, int]
    holds: bool = True

    def verify(self, m: CandidateMap) -> bool:
        return (self.pair in m.image(self.element)) == self.holds

    def describe(self, m: CandidateMap | None = None) -> str:
        x, y = self.pair
        p = m.render_pair(self.pair) if m else f"({x},{y})"
        rel = "in" if self.holds else "not in"
        return f"{p} {rel} img({self.element})"


@dataclass
class PumpTrace:
    unit_pair: tuple[int, int] | None = None
    path: list[int] = field(default_factory=list)
    repeat: tuple[int, int] | None = None
    reflexive_point: int | None = None
    chain: list[int] = field(default_factory=list)
    violation: Violation | None = None
    facts: list[Fact] = field(default_factory=list)
    pump_steps: int = 0

    def verify(self, m: CandidateMap) -> bool:
        facts_ok = all(f.verify(m) for f in self.facts)
        return facts_ok and self.violation is not None and self.violation.verify(m)

    def lines(self, m: CandidateMap | None = None) -> list[str]:
        out = []
        for i, f in enumerate(self.facts, 1):
            out.append(f"{i}. {f.describe(m)}")
        if self.violation is not None:
            out.append(f"{len(self.facts) + 1}. violation {self.violation.describe(m)}")
        return out


def _violation(symbol, operands, pair, expected, actual) -> Violation:
    return Violation("operation", symbol, tuple(operands), pair, expected, actual)


class _Refuter:
    def __init__(self, m: CandidateMap, trace: PumpTrace | None = None):
        if m.size < 1:
            raise RefuterError("empty base not admitted")
        self.m = m
        self.n = m.size
        self.roles = point_roles(m.algebra)
        self.trace = trace if trace is not None else PumpTrace()
        self._seen = set(self.trace.facts)
        r = self.roles
        self.one = m.image_bits(r.one.mask)
        self.zero = m.image_bits(r.zero.mask)
        self.le = m.image_bits(r.le.mask)
        self.gt = m.image_bits(r.gt.mask)

    def has(self, rel: int, x: int, y: int) -> bool:
        return bool(rel >> (x * self.n + y) & 1)

    def fact(self, element: Element, pair) -> None:
        f = Fact(element, pair)
        if f not in self._seen:
            self._seen.add(f)
            self.trace.facts.append(f)

    def least_pair(self, rel: int):
        if not rel:
            return None
        low = (rel & -rel).bit_length() - 1
        return divmod(low, self.n)

    # stage 1
    def unit_pair(self):
        r = self.roles
        p = self.least_pair(self.one)
        if p is not None:
            self.fact(r.one, p)
            self.trace.unit_pair = p
            return p
        # image of 1 is empty
        q = self.least_pair(self.zero)
        if q is not None:
            # 0 = 1;0, but nothing composes through an empty image of 1
            self.fact(r.zero, q)
            return _violation(";", (r.one, r.zero), q, True, False)
        # both empty: 0 = -1 yet the complement of the empty relation is full
        return _violation("-", (r.one,), (0, 0), False, True)

    # stage 2
    def reflexive_point(self):
        r = self.roles
        start = self.unit_pair()
        if isinstance(start, Violation):
            return start
        y, z = start
        path = [y]
        seen = {y: 0}
        current = y
        # at most n+1 extensions before a point repeats
        for step in range(self.n + 1):
            w = next(
                (w for w in range(self.n) if self.has(self.one, current, w) and self.has(self.one, w, z)),
                None,
            )
            self.trace.pump_steps = step + 1
            if w is None:
                # (current, z) is in img(1) = img(1;1) but has no witness
                self.trace.path = path
                return _violation(";", (r.one, r.one), (current, z), True, False)
            self.fact(r.one, (current, w))
            self.fact(r.one, (w, z))
            path.append(w)
            if w in seen:
                i, j = seen[w], len(path) - 1
                self.trace.path = path
                self.trace.repeat = (i, j)
                return self._close_cycle(path, i, j)
            seen[w] = len(path) - 1
            current = w
        raise AssertionError("pigeonhole: a point must repeat within n+1 steps")

    def _close_cycle(self, path, i, j):
        r = self.roles
        x = path[i]
        if self.has(self.one, x, x):
            self.fact(r.one, (x, x))
            self.trace.reflexive_point = x
            return x
        # walk the cycle: the first k with (x, path[i+k]) missing from img(1)
        # has (x, path[i+k]) in img(1);img(1) already
        for k in range(2, j - i + 1):
            nxt = path[i + k]
            if not self.has(self.one, x, nxt):
                return _violation(";", (r.one, r.one), (x, nxt), False, True)
            self.fact(r.one, (x, nxt))
        raise AssertionError("cycle closes on a reflexive point")

    # stage 3
    def chain(self, x0: int, k: int):
        r = self.roles
        if not self.has(self.one, x0, x0):
            raise RefuterError(f"({x0},{x0}) is not in the image of 1")
        chain = [x0]
        self.trace.chain = chain
        for n in range(k):
            top = chain[n]
            if n > 0 and not self.has(self.one, top, top):
                # (top, x0) in img(>) and (x0, top) in img(<=) put (top, top) in img(>);img(<=)
                return _violation(";", (r.gt, r.le), (top, top), False, True)
            y = next(
                (y for y in range(self.n) if self.has(self.le, top, y) and self.has(self.gt, y, top)),
                None,
            )
            if y is None:
                return _violation(";", (r.le, r.gt), (top, top), True, False)
            self.fact(r.le, (top, y))
            self.fact(r.gt, (y, top))
            for i in range(n):
                xi = chain[i]
                if not self.has(self.le, xi, y):
                    return _violation(";", (r.le, r.le), (xi, y), False, True)
                self.fact(r.le, (xi, y))
                if not self.has(self.gt, y, xi):
                    return _violation(";", (r.gt, r.gt), (y, xi), False, True)
                self.fact(r.gt, (y, xi))
            for i in range(n + 1):
                if chain[i] == y:
                    # (y, top) lies in img(>) and, as (xi, top), in img(<=)
                    return _violation("-", (r.le,), (y, top), True, False)
            chain.append(y)
        return list(chain)


def find_unit_pair(m: CandidateMap):
    """A pair in the image of 1, or the violation showing there can be none."""
    return _Refuter(m).unit_pair()


def find_reflexive_point(m: CandidateMap):
    """A point ``x`` with ``(x, x)`` in the image of 1, or a violation."""
    return _Refuter(m).reflexive_point()


def build_increasing_chain(m: CandidateMap, x0: int, k: int):
    """``k + 1`` distinct points ordered by the images of <= and >, or a violation."""
    return _Refuter(m).chain(x0, k)


def refute_finite_candidate(m: CandidateMap) -> PumpTrace:
    """Run all three stages with chain length ``|base|``; always ends in a violation."""
    ref = _Refuter(m)
    trace = ref.trace
    x = ref.reflexive_point()
    if isinstance(x, Violation):
        trace.violation = x
        return trace
    result = ref.chain(x, m.size)
    if not isinstance(result, Violation):
        raise AssertionError(
            f"{m.size + 1} distinct points found on a base of {m.size}; the map is not finite"
        )
    trace.violation = result
    return trace


def natural_order_map(A: AtomStructure, n: int) -> CandidateMap:
    """Point Algebra elements as the usual order relations on ``{0..n-1}``."""
    roles = point_roles(A)
    lt_mask = roles.le.mask & ~A.identity_mask
    gt_mask = roles.gt.mask
    lt = Relation.from_pairs(n, [(x, y) for x in range(n) for y in range(n) if x < y])
    gt = lt.converse()
    eq = Relation.identity(n)
    atom_images = {}
    for i in range(A.n_atoms):
        bit = 1 << i
        if bit & A.identity_mask:
            atom_images[bit] = eq
        elif bit & lt_mask:
            atom_images[bit] = lt
        elif bit & gt_mask:
            atom_images[bit] = gt
    images = {}
    for x in range(A.n_elements):
        bits = 0
        for i in range(A.n_atoms):
            if x >> i & 1:
                bits |= atom_images[1 << i].bits
        images[x] = Relation(n, bits)
    return CandidateMap(A, n, images)
