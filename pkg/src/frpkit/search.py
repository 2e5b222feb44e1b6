"""Exhaustive search for representations over a base of fixed size.

Every algebra element is a variable ranging over the ``2**(n*n)`` relations on
``{0..n-1}``.  Each symbol of the signature contributes equations
``img(op(s, t)) = op(img(s), img(t))``, and these are used for propagation: as
soon as the operands of an equation are assigned, its result is forced.
Constants are fixed up front, complement and converse force their partners,
and union forces every non-atom once its atoms are set.  Injectivity and
order reflection are checked on every assignment.

Variables are chosen in decreasing atom count (ties by mask) and values are
tried in increasing bit order, so the first solution found is the
lexicographically least one in that order.  The first free choice is also
restricted to values that are least in their orbit under permutations of the
base, which never removes the least solution.
"""

from __future__ import annotations

import enum
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .algebra import AtomStructure
from .relations import Relation, compose_bits, converse_bits, full_bits, identity_bits
from .representation import CandidateMap, check_representation
from .terms import Signature

ELEMENT_CAP = 256
BASE_CAP = 8
SYMMETRY_BREAK_MAX_BASE = 5


class SearchError(ValueError):
    pass


class Verdict(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass(frozen=True)
class SearchConfig:
    signature: Signature
    base_size: int
    require_injectivity: bool = True
    node_budget: int = 10_000_000
    time_budget: float = 60.0
    allow_large: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "signature", Signature(self.signature))
        if self.base_size < 1:
            raise SearchError("base size must be >= 1")
        if self.node_budget <= 0 or self.time_budget <= 0:
            raise SearchError("budgets must be positive")
        if self.workers < 1:
            raise SearchError("workers must be >= 1")


@dataclass
class SearchOutcome:
    verdict: Verdict
    base_size: int
    witness: CandidateMap | None = None
    nodes: int = 0
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)


class _OutOfBudget(Exception):
    pass


class _Search:
    def __init__(self, A: AtomStructure, cfg: SearchConfig, deadline: float):
        self.A = A
        self.cfg = cfg
        self.n = n = cfg.base_size
        self.sig = cfg.signature
        self.E = A.n_elements
        self.full = full_bits(n)
        self.nrel = 1 << (n * n)
        self.injective = cfg.require_injectivity
        self.order_check = "<=" in self.sig
        self.deadline = deadline
        self.nodes = 0
        self.val = [-1] * self.E
        self.owner: dict[int, int] = {}
        self.trail: list[int] = []
        self._build_rules()
        self.order = sorted(range(self.E), key=lambda x: (-bin(x).count("1"), x))

    def _build_rules(self):
        A = self.A
        rules = [[] for _ in range(self.E)]
        sig = self.sig
        for s in range(self.E):
            if "-" in sig:
                rules[s].append(("-", s, s, A.negate_mask(s)))
            if "~" in sig:
                rules[s].append(("~", s, s, A.converse_mask(s)))
        for op in ("+", ".", ";"):
            if op not in sig:
                continue
            for s in range(self.E):
                for t in range(self.E):
                    if op == "+":
                        r = s | t
                    elif op == ".":
                        r = s & t
                    else:
                        r = A.compose_masks(s, t)
                    rule = (op, s, t, r)
                    rules[s].append(rule)
                    if t != s:
                        rules[t].append(rule)
        self.rules = rules
        self.constants = []
        if "0" in sig:
            self.constants.append((0, 0))
        if "1" in sig:
            self.constants.append((A.top_mask, self.full))
        if "1'" in sig:
            self.constants.append((A.identity_mask, identity_bits(self.n)))

    def _apply(self, op, a, b):
        if op == "-":
            return self.full ^ a
        if op == "~":
            return converse_bits(a, self.n)
        if op == "+":
            return a | b
        if op == ".":
            return a & b
        return compose_bits(a, b, self.n)

    def _order_ok(self, x: int, v: int) -> bool:
        for y in range(self.E):
            w = self.val[y]
            if w < 0:
                continue
            if ((x & ~y) == 0) != ((v & ~w) == 0):
                return False
            if ((y & ~x) == 0) != ((w & ~v) == 0):
                return False
        return True

    def assign(self, x: int, v: int) -> bool:
        val = self.val
        queue = [(x, v)]
        while queue:
            x, v = queue.pop()
            cur = val[x]
            if cur >= 0:
                if cur != v:
                    return False
                continue
            if self.injective and v in self.owner:
                return False
            if self.order_check and not self._order_ok(x, v):
                return False
            val[x] = v
            if self.injective:
                self.owner[v] = x
            self.trail.append(x)
            for op, s, t, r in self.rules[x]:
                a = val[s]
                b = val[t]
                if a < 0 or b < 0:
                    continue
                queue.append((r, self._apply(op, a, b)))
        return True

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            x = self.trail.pop()
            if self.injective:
                del self.owner[self.val[x]]
            self.val[x] = -1

    def initial(self) -> bool:
        for x, v in self.constants:
            if not self.assign(x, v):
                return False
        return True

    def next_free(self, pos: int) -> int:
        while pos < self.E and self.val[self.order[pos]] >= 0:
            pos += 1
        return pos

    def first_values(self) -> list[int]:
        """Candidate values for the first free variable, orbit-least only."""
        if self.n > SYMMETRY_BREAK_MAX_BASE:
            return list(range(self.nrel))
        n = self.n
        perms = []
        for p in itertools.permutations(range(n)):
            if list(p) == list(range(n)):
                continue
            perms.append([p[i // n] * n + p[i % n] for i in range(n * n)])
        out = []
        for v in range(self.nrel):
            bits = [i for i in range(n * n) if v >> i & 1]
            least = True
            for pm in perms:
                w = 0
                for i in bits:
                    w |= 1 << pm[i]
                if w < v:
                    least = False
                    break
            if least:
                out.append(v)
        return out

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.cfg.node_budget:
            raise _OutOfBudget
        if self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def dfs(self, pos: int) -> bool:
        pos = self.next_free(pos)
        if pos == self.E:
            return True
        x = self.order[pos]
        for v in range(self.nrel):
            self.tick()
            mark = len(self.trail)
            if self.assign(x, v) and self.dfs(pos + 1):
                return True
            self.undo(mark)
        return False

    def run(self, first: list[int] | None = None) -> tuple[Verdict, list[int] | None]:
        """Search; ``first`` restricts the values of the first free variable."""
        try:
            if not self.initial():
                return Verdict.UNSAT, None
            pos = self.next_free(0)
            if pos == self.E:
                return Verdict.SAT, list(self.val)
            x = self.order[pos]
            values = self.first_values() if first is None else first
            for v in values:
                self.tick()
                mark = len(self.trail)
                if self.assign(x, v) and self.dfs(pos + 1):
                    return Verdict.SAT, list(self.val)
                self.undo(mark)
            return Verdict.UNSAT, None
        except _OutOfBudget:
            return Verdict.BUDGET_EXCEEDED, None


def _validate(A: AtomStructure, cfg: SearchConfig) -> None:
    if A.n_elements > ELEMENT_CAP:
        raise SearchError(f"{A.n_elements} elements exceed the search cap of {ELEMENT_CAP}")
    if cfg.base_size > BASE_CAP and not cfg.allow_large:
        raise SearchError(
            f"base size {cfg.base_size} exceeds {BASE_CAP}; pass allow_large to override"
        )


def _witness(A: AtomStructure, n: int, values: list[int]) -> CandidateMap:
    return CandidateMap(A, n, {x: Relation(n, v) for x, v in enumerate(values)})


def _branch(args):
    A, cfg, deadline, value = args
    s = _Search(A, cfg, deadline)
    verdict, values = s.run([value])
    return verdict, values, s.nodes


def search_representation(A: AtomStructure, cfg: SearchConfig) -> SearchOutcome:
    """Decide whether ``A`` has a representation for ``cfg.signature`` on ``cfg.base_size`` points."""
    _validate(A, cfg)
    start = time.monotonic()
    deadline = start + cfg.time_budget
    n = cfg.base_size
    if cfg.workers == 1:
        s = _Search(A, cfg, deadline)
        verdict, values = s.run()
        nodes = s.nodes
    else:
        verdict, values, nodes = _parallel(A, cfg, deadline)
    witness = _witness(A, n, values) if verdict is Verdict.SAT else None
    out = SearchOutcome(verdict, n, witness, nodes, time.monotonic() - start)
    if witness is not None and check_representation(
        witness, cfg.signature, injective=cfg.require_injectivity
    ):
        raise AssertionError("search produced a witness the checker rejects")
    return out


def _parallel(A: AtomStructure, cfg: SearchConfig, deadline: float):
    probe = _Search(A, cfg, deadline)
    if not probe.initial():
        return Verdict.UNSAT, None, 0
    if probe.next_free(0) == probe.E:
        return Verdict.SAT, list(probe.val), 0
    values = probe.first_values()
    total = 0
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        results = pool.map(_branch, [(A, cfg, deadline, v) for v in values])
        # branches come back in value order; the first non-UNSAT one decides
        for verdict, vals, nodes in results:
            total += nodes
            if verdict is not Verdict.UNSAT:
                pool.shutdown(wait=False, cancel_futures=True)
                return verdict, vals, total
    return Verdict.UNSAT, None, total


def frp_scan(
    A: AtomStructure,
    signature,
    n_max: int,
    n_min: int = 1,
    **options,
) -> list[SearchOutcome]:
    """Search bases ``n_min..n_max`` in turn, stopping at the first SAT."""
    outcomes = []
    for n in range(n_min, n_max + 1):
        cfg = SearchConfig(Signature(signature), n, **options)
        out = search_representation(A, cfg)
        outcomes.append(out)
        if out.verdict is Verdict.SAT:
            break
    return outcomes


def pad_witness(m: CandidateMap, size: int) -> CandidateMap:
    """Add unused base points; used to probe monotonicity of SAT in the base size."""
    return m.padded(size)
