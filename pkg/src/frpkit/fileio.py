"""Text formats for algebras (``.alg``) and candidate maps (``.rep``).

Algebra file::

    # the Point Algebra
    algebra point
    atoms e l g
    identity e
    converse l g          # one line per orbit; fixed points may be omitted
    comp e e : e
    comp l g : e l g      # omitted entries are empty

Representation file::

    representation theta
    algebra point
    base 3
    labels e l g          # optional point names
    map 0 :
    map e+l : (0,0) (0,1)

``map`` keys are ``0``, ``1`` or sums of atom names.  A file listing every
element gives an explicit map; one listing only the atoms (and possibly 0)
gives the additive extension.
"""

from __future__ import annotations

import re
from pathlib import Path

from .algebra import AlgebraError, AtomStructure, build_algebra
from .relations import Relation
from .representation import CandidateMap, RepresentationError

_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = ""):
        where = f"{source}:" if source else "line "
        super().__init__(f"{where}{line}:{column}: {message}")
        self.line = line
        self.column = column


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, raw, body


def _col(raw: str, token: str) -> int:
    i = raw.find(token)
    return i + 1 if i >= 0 else 1


# -- algebras --


def parse_algebra(text: str, source: str = "") -> AtomStructure:
    name = None
    atoms: list[str] | None = None
    identity: list[str] | None = None
    converse: dict[str, str] = {}
    comp: dict[tuple[str, str], list[str]] = {}
    last_line = 0

    def err(msg, no, raw="", token=""):
        return FormatError(msg, no, _col(raw, token) if token else 1, source)

    def check_atom(a, no, raw):
        if atoms is None:
            raise err("atoms must be declared before use", no, raw, a)
        if a not in atoms:
            raise err(f"unknown atom {a!r}", no, raw, a)

    for no, raw, body in _lines(text):
        last_line = no
        words = body.split()
        key, args = words[0], words[1:]
        if key == "algebra":
            if len(args) != 1:
                raise err("expected: algebra <name>", no, raw)
            name = args[0]
        elif key == "atoms":
            if atoms is not None:
                raise err("atoms declared twice", no, raw, key)
            if not args:
                raise err("an algebra needs at least one atom", no, raw, key)
            for a in args:
                if not _IDENT.match(a):
                    raise err(f"atom name {a!r} is not an identifier", no, raw, a)
                if args.count(a) > 1:
                    raise err(f"duplicate atom name {a!r}", no, raw, a)
            atoms = list(args)
        elif key == "identity":
            if identity is not None:
                raise err("identity declared twice", no, raw, key)
            for a in args:
                check_atom(a, no, raw)
            identity = list(args)
        elif key == "converse":
            if len(args) not in (1, 2):
                raise err("expected: converse <atom> [<atom>]", no, raw)
            a, b = args[0], args[-1]
            for x in (a, b):
                check_atom(x, no, raw)
            for x, y in ((a, b), (b, a)):
                if converse.get(x, y) != y:
                    raise err(f"conflicting converse for {x!r}", no, raw, x)
                converse[x] = y
        elif key == "comp":
            if ":" not in args or args.index(":") != 2:
                raise err("expected: comp <atom> <atom> : <atoms>", no, raw)
            a, b = args[0], args[1]
            out = args[3:]
            for x in (a, b, *out):
                check_atom(x, no, raw)
            if (a, b) in comp:
                raise err(f"composition entry ({a},{b}) given twice", no, raw, key)
            comp[(a, b)] = out
        else:
            raise err(f"unknown keyword {key!r}", no, raw, key)

    if atoms is None:
        raise FormatError("no atoms declared", last_line or 1, 1, source)
    if identity is None:
        raise FormatError("no identity declared", last_line or 1, 1, source)
    for a in atoms:
        converse.setdefault(a, a)
        for b in atoms:
            comp.setdefault((a, b), [])
    try:
        return build_algebra(atoms, converse, identity, comp, name=name or "algebra")
    except AlgebraError as exc:
        raise FormatError(str(exc), last_line or 1, 1, source) from None


def format_algebra(A: AtomStructure) -> str:
    lines = [f"algebra {A.name}", "atoms " + " ".join(A.atoms)]
    lines.append("identity " + " ".join(A.names_of(A.identity_mask)))
    for i, a in enumerate(A.atoms):
        j = A.converse_index[i]
        if i < j:
            lines.append(f"converse {a} {A.atoms[j]}")
    for i, a in enumerate(A.atoms):
        for j, b in enumerate(A.atoms):
            out = A.comp_masks[i][j]
            if out:
                lines.append(f"comp {a} {b} : " + " ".join(A.names_of(out)))
    return "\n".join(lines) + "\n"


def load_algebra(path) -> AtomStructure:
    p = Path(path)
    return parse_algebra(p.read_text(), source=str(p))


def save_algebra(A: AtomStructure, path) -> None:
    Path(path).write_text(format_algebra(A))


# -- element expressions --


def parse_element_expr(A: AtomStructure, text: str) -> int:
    """``0``, ``1`` or ``a+b+...`` to a mask."""
    text = text.strip()
    if text == "0":
        return 0
    if text == "1":
        return A.top_mask
    mask = 0
    for part in text.split("+"):
        part = part.strip()
        if part not in A.atoms:
            raise KeyError(f"unknown atom {part!r}")
        bit = 1 << A.atom_index(part)
        if mask & bit:
            raise KeyError(f"atom {part!r} repeated")
        mask |= bit
    return mask


def format_element_expr(A: AtomStructure, mask: int) -> str:
    return A.render_mask(mask)


# -- representations --


def parse_representation(text: str, A: AtomStructure, source: str = "") -> CandidateMap:
    alg_name = None
    size = None
    labels: tuple[str, ...] = ()
    entries: dict[int, tuple[list, int, str]] = {}
    last_line = 0

    def err(msg, no, raw="", token=""):
        return FormatError(msg, no, _col(raw, token) if token else 1, source)

    for no, raw, body in _lines(text):
        last_line = no
        words = body.split()
        key = words[0]
        if key == "representation":
            if len(words) != 2:
                raise err("expected: representation <name>", no, raw)
        elif key == "algebra":
            if len(words) != 2:
                raise err("expected: algebra <name>", no, raw)
            alg_name = words[1]
            if alg_name != A.name:
                raise err(
                    f"file refers to algebra {alg_name!r}, loaded algebra is {A.name!r}",
                    no,
                    raw,
                    alg_name,
                )
        elif key == "base":
            if len(words) != 2 or not words[1].isdigit():
                raise err("expected: base <n>", no, raw)
            size = int(words[1])
            if size < 1:
                raise err("empty base not admitted", no, raw, words[1])
        elif key == "labels":
            labels = tuple(words[1:])
        elif key == "map":
            if size is None:
                raise err("base must be declared before map lines", no, raw, key)
            rest = body.split(None, 1)[1] if len(words) > 1 else ""
            if ":" not in rest:
                raise err("expected: map <element> : (x,y) ...", no, raw)
            expr, pairs_text = rest.split(":", 1)
            try:
                mask = parse_element_expr(A, expr)
            except KeyError as exc:
                raise err(exc.args[0], no, raw, expr.strip()) from None
            if mask in entries:
                raise err(f"element {A.render_mask(mask)} mapped twice", no, raw, expr.strip())
            pairs = []
            leftover = _PAIR.sub("", pairs_text).strip()
            if leftover:
                raise err(f"cannot read pair list near {leftover[:12]!r}", no, raw, leftover[:12])
            for m in _PAIR.finditer(pairs_text):
                x, y = int(m.group(1)), int(m.group(2))
                if not (0 <= x < size and 0 <= y < size):
                    raise err(f"pair ({x},{y}) outside base {size}", no, raw, m.group(0))
                pairs.append((x, y))
            entries[mask] = (pairs, no, raw)
        else:
            raise err(f"unknown keyword {key!r}", no, raw, key)

    if size is None:
        raise FormatError("no base declared", last_line or 1, 1, source)
    if labels and len(labels) != size:
        raise FormatError("labels must name every base point", last_line or 1, 1, source)
    images = {m: Relation.from_pairs(size, p) for m, (p, _, _) in entries.items()}
    try:
        if len(images) == A.n_elements:
            return CandidateMap(A, size, images, labels=labels)
        atoms_only = all(m == 0 or m & (m - 1) == 0 for m in images)
        if atoms_only and all((1 << i) in images for i in range(A.n_atoms)):
            return CandidateMap(A, size, images, additive=True, labels=labels)
    except RepresentationError as exc:
        raise FormatError(str(exc), last_line or 1, 1, source) from None
    missing = [A.render_mask(m) for m in range(A.n_elements) if m not in images]
    raise FormatError(
        f"incomplete map: {', '.join(missing[:5])} not listed and the map is not atom-additive",
        last_line or 1,
        1,
        source,
    )


def format_representation(m: CandidateMap, name: str = "rep") -> str:
    A = m.algebra
    lines = [f"representation {name}", f"algebra {A.name}", f"base {m.size}"]
    if m.labels:
        lines.append("labels " + " ".join(m.labels))
    keys = sorted(m.images) if m.additive else m.domain()
    for x in keys:
        rel = m.image(x)
        lines.append(f"map {A.render_mask(x)} : {rel.render()}".rstrip())
    return "\n".join(lines) + "\n"


def load_representation(path, A: AtomStructure) -> CandidateMap:
    p = Path(path)
    return parse_representation(p.read_text(), A, source=str(p))


def save_representation(m: CandidateMap, path, name: str | None = None) -> None:
    p = Path(path)
    Path(path).write_text(format_representation(m, name or p.stem))
