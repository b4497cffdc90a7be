"""Plain-text formats for algebras, modules, morphisms and algebra elements.

Algebra file (version 1)::

    p 2 dim 2
    labels 1 x
    unit 1 0
    0 0 : 0 1
    0 1 : 1 1
    1 0 : 1 1
    1 1 :

Each ``i j :`` line lists ``k c`` pairs with e_i * e_j = sum c e_k; all dim^2
lines must be present.  Module file: ``dim d`` followed by one ``action i``
block of d rows per algebra basis element.  Morphism file: ``source`` and
``target`` algebra references followed by the dense matrix rows.

Algebra references are either ``preset:name:params`` or a file path.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .algebra import AlgebraMorphism, FiniteAlgebra, preset
from .module import Module


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            out.append((no, s))
    return out


def _ints(tokens: list[str], no: int, source: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", no, source) from exc


# ---------------------------------------------------------------------------
# algebras


def algebra_to_text(alg: FiniteAlgebra) -> str:
    n = alg.dim
    out = [f"p {alg.p} dim {n}", "labels " + " ".join(alg.basis_labels), "unit " + " ".join(map(str, alg.unit))]
    for i in range(n):
        for j in range(n):
            terms = [f"{k} {int(alg.mul[i, j, k])}" for k in range(n) if alg.mul[i, j, k]]
            out.append(f"{i} {j} : " + " ".join(terms) if terms else f"{i} {j} :")
    return "\n".join(out) + "\n"


def algebra_from_text(text: str, name: str | None = None, source: str = "<input>") -> FiniteAlgebra:
    lines = _lines(text)
    if len(lines) < 3:
        raise ParseError("algebra file needs a header, labels and unit line", None, source)
    no, head = lines[0]
    tok = head.split()
    if len(tok) != 4 or tok[0] != "p" or tok[2] != "dim":
        raise ParseError("header must read 'p <prime> dim <n>'", no, source)
    p, n = _ints([tok[1], tok[3]], no, source)
    no, lab = lines[1]
    tok = lab.split()
    if tok[0] != "labels" or len(tok) != n + 1:
        raise ParseError(f"expected 'labels' followed by {n} names", no, source)
    labels = tok[1:]
    no, un = lines[2]
    tok = un.split()
    if tok[0] != "unit" or len(tok) != n + 1:
        raise ParseError(f"expected 'unit' followed by {n} coordinates", no, source)
    unit = _ints(tok[1:], no, source)
    mul = np.zeros((n, n, n), dtype=np.int64)
    seen = set()
    for no, line in lines[3:]:
        if ":" not in line:
            raise ParseError("structure constant lines read 'i j : k c ...'", no, source)
        left, right = line.split(":", 1)
        ij = _ints(left.split(), no, source)
        if len(ij) != 2 or not all(0 <= x < n for x in ij):
            raise ParseError("bad basis indices", no, source)
        vals = _ints(right.split(), no, source)
        if len(vals) % 2:
            raise ParseError("terms come in 'k c' pairs", no, source)
        for k, c in zip(vals[::2], vals[1::2]):
            if not 0 <= k < n:
                raise ParseError(f"basis index {k} out of range", no, source)
            mul[ij[0], ij[1], k] += c
        seen.add(tuple(ij))
    if len(seen) != n * n:
        raise ParseError(f"expected {n * n} structure constant lines, got {len(seen)}", None, source)
    try:
        return FiniteAlgebra(p, mul, unit, labels, name=name)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from exc


def load_algebra(ref: str) -> FiniteAlgebra:
    """``preset:name:param:...`` or the path of an algebra file."""
    if ref.startswith("preset:"):
        parts = ref.split(":")[1:]
        if not parts:
            raise ParseError("empty preset reference", None, ref)
        try:
            return preset(parts[0], *(int(x) for x in parts[1:]))
        except ValueError as exc:
            raise ParseError(str(exc), None, ref) from exc
    path = Path(ref)
    if not path.exists():
        raise ParseError("no such file", None, ref)
    return algebra_from_text(path.read_text(), name=path.stem, source=ref)


# ---------------------------------------------------------------------------
# modules and morphisms


def module_to_text(m: Module) -> str:
    out = [f"dim {m.dim}"]
    for i in range(m.algebra.dim):
        out.append(f"action {i}")
        out.extend(" ".join(map(str, row)) for row in m.mats[i])
    return "\n".join(out) + "\n"


def module_from_text(alg: FiniteAlgebra, text: str, name: str | None = None, source: str = "<input>") -> Module:
    lines = _lines(text)
    if not lines or not lines[0][1].startswith("dim"):
        raise ParseError("module file starts with 'dim <d>'", lines[0][0] if lines else None, source)
    no, head = lines[0]
    (d,) = _ints(head.split()[1:], no, source)
    mats = np.zeros((alg.dim, d, d), dtype=np.int64)
    pos = 1
    for i in range(alg.dim):
        if pos >= len(lines) or lines[pos][1] != f"action {i}":
            raise ParseError(f"expected 'action {i}'", lines[pos][0] if pos < len(lines) else None, source)
        pos += 1
        for r in range(d):
            if pos >= len(lines):
                raise ParseError("matrix ended early", None, source)
            no, row = lines[pos]
            vals = _ints(row.split(), no, source)
            if len(vals) != d:
                raise ParseError(f"expected {d} entries", no, source)
            mats[i, r] = vals
            pos += 1
    if pos != len(lines):
        raise ParseError("trailing content", lines[pos][0], source)
    try:
        return Module(alg, mats, name=name)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from exc


def morphism_from_text(text: str, source: str = "<input>") -> AlgebraMorphism:
    lines = _lines(text)
    refs = {}
    rows = []
    for no, line in lines:
        tok = line.split()
        if tok[0] in ("source", "target"):
            if len(tok) != 2:
                raise ParseError(f"'{tok[0]}' takes one algebra reference", no, source)
            refs[tok[0]] = tok[1]
        else:
            rows.append(_ints(tok, no, source))
    if set(refs) != {"source", "target"}:
        raise ParseError("morphism file needs 'source' and 'target' lines", None, source)
    src, tgt = load_algebra(refs["source"]), load_algebra(refs["target"])
    if len(rows) != src.dim or any(len(r) != tgt.dim for r in rows):
        raise ParseError(f"expected a {src.dim} x {tgt.dim} matrix", None, source)
    try:
        return AlgebraMorphism(src, tgt, rows)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from exc


def load_morphism(ref: str) -> AlgebraMorphism:
    path = Path(ref)
    if not path.exists():
        raise ParseError("no such file", None, ref)
    return morphism_from_text(path.read_text(), source=ref)


# ---------------------------------------------------------------------------
# elements


def parse_element(alg: FiniteAlgebra, text: str) -> np.ndarray:
    """``x^2 + 3*x`` style sums of basis labels with optional coefficients."""
    coords = np.zeros(alg.dim, dtype=np.int64)
    index = {lab: i for i, lab in enumerate(alg.basis_labels)}
    body = text.replace(" ", "")
    if not body:
        raise ParseError(f"empty element for {alg.name}")
    for term in body.split("+"):
        if "*" in term:
            c, lab = term.split("*", 1)
            try:
                coef = int(c)
            except ValueError as exc:
                raise ParseError(f"bad coefficient in {term!r}") from exc
        else:
            coef, lab = 1, term
        if lab not in index:
            if lab.lstrip("-").isdigit():
                coords = coords + int(lab) * alg.unit
                continue
            raise ParseError(f"unknown basis label {lab!r}; labels are {alg.basis_labels}")
        coords[index[lab]] += coef
    return coords % alg.p
