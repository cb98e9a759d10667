"""Simplicial sets as degree-indexed oracles plus explicit truncations.

Two representations cooperate here.  An oracle (:class:`SimplicialSet`)
enumerates the full set of n-simplices of each level and evaluates faces and
degeneracies on elements; standard simplices, bar constructions, nerves and
suspensions are all oracles.  A :class:`TruncatedComplex` stores only the
nondegenerate cells up to a truncation degree, with every face recorded in
Eilenberg-Zilber normal form (degeneracy word applied to a nondegenerate
cell); this is the input format of the homology engine and of bundle bases.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InsufficientTruncation, NotSimplicial, VerificationFailure
from .ordinal import (
    OrdinalMap,
    coface,
    codegeneracy,
    compose,
    degeneracy_word,
    enumerate_maps,
    epi_mono_factor,
    face_word,
    identity_map,
)

BASEPOINT = "<*>"


class SimplicialSet:
    """Base class: finite levels, elements are hashable, maps are methods.

    Subclasses implement ``_build_level(n)``, ``face`` and ``degeneracy``.
    Levels are memoized on first access so element indices stay stable.
    """

    def __init__(self, name="X"):
        self.name = name
        self._levels: dict[int, tuple] = {}
        self._index: dict[int, dict] = {}

    # -- levels ---------------------------------------------------------

    def _build_level(self, n):
        raise NotImplementedError

    def level(self, n):
        if n not in self._levels:
            lv = tuple(self._build_level(n))
            self._levels[n] = lv
            self._index[n] = {x: i for i, x in enumerate(lv)}
        return self._levels[n]

    def iter_level(self, n):
        """Streaming enumeration; override where materializing is wasteful."""
        return iter(self.level(n))

    def level_count(self, n):
        return len(self.level(n))

    def index(self, n, x):
        self.level(n)
        return self._index[n][x]

    # -- structure maps ---------------------------------------------------

    def face(self, n, x, i):
        raise NotImplementedError

    def degeneracy(self, n, x, i):
        raise NotImplementedError

    def act(self, theta: OrdinalMap, x):
        """Contravariant action of theta : [m] -> [n] on an n-simplex."""
        epi, mono = epi_mono_factor(theta)
        n = theta.target
        for i in face_word(mono):
            x = self.face(n, x, i)
            n -= 1
        for j in degeneracy_word(epi):
            x = self.degeneracy(n, x, j)
            n += 1
        return x

    # -- Eilenberg-Zilber normal form --------------------------------------

    def is_degenerate(self, n, x):
        if n == 0:
            return False
        for i in range(n):
            y = self.face(n, x, i)
            if self.degeneracy(n - 1, y, i) == x:
                return True
        return False

    def normal_form(self, n, x):
        """Unique (surjection, nondegenerate element) presentation of x."""
        for i in range(n):
            y = self.face(n, x, i)
            if self.degeneracy(n - 1, y, i) == x:
                epi, cell = self.normal_form(n - 1, y)
                return compose(codegeneracy(i, n - 1), epi), cell
        return identity_map(n), x

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


class StandardSimplex(SimplicialSet):
    """Delta[k]: n-simplices are the monotone maps [n] -> [k] as value tuples."""

    def __init__(self, k: int):
        super().__init__(name=f"Delta[{k}]")
        if k < 0:
            raise ValueError("k must be nonnegative")
        self.k = k

    def _build_level(self, n):
        return [m.values for m in enumerate_maps(n, self.k)]

    def face(self, n, x, i):
        return x[:i] + x[i + 1 :]

    def degeneracy(self, n, x, i):
        return x[: i + 1] + x[i:]

    def act(self, theta, x):
        return tuple(x[v] for v in theta.values)

    def is_degenerate(self, n, x):
        return any(a == b for a, b in zip(x, x[1:]))


# -- truncated complexes ------------------------------------------------------


@dataclass(frozen=True)
class SimplexRef:
    """A simplex in normal form: a degeneracy surjection applied to a cell.

    ``degeneracy`` maps [degree] onto [cell_degree]; ``cell`` indexes a
    nondegenerate cell of the owning complex.
    """

    complex_id: str
    degeneracy: OrdinalMap
    cell: int

    @property
    def degree(self):
        return self.degeneracy.source

    @property
    def cell_degree(self):
        return self.degeneracy.target

    def is_nondegenerate(self):
        return self.degeneracy.is_identity()

    def __repr__(self):
        return f"Ref({self.complex_id}:{self.cell_degree}.{self.cell}@{self.degeneracy.values})"


class TruncatedComplex(SimplicialSet):
    """Nondegenerate cells up to a truncation degree with face data.

    ``cell_counts[d]`` is the number of d-cells; ``cell_faces[d][c][i]`` is
    the :class:`SimplexRef` for the i-th face of cell c.  Levels enumerate
    every simplex (degenerate ones included) as refs.  Refs of degree above
    the truncation can still be manipulated, but levels beyond it raise
    :class:`InsufficientTruncation`.
    """

    def __init__(self, truncation, cell_counts, cell_faces, complex_id="C", check=True):
        super().__init__(name=complex_id)
        self.truncation = truncation
        self.complex_id = complex_id
        self.cell_counts = list(cell_counts)
        while len(self.cell_counts) <= truncation:
            self.cell_counts.append(0)
        self.cell_faces = [list(rows) for rows in cell_faces]
        while len(self.cell_faces) <= truncation:
            self.cell_faces.append([])
        if check:
            self.validate()

    # -- refs -------------------------------------------------------------

    def ref(self, d, c):
        if not 0 <= c < self.cell_counts[d]:
            raise IndexError(f"no cell {c} in degree {d}")
        return SimplexRef(self.complex_id, identity_map(d), c)

    def _check_ref(self, ref):
        if ref.complex_id != self.complex_id:
            raise ValueError(f"ref belongs to {ref.complex_id}, not {self.complex_id}")

    def face(self, n, ref, i):
        self._check_ref(ref)
        phi = compose(coface(i, n), ref.degeneracy)
        epi, mono = epi_mono_factor(phi)
        if mono.is_identity():
            return SimplexRef(self.complex_id, epi, ref.cell)
        j = mono.missing_values()[0]
        f = self.cell_faces[ref.cell_degree][ref.cell][j]
        return SimplexRef(self.complex_id, compose(epi, f.degeneracy), f.cell)

    def degeneracy(self, n, ref, i):
        self._check_ref(ref)
        return SimplexRef(
            self.complex_id, compose(codegeneracy(i, n), ref.degeneracy), ref.cell
        )

    def _build_level(self, n):
        if n > self.truncation:
            raise InsufficientTruncation(
                f"{self.complex_id} truncated at {self.truncation}, level {n} requested"
            )
        out = []
        for p in range(n + 1):
            epis = [m for m in enumerate_maps(n, p) if m.is_surjective()]
            for c in range(self.cell_counts[p]):
                for epi in epis:
                    out.append(SimplexRef(self.complex_id, epi, c))
        return out

    def nondegenerate(self, d):
        if d > self.truncation:
            raise InsufficientTruncation(
                f"{self.complex_id} truncated at {self.truncation}"
            )
        return [self.ref(d, c) for c in range(self.cell_counts[d])]

    def is_degenerate(self, n, ref):
        return not ref.degeneracy.is_identity()

    def normal_form(self, n, ref):
        return ref.degeneracy, self.ref(ref.cell_degree, ref.cell)

    def validate(self):
        """Check every simplicial identity d_i d_j = d_{j-1} d_i on cells."""
        for d in range(1, self.truncation + 1):
            for c in range(self.cell_counts[d]):
                for i, f in enumerate(self.cell_faces[d][c]):
                    if f.degree != d - 1:
                        raise NotSimplicial(
                            f"face {i} of cell {d}.{c} has degree {f.degree}",
                            witness=(d, c, i),
                        )
        for d in range(2, self.truncation + 1):
            for c in range(self.cell_counts[d]):
                r = self.ref(d, c)
                for j in range(1, d + 1):
                    for i in range(j):
                        lhs = self.face(d - 1, self.face(d, r, j), i)
                        rhs = self.face(d - 1, self.face(d, r, i), j - 1)
                        if lhs != rhs:
                            raise NotSimplicial(
                                f"d_{i} d_{j} != d_{j-1} d_{i} at cell {d}.{c}",
                                witness=(d, c, i, j),
                            )

    # -- serialization ------------------------------------------------------

    def to_json(self):
        faces = []
        for d in range(1, self.truncation + 1):
            faces.append(
                [
                    [[f.cell_degree, f.cell, list(f.degeneracy.values)] for f in row]
                    for row in (self.cell_faces[d] if d < len(self.cell_faces) else [])
                ]
            )
        return json.dumps(
            {"dim": self.truncation, "cells": list(self.cell_counts), "faces": faces},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text, complex_id="C"):
        data = json.loads(text)
        dim = data["dim"]
        counts = data["cells"]
        faces = [[]]
        for d in range(1, dim + 1):
            rows = []
            for row in data["faces"][d - 1]:
                rows.append(
                    tuple(
                        SimplexRef(complex_id, OrdinalMap(tuple(vals), cd + 1), c)
                        for cd, c, vals in row
                    )
                )
            faces.append(rows)
        return cls(dim, counts, faces, complex_id=complex_id)


def truncate(x: SimplicialSet, n_max: int, complex_id=None) -> TruncatedComplex:
    """Materialize the Eilenberg-Zilber normal form of an oracle up to n_max."""
    complex_id = complex_id or f"{x.name}|{n_max}"
    cells = []
    index = []
    for d in range(n_max + 1):
        elems = [e for e in x.level(d) if not x.is_degenerate(d, e)]
        cells.append(elems)
        index.append({e: i for i, e in enumerate(elems)})
    faces = [[]]
    for d in range(1, n_max + 1):
        rows = []
        for e in cells[d]:
            row = []
            for i in range(d + 1):
                y = x.face(d, e, i)
                epi, cell = x.normal_form(d - 1, y)
                row.append(SimplexRef(complex_id, epi, index[epi.target][cell]))
            rows.append(tuple(row))
        faces.append(rows)
    tc = TruncatedComplex(
        n_max, [len(cs) for cs in cells], faces, complex_id=complex_id
    )
    tc.cell_elements = cells
    return tc


# -- decalage -----------------------------------------------------------------


class Decalage0(SimplicialSet):
    """Shift by one: level n is X_{n+1}, keeping the first n+1 faces.

    The augmentation evaluates at the top vertex; its fibers are the
    connected components of the shifted object.
    """

    def __init__(self, x: SimplicialSet):
        super().__init__(name=f"Dec0({x.name})")
        self.base = x

    def _build_level(self, n):
        return self.base.level(n + 1)

    def face(self, n, x, i):
        return self.base.face(n + 1, x, i)

    def degeneracy(self, n, x, i):
        return self.base.degeneracy(n + 1, x, i)

    def augmentation(self, n, x):
        top = OrdinalMap((n + 1,), n + 2)
        return self.base.act(top, x)

    def augmentation_fibers(self, n):
        fibers = {}
        for x in self.level(n):
            fibers.setdefault(self.augmentation(n, x), []).append(x)
        return fibers


# -- Kan suspension -----------------------------------------------------------


class KanSuspension(SimplicialSet):
    """Wedge of shifted copies of a pointed simplicial set.

    Level n is ``X_{n-1} v ... v X_0``; the element ``(c, x)`` puts
    ``x in X_{n-c}`` in the c-th wedge summand.  The action of an ordinal map
    ``theta : [m] -> [n]`` on summand c is through the least ``a`` with
    ``theta(a) >= c``: the summand dies when no such ``a >= 1`` exists, and
    otherwise maps to summand ``a`` by the corner restriction of theta.  This
    is the unique structure transported along the inclusion of the wedge into
    the product bar construction.
    """

    def __init__(self, x: SimplicialSet, basepoint_of=None):
        super().__init__(name=f"Sigma({x.name})")
        self.base = x
        self._bp = basepoint_of or (lambda n: x.basepoint(n))

    def basepoint(self, n):
        return BASEPOINT

    def _build_level(self, n):
        out = [BASEPOINT]
        for c in range(1, n + 1):
            bp = self._bp(n - c)
            out.extend((c, x) for x in self.base.level(n - c) if x != bp)
        return out

    def act(self, theta, el):
        if el == BASEPOINT:
            return BASEPOINT
        c, x = el
        values = theta.values
        lo = next((a for a, v in enumerate(values) if v >= c), None)
        if lo is None or lo == 0:
            return BASEPOINT
        m = theta.source
        corner = OrdinalMap(
            tuple(values[lo + j] - c for j in range(m - lo + 1)),
            theta.target - c + 1,
        )
        y = self.base.act(corner, x)
        if y == self._bp(m - lo):
            return BASEPOINT
        return (lo, y)

    def face(self, n, el, i):
        return self.act(coface(i, n), el)

    def degeneracy(self, n, el, i):
        return self.act(codegeneracy(i, n), el)

    def is_degenerate(self, n, el):
        if el == BASEPOINT:
            return n > 0
        c, x = el
        if c >= 2:
            return True
        return self.base.is_degenerate(n - 1, x)


# -- simplicial maps ----------------------------------------------------------


class SimplicialMap:
    """A levelwise map with domain and codomain oracles."""

    def __init__(self, domain, codomain, fn, name="f"):
        self.domain = domain
        self.codomain = codomain
        self.fn = fn
        self.name = name

    def __call__(self, n, x):
        return self.fn(n, x)

    @classmethod
    def from_cell_values(cls, domain: TruncatedComplex, codomain, values, name="f"):
        """Extend values on nondegenerate cells by naturality.

        ``values[(d, c)]`` is the codomain element assigned to cell c of
        degree d.
        """

        def fn(n, ref):
            y = values[(ref.cell_degree, ref.cell)]
            return codomain.act(ref.degeneracy, y)

        return cls(domain, codomain, fn, name=name)


def check_simplicial_map(f: SimplicialMap, max_degree, check_degeneracies=True):
    """Exhaustively compare f with all structure maps up to max_degree.

    Returns a verdict dict; ``status`` is "pass" or "fail" with a
    counterexample payload.
    """
    dom, cod = f.domain, f.codomain
    for n in range(1, max_degree + 1):
        for x in dom.iter_level(n):
            fx = f(n, x)
            for i in range(n + 1):
                left = f(n - 1, dom.face(n, x, i))
                right = cod.face(n, fx, i)
                if left != right:
                    return {
                        "map": f.name,
                        "status": "fail",
                        "counterexample": {
                            "degree": n,
                            "op": f"d_{i}",
                            "simplex": repr(x),
                            "lhs": repr(left),
                            "rhs": repr(right),
                        },
                    }
    if check_degeneracies:
        for n in range(max_degree):
            for x in dom.iter_level(n):
                fx = f(n, x)
                for i in range(n + 1):
                    left = f(n + 1, dom.degeneracy(n, x, i))
                    right = cod.degeneracy(n, fx, i)
                    if left != right:
                        return {
                            "map": f.name,
                            "status": "fail",
                            "counterexample": {
                                "degree": n,
                                "op": f"s_{i}",
                                "simplex": repr(x),
                                "lhs": repr(left),
                                "rhs": repr(right),
                            },
                        }
    return {"map": f.name, "status": "pass", "degrees_checked": max_degree}


def verify_simplicial_map(f: SimplicialMap, max_degree, check_degeneracies=True):
    verdict = check_simplicial_map(f, max_degree, check_degeneracies)
    if verdict["status"] != "pass":
        raise VerificationFailure(
            f"{f.name} is not simplicial: {verdict['counterexample']}",
            witness=verdict["counterexample"],
        )
    return verdict


def verify_oracle_identities(x: SimplicialSet, max_degree):
    """Check the simplicial identities on every element up to max_degree."""
    for n in range(max_degree + 1):
        for el in x.iter_level(n):
            if n >= 2:
                for j in range(1, n + 1):
                    for i in range(j):
                        lhs = x.face(n - 1, x.face(n, el, j), i)
                        rhs = x.face(n - 1, x.face(n, el, i), j - 1)
                        if lhs != rhs:
                            raise VerificationFailure(
                                f"d_{i} d_{j} fails at level {n}",
                                witness=(n, el, i, j),
                            )
            if n + 1 > max_degree:
                continue
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = x.degeneracy(n + 1, x.degeneracy(n, el, j), i)
                    rhs = x.degeneracy(n + 1, x.degeneracy(n, el, i), j + 1)
                    if lhs != rhs:
                        raise VerificationFailure(
                            f"s_{i} s_{j} fails at level {n}", witness=(n, el, i, j)
                        )
            for j in range(n + 1):
                for i in range(n + 2):
                    img = x.degeneracy(n, el, j)
                    got = x.face(n + 1, img, i)
                    if i < j:
                        want = x.degeneracy(n - 1, x.face(n, el, i), j - 1)
                    elif i in (j, j + 1):
                        want = el
                    else:
                        want = x.degeneracy(n - 1, x.face(n, el, i - 1), j)
                    if got != want:
                        raise VerificationFailure(
                            f"d_{i} s_{j} fails at level {n}", witness=(n, el, i, j)
                        )
    return True


def circle_complex() -> TruncatedComplex:
    """One vertex and one nondegenerate edge, both of whose faces are it."""
    cid = "S1"
    v = SimplexRef(cid, identity_map(0), 0)
    faces = [[], [(v, v)]]
    return TruncatedComplex(3, [1, 1, 0, 0], faces, complex_id=cid)
