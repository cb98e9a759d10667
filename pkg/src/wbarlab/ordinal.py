"""Exact combinatorics of finite ordinals and weakly monotone maps.

The ordinal ``[n]`` is the linearly ordered set ``{0, 1, ..., n}``.  An
:class:`OrdinalMap` is a weakly monotone map ``[m] -> [n]``; these generate
all simplicial bookkeeping in the library.  The empty ordinal ``[-1]`` is a
separate marker object (:data:`EMPTY`) used only by the monoidal sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

from .errors import CompositionError


@dataclass(frozen=True)
class OrdinalMap:
    """A weakly monotone map ``[m] -> [n]``.

    ``values[i]`` is the image of ``i``; ``codomain_size`` is ``n + 1``.

    >>> OrdinalMap((0, 2), 3)(1)
    2
    """

    values: tuple[int, ...]
    codomain_size: int

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("ordinal maps have nonempty domain; use EMPTY for [-1]")
        if self.codomain_size < 1:
            raise ValueError("codomain must be a genuine ordinal")
        prev = 0
        for v in self.values:
            if v < prev:
                raise ValueError(f"values not weakly monotone: {self.values}")
            prev = v
        if prev >= self.codomain_size:
            raise ValueError(
                f"value {prev} out of range for codomain of size {self.codomain_size}"
            )

    # -- basic shape ---------------------------------------------------

    @property
    def domain_size(self) -> int:
        return len(self.values)

    @property
    def source(self) -> int:
        """m for a map [m] -> [n]."""
        return len(self.values) - 1

    @property
    def target(self) -> int:
        """n for a map [m] -> [n]."""
        return self.codomain_size - 1

    def __call__(self, i: int) -> int:
        return self.values[i]

    # -- predicates ----------------------------------------------------

    def is_identity(self) -> bool:
        return self.codomain_size == len(self.values) and all(
            v == i for i, v in enumerate(self.values)
        )

    def is_injective(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    def is_surjective(self) -> bool:
        return (
            self.values[0] == 0
            and self.values[-1] == self.codomain_size - 1
            and all(b - a <= 1 for a, b in zip(self.values, self.values[1:]))
        )

    # -- elementary decompositions --------------------------------------

    def missing_values(self) -> list[int]:
        """Codomain values not hit; only meaningful for injections."""
        hit = set(self.values)
        return [v for v in range(self.codomain_size) if v not in hit]

    def repeat_positions(self) -> list[int]:
        """Positions i with values[i] == values[i+1]; meaningful for surjections."""
        return [i for i in range(len(self.values) - 1) if self.values[i] == self.values[i + 1]]

    def __repr__(self):
        return f"OrdinalMap({self.values}, cod={self.target})"


class EmptyOrdinal:
    """Marker for the empty ordinal [-1], the monoidal unit."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"


EMPTY = EmptyOrdinal()


def identity_map(n: int) -> OrdinalMap:
    """The identity [n] -> [n]."""
    return OrdinalMap(tuple(range(n + 1)), n + 1)


def compose(f: OrdinalMap, g: OrdinalMap) -> OrdinalMap:
    """Composite of ``f : [k] -> [m]`` followed by ``g : [m] -> [n]``.

    >>> compose(OrdinalMap((0, 2), 3), OrdinalMap((0, 1, 3), 4)).values
    (0, 3)
    """
    if f.codomain_size != g.domain_size:
        raise CompositionError(
            f"cannot compose [{f.source}]->[{f.target}] with [{g.source}]->[{g.target}]"
        )
    return OrdinalMap(tuple(g.values[v] for v in f.values), g.codomain_size)


def coface(i: int, n: int) -> OrdinalMap:
    """The injection ``d^i : [n-1] -> [n]`` missing ``i``.

    >>> coface(0, 2).values
    (1, 2)
    """
    if not 0 <= i <= n:
        raise IndexError(f"coface index {i} out of range for [{n}]")
    if n < 1:
        raise IndexError("coface needs n >= 1")
    return OrdinalMap(tuple(v for v in range(n + 1) if v != i), n + 1)


def codegeneracy(i: int, n: int) -> OrdinalMap:
    """The surjection ``s^i : [n+1] -> [n]`` hitting ``i`` twice.

    >>> codegeneracy(1, 1).values
    (0, 1, 1)
    """
    if not 0 <= i <= n:
        raise IndexError(f"codegeneracy index {i} out of range for [{n}]")
    return OrdinalMap(tuple(v if v <= i else v - 1 for v in range(n + 2)), n + 1)


def epi_mono_factor(f: OrdinalMap) -> tuple[OrdinalMap, OrdinalMap]:
    """Unique factorization f = mono . epi through the image ordinal.

    Returns ``(epi, mono)`` with ``compose(epi, mono) == f``.
    """
    image = sorted(set(f.values))
    rank = {v: r for r, v in enumerate(image)}
    epi = OrdinalMap(tuple(rank[v] for v in f.values), len(image))
    mono = OrdinalMap(tuple(image), f.codomain_size)
    return epi, mono


def enumerate_maps(m: int, n: int) -> list[OrdinalMap]:
    """All monotone maps [m] -> [n] in lexicographic order of value tuples.

    The count is binomial(n + m + 1, m + 1).
    """
    if m < 0 or n < 0:
        raise ValueError("ordinal indices must be nonnegative")
    return [
        OrdinalMap(values, n + 1)
        for values in combinations_with_replacement(range(n + 1), m + 1)
    ]


def map_count(m: int, n: int) -> int:
    return comb(n + m + 1, m + 1)


def monoidal_sum(f, g):
    """Ordinal sum f + g, sending ([m], [n]) to [m + n + 1]; EMPTY is the unit.

    On a pair of maps ``f : [m] -> [m']`` and ``g : [n] -> [n']`` the sum acts
    as ``f`` on the first block and as ``g`` shifted by ``m' + 1`` on the rest.
    """
    if isinstance(f, EmptyOrdinal):
        return g
    if isinstance(g, EmptyOrdinal):
        return f
    shift = f.codomain_size
    values = f.values + tuple(v + shift for v in g.values)
    return OrdinalMap(values, shift + g.codomain_size)


def face_word(mono: OrdinalMap) -> list[int]:
    """Indices i_r > ... > i_1 with mono = d^{i_r} ... d^{i_1}.

    Contravariant application order: apply d_{i_r} (the largest) first.
    """
    if not mono.is_injective():
        raise ValueError("face_word needs an injection")
    return sorted(mono.missing_values(), reverse=True)


def degeneracy_word(epi: OrdinalMap) -> list[int]:
    """Indices j_1 < ... < j_r with epi = s^{j_1} ... s^{j_r}.

    Contravariant application order: apply s_{j_1} (the smallest) first.
    """
    if not epi.is_surjective():
        raise ValueError("degeneracy_word needs a surjection")
    return epi.repeat_positions()
