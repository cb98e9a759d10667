"""Finite groups, free-group words, presentations, and admissibility predicates.

Groups are Cayley tables over element indices with the identity fixed at
index 0.  Tuple admissibility for the quotient-type functors is computed on
the finite target: a homomorphism out of a free group kills the verbal kernel
iff the corresponding verbal subgroup of the generated subgroup is trivial,
so the free nilpotent quotients are never materialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceeded

DEFAULT_ORDER_BUDGET = 512


class FiniteGroup:
    """A finite group presented by its multiplication table.

    ``table[a][b]`` is the index of the product ``a * b``; index 0 is the
    identity.  Associativity, identity and inverse laws are checked at
    construction.
    """

    def __init__(self, table, name="group", check=True):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.name = name
        if check:
            self._validate()
        self.inverse_table = tuple(self._find_inverse(a) for a in range(self.order))

    def _validate(self):
        n = self.order
        for row in self.table:
            if len(row) != n or any(not 0 <= v < n for v in row):
                raise ValueError("table is not closed")
        for a in range(n):
            if self.table[0][a] != a or self.table[a][0] != a:
                raise ValueError("index 0 is not a two-sided identity")
        for a in range(n):
            if a not in {self.table[a][b] for b in range(n)}:
                raise ValueError(f"element {a} has no right inverse")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(f"associativity fails at ({a},{b},{c})")

    def _find_inverse(self, a):
        for b in range(self.order):
            if self.table[a][b] == 0 and self.table[b][a] == 0:
                return b
        raise ValueError(f"no inverse for {a}")

    # -- arithmetic ------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        r = 0
        for _ in range(k):
            r = self.table[r][a]
        return r

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def element_order(self, a: int) -> int:
        x, n = a, 1
        while x != 0:
            x = self.table[x][a]
            n += 1
        return n

    def elements(self):
        return range(self.order)

    def is_abelian(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(a)
        )

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    # -- constructions ----------------------------------------------------

    @classmethod
    def from_permutations(cls, perms, name="permgroup", budget=DEFAULT_ORDER_BUDGET):
        """Group generated by permutations given as image tuples."""
        degree = len(perms[0]) if perms else 1
        ident = tuple(range(degree))
        elements = [ident]
        seen = {ident: 0}
        frontier = [ident]
        gens = [tuple(p) for p in perms]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(p[g[i]] for i in range(degree))
                    if q not in seen:
                        if len(elements) >= budget:
                            raise BudgetExceeded(
                                f"group closure exceeds budget {budget}"
                            )
                        seen[q] = len(elements)
                        elements.append(q)
                        nxt.append(q)
            frontier = nxt
        table = [
            [seen[tuple(p[q[i]] for i in range(degree))] for q in elements]
            for p in elements
        ]
        return cls(table, name=name)

    def direct_product(self, other, name=None):
        n, m = self.order, other.order
        table = [
            [
                self.table[a1][b1] * m + other.table[a2][b2]
                for b1 in range(n)
                for b2 in range(m)
            ]
            for a1 in range(n)
            for a2 in range(m)
        ]
        return FiniteGroup(
            table, name=name or f"{self.name}x{other.name}", check=False
        )

    def quotient(self, normal_subgroup, name=None):
        """Quotient by a normal subgroup given as a set of indices."""
        ns = frozenset(normal_subgroup)
        cosets = []
        coset_of = {}
        for a in range(self.order):
            if a in coset_of:
                continue
            coset = frozenset(self.mul(a, h) for h in ns)
            idx = len(cosets)
            cosets.append((a if 0 not in coset else 0, coset))
            for x in coset:
                coset_of[x] = idx
        # identity coset first
        cosets.sort(key=lambda t: (0 not in t[1], t[0]))
        reps = [rep for rep, _ in cosets]
        index_of = {}
        for i, (_, coset) in enumerate(cosets):
            for x in coset:
                index_of[x] = i
        table = [
            [index_of[self.mul(a, b)] for b in reps] for a in reps
        ]
        return FiniteGroup(table, name=name or f"{self.name}/N")


# -- builtins -------------------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, name=f"Z{n}", check=False)


def symmetric(n: int) -> FiniteGroup:
    if n > 5:
        raise BudgetExceeded("symmetric groups only provided up to degree 5")
    if n <= 1:
        return cyclic(1)
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return FiniteGroup.from_permutations([swap, cycle], name=f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n."""
    rot = tuple(list(range(1, n)) + [0])
    ref = tuple((n - i) % n for i in range(n))
    return FiniteGroup.from_permutations([rot, ref], name=f"D{n}")


def quaternion() -> FiniteGroup:
    """Q8 with elements indexed 0:+1 1:-1 2:+i 3:-i 4:+j 5:-j 6:+k 7:-k."""
    # unit multiplication on axes 0:1 1:i 2:j 3:k, with a sign
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    def decode(a):
        sign = -1 if a % 2 else 1
        return sign, a // 2
    def encode(sign, axis):
        return axis * 2 + (0 if sign == 1 else 1)
    table = []
    for a in range(8):
        row = []
        sa, xa = decode(a)
        for b in range(8):
            sb, xb = decode(b)
            s, x = unit_mul[(xa, xb)]
            row.append(encode(s * sa * sb, x))
        table.append(row)
    return FiniteGroup(table, name="Q8")


def extraspecial_32() -> FiniteGroup:
    """Central product of two dihedral groups of order 8: extraspecial of order 32."""
    d = dihedral(4)
    z = next(
        a
        for a in range(1, d.order)
        if a != 0
        and all(d.mul(a, b) == d.mul(b, a) for b in range(d.order))
        and d.element_order(a) == 2
    )
    dd = d.direct_product(d)
    kernel = {0, z * d.order + z}
    g = dd.quotient(kernel, name="ES32")
    assert g.order == 32
    return g


BUILTIN_GROUPS = {
    "z2": lambda: cyclic(2),
    "z3": lambda: cyclic(3),
    "z4": lambda: cyclic(4),
    "s3": lambda: symmetric(3),
    "s4": lambda: symmetric(4),
    "s5": lambda: symmetric(5),
    "d4": lambda: dihedral(4),
    "q8": quaternion,
    "es32": extraspecial_32,
}


def builtin_group(name: str) -> FiniteGroup:
    key = name.lower()
    if key.startswith("cyclic"):
        return cyclic(int(key.removeprefix("cyclic")))
    if key.startswith("z") and key[1:].isdigit():
        return cyclic(int(key[1:]))
    if key in BUILTIN_GROUPS:
        return BUILTIN_GROUPS[key]()
    raise KeyError(f"unknown builtin group {name!r}")


def group_to_json(g: FiniteGroup) -> str:
    return json.dumps({"name": g.name, "table": [list(r) for r in g.table]})


def group_from_json(text: str, budget=DEFAULT_ORDER_BUDGET) -> FiniteGroup:
    data = json.loads(text)
    if "table" in data:
        return FiniteGroup(data["table"], name=data.get("name", "group"))
    if "permutations" in data:
        return FiniteGroup.from_permutations(
            [tuple(p) for p in data["permutations"]],
            name=data.get("name", "permgroup"),
            budget=budget,
        )
    raise ValueError("group JSON needs a 'table' or 'permutations' key")


# -- subgroups and verbal series ------------------------------------------


def subgroup_closure(g: FiniteGroup, gens) -> frozenset[int]:
    """Smallest subgroup of g containing gens."""
    elements = {0}
    frontier = [0]
    gens = [x for x in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                for b in (g.mul(a, s), g.mul(a, g.inv(s))):
                    if b not in elements:
                        elements.add(b)
                        nxt.append(b)
        frontier = nxt
    return frozenset(elements)


def verbal_stage(g: FiniteGroup, subgroup, variant: str, q: int, p: int = 0):
    """q-th stage of the descending central series of ``subgroup``.

    ``variant`` is ``"gamma"`` for the plain series (iterated commutators
    with the subgroup) or ``"gammap"`` for the mod-p series, which also
    closes under p-th powers of the previous stage.
    """
    h = frozenset(subgroup)
    stage = h
    for _ in range(q - 1):
        gens = [g.commutator(a, b) for a in stage for b in h]
        if variant == "gammap":
            gens += [g.power(a, p) for a in stage]
        stage = subgroup_closure(g, gens)
        if stage == frozenset({0}):
            break
    return stage


# -- quotient-type functors -------------------------------------------------


@dataclass(frozen=True)
class TauDescriptor:
    """One of the four named quotient-type endofunctors.

    variant: "free", "gamma" (lower central, q >= 2), "gammap" (mod-p lower
    central, q >= 2, p prime), or "abmodpk" (abelianization followed by the
    largest p^k-torsion quotient).
    """

    variant: str
    q: int = 0
    p: int = 0
    k: int = 0

    def __post_init__(self):
        if self.variant == "free":
            return
        if self.variant == "gamma":
            if self.q < 2:
                raise ValueError("gamma needs q >= 2")
        elif self.variant == "gammap":
            if self.q < 2 or self.p < 2:
                raise ValueError("gammap needs q >= 2 and a prime p")
        elif self.variant == "abmodpk":
            if self.p < 2 or self.k < 1:
                raise ValueError("abmodpk needs a prime p and k >= 1")
        else:
            raise ValueError(f"unknown variant {self.variant!r}")

    @classmethod
    def parse(cls, text: str) -> "TauDescriptor":
        """Parse the CLI syntax free | gamma:q | gammap:p,q | abmodpk:p,k."""
        head, _, rest = text.partition(":")
        head = head.strip().lower()
        if head == "free":
            return cls("free")
        nums = [int(x) for x in rest.split(",")] if rest else []
        if head == "gamma":
            return cls("gamma", q=nums[0])
        if head == "gammap":
            return cls("gammap", p=nums[0], q=nums[1])
        if head == "abmodpk":
            return cls("abmodpk", p=nums[0], k=nums[1])
        raise ValueError(f"cannot parse tau descriptor {text!r}")

    def label(self) -> str:
        if self.variant == "free":
            return "free"
        if self.variant == "gamma":
            return f"gamma:{self.q}"
        if self.variant == "gammap":
            return f"gammap:{self.p},{self.q}"
        return f"abmodpk:{self.p},{self.k}"


FREE = TauDescriptor("free")


def tuple_admissible(tau: TauDescriptor, g: FiniteGroup, elems) -> bool:
    """Does e_j |-> elems[j] factor through the tau-quotient of the free group?

    For the lower central variants this reduces to triviality of the verbal
    subgroup of the generated subgroup; for the mod-p^k abelianization it is
    pairwise commutation plus p^k-torsion of every entry.
    """
    elems = tuple(elems)
    if tau.variant == "free" or len(elems) == 0:
        return True
    if tau.variant == "abmodpk":
        pk = tau.p**tau.k
        if any(g.power(x, pk) != 0 for x in elems):
            return False
        return _pairwise_commuting(g, elems)
    if tau.variant == "gamma" and tau.q == 2:
        return _pairwise_commuting(g, elems)
    h = subgroup_closure(g, elems)
    variant = "gamma" if tau.variant == "gamma" else "gammap"
    return verbal_stage(g, h, variant, tau.q, tau.p) == frozenset({0})


def _pairwise_commuting(g, elems):
    return all(
        g.mul(a, b) == g.mul(b, a)
        for i, a in enumerate(elems)
        for b in elems[:i]
    )


def enumerate_admissible(tau, g, length, budget=10**7):
    """Lexicographically ordered tau-admissible tuples in g^length.

    Prefix pruning is sound because admissibility is monotone under
    subtuples.
    """
    if g.order**length > budget:
        raise BudgetExceeded(f"|G|^{length} exceeds budget {budget}")
    tuples = [()]
    for _ in range(length):
        tuples = [
            t + (x,)
            for t in tuples
            for x in range(g.order)
            if tuple_admissible(tau, g, t + (x,))
        ]
    return tuples


def count_admissible(tau, g, length, budget=10**7):
    return len(enumerate_admissible(tau, g, length, budget=budget))


# -- free-group words --------------------------------------------------------
#
# A word is a tuple of (generator_key, nonzero exponent) pairs, reduced so
# that adjacent letters carry distinct keys.  Keys are opaque hashables.


def word_reduce(letters):
    out = []
    for key, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == key:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((key, merged))
        else:
            out.append((key, exp))
    return tuple(out)


def word_mul(*words):
    letters = [lt for w in words for lt in w]
    return word_reduce(letters)


def word_inv(word):
    return tuple((key, -exp) for key, exp in reversed(word))


def generator(key):
    return ((key, 1),)


def word_substitute(word, images):
    """Apply the homomorphism sending each key to a word images[key]."""
    out = []
    for key, exp in word:
        img = images[key]
        out.extend(img if exp > 0 else word_inv(img))
        for _ in range(abs(exp) - 1):
            out.extend(img if exp > 0 else word_inv(img))
    return word_reduce(out)


def word_evaluate(word, g: FiniteGroup, images) -> int:
    """Evaluate a word in g under the assignment key -> element index."""
    r = 0
    for key, exp in word:
        r = g.mul(r, g.power(images[key], exp))
    return r


# -- finite presentations ----------------------------------------------------


@dataclass(frozen=True)
class FpPresentation:
    """Generators 0..generator_count-1 with relator words over them."""

    generator_count: int
    relators: tuple

    def __post_init__(self):
        for w in self.relators:
            for key, _ in w:
                if not 0 <= key < self.generator_count:
                    raise ValueError(f"relator uses unknown generator {key}")


def hom_enumeration(pres: FpPresentation, g: FiniteGroup, budget=10**7):
    """All homomorphisms to g, as tuples of generator images."""
    if g.order**pres.generator_count > budget:
        raise BudgetExceeded(
            f"|G|^{pres.generator_count} exceeds budget {budget}"
        )
    homs = []
    for assignment in product(range(g.order), repeat=pres.generator_count):
        images = dict(enumerate(assignment))
        if all(word_evaluate(w, g, images) == 0 for w in pres.relators):
            homs.append(assignment)
    return homs
