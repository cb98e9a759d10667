"""Bisimplicial sets, their condensations, and the comparison maps.

A bisimplicial set exposes horizontal and vertical structure maps per
bidegree.  The diagonal and the total complex condense it to a simplicial
set; the fat resolution (pairs of an ordinal chain and a simplex over its
last object) relates the two through the Bousfield-Kan and Cegarra-Remedios
maps, and the nerve of the Grothendieck construction of a simplicial group
is identified with the total complex of the transposed resolution of its
levelwise nerve.  All levels involving ordinal chains take an explicit
ordinal cap and enumerate only chains within it.
"""

from __future__ import annotations

from itertools import product

from .errors import CapExceeded, VerificationFailure
from .groups import TauDescriptor, tuple_admissible
from .ordinal import (
    OrdinalMap,
    compose,
    degeneracy_word,
    enumerate_maps,
    epi_mono_factor,
    face_word,
    identity_map,
)
from .simplicial import SimplicialMap, SimplicialSet
from .simplicial_groups import DiscreteSimplicialGroup, FiniteSimplicialGroup
from .wbar import BarConstruction, TauBarConstruction


class BisimplicialSet:
    """Base class: levels indexed by bidegrees, four families of maps."""

    def __init__(self, name="X"):
        self.name = name
        self._levels = {}

    def _build_level(self, p, q):
        raise NotImplementedError

    def level(self, p, q):
        if (p, q) not in self._levels:
            self._levels[(p, q)] = tuple(self._build_level(p, q))
        return self._levels[(p, q)]

    def iter_level(self, p, q):
        return iter(self.level(p, q))

    def hface(self, p, q, x, i):
        raise NotImplementedError

    def hdeg(self, p, q, x, i):
        raise NotImplementedError

    def vface(self, p, q, x, j):
        raise NotImplementedError

    def vdeg(self, p, q, x, j):
        raise NotImplementedError

    def hact(self, theta: OrdinalMap, q, x):
        epi, mono = epi_mono_factor(theta)
        p = theta.target
        for i in face_word(mono):
            x = self.hface(p, q, x, i)
            p -= 1
        for j in degeneracy_word(epi):
            x = self.hdeg(p, q, x, j)
            p += 1
        return x

    def vact(self, p, theta: OrdinalMap, x):
        epi, mono = epi_mono_factor(theta)
        q = theta.target
        for i in face_word(mono):
            x = self.vface(p, q, x, i)
            q -= 1
        for j in degeneracy_word(epi):
            x = self.vdeg(p, q, x, j)
            q += 1
        return x

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


class Transpose(BisimplicialSet):
    def __init__(self, base: BisimplicialSet):
        super().__init__(name=f"{base.name}'")
        self.base = base

    def _build_level(self, p, q):
        return self.base.level(q, p)

    def iter_level(self, p, q):
        return self.base.iter_level(q, p)

    def hface(self, p, q, x, i):
        return self.base.vface(q, p, x, i)

    def hdeg(self, p, q, x, i):
        return self.base.vdeg(q, p, x, i)

    def vface(self, p, q, x, j):
        return self.base.hface(q, p, x, j)

    def vdeg(self, p, q, x, j):
        return self.base.hdeg(q, p, x, j)


def verify_bisimplicial_identities(b: BisimplicialSet, p_max, q_max):
    """Both families of simplicial identities plus horizontal/vertical commutation."""
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            for x in b.iter_level(p, q):
                for j in range(1, p + 1):
                    for i in range(j):
                        if b.hface(p - 1, q, b.hface(p, q, x, j), i) != b.hface(
                            p - 1, q, b.hface(p, q, x, i), j - 1
                        ):
                            raise VerificationFailure(
                                "horizontal face identity fails",
                                witness=(p, q, x, i, j),
                            )
                for j in range(1, q + 1):
                    for i in range(j):
                        if b.vface(p, q - 1, b.vface(p, q, x, j), i) != b.vface(
                            p, q - 1, b.vface(p, q, x, i), j - 1
                        ):
                            raise VerificationFailure(
                                "vertical face identity fails",
                                witness=(p, q, x, i, j),
                            )
                for i in range(p + 1):
                    for j in range(q + 1):
                        if p >= 1 and q >= 1:
                            if b.vface(p - 1, q, b.hface(p, q, x, i), j) != b.hface(
                                p, q - 1, b.vface(p, q, x, j), i
                            ):
                                raise VerificationFailure(
                                    "horizontal and vertical faces do not commute",
                                    witness=(p, q, x, i, j),
                                )
                        if b.vdeg(p + 1, q, b.hdeg(p, q, x, i), j) != b.hdeg(
                            p, q + 1, b.vdeg(p, q, x, j), i
                        ):
                            raise VerificationFailure(
                                "horizontal and vertical degeneracies do not commute",
                                witness=(p, q, x, i, j),
                            )
    return True


# -- total shift of a simplicial set --------------------------------------------


class TotalShift(BisimplicialSet):
    """The bisimplicial shift with (m, n)-simplices X_{m+n+1}.

    Horizontal maps use the first m+1 indices, vertical maps the rest.
    """

    def __init__(self, x: SimplicialSet):
        super().__init__(name=f"Dec({x.name})")
        self.x = x

    def _build_level(self, p, q):
        return self.x.level(p + q + 1)

    def hface(self, p, q, x, i):
        return self.x.face(p + q + 1, x, i)

    def hdeg(self, p, q, x, i):
        return self.x.degeneracy(p + q + 1, x, i)

    def vface(self, p, q, x, j):
        return self.x.face(p + q + 1, x, p + 1 + j)

    def vdeg(self, p, q, x, j):
        return self.x.degeneracy(p + q + 1, x, p + 1 + j)


class SimplexShiftModel(BisimplicialSet):
    """Coproduct-of-simplices model of the shifted standard k-simplex.

    An (m, n)-simplex is a pair (phi, theta) with phi : [n] -> [k] and
    theta : [m] -> [phi(0)], stored as value tuples.
    """

    def __init__(self, k: int):
        super().__init__(name=f"D[{k}]")
        self.k = k

    def _build_level(self, p, q):
        out = []
        for phi in enumerate_maps(q, self.k):
            for theta in enumerate_maps(p, phi.values[0]):
                out.append((phi.values, theta.values))
        return out

    def hface(self, p, q, x, i):
        phi, theta = x
        return (phi, theta[:i] + theta[i + 1 :])

    def hdeg(self, p, q, x, i):
        phi, theta = x
        return (phi, theta[: i + 1] + theta[i:])

    def vface(self, p, q, x, j):
        phi, theta = x
        return (phi[:j] + phi[j + 1 :], theta) if j > 0 else (phi[1:], theta)

    def vdeg(self, p, q, x, j):
        phi, theta = x
        return (phi[: j + 1] + phi[j:], theta)


def shift_model_iso(k: int):
    """The mutually inverse bijections between the model and the true shift.

    Forward glues theta and phi into one monotone map [m+n+1] -> [k];
    backward splits it again.
    """

    def forward(p, q, x):
        phi, theta = x
        return theta + phi

    def backward(p, q, alpha):
        return (alpha[p + 1 :], alpha[: p + 1])

    return forward, backward


def verify_shift_model_iso(k, p_max, q_max):
    model = SimplexShiftModel(k)
    from .simplicial import StandardSimplex

    shift = TotalShift(StandardSimplex(k))
    fwd, bwd = shift_model_iso(k)
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            lhs = model.level(p, q)
            image = [fwd(p, q, x) for x in lhs]
            if sorted(image) != sorted(shift.level(p, q)):
                raise VerificationFailure(
                    f"shift model mismatch at bidegree ({p},{q})", witness=(p, q)
                )
            for x in lhs:
                if bwd(p, q, fwd(p, q, x)) != x:
                    raise VerificationFailure(
                        "shift model roundtrip fails", witness=(p, q, x)
                    )
                a = fwd(p, q, x)
                for i in range(p + 1):
                    if p >= 1 and fwd(p - 1, q, model.hface(p, q, x, i)) != shift.hface(
                        p, q, a, i
                    ):
                        raise VerificationFailure(
                            "shift model horizontal face mismatch",
                            witness=(p, q, x, i),
                        )
                    if fwd(p + 1, q, model.hdeg(p, q, x, i)) != shift.hdeg(p, q, a, i):
                        raise VerificationFailure(
                            "shift model horizontal degeneracy mismatch",
                            witness=(p, q, x, i),
                        )
                for j in range(q + 1):
                    if q >= 1 and fwd(p, q - 1, model.vface(p, q, x, j)) != shift.vface(
                        p, q, a, j
                    ):
                        raise VerificationFailure(
                            "shift model vertical face mismatch",
                            witness=(p, q, x, j),
                        )
                    if fwd(p, q + 1, model.vdeg(p, q, x, j)) != shift.vdeg(p, q, a, j):
                        raise VerificationFailure(
                            "shift model vertical degeneracy mismatch",
                            witness=(p, q, x, j),
                        )
    return True


# -- nerves of simplicial groups -------------------------------------------------


class NerveBisimplicial(BisimplicialSet):
    """(p, q)-simplices are p-tuples of elements of K_q."""

    def __init__(self, k: FiniteSimplicialGroup):
        super().__init__(name=f"N({getattr(k, 'name', 'K')})")
        self.k = k
        self.vertically_constant = isinstance(k, DiscreteSimplicialGroup)

    def _build_level(self, p, q):
        return list(product(self.k.group(q).elements(), repeat=p))

    def hface(self, p, q, x, i):
        if i == 0:
            return x[1:]
        if i == p:
            return x[:-1]
        g = self.k.group(q)
        return x[: i - 1] + (g.mul(x[i - 1], x[i]),) + x[i + 1 :]

    def hdeg(self, p, q, x, i):
        return x[:i] + (0,) + x[i:]

    def vface(self, p, q, x, j):
        if self.vertically_constant:
            return x
        return tuple(self.k.face(q, j, g) for g in x)

    def vdeg(self, p, q, x, j):
        if self.vertically_constant:
            return x
        return tuple(self.k.degeneracy(q, j, g) for g in x)

    def vact(self, p, theta, x):
        if self.vertically_constant:
            return x
        return super().vact(p, theta, x)


class TauNerveBisimplicial(NerveBisimplicial):
    """Sub-bisimplicial set of admissible tuples for a quotient-type functor."""

    def __init__(self, tau: TauDescriptor, k: FiniteSimplicialGroup):
        super().__init__(k)
        self.name = f"N({tau.label()},{getattr(k, 'name', 'K')})"
        self.tau = tau
        self._cache = {}

    def member(self, p, q, x):
        key = (q, x) if not self.vertically_constant else x
        if key not in self._cache:
            self._cache[key] = tuple_admissible(self.tau, self.k.group(q), x)
        return self._cache[key]

    def _build_level(self, p, q):
        return [x for x in super()._build_level(p, q) if self.member(p, q, x)]


# -- condensations ----------------------------------------------------------------


class Diagonal(SimplicialSet):
    def __init__(self, b: BisimplicialSet):
        super().__init__(name=f"d{b.name}")
        self.b = b

    def _build_level(self, n):
        return self.b.level(n, n)

    def iter_level(self, n):
        return self.b.iter_level(n, n)

    def face(self, n, x, i):
        return self.b.vface(n - 1, n, self.b.hface(n, n, x, i), i)

    def degeneracy(self, n, x, i):
        return self.b.vdeg(n + 1, n, self.b.hdeg(n, n, x, i), i)


class TotalComplex(SimplicialSet):
    """Matched tuples (x_0, ..., x_n) with x_i in bidegree (i, n-i).

    The matching condition is that the zeroth vertical face of each entry
    equals the top horizontal face of the next.
    """

    def __init__(self, b: BisimplicialSet):
        super().__init__(name=f"T{b.name}")
        self.b = b

    def _build_level(self, n):
        b = self.b
        partial = [(x,) for x in b.iter_level(0, n)]
        for i in range(n):
            buckets = {}
            for y in b.iter_level(i + 1, n - i - 1):
                buckets.setdefault(b.hface(i + 1, n - i - 1, y, i + 1), []).append(y)
            partial = [
                tup + (y,)
                for tup in partial
                for y in buckets.get(b.vface(i, n - i, tup[-1], 0), [])
            ]
        return partial

    def face(self, n, tpl, i):
        b = self.b
        out = []
        for j in range(i):
            out.append(b.vface(j, n - j, tpl[j], i - j))
        for j in range(i, n):
            out.append(b.hface(j + 1, n - j - 1, tpl[j + 1], i))
        return tuple(out)

    def degeneracy(self, n, tpl, i):
        b = self.b
        out = []
        for j in range(i + 1):
            out.append(b.vdeg(j, n - j, tpl[j], i - j))
        for j in range(i + 1, n + 2):
            out.append(b.hdeg(j - 1, n - j + 1, tpl[j - 1], i))
        return tuple(out)


# -- the fat resolution ------------------------------------------------------------


def chain_face(objs, maps, j):
    q = len(objs) - 1
    if j == 0:
        return objs[1:], maps[1:]
    if j == q:
        return objs[:-1], maps[:-1]
    new_maps = maps[: j - 1] + (compose(maps[j - 1], maps[j]),) + maps[j + 1 :]
    return objs[:j] + objs[j + 1 :], new_maps


def chain_degeneracy(objs, maps, j):
    ident = identity_map(objs[j])
    return (
        objs[: j + 1] + objs[j:],
        maps[:j] + (ident,) + maps[j:],
    )


def iter_chains(length, cap):
    """All chains [n_0] -> ... -> [n_length] with every n_i <= cap."""
    for objs in product(range(cap + 1), repeat=length + 1):
        pools = [enumerate_maps(objs[i], objs[i + 1]) for i in range(length)]
        for maps in product(*pools):
            yield objs, maps


def chain_count(length, cap):
    total = 0
    for objs in product(range(cap + 1), repeat=length + 1):
        n = 1
        for i in range(length):
            n *= len(enumerate_maps(objs[i], objs[i + 1]))
        total += n
    return total


class FatResolution(BisimplicialSet):
    """Pairs of an ordinal chain and a simplex of the base over its last object.

    The (p, q)-simplices are pairs (sigma, x) of a q-chain of ordinal maps
    with objects bounded by the cap and an (p, n_q)-simplex x of the base.
    The last vertical face pulls x back along the last map of the chain.
    """

    def __init__(self, base: BisimplicialSet, cap: int):
        super().__init__(name=f"Psi({base.name};{cap})")
        self.base = base
        self.cap = cap

    def _check(self, objs):
        if any(n > self.cap for n in objs):
            raise CapExceeded(f"chain objects {objs} exceed the cap {self.cap}")

    def _build_level(self, p, q):
        return list(self.iter_level(p, q))

    def iter_level(self, p, q):
        for objs, maps in iter_chains(q, self.cap):
            for x in self.base.iter_level(p, objs[-1]):
                yield ((objs, maps), x)

    def hface(self, p, q, el, i):
        (objs, maps), x = el
        return ((objs, maps), self.base.hface(p, objs[-1], x, i))

    def hdeg(self, p, q, el, i):
        (objs, maps), x = el
        return ((objs, maps), self.base.hdeg(p, objs[-1], x, i))

    def vface(self, p, q, el, j):
        (objs, maps), x = el
        if j < q:
            return (chain_face(objs, maps, j), x)
        return (chain_face(objs, maps, q), self.base.vact(p, maps[-1], x))

    def vdeg(self, p, q, el, j):
        (objs, maps), x = el
        return (chain_degeneracy(objs, maps, j), x)


def last_vertex_map(objs, maps) -> OrdinalMap:
    """[l] -> [n_l] sending i to the image of the top of [n_i] down the chain."""
    l = len(objs) - 1
    values = []
    for i in range(l + 1):
        v = objs[i]
        for t in range(i, l):
            v = maps[t].values[v]
        values.append(v)
    return OrdinalMap(tuple(values), objs[-1] + 1)


def bousfield_kan_map(base: BisimplicialSet, cap: int) -> SimplicialMap:
    """Fat-resolution comparison: pull the simplex back along the last-vertex map."""
    psi = FatResolution(base, cap)

    def fn(l, el):
        (objs, maps), x = el
        mu = last_vertex_map(objs, maps)
        return base.vact(l, mu, x)

    return SimplicialMap(Diagonal(psi), Diagonal(base), fn, name="bousfield-kan")


def cegarra_remedios_map(b: BisimplicialSet) -> SimplicialMap:
    """Diagonal-to-total comparison via iterated extreme faces."""

    def fn(l, x):
        out = []
        for i in range(l + 1):
            y = x
            q = l
            for _ in range(i):
                y = b.vface(l, q, y, 0)
                q -= 1
            p = l
            for _ in range(l - i):
                y = b.hface(p, q, y, i + 1)
                p -= 1
            out.append(y)
        return tuple(out)

    return SimplicialMap(Diagonal(b), TotalComplex(b), fn, name="cegarra-remedios")


# -- bar construction versus the total nerve ----------------------------------------


def bar_to_total_nerve(k_group, nerve=None) -> SimplicialMap:
    """The identification of the bar construction with the total nerve."""
    nerve = nerve or NerveBisimplicial(k_group)
    w = BarConstruction(k_group)

    def fn(n, tpl):
        out = [()]
        for i in range(1, n + 1):
            entries = []
            for j in range(1, i + 1):
                g = tpl[j - 1]
                lvl = n - j
                for _ in range(i - j):
                    g = k_group.face(lvl, 0, g)
                    lvl -= 1
                entries.append(g)
            out.append(tuple(entries))
        return tuple(out)

    return SimplicialMap(w, TotalComplex(nerve), fn, name="bar-to-total-nerve")


def total_nerve_to_bar(k_group, nerve=None) -> SimplicialMap:
    nerve = nerve or NerveBisimplicial(k_group)
    w = BarConstruction(k_group)

    def fn(n, tpl):
        return tuple(tpl[i][-1] for i in range(1, n + 1))

    return SimplicialMap(TotalComplex(nerve), w, fn, name="total-nerve-to-bar")


# -- the nerve of the Grothendieck construction --------------------------------------


class GrothendieckNerve(SimplicialSet):
    """Nerve of the category of ordinals with morphisms (theta, k).

    An l-simplex is a chain of l composable morphisms, stored as the object
    tuple, the ordinal maps, and the group elements (the element of the i-th
    arrow lives in level objs[i]).  Ordinals are bounded by the cap.
    """

    def __init__(self, k: FiniteSimplicialGroup, cap: int):
        super().__init__(name=f"NInt({getattr(k, 'name', 'K')};{cap})")
        self.k = k
        self.cap = cap

    def _build_level(self, n):
        return list(self.iter_level(n))

    def iter_level(self, n):
        for objs, maps in iter_chains(n, self.cap):
            pools = [self.k.group(objs[i]).elements() for i in range(n)]
            for elems in product(*pools):
                yield (objs, maps, elems)

    def face(self, n, ch, i):
        objs, maps, elems = ch
        if i == 0:
            return (objs[1:], maps[1:], elems[1:])
        if i == n:
            return (objs[:-1], maps[:-1], elems[:-1])
        composed_map = compose(maps[i - 1], maps[i])
        pulled = self.k.act(maps[i - 1], elems[i])
        merged = self.k.group(objs[i - 1]).mul(elems[i - 1], pulled)
        return (
            objs[:i] + objs[i + 1 :],
            maps[: i - 1] + (composed_map,) + maps[i + 1 :],
            elems[: i - 1] + (merged,) + elems[i + 1 :],
        )

    def degeneracy(self, n, ch, i):
        objs, maps, elems = ch
        return (
            objs[: i + 1] + objs[i:],
            maps[:i] + (identity_map(objs[i]),) + maps[i:],
            elems[:i] + (0,) + elems[i:],
        )


def grothendieck_membership(tau: TauDescriptor, k_group, ch) -> bool:
    """Admissibility of every pulled-back suffix tuple of a nerve chain."""
    objs, maps, elems = ch
    n = len(elems)
    for start in range(n):
        entries = []
        running = identity_map(objs[start])
        for t in range(start, n):
            entries.append(k_group.act(running, elems[t]))
            if t < n - 1:
                running = compose(running, maps[t])
        if not tuple_admissible(tau, k_group.group(objs[start]), entries):
            return False
    return True


class TauGrothendieckNerve(GrothendieckNerve):
    """Sub-simplicial set of chains all of whose suffix tuples are admissible."""

    def __init__(self, tau: TauDescriptor, k: FiniteSimplicialGroup, cap: int):
        super().__init__(k, cap)
        self.name = f"NInt({tau.label()},{getattr(k, 'name', 'K')};{cap})"
        self.tau = tau

    def member(self, ch):
        return grothendieck_membership(self.tau, self.k, ch)

    def iter_level(self, n):
        return (ch for ch in super().iter_level(n) if self.member(ch))


# -- the total-resolution description of the Grothendieck nerve ----------------------


def category_nerve_to_total(k_group, cap, nerve=None) -> SimplicialMap:
    """Chains go to matched tuples of chain prefixes with pulled-back suffixes."""
    base = nerve or NerveBisimplicial(k_group)
    psi_t = Transpose(FatResolution(base, cap))

    def fn(l, ch):
        objs, maps, elems = ch
        out = []
        for i in range(l + 1):
            entries = []
            running = identity_map(objs[i])
            for t in range(i, l):
                entries.append(k_group.act(running, elems[t]))
                if t < l - 1:
                    running = compose(running, maps[t])
            out.append(((objs[: i + 1], maps[:i]), tuple(entries)))
        return tuple(out)

    return SimplicialMap(
        GrothendieckNerve(k_group, cap),
        TotalComplex(psi_t),
        fn,
        name="category-nerve-to-total",
    )


def total_to_category_nerve(k_group, cap, nerve=None) -> SimplicialMap:
    base = nerve or NerveBisimplicial(k_group)
    psi_t = Transpose(FatResolution(base, cap))

    def fn(l, tpl):
        objs, maps = tpl[l][0]
        elems = tuple(tpl[i][1][0] for i in range(l))
        return (objs, maps, elems)

    return SimplicialMap(
        TotalComplex(psi_t),
        GrothendieckNerve(k_group, cap),
        fn,
        name="total-to-category-nerve",
    )


def verify_category_nerve_iso(k_group, cap, degree_max, tau=None):
    """Roundtrips of the nerve/total identification, optionally with membership.

    With a tau descriptor, also checks that a chain is admissible exactly when
    every component tuple of its image is admissible.
    """
    fwd = category_nerve_to_total(k_group, cap)
    bwd = total_to_category_nerve(k_group, cap)
    nerve_dom = fwd.domain
    total_cod = fwd.codomain
    for l in range(degree_max + 1):
        for ch in nerve_dom.iter_level(l):
            t = fwd(l, ch)
            if bwd(l, t) != ch:
                raise VerificationFailure(
                    "nerve/total roundtrip fails", witness=(l, ch)
                )
            if tau is not None:
                member_chain = grothendieck_membership(tau, k_group, ch)
                member_total = all(
                    tuple_admissible(
                        tau, k_group.group(comp[0][0][-1]), comp[1]
                    )
                    for comp in t
                )
                if member_chain != member_total:
                    raise VerificationFailure(
                        "membership not preserved by the nerve/total identification",
                        witness=(l, ch),
                    )
        for t in total_cod.iter_level(l):
            if fwd(l, bwd(l, t)) != t:
                raise VerificationFailure(
                    "total/nerve roundtrip fails", witness=(l, t)
                )
    return True


# -- zigzag assembly -----------------------------------------------------------------


def comparison_maps(tau, k_group, cap):
    """The three comparison maps for the admissible nerve, ready to verify.

    Returns (CR on the resolution, BK, CR into the total nerve followed by
    the bar identification).
    """
    if tau is None or tau.variant == "free":
        nerve = NerveBisimplicial(k_group)
        w = BarConstruction(k_group)
    else:
        nerve = TauNerveBisimplicial(tau, k_group)
        w = TauBarConstruction(tau, k_group)
    psi = FatResolution(nerve, cap)
    psi_t = Transpose(psi)

    cr_resolution = cegarra_remedios_map(psi_t)
    bk = bousfield_kan_map(nerve, cap)

    cr_nerve = cegarra_remedios_map(nerve)

    def to_bar(l, x):
        tpl = cr_nerve(l, x)
        return tuple(tpl[i][-1] for i in range(1, l + 1))

    cr_bar = SimplicialMap(Diagonal(nerve), w, to_bar, name="diagonal-to-bar")
    return cr_resolution, bk, cr_bar
