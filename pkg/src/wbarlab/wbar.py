"""The bar construction of a simplicial group and its admissibility subcomplexes.

A k-simplex of the bar construction of K is a tuple ``(x_{k-1}, ..., x_0)``
with ``x_i`` in ``K_i``, stored here with ``tpl[t] = x_{k-1-t}``.  The
structure maps are implemented once, generically over a levelwise-group API,
so the same formulas serve finite oracles (elements are indices) and
symbolic free-level groups (elements are words).

The admissibility subcomplex for a quotient-type functor keeps the tuples
whose generator-image homomorphisms out of free groups factor through the
quotient: for each ``1 <= l <= k`` the tuple of iterated zeroth faces
``((d_0)^{l-1} x_{k-1}, ..., d_0 x_{k-l+1}, x_{k-l})`` must be admissible in
level ``k - l``.
"""

from __future__ import annotations

from itertools import product

from .errors import FactorizationFailure, VerificationFailure
from .groups import TauDescriptor, tuple_admissible, word_inv, word_mul
from .ordinal import OrdinalMap
from .simplicial import BASEPOINT, KanSuspension, SimplicialMap, SimplicialSet
from .simplicial_groups import (
    FiniteSimplicialGroup,
    FreeLevelGroup,
    LoopGroup,
    MilnorFK,
    Pi1DecSimplex,
    UnderlyingPointedSet,
)


# -- generic bar-construction formulas -----------------------------------------


def bar_face(api, k, tpl, i):
    """d_i on a k-simplex (x_{k-1}, ..., x_0); api supplies levelwise group ops."""
    if i == 0:
        return tpl[1:]
    if i == k:
        return tuple(api.face(k - 1 - t, k - 1 - t, tpl[t]) for t in range(k - 1))
    out = []
    for t in range(i - 1):
        out.append(api.face(k - 1 - t, i - 1 - t, tpl[t]))
    merged = api.mul(k - 1 - i, api.face(k - i, 0, tpl[i - 1]), tpl[i])
    out.append(merged)
    out.extend(tpl[i + 1 :])
    return tuple(out)


def bar_degeneracy(api, k, tpl, i):
    """s_i on a k-simplex, inserting an identity in level k - i."""
    out = []
    for t in range(i):
        out.append(api.degeneracy(k - 1 - t, i - 1 - t, tpl[t]))
    out.append(api.identity(k - i))
    out.extend(tpl[i:])
    return tuple(out)


class WordGroupAPI:
    """Levelwise-group view of a symbolic free-level simplicial group."""

    def __init__(self, flg: FreeLevelGroup):
        self.flg = flg

    def mul(self, n, a, b):
        return word_mul(a, b)

    def identity(self, n):
        return ()

    def face(self, n, i, w):
        return self.flg.face_of_word(n, i, w)

    def degeneracy(self, n, i, w):
        return self.flg.degeneracy_of_word(n, i, w)


class BarConstruction(SimplicialSet):
    """The classifying simplicial set of a finite simplicial group.

    Level k is the full product ``K_{k-1} x ... x K_0``, ordered
    lexicographically by element indices.
    """

    def __init__(self, k: FiniteSimplicialGroup):
        super().__init__(name=f"Wbar({getattr(k, 'name', 'K')})")
        self.k = k

    def _build_level(self, n):
        ranges = [range(self.k.group(n - 1 - t).order) for t in range(n)]
        return list(product(*ranges))

    def face(self, n, tpl, i):
        return bar_face(self.k, n, tpl, i)

    def degeneracy(self, n, tpl, i):
        return bar_degeneracy(self.k, n, tpl, i)

    def basepoint(self, n):
        return tuple(0 for _ in range(n))


def admissibility_tuples(k_group: FiniteSimplicialGroup, k, tpl):
    """The generator-image tuples whose admissibility cuts out the subcomplex.

    Yields (level, tuple) for l = 1..k: entry j of the l-th tuple is
    ``(d_0)^{l-j} x_{k-j}``, all living in level k - l.
    """
    for l in range(1, k + 1):
        entries = []
        for j in range(1, l + 1):
            g = tpl[j - 1]
            lvl = k - j
            for _ in range(l - j):
                g = k_group.face(lvl, 0, g)
                lvl -= 1
            entries.append(g)
        yield k - l, tuple(entries)


class TauBarConstruction(BarConstruction):
    """The subcomplex of admissible tuples for a quotient-type functor."""

    def __init__(self, tau: TauDescriptor, k: FiniteSimplicialGroup):
        super().__init__(k)
        self.name = f"Wbar({tau.label()},{getattr(k, 'name', 'K')})"
        self.tau = tau
        self._member_cache: dict = {}

    def member(self, k, tpl):
        key = (k, tpl)
        if key not in self._member_cache:
            self._member_cache[key] = all(
                tuple_admissible(self.tau, self.k.group(lvl), entries)
                for lvl, entries in admissibility_tuples(self.k, k, tpl)
            )
        return self._member_cache[key]

    def _build_level(self, n):
        return [tpl for tpl in super()._build_level(n) if self.member(n, tpl)]


def bar_tau_membership(tau, k_group, tpl) -> bool:
    """Membership of a bar tuple in the tau-subcomplex."""
    k = len(tpl)
    return all(
        tuple_admissible(tau, k_group.group(lvl), entries)
        for lvl, entries in admissibility_tuples(k_group, k, tpl)
    )


def verify_subcomplex_closure(tau, k_group, max_degree):
    """Every face and degeneracy of a member is a member."""
    w = TauBarConstruction(tau, k_group)
    for n in range(max_degree + 1):
        for tpl in w.level(n):
            for i in range(n + 1):
                if n >= 1:
                    f = w.face(n, tpl, i)
                    if not w.member(n - 1, f):
                        raise VerificationFailure(
                            f"face d_{i} leaves the subcomplex at level {n}",
                            witness=(tau.label(), n, i, tpl),
                        )
                s = w.degeneracy(n, tpl, i)
                if not w.member(n + 1, s):
                    raise VerificationFailure(
                        f"degeneracy s_{i} leaves the subcomplex at level {n}",
                        witness=(tau.label(), n, i, tpl),
                    )
    return True


# -- the total object of the universal bundle -----------------------------------


class TotalBarConstruction(SimplicialSet):
    """Index shift of the bar construction carrying the free group action.

    Level n is the (n+1)-st bar level, faces and degeneracies are shifted by
    one, the projection is the dropped zeroth face, and the group acts on the
    top coordinate.
    """

    def __init__(self, k: FiniteSimplicialGroup):
        super().__init__(name=f"W({getattr(k, 'name', 'K')})")
        self.k = k
        self.base = BarConstruction(k)

    def _build_level(self, n):
        return self.base.level(n + 1)

    def face(self, n, tpl, i):
        return bar_face(self.k, n + 1, tpl, i + 1)

    def degeneracy(self, n, tpl, i):
        return bar_degeneracy(self.k, n + 1, tpl, i + 1)

    def projection(self, n, tpl):
        return tpl[1:]

    def action(self, n, g, tpl):
        return (self.k.group(n).mul(g, tpl[0]),) + tpl[1:]


# -- the tuple description of simplicial group homomorphisms --------------------


class BarTupleHom:
    """The simplicial-group hom out of pi1dec(k) encoded by a bar tuple."""

    def __init__(self, k_group: FiniteSimplicialGroup, k: int, tpl):
        if len(tpl) != k:
            raise ValueError("tuple length must equal the simplex degree")
        self.k_group = k_group
        self.k = k
        self.tpl = tpl
        self.pi1 = Pi1DecSimplex(k)

    def evaluate_key(self, n, key):
        """Image in K_n of the generator (phi, e_j)."""
        phi, j = key
        m = phi[0]
        g = self.tpl[j - 1]
        lvl = self.k - j
        for _ in range(m - j):
            g = self.k_group.face(lvl, 0, g)
            lvl -= 1
        phi_hat = OrdinalMap(tuple(v - m for v in phi), self.k - m + 1)
        return self.k_group.act(phi_hat, g)

    def evaluate_word(self, n, word):
        g = self.k_group.group(n)
        r = 0
        for key, exp in word:
            r = g.mul(r, g.power(self.evaluate_key(n, key), exp))
        return r

    def encode(self):
        """Recover the tuple: entry l-1 is the value at ((d^0)^l, e_l)."""
        out = []
        for l in range(1, self.k + 1):
            phi = tuple(range(l, self.k + 1))
            out.append(self.evaluate_key(self.k - l, (phi, l)))
        return tuple(out)

    def verify_homomorphism(self, n_max):
        """The generator assignment commutes with faces and degeneracies."""
        for n in range(n_max + 1):
            for key in self.pi1.generators(n):
                val = self.evaluate_key(n, key)
                for i in range(n + 1):
                    if n >= 1:
                        lhs = self.evaluate_word(
                            n - 1, self.pi1.face_of_generator(n, i, key)
                        )
                        rhs = self.k_group.face(n, i, val)
                        if lhs != rhs:
                            raise VerificationFailure(
                                f"decoded hom fails d_{i} at level {n}",
                                witness=(n, i, key),
                            )
                    lhs = self.evaluate_word(
                        n + 1, self.pi1.degeneracy_of_generator(n, i, key)
                    )
                    rhs = self.k_group.degeneracy(n, i, val)
                    if lhs != rhs:
                        raise VerificationFailure(
                            f"decoded hom fails s_{i} at level {n}",
                            witness=(n, i, key),
                        )
        return True


def decode_hom(k_group, k, tpl) -> BarTupleHom:
    return BarTupleHom(k_group, k, tpl)


def encode_hom(hom: BarTupleHom):
    return hom.encode()


def restrict_hom_along(hom: BarTupleHom, alpha: OrdinalMap) -> tuple:
    """The tuple of the hom precomposed with the map induced by alpha : [l] -> [k].

    The coface and codegeneracy cases reproduce the bar-construction structure
    maps on tuples.
    """
    l = alpha.source
    out = []
    for m in range(1, l + 1):
        phi = tuple(range(m, l + 1))
        key = (phi, m)
        word = hom.pi1.cosimplicial_act(alpha, key)
        # cosimplicial_act produces a word over pi1dec(k) generators at level l - m
        out.append(hom.evaluate_word(l - m, word))
    return tuple(out)


# -- suspension comparison map ---------------------------------------------------


def kappa(k_group: FiniteSimplicialGroup) -> SimplicialMap:
    """Inclusion of the suspension wedge into the bar-construction product."""
    sigma = KanSuspension(UnderlyingPointedSet(k_group))
    w = BarConstruction(k_group)

    def fn(n, el):
        tpl = [k_group.identity(n - 1 - t) for t in range(n)]
        if el != BASEPOINT:
            c, x = el
            tpl[c - 1] = x
        return tuple(tpl)

    return SimplicialMap(sigma, w, fn, name="kappa")


def kappa_tau(tau: TauDescriptor, k_group: FiniteSimplicialGroup) -> SimplicialMap:
    """The factorization of the wedge inclusion through the tau-subcomplex.

    Raises :class:`FactorizationFailure` on the first image simplex that is
    not admissible (possible only for the mod-p^k abelianization variant,
    where rank-one admissibility is a torsion condition).
    """
    base = kappa(k_group)
    w_tau = TauBarConstruction(tau, k_group)

    def fn(n, el):
        tpl = base(n, el)
        if not w_tau.member(n, tpl):
            raise FactorizationFailure(
                f"suspension simplex {el!r} maps outside the {tau.label()} subcomplex"
            )
        return tpl

    return SimplicialMap(base.domain, w_tau, fn, name=f"kappa_{tau.label()}")


# -- descending central series filtration ----------------------------------------


def filtration_level_counts(k_group, q_values, k_max):
    """Level sizes of the lower-central-series subcomplexes, per q."""
    counts = {}
    for q in q_values:
        w = TauBarConstruction(TauDescriptor("gamma", q=q), k_group)
        counts[q] = [w.level_count(k) for k in range(k_max + 1)]
    return counts


def verify_filtration_inclusions(k_group, q_max, k_max):
    """Levelwise subset inclusions along increasing q, ending in the full bar."""
    previous = None
    for q in range(2, q_max + 1):
        w = TauBarConstruction(TauDescriptor("gamma", q=q), k_group)
        levels = [set(w.level(k)) for k in range(k_max + 1)]
        if previous is not None:
            for k in range(k_max + 1):
                if not previous[k] <= levels[k]:
                    raise VerificationFailure(
                        f"filtration not monotone at q={q}, level {k}",
                        witness=(q, k),
                    )
        previous = levels
    full = BarConstruction(k_group)
    for k in range(k_max + 1):
        if not previous[k] <= set(full.level(k)):
            raise VerificationFailure(
                f"filtration top not inside the full bar construction at level {k}",
                witness=(k,),
            )
    return True


# -- unit, counit, and the suspension splitting ----------------------------------


class SymbolicBar:
    """Face/degeneracy evaluation on tuples of words, for unit verification."""

    def __init__(self, flg: FreeLevelGroup):
        self.api = WordGroupAPI(flg)

    def face(self, n, tpl, i):
        return bar_face(self.api, n, tpl, i)

    def degeneracy(self, n, tpl, i):
        return bar_degeneracy(self.api, n, tpl, i)


def unit_map(x: SimplicialSet, top_degree=None) -> SimplicialMap:
    """The unit x |-> ([x], [d_0 x], ..., [(d_0)^{n-1} x]) into the symbolic bar."""
    loop = LoopGroup(x, top_degree=top_degree)
    codomain = SymbolicBar(loop)

    def fn(n, el):
        out = []
        cur = el
        for t in range(n):
            out.append(loop._collapse(n - 1 - t, cur))
            cur = x.face(n - t, cur, 0)
        return tuple(out)

    return SimplicialMap(x, codomain, fn, name="unit")


def counit_value(k_group, n, w):
    """Counit on a loop-group generator of the bar construction: top coordinate."""
    return w[0]


def counit_of_word(k_group, n, word):
    g = k_group.group(n)
    r = 0
    for w, exp in word:
        r = g.mul(r, g.power(counit_value(k_group, n, w), exp))
    return r


def verify_counit(k_group, n_max):
    """The counit is a simplicial group homomorphism on generators."""
    w = BarConstruction(k_group)
    loop = LoopGroup(w, top_degree=None)
    for n in range(n_max + 1):
        for gen in loop.generators(n):
            val = counit_value(k_group, n, gen)
            for i in range(n + 1):
                if n >= 1:
                    lhs = counit_of_word(
                        k_group, n - 1, loop.face_of_generator(n, i, gen)
                    )
                    rhs = k_group.face(n, i, val)
                    if lhs != rhs:
                        raise VerificationFailure(
                            f"counit fails d_{i} at level {n}", witness=(n, i, gen)
                        )
                lhs = counit_of_word(
                    k_group, n + 1, loop.degeneracy_of_generator(n, i, gen)
                )
                rhs = k_group.degeneracy(n, i, val)
                if lhs != rhs:
                    raise VerificationFailure(
                        f"counit fails s_{i} at level {n}", witness=(n, i, gen)
                    )
    return True


def verify_triangle_identity(k_group, k_max):
    """Applying the counit levelwise to the unit of the bar returns the simplex."""
    w = BarConstruction(k_group)
    eta = unit_map(w)
    for k in range(k_max + 1):
        for tpl in w.level(k):
            words = eta(k, tpl)
            recovered = tuple(
                counit_of_word(k_group, k - 1 - t, words[t]) for t in range(k)
            )
            if recovered != tpl:
                raise VerificationFailure(
                    f"triangle identity fails at level {k}", witness=(k, tpl)
                )
    return True


def verify_splitting_composite(tau: TauDescriptor, k_group, n_max):
    """The five-map composite through the suspension is the identity on K.

    K -> FK -> G(suspension) -> G(tau-bar) -> G(bar) -> K, evaluated on every
    element of K_n for n <= n_max.  The middle step checks that every letter
    of the image word is admissible.
    """
    w_tau = TauBarConstruction(tau, k_group)
    kap = kappa(k_group)
    fk = MilnorFK(k_group)

    for n in range(n_max + 1):
        for x in k_group.group(n).elements():
            # K -> FK -> G(suspension): x becomes the first-summand generator
            word = fk._collapse(x)
            susp_word = tuple(((1, key), exp) for key, exp in word)
            # G(kappa_tau): apply kappa letterwise, checking admissibility
            bar_word = []
            for el, exp in susp_word:
                img = kap(n + 1, el)
                if not w_tau.member(n + 1, img):
                    raise FactorizationFailure(
                        f"suspension letter {el!r} maps outside {tau.label()}"
                    )
                bar_word.append((img, exp))
            # counit back to K
            got = counit_of_word(k_group, n, tuple(bar_word))
            if got != x:
                raise VerificationFailure(
                    f"splitting composite is not the identity at level {n}",
                    witness=(n, x, got),
                )
    return True
