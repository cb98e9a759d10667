"""Simplicial groups: finite levelwise oracles and symbolic free-level ones.

Finite oracles expose each level as a :class:`~wbarlab.groups.FiniteGroup`
with face and degeneracy homomorphisms between levels.  The loop group of a
simplicial set and the levelwise fundamental group of the shifted standard
simplex have free infinite levels; those are handled symbolically, as
reduced words over generator keys, and all identities about them are checked
as word identities.
"""

from __future__ import annotations

from .errors import InsufficientTruncation, VerificationFailure
from .groups import (
    FiniteGroup,
    FpPresentation,
    generator,
    word_inv,
    word_mul,
    word_reduce,
)
from .ordinal import (
    OrdinalMap,
    degeneracy_word,
    enumerate_maps,
    epi_mono_factor,
    face_word,
)
from .simplicial import SimplicialSet, StandardSimplex


class FiniteSimplicialGroup:
    """Levelwise finite groups with homomorphic structure maps."""

    def group(self, n) -> FiniteGroup:
        raise NotImplementedError

    def face(self, n, i, g):
        """d_i : K_n -> K_{n-1} on the element g."""
        raise NotImplementedError

    def degeneracy(self, n, i, g):
        raise NotImplementedError

    def identity(self, n):
        return 0

    def mul(self, n, a, b):
        return self.group(n).mul(a, b)

    def inv(self, n, a):
        return self.group(n).inv(a)

    def act(self, theta: OrdinalMap, g):
        """K(theta) : K_n -> K_m for theta : [m] -> [n]."""
        epi, mono = epi_mono_factor(theta)
        n = theta.target
        for i in face_word(mono):
            g = self.face(n, i, g)
            n -= 1
        for j in degeneracy_word(epi):
            g = self.degeneracy(n, j, g)
            n += 1
        return g

    def check_structure(self, max_degree):
        """Structure maps are homomorphisms satisfying the identities."""
        for n in range(max_degree + 1):
            gn = self.group(n)
            for i in range(n + 1):
                gm = self.group(n + 1)
                for a in gn.elements():
                    for b in gn.elements():
                        if n >= 1 and i <= n:
                            lhs = self.face(n, i, gn.mul(a, b))
                            rhs = self.group(n - 1).mul(
                                self.face(n, i, a), self.face(n, i, b)
                            )
                            if lhs != rhs:
                                raise VerificationFailure(
                                    f"d_{i} not a homomorphism at level {n}",
                                    witness=(n, i, a, b),
                                )
                        lhs = self.degeneracy(n, i, gn.mul(a, b))
                        rhs = gm.mul(self.degeneracy(n, i, a), self.degeneracy(n, i, b))
                        if lhs != rhs:
                            raise VerificationFailure(
                                f"s_{i} not a homomorphism at level {n}",
                                witness=(n, i, a, b),
                            )
        return True


class DiscreteSimplicialGroup(FiniteSimplicialGroup):
    """A group G in every level, all structure maps the identity."""

    def __init__(self, g: FiniteGroup):
        self.base = g
        self.name = f"disc({g.name})"

    def group(self, n):
        return self.base

    def face(self, n, i, g):
        return g

    def degeneracy(self, n, i, g):
        return g

    def act(self, theta, g):
        return g


class AbelianNerveGroup(FiniteSimplicialGroup):
    """The nerve of an abelian group as a simplicial group: level n is G^n."""

    def __init__(self, g: FiniteGroup):
        if not g.is_abelian():
            raise ValueError("the nerve is a simplicial group only for abelian G")
        self.base = g
        self.name = f"N({g.name})"
        self._groups: dict[int, FiniteGroup] = {}

    def _encode(self, tpl):
        idx = 0
        for x in tpl:
            idx = idx * self.base.order + x
        return idx

    def _decode(self, n, idx):
        out = []
        for _ in range(n):
            idx, r = divmod(idx, self.base.order)
            out.append(r)
        return tuple(reversed(out))

    def group(self, n):
        if n not in self._groups:
            g = self.base
            size = g.order**n
            table = []
            for a in range(size):
                ta = self._decode(n, a)
                row = []
                for b in range(size):
                    tb = self._decode(n, b)
                    row.append(self._encode(tuple(g.mul(x, y) for x, y in zip(ta, tb))))
                table.append(row)
            self._groups[n] = FiniteGroup(table, name=f"{g.name}^{n}", check=False)
        return self._groups[n]

    def face(self, n, i, g):
        t = self._decode(n, g)
        if i == 0:
            return self._encode(t[1:])
        if i == n:
            return self._encode(t[:-1])
        merged = self.base.mul(t[i - 1], t[i])
        return self._encode(t[: i - 1] + (merged,) + t[i + 1 :])

    def degeneracy(self, n, i, g):
        t = self._decode(n, g)
        return self._encode(t[:i] + (0,) + t[i:])


class UnderlyingPointedSet(SimplicialSet):
    """The underlying simplicial set of a finite simplicial group.

    Elements of level n are the element indices of K_n; the basepoint is the
    identity.
    """

    def __init__(self, k: FiniteSimplicialGroup):
        super().__init__(name=getattr(k, "name", "K"))
        self.k = k

    def _build_level(self, n):
        return list(self.k.group(n).elements())

    def face(self, n, x, i):
        return self.k.face(n, i, x)

    def degeneracy(self, n, x, i):
        return self.k.degeneracy(n, i, x)

    def act(self, theta, x):
        return self.k.act(theta, x)

    def basepoint(self, n):
        return 0


# -- symbolic free-level simplicial groups -------------------------------------


class FreeLevelGroup:
    """A simplicial group whose levels are free on explicit generator keys.

    Structure maps send generators to reduced words; words over level n are
    tuples of (key, exponent) pairs.
    """

    def generators(self, n):
        raise NotImplementedError

    def face_of_generator(self, n, i, key):
        raise NotImplementedError

    def degeneracy_of_generator(self, n, i, key):
        raise NotImplementedError

    def face_of_word(self, n, i, word):
        return self._map_word(word, lambda key: self.face_of_generator(n, i, key))

    def degeneracy_of_word(self, n, i, word):
        return self._map_word(
            word, lambda key: self.degeneracy_of_generator(n, i, key)
        )

    @staticmethod
    def _map_word(word, image):
        out = []
        for key, exp in word:
            img = image(key)
            piece = img if exp > 0 else word_inv(img)
            for _ in range(abs(exp)):
                out.extend(piece)
        return word_reduce(out)

    def rank(self, n):
        return len(self.generators(n))


class LoopGroup(FreeLevelGroup):
    """Kan's loop group of a simplicial set, level n free on X_{n+1} - s_0 X_n.

    ``d_0[x] = [d_1 x][d_0 x]^{-1}``, ``d_i[x] = [d_{i+1} x]`` for i > 0 and
    ``s_j[x] = [s_{j+1} x]``, with s_0-degenerate simplices collapsing to 1.
    """

    def __init__(self, x: SimplicialSet, top_degree=None):
        self.x = x
        self.top_degree = (
            top_degree
            if top_degree is not None
            else getattr(x, "truncation", None)
        )
        self.name = f"G({x.name})"

    def _check_level(self, n):
        if self.top_degree is not None and n + 1 > self.top_degree:
            raise InsufficientTruncation(
                f"loop group of {self.x.name} is valid up to level {self.top_degree - 1}"
            )

    def _collapse(self, n, el):
        """Class of an (n+1)-simplex: 1 if s_0-degenerate, else a generator."""
        d0 = self.x.face(n + 1, el, 0)
        if self.x.degeneracy(n, d0, 0) == el:
            return ()
        return generator(el)

    def generators(self, n):
        self._check_level(n)
        return [
            el for el in self.x.level(n + 1) if self._collapse(n, el) != ()
        ]

    def face_of_generator(self, n, i, el):
        if i == 0:
            a = self._collapse(n - 1, self.x.face(n + 1, el, 1))
            b = self._collapse(n - 1, self.x.face(n + 1, el, 0))
            return word_mul(a, word_inv(b))
        return self._collapse(n - 1, self.x.face(n + 1, el, i + 1))

    def degeneracy_of_generator(self, n, i, el):
        return self._collapse(n + 1, self.x.degeneracy(n + 1, el, i + 1))


class Pi1DecSimplex(FreeLevelGroup):
    """Levelwise fundamental group of the shifted standard k-simplex.

    Level n is free on pairs (phi, j) where phi : [n] -> [k] is monotone and
    1 <= j <= phi(0); the key stores phi as its value tuple.
    """

    def __init__(self, k: int):
        self.k = k
        self.name = f"pi1dec({k})"

    def generators(self, n):
        out = []
        for m in enumerate_maps(n, self.k):
            for j in range(1, m.values[0] + 1):
                out.append((m.values, j))
        return out

    def face_of_generator(self, n, i, key):
        phi, j = key
        newphi = tuple(phi[t] for t in range(len(phi)) if t != i)
        return generator((newphi, j))

    def degeneracy_of_generator(self, n, i, key):
        phi, j = key
        newphi = phi[: i + 1] + phi[i:]
        return generator((newphi, j))

    def path_word(self, phi, a, b):
        """The edge from vertex a to vertex b of the phi-summand as a word."""
        return tuple(((phi, t), 1) for t in range(a + 1, b + 1))

    def cosimplicial_act(self, alpha: OrdinalMap, key):
        """Push a generator along alpha : [k] -> [l] between cosimplicial levels."""
        phi, j = key
        newphi = tuple(alpha.values[v] for v in phi)
        return self.path_word(newphi, alpha.values[j - 1], alpha.values[j])


# -- the generator-level isomorphism with the loop group ------------------------


class LoopVsPi1Dec:
    """The mutually inverse word maps between G(Delta[k]) and pi1dec(k).

    Forward: a generator beta : [n+1] -> [k] goes to the edge-path word of
    (beta(0), beta(1)) in the summand indexed by beta restricted along d^0.
    Backward: the generator (phi, e_j) goes to the telescoped difference of
    the simplices (j-1, phi) and (j, phi), the second collapsing to 1 when
    j = phi(0).
    """

    def __init__(self, k: int):
        self.k = k
        self.delta = StandardSimplex(k)
        self.loop = LoopGroup(self.delta, top_degree=None)
        self.pi1 = Pi1DecSimplex(k)

    def forward_of_generator(self, n, beta):
        phi = beta[1:]
        return self.pi1.path_word(phi, beta[0], beta[1])

    def forward_of_word(self, n, word):
        return FreeLevelGroup._map_word(
            word, lambda beta: self.forward_of_generator(n, beta)
        )

    def _simplex_class(self, n, values):
        if values[0] == values[1]:
            return ()
        return generator(values)

    def backward_of_generator(self, n, key):
        phi, j = key
        left = self._simplex_class(n, (j - 1,) + phi)
        right = self._simplex_class(n, (j,) + phi)
        return word_mul(left, word_inv(right))

    def backward_of_word(self, n, word):
        return FreeLevelGroup._map_word(
            word, lambda key: self.backward_of_generator(n, key)
        )

    # -- verification ------------------------------------------------------

    def verify(self, n_max):
        """Roundtrips and structure-map compatibility on all generators.

        Raises :class:`VerificationFailure` naming the offending generator
        and structure map.
        """
        for n in range(n_max + 1):
            loop_gens = self.loop.generators(n)
            pi1_gens = self.pi1.generators(n)
            if len(loop_gens) != len(pi1_gens):
                raise VerificationFailure(
                    f"rank mismatch at level {n}", witness=(n,)
                )
            for beta in loop_gens:
                w = self.forward_of_generator(n, beta)
                back = self.backward_of_word(n, w)
                if back != generator(beta):
                    raise VerificationFailure(
                        f"backward(forward) != id at level {n}",
                        witness=("roundtrip", n, beta),
                    )
            for key in pi1_gens:
                w = self.backward_of_generator(n, key)
                fwd = self.forward_of_word(n, w)
                if fwd != generator(key):
                    raise VerificationFailure(
                        f"forward(backward) != id at level {n}",
                        witness=("roundtrip", n, key),
                    )
            for beta in loop_gens:
                for i in range(n + 1):
                    if n >= 1:
                        lhs = self.forward_of_word(
                            n - 1, self.loop.face_of_generator(n, i, beta)
                        )
                        rhs = self.pi1.face_of_word(
                            n, i, self.forward_of_generator(n, beta)
                        )
                        if lhs != rhs:
                            raise VerificationFailure(
                                f"forward map fails d_{i} at level {n}",
                                witness=("face", n, i, beta),
                            )
                    lhs = self.forward_of_word(
                        n + 1, self.loop.degeneracy_of_generator(n, i, beta)
                    )
                    rhs = self.pi1.degeneracy_of_word(
                        n, i, self.forward_of_generator(n, beta)
                    )
                    if lhs != rhs:
                        raise VerificationFailure(
                            f"forward map fails s_{i} at level {n}",
                            witness=("degeneracy", n, i, beta),
                        )
            for key in pi1_gens:
                for i in range(n + 1):
                    if n >= 1:
                        lhs = self.backward_of_word(
                            n - 1, self.pi1.face_of_generator(n, i, key)
                        )
                        rhs = self.loop.face_of_word(
                            n, i, self.backward_of_generator(n, key)
                        )
                        if lhs != rhs:
                            raise VerificationFailure(
                                f"backward map fails d_{i} at level {n}",
                                witness=("face", n, i, key),
                            )
                    lhs = self.backward_of_word(
                        n + 1, self.pi1.degeneracy_of_generator(n, i, key)
                    )
                    rhs = self.loop.degeneracy_of_word(
                        n, i, self.backward_of_generator(n, key)
                    )
                    if lhs != rhs:
                        raise VerificationFailure(
                            f"backward map fails s_{i} at level {n}",
                            witness=("degeneracy", n, i, key),
                        )
        return True


# -- Milnor's free-group construction --------------------------------------


class MilnorFK(FreeLevelGroup):
    """Level n free on the nonidentity elements of K_n; maps induced by K."""

    def __init__(self, k: FiniteSimplicialGroup):
        self.k = k
        self.name = f"F({getattr(k, 'name', 'K')})"

    def _collapse(self, g):
        return () if g == 0 else generator(g)

    def generators(self, n):
        return [g for g in self.k.group(n).elements() if g != 0]

    def face_of_generator(self, n, i, g):
        return self._collapse(self.k.face(n, i, g))

    def degeneracy_of_generator(self, n, i, g):
        return self._collapse(self.k.degeneracy(n, i, g))


def verify_milnor_loop_suspension(k: FiniteSimplicialGroup, suspension, n_max):
    """Generator bijection between the loop group of the suspension and FK.

    The loop-group generators of the suspension at level n are the
    first-summand elements (1, x); the bijection sends that to the FK
    generator x.  Faces and degeneracies are compared as words.
    """
    loop = LoopGroup(suspension, top_degree=None)
    fk = MilnorFK(k)

    def to_fk(word):
        out = []
        for (c, x), exp in word:
            if c != 1:
                raise VerificationFailure(
                    "loop generator outside the first wedge summand",
                    witness=(c, x),
                )
            out.append((x, exp))
        return word_reduce(out)

    for n in range(n_max + 1):
        lg = loop.generators(n)
        fg = fk.generators(n)
        if sorted(to_fk(generator(g))[0][0] for g in lg) != sorted(fg):
            raise VerificationFailure(
                f"generator sets differ at level {n}", witness=(n,)
            )
        for g in lg:
            for i in range(n + 1):
                if n >= 1:
                    lhs = to_fk(loop.face_of_generator(n, i, g))
                    rhs = fk.face_of_generator(n, i, to_fk(generator(g))[0][0])
                    if lhs != rhs:
                        raise VerificationFailure(
                            f"Milnor comparison fails d_{i} at level {n}",
                            witness=(n, i, g),
                        )
                lhs = to_fk(loop.degeneracy_of_generator(n, i, g))
                rhs = fk.degeneracy_of_generator(n, i, to_fk(generator(g))[0][0])
                if lhs != rhs:
                    raise VerificationFailure(
                        f"Milnor comparison fails s_{i} at level {n}",
                        witness=(n, i, g),
                    )
    return True


# -- fundamental group presentations -------------------------------------------


def pi1_presentation(x) -> tuple[FpPresentation, list]:
    """Presentation of the edge-path group of a truncated complex.

    Generators are the nondegenerate 1-cells; each nondegenerate 2-cell
    imposes the relation (long edge) = (first edge)(second edge), with
    degenerate edges contributing the identity.
    """
    edges = x.nondegenerate(1)
    gen_index = {ref.cell: i for i, ref in enumerate(edges)}

    def letter(ref):
        if not ref.is_nondegenerate():
            return ()
        return generator(gen_index[ref.cell])

    relators = []
    if x.truncation >= 2:
        for tri in x.nondegenerate(2):
            d0 = x.face(2, tri, 0)
            d1 = x.face(2, tri, 1)
            d2 = x.face(2, tri, 2)
            w = word_mul(letter(d2), letter(d0), word_inv(letter(d1)))
            if w:
                relators.append(w)
    return FpPresentation(len(edges), tuple(relators)), edges
