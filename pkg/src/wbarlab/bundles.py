"""Simplicial principal bundles through classifying data.

A bundle is stored as its classifying map into the bar construction; the
total space is the pullback of the shifted bar construction, realized as
pairs (group element, base simplex) with structure maps twisted by the
classifying tuples.  Pseudo-sections, transition elements, the cocycle
functor, and the reconstruction of the classifying map from transition data
all operate on this model.
"""

from __future__ import annotations

import json
import random
from itertools import product

from .errors import NotSimplicial, VerificationFailure
from .groups import TauDescriptor
from .ordinal import OrdinalMap, coface, compose, enumerate_maps, identity_map
from .simplicial import (
    SimplexRef,
    SimplicialMap,
    SimplicialSet,
    TruncatedComplex,
    check_simplicial_map,
)
from .simplicial_groups import FiniteSimplicialGroup
from .wbar import BarConstruction, bar_degeneracy, bar_face, bar_tau_membership
from .bisimplicial import grothendieck_membership, iter_chains


class TotalSpace(SimplicialSet):
    """Pullback of the shifted bar construction along a classifying map.

    Elements of level n are pairs (g, b) with g in K_n and b an n-simplex of
    the base; the pair stands for the shifted bar simplex (g, r(b)).
    """

    def __init__(self, bundle: "PrincipalBundle"):
        super().__init__(name=f"E({bundle.base.name})")
        self.bundle = bundle

    def _build_level(self, n):
        k = self.bundle.k
        return [
            (g, b)
            for b in self.bundle.base.level(n)
            for g in k.group(n).elements()
        ]

    def _shifted(self, n, el):
        g, b = el
        return (g,) + self.bundle.r(n, b)

    def face(self, n, el, i):
        g, b = el
        w = bar_face(self.bundle.k, n + 1, self._shifted(n, el), i + 1)
        return (w[0], self.bundle.base.face(n, b, i))

    def degeneracy(self, n, el, i):
        g, b = el
        w = bar_degeneracy(self.bundle.k, n + 1, self._shifted(n, el), i + 1)
        return (w[0], self.bundle.base.degeneracy(n, b, i))


class PrincipalBundle:
    """A principal bundle presented by a simplicial classifying map."""

    def __init__(self, base: TruncatedComplex, k: FiniteSimplicialGroup, r: SimplicialMap):
        self.base = base
        self.k = k
        self.r = r
        self.total = TotalSpace(self)

    @property
    def truncation(self):
        return self.base.truncation

    def projection(self, n, el):
        return el[1]

    def action(self, n, g, el):
        return (self.k.group(n).mul(g, el[0]), el[1])

    def fiber(self, n, b):
        return [(g, b) for g in self.k.group(n).elements()]

    def translating_element(self, n, e1, e2):
        """The unique g with e1 = g . e2; the fiber is a torsor."""
        if e1[1] != e2[1]:
            raise ValueError("elements lie in different fibers")
        g = self.k.group(n)
        return g.mul(e1[0], g.inv(e2[0]))


def bundle_from_classifying_map(base, k, r, check_degree=None) -> PrincipalBundle:
    """Validate the classifying map and build the pullback bundle."""
    degree = base.truncation if check_degree is None else check_degree
    verdict = check_simplicial_map(r, degree)
    if verdict["status"] != "pass":
        raise NotSimplicial(
            f"classifying map fails at {verdict['counterexample']}",
            witness=verdict["counterexample"],
        )
    return PrincipalBundle(base, k, r)


# -- pseudo-sections and transitions ------------------------------------------


class PseudoSection:
    """A fiberwise choice compatible with degeneracies and positive faces."""

    def __init__(self, bundle: PrincipalBundle, choose):
        self.bundle = bundle
        self.choose = choose

    def __call__(self, n, b):
        return self.choose(n, b)

    def verify(self, max_degree=None):
        bundle = self.bundle
        top = bundle.truncation if max_degree is None else max_degree
        for n in range(top + 1):
            for b in bundle.base.level(n):
                e = self(n, b)
                if bundle.projection(n, e) != b:
                    raise VerificationFailure(
                        "pseudo-section leaves the fiber", witness=(n, b)
                    )
                for i in range(n + 1):
                    if n >= 1 and i > 0:
                        if bundle.total.face(n, e, i) != self(
                            n - 1, bundle.base.face(n, b, i)
                        ):
                            raise VerificationFailure(
                                f"pseudo-section fails d_{i}", witness=(n, b, i)
                            )
                    if n < top:
                        if bundle.total.degeneracy(n, e, i) != self(
                            n + 1, bundle.base.degeneracy(n, b, i)
                        ):
                            raise VerificationFailure(
                                f"pseudo-section fails s_{i}", witness=(n, b, i)
                            )
        return True


def canonical_pseudo_section(bundle: PrincipalBundle) -> PseudoSection:
    """sigma(b) = (identity, b) in the product model."""
    return PseudoSection(bundle, lambda n, b: (0, b))


def transition_element(bundle, sigma, n, b, theta: OrdinalMap):
    """The unique group element with theta^* sigma(b) = alpha . sigma(theta^* b)."""
    pulled = bundle.total.act(theta, sigma(n, b))
    target = sigma(theta.source, bundle.base.act(theta, b))
    return bundle.translating_element(theta.source, pulled, target)


class TransitionAssignment:
    """All transition elements of a pseudo-section within the truncation."""

    def __init__(self, bundle, sigma):
        self.bundle = bundle
        self.sigma = sigma
        self._cache = {}

    def __call__(self, n, b, theta: OrdinalMap):
        key = (n, b, theta)
        if key not in self._cache:
            self._cache[key] = transition_element(self.bundle, self.sigma, n, b, theta)
        return self._cache[key]


def transition_functor_check(assignment: TransitionAssignment, max_degree=None):
    """Cocycle law over every composable pair within the truncation.

    alpha(b, theta . phi) = alpha(theta^* b, phi) . phi^*(alpha(b, theta)).
    """
    bundle = assignment.bundle
    top = bundle.truncation if max_degree is None else max_degree
    k = bundle.k
    for n in range(top + 1):
        for b in bundle.base.level(n):
            for m in range(top + 1):
                for theta in enumerate_maps(m, n):
                    a_theta = assignment(n, b, theta)
                    b_pulled = bundle.base.act(theta, b)
                    for l in range(top + 1):
                        for phi in enumerate_maps(l, m):
                            a_comp = assignment(n, b, compose(phi, theta))
                            a_phi = assignment(m, b_pulled, phi)
                            rhs = k.group(l).mul(a_phi, k.act(phi, a_theta))
                            if a_comp != rhs:
                                return {
                                    "status": "fail",
                                    "counterexample": {
                                        "simplex": repr(b),
                                        "theta": theta.values,
                                        "phi": phi.values,
                                    },
                                }
    return {"status": "pass", "degrees_checked": top}


def classifying_map_r_hat(bundle, assignment: TransitionAssignment) -> SimplicialMap:
    """Reassemble the classifying map from zeroth-face transition elements."""
    w = BarConstruction(bundle.k)

    def fn(n, b):
        out = []
        cur = b
        for t in range(n):
            out.append(assignment(n - t, cur, coface(0, n - t)))
            cur = bundle.base.face(n - t, cur, 0)
        return tuple(out)

    return SimplicialMap(bundle.base, w, fn, name="r-hat")


def tau_atlas_check(tau: TauDescriptor, bundle, assignment, chain_cap, ordinal_cap):
    """Does the transition functor send every capped nerve chain to admissible data?

    Checks every chain of morphisms of the base category with at most
    ``chain_cap`` arrows and ordinals at most ``ordinal_cap``, and
    additionally the admissibility of every reassembled classifying tuple.
    Returns a verdict dict with the first failing chain, if any.
    """
    base, k = bundle.base, bundle.k
    top = min(bundle.truncation, ordinal_cap)
    rhat = classifying_map_r_hat(bundle, assignment)
    for n in range(top + 1):
        for b in base.level(n):
            tpl = rhat(n, b)
            if not bar_tau_membership(tau, k, tpl):
                return {
                    "status": "fail",
                    "counterexample": {"kind": "classifying-tuple", "simplex": repr(b)},
                }
    for length in range(1, chain_cap + 1):
        for objs, maps in iter_chains(length, top):
            for b_top in base.level(objs[-1]):
                # walk the chain downwards collecting transition elements
                elems = []
                simplices = [b_top]
                for t in range(length - 1, -1, -1):
                    b_here = simplices[-1]
                    simplices.append(base.act(maps[t], b_here))
                simplices.reverse()  # simplices[i] sits over objs[i]
                for t in range(length):
                    elems.append(
                        assignment(objs[t + 1], simplices[t + 1], maps[t])
                    )
                image = (objs, maps, tuple(elems))
                if not grothendieck_membership(tau, k, image):
                    return {
                        "status": "fail",
                        "counterexample": {
                            "kind": "nerve-chain",
                            "objects": list(objs),
                            "maps": [m.values for m in maps],
                            "top-simplex": repr(b_top),
                        },
                    }
    return {
        "status": "pass",
        "chain_cap": chain_cap,
        "ordinal_cap": ordinal_cap,
    }


# -- random bases and classifying maps -------------------------------------------


def random_complex(rng: random.Random, complex_id="B", max_dim=3) -> TruncatedComplex:
    """A random valid truncated complex of dimension at most max_dim.

    Vertices and edges are free; candidate faces of higher cells are sampled
    and kept only when all simplicial identities hold.
    """
    n_vert = rng.randint(1, 3)
    counts = [n_vert]
    faces = [[]]

    def vref(c):
        return SimplexRef(complex_id, identity_map(0), c)

    n_edges = rng.randint(1, 4)
    counts.append(n_edges)
    faces.append(
        [
            (vref(rng.randrange(n_vert)), vref(rng.randrange(n_vert)))
            for _ in range(n_edges)
        ]
    )
    tc = TruncatedComplex(1, counts, faces, complex_id=complex_id)
    if max_dim < 2:
        return tc

    one_simplices = list(tc.level(1))
    triangles = []
    for f0, f1, f2 in product(one_simplices, repeat=3):
        if (
            tc.face(1, f0, 0) == tc.face(1, f1, 0)
            and tc.face(1, f1, 1) == tc.face(1, f2, 1)
            and tc.face(1, f0, 1) == tc.face(1, f2, 0)
        ):
            triangles.append((f0, f1, f2))
    n_two = rng.randint(0, 3)
    chosen2 = [rng.choice(triangles) for _ in range(n_two)] if triangles else []
    counts.append(len(chosen2))
    faces.append(chosen2)
    tc = TruncatedComplex(2, counts, faces, complex_id=complex_id)
    if max_dim < 3:
        return tc

    two_simplices = list(tc.level(2))
    chosen3 = []
    wanted = rng.randint(0, 2)
    for _ in range(250):
        if len(chosen3) >= wanted:
            break
        quad = tuple(rng.choice(two_simplices) for _ in range(4))
        ok = all(
            tc.face(2, quad[j], i) == tc.face(2, quad[i], j - 1)
            for j in range(1, 4)
            for i in range(j)
        )
        if ok:
            chosen3.append(quad)
    counts.append(len(chosen3))
    faces.append(chosen3)
    return TruncatedComplex(3, counts, faces, complex_id=complex_id)


def random_classifying_map(rng: random.Random, base: TruncatedComplex, k, complex_id=None):
    """A random simplicial map from a random sub-collection of the base.

    Images are chosen degree by degree among the bar simplices with matching
    faces; cells with no compatible image are dropped (together with
    everything above them), so the result is a valid map from a possibly
    smaller complex.  Returns (pruned base, map).
    """
    w = BarConstruction(k)
    complex_id = complex_id or f"{base.complex_id}~"
    keep: list[list[int]] = []
    values = {}
    new_faces = [[]]
    new_counts = []
    index_maps = []
    for d in range(base.truncation + 1):
        kept_here = []
        rows = []
        for c in range(base.cell_counts[d]):
            if d >= 1:
                old_faces = base.cell_faces[d][c]
                if any(
                    index_maps[f.cell_degree].get(f.cell) is None for f in old_faces
                ):
                    continue
                # the image must have faces equal to the images of the faces
                wanted = []
                for i, f in enumerate(old_faces):
                    img = w.act(
                        f.degeneracy, values[(f.cell_degree, f.cell)]
                    )
                    wanted.append(img)
                candidates = [
                    tpl
                    for tpl in w.level(d)
                    if all(w.face(d, tpl, i) == wanted[i] for i in range(d + 1))
                ]
                if not candidates:
                    continue
                values[(d, c)] = rng.choice(candidates)
            else:
                values[(d, c)] = ()
            kept_here.append(c)
        index_maps.append({c: i for i, c in enumerate(kept_here)})
        keep.append(kept_here)
        new_counts.append(len(kept_here))
        if d >= 1:
            for c in kept_here:
                row = []
                for f in base.cell_faces[d][c]:
                    row.append(
                        SimplexRef(
                            complex_id,
                            f.degeneracy,
                            index_maps[f.cell_degree][f.cell],
                        )
                    )
                rows.append(tuple(row))
            new_faces.append(rows)
    pruned = TruncatedComplex(base.truncation, new_counts, new_faces, complex_id=complex_id)
    new_values = {}
    for d in range(base.truncation + 1):
        for new_c, old_c in enumerate(keep[d]):
            new_values[(d, new_c)] = values[(d, old_c)]
    r = SimplicialMap.from_cell_values(pruned, w, new_values, name="r")
    return pruned, r


# -- serialization ----------------------------------------------------------------


def bundle_to_json(bundle: PrincipalBundle) -> str:
    values = {}
    for d in range(bundle.truncation + 1):
        for c in range(bundle.base.cell_counts[d]):
            ref = bundle.base.ref(d, c)
            values[f"{d}.{c}"] = list(bundle.r(d, ref))
    return json.dumps(
        {"base": json.loads(bundle.base.to_json()), "classifying": values},
        sort_keys=True,
    )
