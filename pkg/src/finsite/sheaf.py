"""Sheaves on a finite site: matching families, the plus construction,
sheafification, subcanonicity, and map classification.

The associated sheaf functor is the plus construction applied twice,
unconditionally.  Values of the plus construction at an object are
equivalence classes of (covering sieve, matching family) pairs, two pairs
being identified when they agree on a common covering refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import bits
from .errors import NotASheaf
from .presheaf import NatTransformation, Presheaf, compose_nat, presheaf_homs, yoneda
from .sieves import pullback_mask
from .topology import enumerate_topologies


def matching_families(category, P, c, mask):
    """All matching families for P on the sieve mask over c.

    A family assigns to each arrow f in the sieve an element of P(dom f),
    compatibly: the value at f-after-g is the g-image of the value at f.
    Families are returned as tuples aligned with the ascending arrow indices
    of the mask.
    """
    arrows = tuple(bits(mask))
    if not arrows:
        return ((),)
    pos = {f: i for i, f in enumerate(arrows)}
    # (i, g, j): value at arrows[j] must be P(g) applied to value at arrows[i]
    constraints = [[] for _ in arrows]
    for f in arrows:
        for g in category.into(category.dom[f]):
            h = category.compose(f, g)
            constraints[pos[f]].append((g, pos[h]))
    values = [None] * len(arrows)
    out = []

    def consistent(i):
        f = arrows[i]
        for g, j in constraints[i]:
            if values[j] is not None:
                if values[j] != P.apply(g, values[i]):
                    return False
        for k in range(len(arrows)):
            if values[k] is None:
                continue
            for g, j in constraints[k]:
                if j == i and values[i] != P.apply(g, values[k]):
                    return False
        return True

    def place(i):
        if i == len(arrows):
            out.append(tuple(values))
            return
        for x in range(P.sizes[category.dom[arrows[i]]]):
            values[i] = x
            if consistent(i):
                place(i + 1)
        values[i] = None

    place(0)
    return tuple(out)


def amalgamations(category, P, c, mask, family):
    arrows = tuple(bits(mask))
    out = []
    for x in range(P.sizes[c]):
        if all(
            P.apply(f, x) == family[i] for i, f in enumerate(arrows)
        ):
            out.append(x)
    return out


@dataclass(frozen=True)
class SheafVerdict:
    ok: bool
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def is_sheaf(category, J, P):
    """Exactly one amalgamation per matching family on every covering sieve.

    Maximal sieves are skipped: their families are the elements of P(c) and
    always amalgamate uniquely.
    """
    for c in range(len(category.objects)):
        top = category.maximal_sieve(c)
        for S in J.covering_masks(c):
            if S == top:
                continue
            for family in matching_families(category, P, c, S):
                n = len(amalgamations(category, P, c, S, family))
                if n != 1:
                    return SheafVerdict(False, (c, S, family, n))
    return SheafVerdict(True)


def _plus(category, J, P):
    """One plus construction step, with its unit map."""
    n_obj = len(category.objects)
    pairs_per_obj = []
    class_of = []  # per object: dict pair -> class index
    reps = []  # per object: list of class representative pairs
    for c in range(n_obj):
        pairs = []
        fams = {}
        for S in J.covering_masks(c):
            fams[S] = matching_families(category, P, c, S)
            for fam in fams[S]:
                pairs.append((S, fam))
        # union-find over pairs: equivalent when some covering refinement
        # of both sieves sees equal restrictions
        parent = list(range(len(pairs)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        covers = J.covering_masks(c)
        arrow_pos = {}
        for S in covers:
            arrow_pos[S] = {f: i for i, f in enumerate(bits(S))}
        for i in range(len(pairs)):
            Si, xi = pairs[i]
            for j in range(i + 1, len(pairs)):
                Sj, xj = pairs[j]
                if find(i) == find(j):
                    continue
                inter = Si & Sj
                for T in covers:
                    if T & ~inter:
                        continue
                    pi, pj = arrow_pos[Si], arrow_pos[Sj]
                    if all(
                        xi[pi[f]] == xj[pj[f]] for f in bits(T)
                    ):
                        ri, rj = find(i), find(j)
                        parent[max(ri, rj)] = min(ri, rj)
                        break
        groups = {}
        for i in range(len(pairs)):
            groups.setdefault(find(i), []).append(i)
        ordered = sorted(
            groups.values(), key=lambda idxs: min(pairs[i] for i in idxs)
        )
        lookup = {}
        rep_list = []
        for k, idxs in enumerate(ordered):
            rep_list.append(min(pairs[i] for i in idxs))
            for i in idxs:
                lookup[pairs[i]] = k
        pairs_per_obj.append(pairs)
        class_of.append(lookup)
        reps.append(rep_list)

    sizes = tuple(len(r) for r in reps)
    actions = []
    for h in range(len(category.morphisms)):
        d, c = category.dom[h], category.cod[h]
        tab = []
        for S, fam in reps[c]:
            arrows = tuple(bits(S))
            pos = {f: i for i, f in enumerate(arrows)}
            Sd = pullback_mask(category, S, h)
            fam_d = tuple(
                fam[pos[category.compose(h, g)]] for g in bits(Sd)
            )
            tab.append(class_of[d][(Sd, fam_d)])
        actions.append(tuple(tab))
    plus = Presheaf(category, sizes, tuple(actions))

    unit_comps = []
    for c in range(n_obj):
        top = category.maximal_sieve(c)
        arrows = tuple(bits(top))
        comp = []
        for x in range(P.sizes[c]):
            fam = tuple(P.apply(f, x) for f in arrows)
            comp.append(class_of[c][(top, fam)])
        unit_comps.append(tuple(comp))
    unit = NatTransformation(P, plus, tuple(unit_comps))
    return plus, unit


def plus_construction(category, J, P):
    return _plus(category, J, P)


def sheafify(category, J, P):
    """Associated sheaf with its unit, by applying plus twice."""
    once, unit1 = _plus(category, J, P)
    twice, unit2 = _plus(category, J, once)
    return twice, compose_nat(unit2, unit1)


_REP_CACHE = {}


def representable_sheaf(category, J, c):
    """Sheafification of the representable at object index c."""
    key = (id(category), J.covering, c)
    hit = _REP_CACHE.get(key)
    if hit is not None and hit[0] is category:
        return hit[1]
    sheaf, _ = sheafify(category, J, yoneda(category, c))
    _REP_CACHE[key] = (category, sheaf)
    return sheaf


@dataclass(frozen=True)
class SubcanonicalVerdict:
    ok: bool
    witness: object = None  # object name whose representable fails

    def __bool__(self):
        return self.ok


def is_subcanonical(category, J):
    for c in range(len(category.objects)):
        if not is_sheaf(category, J, yoneda(category, c)):
            return SubcanonicalVerdict(False, category.objects[c])
    return SubcanonicalVerdict(True)


def canonical_topology(category, lattice=None, max_assignments=None):
    """Largest subcanonical topology: join of all subcanonical elements,
    re-verified to be subcanonical itself."""
    if lattice is None:
        lattice = enumerate_topologies(category, max_assignments)
    members = [
        i
        for i, J in enumerate(lattice.elements)
        if is_subcanonical(category, J)
    ]
    best = members[0]
    for i in members[1:]:
        best = lattice.join(best, i)
    J = lattice.elements[best]
    assert is_subcanonical(category, J), (
        "join of subcanonical topologies lost subcanonicity"
    )
    return J


def sheaf_hom(P, Q):
    """Natural transformations between sheaves; same data as presheaf maps."""
    return presheaf_homs(P, Q)


@dataclass(frozen=True)
class MapFlags:
    mono: bool
    epi: bool
    iso: bool


def is_locally_surjective(category, J, t):
    """Every section of the target is covered by sections in the image."""
    P, Q = t.source, t.target
    images = [set(comp) for comp in t.components]
    for c in range(len(category.objects)):
        for y in range(Q.sizes[c]):
            if not any(
                all(
                    Q.apply(f, y) in images[category.dom[f]]
                    for f in bits(S)
                )
                for S in J.covering_masks(c)
            ):
                return False
    return True


def classify_map(category, J, t):
    """Mono/epi/iso of a map of J-sheaves.

    Monos are componentwise injections; epis are J-locally surjective maps;
    isos are componentwise bijections.
    """
    mono = t.is_componentwise_injective()
    iso = mono and t.is_componentwise_surjective()
    epi = iso or is_locally_surjective(category, J, t)
    return MapFlags(mono, epi, iso)


def sheaf_coproduct(category, J, P, Q):
    """Coproduct in the sheaf category: objectwise sum, then sheafified."""
    from .presheaf import coproduct_presheaf

    R, in1, in2 = coproduct_presheaf(P, Q)
    sheafed, unit = sheafify(category, J, R)
    return sheafed, compose_nat(unit, in1), compose_nat(unit, in2)


def require_sheaf(category, J, P, what="presheaf"):
    verdict = is_sheaf(category, J, P)
    if not verdict:
        raise NotASheaf(
            "%s is not a sheaf for this topology (witness %r)"
            % (what, verdict.witness)
        )
