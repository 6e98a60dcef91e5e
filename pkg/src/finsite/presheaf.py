"""Finite-set-valued presheaves and natural transformations.

A presheaf stores, per object, an integer size (elements are 0..size-1) and,
per morphism f: a -> b, a function table of length size(b) with entries below
size(a).  Functoriality is checked at construction, so downstream code can
trust every instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import PresheafLawError


@dataclass(frozen=True)
class Presheaf:
    category: object
    sizes: tuple
    actions: tuple  # per morphism, tuple of ints

    def __post_init__(self):
        cat = self.category
        if len(self.sizes) != len(cat.objects) or len(self.actions) != len(
            cat.morphisms
        ):
            raise PresheafLawError("value tables have the wrong shape")
        for f, tab in enumerate(self.actions):
            a, b = cat.dom[f], cat.cod[f]
            if len(tab) != self.sizes[b]:
                raise PresheafLawError(
                    "action of %r has arity %d, expected %d"
                    % (cat.morphisms[f], len(tab), self.sizes[b])
                )
            if any(x < 0 or x >= self.sizes[a] for x in tab):
                raise PresheafLawError(
                    "action of %r leaves the value set" % (cat.morphisms[f],)
                )
        for c in range(len(cat.objects)):
            ident = self.actions[cat.identity[c]]
            if ident != tuple(range(self.sizes[c])):
                raise PresheafLawError(
                    "identity of %r must act as the identity" % (cat.objects[c],)
                )
        for (g, f), h in cat.table.items():
            gf = self.actions[h]
            via = tuple(self.actions[f][x] for x in self.actions[g])
            if gf != via:
                raise PresheafLawError(
                    "functoriality fails at %r after %r"
                    % (cat.morphisms[g], cat.morphisms[f])
                )

    def size(self, c):
        return self.sizes[c]

    def action(self, f):
        return self.actions[f]

    def apply(self, f, x):
        return self.actions[f][x]

    def total_elements(self):
        return sum(self.sizes)


@dataclass(frozen=True)
class NatTransformation:
    source: Presheaf
    target: Presheaf
    components: tuple  # per object, tuple mapping source elements to target

    def __post_init__(self):
        P, Q = self.source, self.target
        cat = P.category
        for c, comp in enumerate(self.components):
            if len(comp) != P.sizes[c]:
                raise PresheafLawError("component at %r has wrong arity" % (c,))
            if any(x < 0 or x >= Q.sizes[c] for x in comp):
                raise PresheafLawError("component at %r leaves the target" % (c,))
        for f in range(len(cat.morphisms)):
            a, b = cat.dom[f], cat.cod[f]
            for x in range(P.sizes[b]):
                if Q.actions[f][self.components[b][x]] != self.components[a][
                    P.actions[f][x]
                ]:
                    raise PresheafLawError(
                        "naturality fails at %r" % (cat.morphisms[f],)
                    )

    def component(self, c):
        return self.components[c]

    def apply(self, c, x):
        return self.components[c][x]

    def is_componentwise_injective(self):
        return all(
            len(set(comp)) == len(comp) for comp in self.components
        )

    def is_componentwise_surjective(self):
        return all(
            set(comp) == set(range(self.target.sizes[c]))
            for c, comp in enumerate(self.components)
        )

    def is_componentwise_bijective(self):
        return (
            self.is_componentwise_injective()
            and self.is_componentwise_surjective()
        )


def identity_nat(P):
    return NatTransformation(
        P, P, tuple(tuple(range(n)) for n in P.sizes)
    )


def compose_nat(t2, t1):
    """t2 after t1."""
    if t1.target != t2.source:
        raise PresheafLawError("natural transformations do not compose")
    comps = tuple(
        tuple(t2.components[c][x] for x in t1.components[c])
        for c in range(len(t1.components))
    )
    return NatTransformation(t1.source, t2.target, comps)


def yoneda(category, c):
    """The representable presheaf of object index c."""
    sizes = tuple(
        len(category.hom(d, c)) for d in range(len(category.objects))
    )
    index = {}
    for d in range(len(category.objects)):
        for i, h in enumerate(category.hom(d, c)):
            index[h] = i
    actions = []
    for g in range(len(category.morphisms)):
        a, b = category.dom[g], category.cod[g]
        tab = tuple(
            index[category.compose(h, g)] for h in category.hom(b, c)
        )
        actions.append(tab)
    return Presheaf(category, sizes, tuple(actions))


def _candidate_components(P, Q, c, bijective_only):
    n, m = P.sizes[c], Q.sizes[c]
    if bijective_only:
        if n != m:
            return
        from itertools import permutations

        for perm in permutations(range(m)):
            yield perm
        return
    if n == 0:
        yield ()
        return
    if m == 0:
        return
    for tab in product(range(m), repeat=n):
        yield tab


def _homs(P, Q, bijective_only):
    cat = P.category
    if P.category != Q.category:
        raise PresheafLawError("presheaves live on different categories")
    n_obj = len(cat.objects)
    # morphisms whose endpoints are both assigned once object c is placed
    ready = [[] for _ in range(n_obj)]
    for f in range(len(cat.morphisms)):
        ready[max(cat.dom[f], cat.cod[f])].append(f)
    out = []
    comps = [None] * n_obj

    def natural_at(f):
        a, b = cat.dom[f], cat.cod[f]
        Pa, Qa = P.actions[f], Q.actions[f]
        ca, cb = comps[a], comps[b]
        return all(Qa[cb[x]] == ca[Pa[x]] for x in range(P.sizes[b]))

    def place(c):
        if c == n_obj:
            out.append(
                NatTransformation(P, Q, tuple(tuple(x) for x in comps))
            )
            return
        for tab in _candidate_components(P, Q, c, bijective_only):
            comps[c] = tab
            if all(natural_at(f) for f in ready[c]):
                place(c + 1)
        comps[c] = None

    place(0)
    return tuple(out)


def presheaf_homs(P, Q):
    """Every natural transformation P -> Q, in a canonical order."""
    return _homs(P, Q, False)


def presheaf_isos(P, Q):
    """Every componentwise-bijective natural transformation P -> Q."""
    return _homs(P, Q, True)


def are_isomorphic(P, Q):
    """First natural isomorphism found, or None."""
    if P.sizes != Q.sizes:
        # sizes are canonical, but isomorphic presheaves always match here
        pass
    isos = presheaf_isos(P, Q)
    return isos[0] if isos else None


# ---------------------------------------------------------------------------
# Finite limits and colimits, computed objectwise.


def terminal_presheaf(category):
    return Presheaf(
        category,
        tuple(1 for _ in category.objects),
        tuple((0,) * 1 for _ in category.morphisms),
    )


def initial_presheaf(category):
    return Presheaf(
        category,
        tuple(0 for _ in category.objects),
        tuple(() for _ in category.morphisms),
    )


def terminal_map(P):
    T = terminal_presheaf(P.category)
    return NatTransformation(
        P, T, tuple((0,) * n for n in P.sizes)
    )


def product_presheaf(P, Q):
    """Objectwise product with projections; pair (x, y) has index x*|Q|+y."""
    cat = P.category
    sizes = tuple(p * q for p, q in zip(P.sizes, Q.sizes))
    actions = []
    for f in range(len(cat.morphisms)):
        a, b = cat.dom[f], cat.cod[f]
        tab = []
        for x in range(P.sizes[b]):
            for y in range(Q.sizes[b]):
                tab.append(P.actions[f][x] * Q.sizes[a] + Q.actions[f][y])
        actions.append(tuple(tab))
    R = Presheaf(cat, sizes, tuple(actions))
    p1 = NatTransformation(
        R,
        P,
        tuple(
            tuple(i // Q.sizes[c] for i in range(sizes[c]))
            for c in range(len(cat.objects))
        ),
    )
    p2 = NatTransformation(
        R,
        Q,
        tuple(
            tuple(i % Q.sizes[c] for i in range(sizes[c]))
            for c in range(len(cat.objects))
        ),
    )
    return R, p1, p2


def _sub_presheaf(P, keep):
    """Presheaf on the element subsets `keep[c]` (sorted lists), with inclusion."""
    cat = P.category
    pos = [
        {x: i for i, x in enumerate(keep[c])} for c in range(len(cat.objects))
    ]
    sizes = tuple(len(keep[c]) for c in range(len(cat.objects)))
    actions = []
    for f in range(len(cat.morphisms)):
        a, b = cat.dom[f], cat.cod[f]
        actions.append(
            tuple(pos[a][P.actions[f][x]] for x in keep[b])
        )
    S = Presheaf(cat, sizes, tuple(actions))
    incl = NatTransformation(
        S,
        P,
        tuple(tuple(keep[c]) for c in range(len(cat.objects))),
    )
    return S, incl


def equalizer_presheaf(s, t):
    """Equalizer of parallel maps s, t: P -> Q, with its inclusion."""
    P = s.source
    keep = [
        sorted(
            x
            for x in range(P.sizes[c])
            if s.components[c][x] == t.components[c][x]
        )
        for c in range(len(P.category.objects))
    ]
    return _sub_presheaf(P, keep)


def pullback_presheaf(s, t):
    """Pullback of s: P -> R against t: Q -> R, with both projections."""
    P, Q = s.source, t.source
    R, p1, p2 = product_presheaf(P, Q)
    sp1 = compose_nat(s, p1)
    tp2 = compose_nat(t, p2)
    W, incl = equalizer_presheaf(sp1, tp2)
    return W, compose_nat(p1, incl), compose_nat(p2, incl)


def kernel_pair(t):
    """Pullback of t against itself, with the two projections."""
    return pullback_presheaf(t, t)


def coproduct_presheaf(P, Q):
    """Objectwise disjoint union with injections; P's elements come first."""
    cat = P.category
    sizes = tuple(p + q for p, q in zip(P.sizes, Q.sizes))
    actions = []
    for f in range(len(cat.morphisms)):
        a, b = cat.dom[f], cat.cod[f]
        tab = list(P.actions[f]) + [
            P.sizes[a] + y for y in Q.actions[f]
        ]
        actions.append(tuple(tab))
    R = Presheaf(cat, sizes, tuple(actions))
    in1 = NatTransformation(
        P,
        R,
        tuple(tuple(range(P.sizes[c])) for c in range(len(cat.objects))),
    )
    in2 = NatTransformation(
        Q,
        R,
        tuple(
            tuple(P.sizes[c] + y for y in range(Q.sizes[c]))
            for c in range(len(cat.objects))
        ),
    )
    return R, in1, in2


# ---------------------------------------------------------------------------
# Seeded random presheaves.


def random_presheaf(category, rng, max_value=3, max_restarts=1000):
    """A random presheaf with value sizes in 0..max_value.

    Sizes are drawn first (redrawn until every arrow can act); action tables
    are then assigned in random order with forced composites propagated, and
    the whole attempt restarts on conflict.  Deterministic for a given rng
    state.
    """
    cat = category
    n_mor = len(cat.morphisms)
    for _ in range(max_restarts):
        sizes = [rng.randint(0, max_value) for _ in cat.objects]
        if any(
            sizes[cat.cod[f]] > 0 and sizes[cat.dom[f]] == 0
            for f in range(n_mor)
        ):
            continue
        tables = {}
        for c in range(len(cat.objects)):
            tables[cat.identity[c]] = tuple(range(sizes[c]))
        order = [f for f in range(n_mor) if f not in tables]
        rng.shuffle(order)
        if _fill_tables(cat, sizes, tables, order, rng):
            actions = tuple(tables[f] for f in range(n_mor))
            return Presheaf(cat, tuple(sizes), actions)
    raise PresheafLawError("random presheaf generation did not converge")


def _fill_tables(cat, sizes, tables, order, rng):
    def propagate():
        changed = True
        while changed:
            changed = False
            for (g, f), h in cat.table.items():
                if g in tables and f in tables:
                    via = tuple(tables[f][x] for x in tables[g])
                    if h in tables:
                        if tables[h] != via:
                            return False
                    else:
                        tables[h] = via
                        changed = True
        return True

    if not propagate():
        return False
    for f in order:
        if f in tables:
            continue
        a, b = cat.dom[f], cat.cod[f]
        tab = tuple(
            rng.randrange(sizes[a]) for _ in range(sizes[b])
        ) if sizes[a] else ()
        tables[f] = tab
        if not propagate():
            return False
    return True
