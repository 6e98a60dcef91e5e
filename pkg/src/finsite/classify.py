"""Site-level classification, comparison along dense subcategories, and the
aggregated report.

Licensing labels used for derived topos-level properties:

* "site-to-representable transfer": a site-class hypothesis forces a
  property of every representable sheaf.
* "separating-set characterization": a property of all representable
  sheaves (they form a separating set) characterizes a property of the
  whole sheaf category.
* "rigid-site presheaf equivalence": rigidity is equivalent to (or, without
  the hypotheses, sufficient for) the sheaf category being a presheaf topos
  over the irreducibles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import (
    bits,
    full_subcategory_from_mask,
    has_right_ore,
    is_cartesian,
    is_cauchy_complete,
)
from .density import is_dense
from .errors import NotDense
from .objects import (
    is_atom,
    is_indecomposable,
    is_indecomposable_projective,
    is_supercompact_object,
    rep_is_coherent,
    rep_is_compact,
    rep_is_irreducible,
    rep_is_regular,
    rep_is_supercompact,
)
from .presheaf import Presheaf, are_isomorphic, terminal_presheaf, yoneda
from .sheaf import is_subcanonical, representable_sheaf, sheafify
from .sieves import Sieve, generate_mask, is_sieve_connected
from .topology import induced_topology, trivial_topology

TRANSFER = "site-to-representable transfer"
SEPARATING = "separating-set characterization"
RIGID_EQUIVALENCE = "rigid-site presheaf equivalence"


@dataclass(frozen=True)
class SiteVerdict:
    ok: bool
    witness: object = None
    degenerate: bool = False

    def __bool__(self):
        return self.ok


def is_locally_connected_site(category, J):
    """Every covering sieve is connected (the empty sieve is not)."""
    for c in range(len(category.objects)):
        for S in J.covering_masks(c):
            if not is_sieve_connected(category, Sieve(c, S)):
                return SiteVerdict(
                    False,
                    (
                        category.objects[c],
                        sorted(category.morphisms[f] for f in bits(S)),
                    ),
                )
    return SiteVerdict(True)


def is_atomic_site(category, J):
    """The right Ore condition holds and J is the atomic topology."""
    from .topology import atomic_topology

    ore = has_right_ore(category)
    if not ore:
        return SiteVerdict(False, ("right-ore", ore.counterexample))
    atomic = atomic_topology(category)
    if J.covering != atomic.covering:
        return SiteVerdict(False, ("covering-differs",))
    return SiteVerdict(True)


def j_irreducible_objects(category, J):
    """Objects whose only covering sieve is the maximal one."""
    return tuple(
        c
        for c in range(len(category.objects))
        if rep_is_irreducible(category, J, c)
    )


def irreducibles_sieve_mask(category, J, c):
    irr = set(j_irreducible_objects(category, J))
    arrows = [
        f for f in category.into(c) if category.dom[f] in irr
    ]
    return generate_mask(category, arrows)


def is_rigid(category, J):
    """The sieve generated by all arrows out of irreducibles covers every object."""
    for c in range(len(category.objects)):
        if not J.covers(c, irreducibles_sieve_mask(category, J, c)):
            return SiteVerdict(False, category.objects[c])
    return SiteVerdict(True)


def is_coherent_site(category, J):
    """Cartesian base with a finite-type topology.

    Finite categories only have finitely generated sieves, so the
    finite-type half is degenerate and flagged as such.
    """
    cart = is_cartesian(category)
    if not cart:
        return SiteVerdict(False, ("cartesian", cart.failure), degenerate=True)
    return SiteVerdict(True, degenerate=True)


@dataclass(frozen=True)
class RegularSiteVerdict:
    """Two readings of "every covering sieve is generated by one arrow".

    strict: some member arrow generates the sieve itself.
    covering_variant: some member arrow generates a covering sieve.
    """

    cartesian: bool
    strict: bool
    covering_variant: bool
    witness: object = None

    @property
    def ok(self):
        return self.cartesian and self.strict

    def __bool__(self):
        return self.ok


def is_regular_site(category, J):
    cart = is_cartesian(category)
    strict = True
    witness = None
    for c in range(len(category.objects)):
        for S in J.covering_masks(c):
            if not any(
                category.principal_sieve(f) == S for f in bits(S)
            ):
                strict = False
                witness = (
                    category.objects[c],
                    sorted(category.morphisms[f] for f in bits(S)),
                )
                break
        if not strict:
            break
    variant = all(
        rep_is_supercompact(category, J, c)
        for c in range(len(category.objects))
    )
    return RegularSiteVerdict(bool(cart), strict, variant, witness)


# ---------------------------------------------------------------------------
# Comparison along a dense subcategory.


def right_kan_extension(parent, realized, G):
    """Pointwise right Kan extension of G along the subcategory inclusion.

    The value at a parent object c is the set of compatible families over
    pairs (d, f) with d a subcategory object and f: d -> c in the parent;
    compatibility transports values along subcategory arrows.
    """
    Dcat = realized.category
    n_par = len(parent.objects)
    pair_lists = []
    pair_index = []
    for c in range(n_par):
        pairs = []
        for d in range(len(Dcat.objects)):
            for f in parent.hom(realized.parent_object(d), c):
                pairs.append((d, f))
        pair_lists.append(pairs)
        pair_index.append({p: i for i, p in enumerate(pairs)})

    # subcategory arrows by local index with their parent images
    sub_arrows = [
        (h, realized.parent_morphism(h))
        for h in range(len(Dcat.morphisms))
    ]

    values = []
    for c in range(n_par):
        pairs = pair_lists[c]
        index = pair_index[c]
        constraints = [[] for _ in pairs]
        for i, (d, f) in enumerate(pairs):
            for h_local, h in sub_arrows:
                if Dcat.cod[h_local] != d:
                    continue
                d2 = Dcat.dom[h_local]
                j = index[(d2, parent.compose(f, h))]
                constraints[i].append((h_local, j))
        assignment = [None] * len(pairs)
        found = []

        def consistent(i):
            for h_local, j in constraints[i]:
                if assignment[j] is not None:
                    if assignment[j] != G.apply(h_local, assignment[i]):
                        return False
            for k in range(len(pairs)):
                if assignment[k] is None:
                    continue
                for h_local, j in constraints[k]:
                    if j == i and assignment[i] != G.apply(
                        h_local, assignment[k]
                    ):
                        return False
            return True

        def place(i):
            if i == len(pairs):
                found.append(tuple(assignment))
                return
            d, _ = pairs[i]
            for x in range(G.sizes[d]):
                assignment[i] = x
                if consistent(i):
                    place(i + 1)
            assignment[i] = None

        place(0)
        values.append(sorted(found))

    value_index = [
        {v: i for i, v in enumerate(vals)} for vals in values
    ]
    sizes = tuple(len(v) for v in values)
    actions = []
    for m in range(len(parent.morphisms)):
        c2, c = parent.dom[m], parent.cod[m]
        tab = []
        for alpha in values[c]:
            beta = tuple(
                alpha[pair_index[c][(d, parent.compose(m, g))]]
                for (d, g) in pair_lists[c2]
            )
            tab.append(value_index[c2][beta])
        actions.append(tuple(tab))
    return Presheaf(parent, sizes, tuple(actions))


@dataclass(frozen=True)
class ComparisonFunctors:
    """restrict/extend between sheaves on the parent and on a dense sub."""

    category: object
    topology: object
    sub: object
    realized: object
    sub_topology: object

    def restrict(self, F):
        """Precompose with the inclusion: values at subcategory objects."""
        realized = self.realized
        sizes = tuple(
            F.sizes[realized.parent_object(d)]
            for d in range(len(realized.category.objects))
        )
        actions = tuple(
            F.actions[realized.parent_morphism(f)]
            for f in range(len(realized.category.morphisms))
        )
        return Presheaf(realized.category, sizes, actions)

    def extend(self, G):
        """Right Kan extension along the inclusion, then sheafify."""
        ran = right_kan_extension(self.category, self.realized, G)
        sheafed, _ = sheafify(self.category, self.topology, ran)
        return sheafed


def comparison_functors(category, J, sub):
    verdict = is_dense(category, J, sub)
    if not verdict:
        raise NotDense(
            "subcategory is not dense; first failure %r" % (verdict.failures[0],)
        )
    sub_topology = induced_topology(category, J, sub)
    return ComparisonFunctors(
        category, J, sub, sub.realize(), sub_topology
    )


# ---------------------------------------------------------------------------
# Separating-set checks and the presheaf-type verdict.


def separating_set_check(category, J, predicate):
    """Does every representable sheaf satisfy the predicate?

    predicate: "indecomposable" or "atom".  The representables form a
    separating set of the sheaf category, which is what licenses reading
    topos-level structure off this check.
    """
    checks = {
        "indecomposable": is_indecomposable,
        "atom": is_atom,
    }
    try:
        check = checks[predicate]
    except KeyError:
        raise ValueError("predicate must be one of %r" % (sorted(checks),))
    return all(
        check(category, J, representable_sheaf(category, J, c))
        for c in range(len(category.objects))
    )


def presheaf_type_test(category, J):
    """Is the sheaf category a presheaf topos?

    Under subcanonicity plus retract-closure of the representables (checked
    as Cauchy completeness of the base), rigidity decides the question both
    ways.  Without the hypotheses only "rigid implies yes" is asserted.
    """
    rigid = is_rigid(category, J)
    subcanonical = is_subcanonical(category, J)
    cauchy = is_cauchy_complete(category)
    hypotheses = bool(subcanonical) and bool(cauchy)
    irr = j_irreducible_objects(category, J)
    out = {
        "rigid": bool(rigid),
        "hypotheses": {
            "subcanonical": bool(subcanonical),
            "representables_retract_closed": bool(cauchy),
        },
        "irreducible_objects": [category.objects[c] for c in irr],
    }
    if rigid:
        out["is_presheaf_topos"] = True
        out["via"] = RIGID_EQUIVALENCE
        out["direction"] = "both" if hypotheses else "forward-only"
    elif hypotheses:
        out["is_presheaf_topos"] = False
        out["via"] = RIGID_EQUIVALENCE
        out["direction"] = "both"
    else:
        out["is_presheaf_topos"] = None
        out["via"] = "inapplicable"
        out["direction"] = "forward-only"
        out["note"] = (
            "not rigid and hypotheses fail: no verdict is licensed"
        )
    return out


def _rigid_transfer(category, J):
    """For a rigid site, check that each irreducible's sheafified
    representable restricts to an indecomposable projective presheaf on the
    irreducibles."""
    irr = j_irreducible_objects(category, J)
    mask = 0
    for c in irr:
        mask |= 1 << c
    sub = full_subcategory_from_mask(category, mask)
    functors = comparison_functors(category, J, sub)
    realized = functors.realized
    sub_trivial = trivial_topology(realized.category)
    induced_trivial = (
        functors.sub_topology.covering == sub_trivial.covering
    )
    all_ok = True
    for c in irr:
        restricted = functors.restrict(representable_sheaf(category, J, c))
        local = realized.local_object(c)
        if are_isomorphic(restricted, yoneda(realized.category, local)) is None:
            all_ok = False
            break
        if not is_indecomposable_projective(
            realized.category, sub_trivial, restricted
        ):
            all_ok = False
            break
    return {
        "induced_topology_trivial": induced_trivial,
        "irreducibles_become_representable_projectives": all_ok,
    }


# ---------------------------------------------------------------------------
# The aggregated report.

REPORT_SCHEMA = "finsite-report/1"


def _object_properties(category, J, c):
    rep = representable_sheaf(category, J, c)
    coh = rep_is_coherent(category, J, c)
    reg = rep_is_regular(category, J, c)
    compact = rep_is_compact(category, J, c)
    return {
        "atom": is_atom(category, J, rep),
        "indecomposable": is_indecomposable(category, J, rep),
        "supercompact": is_supercompact_object(category, J, rep),
        "compact": {"holds": bool(compact), "degenerate": compact.degenerate},
        "irreducible": rep_is_irreducible(category, J, c),
        "supercompact_by_sieves": rep_is_supercompact(category, J, c),
        "coherent": {
            "holds": bool(coh),
            "degenerate": coh.degenerate,
            "probe_restricted": coh.probe_restricted,
        },
        "regular": {
            "holds": bool(reg),
            "probe_restricted": reg.probe_restricted,
        },
        "values": {
            category.objects[d]: rep.sizes[d]
            for d in range(len(category.objects))
        },
    }


def classify_report(category, J, name="site", include_objects=True, mapper=None):
    """Full classification bundle as a deterministic dict.

    mapper: an optional map-compatible callable (e.g. a thread pool's map);
    results are keyed, so the assembly order never depends on it.
    """
    if mapper is None:
        mapper = map

    tasks = [
        ("locally_connected", lambda: is_locally_connected_site(category, J)),
        ("atomic", lambda: is_atomic_site(category, J)),
        ("rigid", lambda: is_rigid(category, J)),
        ("coherent", lambda: is_coherent_site(category, J)),
        ("regular", lambda: is_regular_site(category, J)),
        ("subcanonical", lambda: is_subcanonical(category, J)),
        ("cartesian", lambda: is_cartesian(category)),
        ("right_ore", lambda: has_right_ore(category)),
        ("cauchy_complete", lambda: is_cauchy_complete(category)),
        ("presheaf_type", lambda: presheaf_type_test(category, J)),
    ]
    if include_objects:
        for c in range(len(category.objects)):
            tasks.append(
                (
                    ("object", c),
                    lambda c=c: _object_properties(category, J, c),
                )
            )

    results = dict(mapper(_run_task, tasks))

    lc = results["locally_connected"]
    atomic = results["atomic"]
    rigid = results["rigid"]
    coherent = results["coherent"]
    regular = results["regular"]
    subcanonical = results["subcanonical"]
    cartesian = results["cartesian"]
    ore = results["right_ore"]
    cauchy = results["cauchy_complete"]

    irr = j_irreducible_objects(category, J)
    report = {
        "schema": REPORT_SCHEMA,
        "site": name,
        "category": {
            "objects": len(category.objects),
            "morphisms": len(category.morphisms),
        },
        "classes": {
            "locally_connected": {
                "holds": bool(lc),
                "witness": lc.witness,
            },
            "atomic": {"holds": bool(atomic), "witness": atomic.witness},
            "rigid": {
                "holds": bool(rigid),
                "witness": rigid.witness,
            },
            "coherent": {
                "holds": bool(coherent),
                "degenerate_finite_type": True,
                "witness": coherent.witness,
            },
            "regular": {
                "holds": regular.ok,
                "single_arrow_strict": regular.strict,
                "single_arrow_covering": regular.covering_variant,
                "readings_agree": regular.strict == regular.covering_variant,
                "witness": regular.witness,
            },
            "subcanonical": {
                "holds": bool(subcanonical),
                "witness": subcanonical.witness,
            },
            "cartesian": {
                "holds": bool(cartesian),
                "witness": cartesian.failure,
            },
            "right_ore": {
                "holds": bool(ore),
                "witness": ore.counterexample,
            },
            "cauchy_complete": {
                "holds": bool(cauchy),
                "witness": cauchy.witness,
            },
        },
        "irreducible_objects": [category.objects[c] for c in irr],
        "degeneracies": [
            "compactness is identically true at finite scale",
            "finite-type condition is identically true for finite categories",
        ],
    }

    if include_objects:
        objects = {}
        for c in range(len(category.objects)):
            objects[category.objects[c]] = results[("object", c)]
        report["objects"] = objects

        # a failed representable check licenses nothing: another separating
        # set could still satisfy the predicate, so "holds" is then null
        derived = []
        all_indec = all(
            objects[o]["indecomposable"] for o in category.objects
        )
        all_atoms = all(objects[o]["atom"] for o in category.objects)
        terminal_ok = is_indecomposable(
            category, J, terminal_presheaf(category)
        )
        derived.append(
            {
                "property": "locally connected topos",
                "holds": True if all_indec else None,
                "evidence": "every representable sheaf is indecomposable"
                if all_indec
                else "not licensed: a representable sheaf is decomposable",
                "licensed_by": SEPARATING,
            }
        )
        derived.append(
            {
                "property": "connected and locally connected topos",
                "holds": True if all_indec and terminal_ok else None,
                "evidence": "representables and the terminal sheaf are indecomposable"
                if all_indec and terminal_ok
                else "not licensed: a representable or the terminal sheaf is decomposable",
                "licensed_by": SEPARATING,
            }
        )
        derived.append(
            {
                "property": "atomic topos",
                "holds": True if all_atoms else None,
                "evidence": "every representable sheaf is an atom"
                if all_atoms
                else "not licensed: a representable sheaf is not an atom",
                "licensed_by": SEPARATING,
            }
        )
        all_regular = all(
            objects[o]["regular"]["holds"] for o in category.objects
        )
        all_coherent = all(
            objects[o]["coherent"]["holds"] for o in category.objects
        )
        derived.append(
            {
                "property": "regular topos",
                "holds": True if bool(cartesian) and all_regular else None,
                "evidence": "cartesian base with every representable sheaf regular"
                if bool(cartesian) and all_regular
                else "not licensed: base is not cartesian"
                if not cartesian
                else "not licensed: a representable sheaf fails the probe",
                "licensed_by": SEPARATING,
            }
        )
        derived.append(
            {
                "property": "coherent topos",
                "holds": True if bool(cartesian) and all_coherent else None,
                "evidence": "cartesian base with every representable sheaf coherent"
                if bool(cartesian) and all_coherent
                else "not licensed: base is not cartesian"
                if not cartesian
                else "not licensed: a representable sheaf fails the probe",
                "licensed_by": SEPARATING,
            }
        )
        pt = results["presheaf_type"]
        derived.append(
            {
                "property": "presheaf topos",
                "holds": pt["is_presheaf_topos"],
                "evidence": "rigidity decision (%s)" % (pt["direction"],),
                "licensed_by": pt["via"],
            }
        )
        report["derived"] = derived

        transfers = []
        if bool(lc):
            transfers.append(
                {
                    "from": "locally connected site",
                    "claim": "all representable sheaves indecomposable",
                    "verified": all_indec,
                    "licensed_by": TRANSFER,
                }
            )
        if bool(atomic):
            transfers.append(
                {
                    "from": "atomic site",
                    "claim": "all representable sheaves are atoms",
                    "verified": all_atoms,
                    "licensed_by": TRANSFER,
                }
            )
        if bool(rigid):
            rt = _rigid_transfer(category, J)
            transfers.append(
                {
                    "from": "rigid site",
                    "claim": "irreducibles restrict to indecomposable projectives",
                    "verified": rt["irreducibles_become_representable_projectives"],
                    "induced_topology_trivial": rt["induced_topology_trivial"],
                    "licensed_by": TRANSFER,
                }
            )
        if regular.ok:
            transfers.append(
                {
                    "from": "regular site",
                    "claim": "all representable sheaves regular",
                    "verified": all_regular,
                    "licensed_by": TRANSFER,
                }
            )
        if bool(coherent):
            transfers.append(
                {
                    "from": "coherent site",
                    "claim": "all representable sheaves coherent",
                    "verified": all_coherent,
                    "licensed_by": TRANSFER,
                }
            )
        report["transfers"] = transfers

    report["presheaf_type"] = results["presheaf_type"]
    return report


def _run_task(task):
    key, fn = task
    return key, fn()
