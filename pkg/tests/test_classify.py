"""Site classes, comparison along dense subcategories, the report bundle."""

import pytest

from finsite.classify import (
    RIGID_EQUIVALENCE,
    SEPARATING,
    TRANSFER,
    classify_report,
    comparison_functors,
    irreducibles_sieve_mask,
    is_atomic_site,
    is_coherent_site,
    is_locally_connected_site,
    is_regular_site,
    is_rigid,
    j_irreducible_objects,
    presheaf_type_test,
    right_kan_extension,
    separating_set_check,
)
from finsite.corpus import arrow, named_site, vee
from finsite.errors import NotDense
from finsite.presheaf import are_isomorphic, yoneda
from finsite.sheaf import is_sheaf, representable_sheaf
from finsite.topology import trivial_topology


def test_locally_connected_fails_on_disconnected_covers():
    site = named_site("vee-cover")
    verdict = is_locally_connected_site(site.category, site.topology)
    assert not verdict
    assert verdict.witness == ("z", ["x->z", "y->z"])
    for name in ("arrow-j2", "idem-e", "z2-atomic"):
        s = named_site(name)
        assert is_locally_connected_site(s.category, s.topology)


def test_empty_covering_sieve_is_disconnected():
    site = named_site("arrow-emptycover")
    verdict = is_locally_connected_site(site.category, site.topology)
    assert not verdict
    assert verdict.witness == ("a", [])


def test_atomic_sites():
    for name in ("arrow-j2", "idem-e", "z2-atomic"):
        s = named_site(name)
        assert is_atomic_site(s.category, s.topology)
    vs = named_site("vee-cover")
    verdict = is_atomic_site(vs.category, vs.topology)
    assert not verdict and verdict.witness[0] == "right-ore"
    tr = named_site("arrow-trivial")
    differs = is_atomic_site(tr.category, tr.topology)
    assert not differs and differs.witness == ("covering-differs",)


def test_irreducibles_and_rigidity():
    j2 = named_site("arrow-j2")
    assert j_irreducible_objects(j2.category, j2.topology) == (
        j2.category.obj_index("a"),
    )
    assert is_rigid(j2.category, j2.topology)

    vs = named_site("vee-cover")
    cat = vs.category
    assert j_irreducible_objects(cat, vs.topology) == (
        cat.obj_index("x"), cat.obj_index("y"),
    )
    assert is_rigid(cat, vs.topology)

    ie = named_site("idem-e")
    verdict = is_rigid(ie.category, ie.topology)
    assert not verdict and verdict.witness == "*"
    assert j_irreducible_objects(ie.category, ie.topology) == ()


def test_irreducibles_sieve_is_the_legs_sieve():
    vs = named_site("vee-cover")
    cat = vs.category
    z = cat.obj_index("z")
    mask = irreducibles_sieve_mask(cat, vs.topology, z)
    want = (1 << cat.mor_index("x->z")) | (1 << cat.mor_index("y->z"))
    assert mask == want


def test_coherent_site_flags_degeneracy():
    j2 = named_site("arrow-j2")
    verdict = is_coherent_site(j2.category, j2.topology)
    assert verdict and verdict.degenerate
    vs = named_site("vee-cover")
    verdict = is_coherent_site(vs.category, vs.topology)
    assert not verdict and verdict.witness[0] == "cartesian"


def test_regular_site_readings():
    j2 = named_site("arrow-j2")
    verdict = is_regular_site(j2.category, j2.topology)
    assert verdict.ok and verdict.strict and verdict.covering_variant

    vs = named_site("vee-cover")
    verdict = is_regular_site(vs.category, vs.topology)
    assert not verdict.ok
    assert not verdict.cartesian
    assert not verdict.strict and not verdict.covering_variant
    assert verdict.witness == ("z", ["x->z", "y->z"])


def test_regular_readings_can_disagree():
    # the empty-cover site: the empty sieve has no members at all, so the
    # strict reading fails while supercompactness also fails; both readings
    # agree here, and the agreement flag is what the report carries
    ec = named_site("arrow-emptycover")
    verdict = is_regular_site(ec.category, ec.topology)
    assert verdict.strict == verdict.covering_variant == False  # noqa: E712


def test_right_kan_extension_reconstructs_representables():
    vs = named_site("vee-cover")
    cat, J = vs.category, vs.topology
    fun = comparison_functors(cat, J, vs.subcategories["legs"])
    for obj in ("x", "y", "z"):
        F = representable_sheaf(cat, J, cat.obj_index(obj))
        back = fun.extend(fun.restrict(F))
        assert are_isomorphic(back, F) is not None


def test_right_kan_values_are_compatible_families():
    vs = named_site("vee-cover")
    cat = vs.category
    fun = comparison_functors(cat, vs.topology, vs.subcategories["legs"])
    G = fun.restrict(representable_sheaf(cat, vs.topology, cat.obj_index("z")))
    ran = right_kan_extension(cat, fun.realized, G)
    # one compatible family per object: both legs have singleton values
    assert ran.sizes == (1, 1, 1)


def test_restriction_lands_in_the_induced_site():
    vs = named_site("vee-cover")
    cat, J = vs.category, vs.topology
    fun = comparison_functors(cat, J, vs.subcategories["legs"])
    F = representable_sheaf(cat, J, cat.obj_index("z"))
    restricted = fun.restrict(F)
    assert is_sheaf(fun.realized.category, fun.sub_topology, restricted)


def test_comparison_requires_density():
    sq = named_site("square-cover")
    with pytest.raises(NotDense):
        comparison_functors(sq.category, sq.topology,
                            sq.subcategories["corner"])


def test_separating_set_check():
    cat = arrow()
    J = trivial_topology(cat)
    assert separating_set_check(cat, J, "indecomposable")
    assert not separating_set_check(cat, J, "atom")
    z2s = named_site("z2-atomic")
    assert separating_set_check(z2s.category, z2s.topology, "atom")
    with pytest.raises(ValueError):
        separating_set_check(cat, J, "fluffy")


def test_presheaf_type_three_outcomes():
    vs = named_site("vee-cover")
    both = presheaf_type_test(vs.category, vs.topology)
    assert both["is_presheaf_topos"] is True
    assert both["direction"] == "both"
    assert both["via"] == RIGID_EQUIVALENCE
    assert both["irreducible_objects"] == ["x", "y"]

    j2 = named_site("arrow-j2")
    fwd = presheaf_type_test(j2.category, j2.topology)
    assert fwd["is_presheaf_topos"] is True
    assert fwd["direction"] == "forward-only"
    assert not fwd["hypotheses"]["subcanonical"]

    ie = named_site("idem-e")
    null = presheaf_type_test(ie.category, ie.topology)
    assert null["is_presheaf_topos"] is None
    assert null["via"] == "inapplicable"
    assert "note" in null


def test_negative_rigidity_decides_under_hypotheses():
    # subcanonical and retract-closed but not rigid: licensed to say no
    vs = named_site("vee-trivial")
    out = presheaf_type_test(vs.category, vs.topology)
    # the trivial topology is rigid on this base (every object irreducible)
    assert out["rigid"] is True and out["is_presheaf_topos"] is True


def test_report_structure_and_licensing():
    vs = named_site("vee-cover")
    rep = classify_report(vs.category, vs.topology, name="vee-cover")
    assert rep["schema"] == "finsite-report/1"
    assert rep["site"] == "vee-cover"
    assert rep["category"] == {"objects": 3, "morphisms": 5}
    classes = rep["classes"]
    assert classes["rigid"]["holds"] is True
    assert classes["locally_connected"]["holds"] is False
    assert classes["regular"]["readings_agree"] is True
    assert rep["irreducible_objects"] == ["x", "y"]
    assert len(rep["degeneracies"]) == 2

    by_name = {d["property"]: d for d in rep["derived"]}
    # a failed representable check never asserts a negative
    assert by_name["locally connected topos"]["holds"] is None
    assert by_name["atomic topos"]["holds"] is None
    assert by_name["presheaf topos"]["holds"] is True
    assert by_name["presheaf topos"]["licensed_by"] == RIGID_EQUIVALENCE
    assert all(
        d["licensed_by"] == SEPARATING
        for d in rep["derived"]
        if d["property"] != "presheaf topos"
    )
    transfers = {t["from"]: t for t in rep["transfers"]}
    assert set(transfers) == {"rigid site"}
    assert transfers["rigid site"]["verified"] is True
    assert transfers["rigid site"]["induced_topology_trivial"] is True
    assert transfers["rigid site"]["licensed_by"] == TRANSFER


def test_report_transfers_on_friendly_sites():
    j2 = named_site("arrow-j2")
    rep = classify_report(j2.category, j2.topology, name="arrow-j2")
    transfers = {t["from"]: t for t in rep["transfers"]}
    assert set(transfers) == {
        "locally connected site", "atomic site", "rigid site",
        "regular site", "coherent site",
    }
    assert all(t["verified"] for t in transfers.values())
    by_name = {d["property"]: d for d in rep["derived"]}
    assert by_name["locally connected topos"]["holds"] is True
    assert by_name["regular topos"]["holds"] is True

    z2s = named_site("z2-atomic")
    rep2 = classify_report(z2s.category, z2s.topology, name="z2-atomic")
    by_name2 = {d["property"]: d for d in rep2["derived"]}
    assert by_name2["atomic topos"]["holds"] is True
    # a group base has no products, so regularity is not licensed either way
    assert by_name2["regular topos"]["holds"] is None


def test_report_is_deterministic_and_mapper_independent():
    from concurrent.futures import ThreadPoolExecutor

    vs = named_site("vee-cover")
    plain = classify_report(vs.category, vs.topology, name="vee-cover")
    again = classify_report(vs.category, vs.topology, name="vee-cover")
    assert plain == again
    with ThreadPoolExecutor(max_workers=4) as pool:
        pooled = classify_report(
            vs.category, vs.topology, name="vee-cover", mapper=pool.map
        )
    assert pooled == plain


def test_report_without_objects_is_a_subset():
    vs = named_site("vee-cover")
    small = classify_report(vs.category, vs.topology, name="vee-cover",
                            include_objects=False)
    assert "objects" not in small and "derived" not in small
    assert "classes" in small and "presheaf_type" in small
