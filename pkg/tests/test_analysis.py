import numpy as np
import pytest

from softplanes import catalog
from softplanes.analysis import (axis_elations, central_collineations, full_axial_elations,
                                 group_invariants, noniso_certificate, proposition_battery)
from softplanes.plane import build_desarguesian, projective_linear_group

from conftest import fixture_plane


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_desarguesian_translation_group(q):
    T = full_axial_elations(build_desarguesian(q), 0)
    assert T.order == q * q
    assert T.transitive_off_axis()


def test_pgl32_central_collineations():
    # in PGL(3,2) the 21 involutions are the nontrivial elations; n-1 = 1 leaves no homologies
    H = projective_linear_group(build_desarguesian(2))
    el, hom = central_collineations(H)
    orders = H.carrier.element_orders()
    assert set(el) == set(np.flatnonzero(orders == 2).tolist())
    assert len(el) == 21 and not hom


@pytest.mark.parametrize("name", ["heis2", "heis3", "heis4"])
def test_axis_elations_of_heisenberg_plane(name):
    t, plane, action = fixture_plane(name)
    gam = axis_elations(action, 0)
    assert gam.order == t.n ** 2
    assert set(gam.ids.tolist()) == set(t.BM.members.tolist())


@pytest.mark.parametrize("name", ["heis2", "heis3", "heis4", "heis5"])
def test_battery_has_no_contradictions(name):
    t, plane, action = fixture_plane(name)
    rep = proposition_battery(t, plane, action)
    assert rep.ok, rep.format()
    assert rep["M normal: A∩B = 1, |G| = n³, unique amb"].status == "verified"


def test_battery_marks_vacuous_items():
    t, plane, action = fixture_plane("heis3")
    rep = proposition_battery(t, plane, action)
    assert rep["n ≡ 2 (mod 4) forces n = 2"].status == "vacuous"


def test_noniso_certificates():
    d8, q8 = catalog.dihedral(4), catalog.quaternion()
    cert = noniso_certificate(d8, q8)
    assert cert is not None and cert["invariant"] == "element orders"
    assert noniso_certificate(d8, catalog.dihedral(4)) is None
    z8 = catalog.cyclic(8)
    assert noniso_certificate(d8, z8)["invariant"] == "abelian"
    assert dict(group_invariants(z8))["abelian"] is True
