import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bisa_mech.core import (
    ArcState,
    BlsModel,
    ChamberStack,
    DomainError,
    LoadCase,
    Material,
    RectSection,
    derive_section,
    shear_modulus,
)


class TestSection:
    def test_unit_square(self):
        s = derive_section(1.0, 1.0)
        assert s.inertia == pytest.approx(1 / 12, rel=1e-15)
        assert s.torsion_inertia == pytest.approx(1 / 6, rel=1e-15)

    def test_four_mm(self):
        assert derive_section(0.004, 1.0).inertia == pytest.approx(2.1333333e-11, rel=1e-7)

    def test_aspect_two(self):
        s = derive_section(1.0, 2.0)
        assert s.inertia == pytest.approx(2 / 12, rel=1e-15)
        assert s.torsion_inertia == pytest.approx(2 / 12 * 5, rel=1e-15)
        assert s.height == 2.0

    @pytest.mark.parametrize("width,ratio,field", [(0.0, 1.0, "width"), (-1.0, 1.0, "width"),
                                                   (1.0, 0.0, "aspect_ratio"), (1.0, -2.0, "aspect_ratio")])
    def test_rejects_non_positive(self, width, ratio, field):
        with pytest.raises(DomainError) as err:
            derive_section(width, ratio)
        assert err.value.field == field

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(DomainError):
            RectSection(bad, 1.0)
        with pytest.raises(DomainError):
            RectSection(1.0, bad)

    @given(st.floats(1e-4, 1.0), st.floats(0.05, 20.0))
    def test_torsion_ratio_exact(self, b, lam):
        s = RectSection(b, lam)
        assert s.torsion_inertia - s.inertia * (1 + lam * lam) == 0.0


class TestMaterial:
    def test_shear_nu_zero(self):
        assert shear_modulus(Material(2.0, 0.0)) == 1.0

    def test_shear_pla(self):
        assert shear_modulus(Material(2.7e9, 0.35)) == pytest.approx(1e9, rel=1e-15)

    def test_incompressible_limit(self):
        assert shear_modulus(Material(1.0, 0.5 - 1e-12)) == pytest.approx(1 / 3, rel=1e-9)

    @pytest.mark.parametrize("e,nu", [(0.0, 0.3), (-1.0, 0.3), (1.0, -0.1), (1.0, 0.5), (math.nan, 0.3), (1.0, math.inf)])
    def test_invalid(self, e, nu):
        with pytest.raises(DomainError):
            Material(e, nu)


def _bls(**kw):
    base = dict(material=Material(1.0, 0.35), section=RectSection(1.0, 1.0), arc_length=1.0,
                structure_height=0.01, segment_length=0.1, segment_count=10, pretension=10.0)
    base.update(kw)
    return BlsModel(**base)


class TestModels:
    @pytest.mark.parametrize("kw", [dict(arc_length=0.0), dict(structure_height=-1.0), dict(segment_length=0.0),
                                    dict(segment_count=1), dict(segment_count=2.5), dict(pretension=-1.0),
                                    dict(arc_length=math.nan)])
    def test_bls_invariants(self, kw):
        with pytest.raises(DomainError):
            _bls(**kw)

    def test_flexural_scale_rescale(self):
        m = _bls().with_flexural_scale(2.5)
        assert m.flexural_scale == pytest.approx(2.5, rel=1e-15)
        assert m.calibrated

    @pytest.mark.parametrize("kw", [dict(chamber_count=1), dict(half_width=0.0), dict(half_height=-1.0),
                                    dict(contact_moment_area=-1.0), dict(restoring_moment=-1.0),
                                    dict(tendon_critical_moment=math.inf)])
    def test_stack_invariants(self, kw):
        base = dict(half_width=1.0, half_height=1.0)
        base.update(kw)
        with pytest.raises(DomainError):
            ChamberStack(**base)

    def test_stack_default_count(self):
        assert ChamberStack(1.0, 1.0).chamber_count == 9

    def test_load_case(self):
        with pytest.raises(DomainError):
            LoadCase(-1.0, 0.0)
        with pytest.raises(DomainError):
            LoadCase(0.0, math.nan)


class TestArcState:
    @given(st.floats(1e-6, math.pi), st.floats(1e-3, 10.0))
    def test_round_trip(self, alpha, c):
        arc = ArcState.from_angle(alpha, c)
        assert arc.radius * arc.angle == pytest.approx(c, rel=1e-12)

    def test_straight(self):
        arc = ArcState.from_angle(0.0, 0.1)
        assert math.isinf(arc.radius)

    def test_rejects(self):
        with pytest.raises(DomainError):
            ArcState(-0.1, 1.0)
        with pytest.raises(DomainError):
            ArcState(0.5, math.inf)
        with pytest.raises(DomainError):
            ArcState(0.5, math.nan)
