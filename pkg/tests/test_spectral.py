import math

import numpy as np
import pytest

from penner.errors import DomainError, OriginSingular, SingularPhase
from penner.spectral import (
    Regime,
    cloud_vs_theory,
    coulomb_energy,
    coulomb_energy_closed,
    density,
    effective_potential_profile,
    endpoints,
    filling_fractions,
    hausdorff_distance,
    re_phi,
    re_phi_quadrature,
    strong_loop,
    support_for,
    support_mass,
    szego_curve,
    weak_arc,
    winding_number,
)


def test_endpoints():
    am, ap = endpoints(-1.0)
    assert am == ap == 1  # double point: the arc closes
    am, ap = endpoints(0.0)
    assert (am, ap) == (0, 4)  # classical anchor
    am, ap = endpoints(-0.5)
    assert abs(am - (1.5 - math.sqrt(2))) < 1e-14
    assert abs(ap - (1.5 + math.sqrt(2))) < 1e-14
    am, ap = endpoints(-2.0)
    assert am.imag < 0 and abs(ap - am.conjugate()) == 0


def test_density_values():
    assert abs(density(0.0, 2.0) - 1 / (2 * 2 * math.pi) * 2) < 1e-15
    assert density(-1.0, 1.0) == 0.0
    am, _ = endpoints(-0.5)
    assert density(-0.5, am) < 1e-12
    with pytest.raises(OriginSingular):
        density(-0.5, 0)


def test_density_normalization_classical():
    # A = 0: support [0, 4], density sqrt((4-x)/x)/(2 pi) integrates to 1
    theta = np.linspace(0, math.pi, 20001)
    x = 2 + 2 * np.cos(theta)
    w = 2 * np.sin(theta)
    f = np.zeros_like(x)
    inner = slice(1, -1)
    f[inner] = [density(0.0, xx) * ww for xx, ww in zip(x[inner], w[inner])]
    f[-1] = 2 / math.pi  # limit of rho(x) * 2 sin(theta) at x -> 0
    mass = np.trapezoid(f, theta)
    assert abs(mass - 1) < 1e-6


@pytest.mark.parametrize("A", [-2.0, -1 / 0.9, -0.5, -2 / 3])
def test_re_phi_closed_form_vs_path_quadrature(A):
    rng = np.random.default_rng(3)
    am, _ = endpoints(A)
    strip = abs(am.imag) if A < -1 else 1.5
    for _ in range(16):
        z = complex(rng.uniform(-2.0, -0.1), rng.uniform(0.05, 0.9) * strip)
        assert abs(re_phi(A, z) - re_phi_quadrature(A, z)) < 1e-10


def test_weak_arc_geometry():
    sd = weak_arc(0.9, 1024)
    arc = sd.arc_samples
    assert sd.regime is Regime.WEAK_ARC
    assert arc[0] == sd.a_minus and arc[-1] == sd.a_plus
    # on-level to tracing tolerance, conjugation-symmetric
    assert np.max(np.abs(re_phi(sd.A, arc[3:-3]))) < 1e-8
    assert hausdorff_distance(arc, np.conj(arc)) < 1e-10
    with pytest.raises(DomainError):
        weak_arc(1.2)


def test_weak_arc_mass():
    assert abs(support_mass(weak_arc(0.5, 2048))["total"] - 1) < 1e-6


def test_szego_curve_defining_equation():
    sz = szego_curve(512)
    assert np.max(np.abs(np.abs(sz * np.exp(1 - sz)) - 1)) < 1e-12
    assert sz[0] == 1.0  # angle 0
    assert abs(sz[256] - (-0.2784645427610738)) < 1e-10  # angle pi; solves x e^x = 1/e
    with pytest.raises(DomainError):
        szego_curve(4)


def test_strong_loop_level_and_winding():
    sd = strong_loop(2.0, 0.5, 1024)
    loop = sd.loop_samples
    assert np.max(np.abs(re_phi(sd.A, loop) + math.log(0.5))) < 1e-8
    assert winding_number(loop) == 1
    assert sd.interval == (sd.a_minus.real, sd.a_plus.real)


def test_strong_loop_l1_touches_a_minus():
    sd = strong_loop(2.0, 1.0, 1024)
    assert np.min(np.abs(sd.loop_samples - sd.a_minus)) < 1e-12
    assert abs(re_phi(sd.A, sd.a_minus + 1e-9)) < 1e-4  # Re Phi(a_-) = 0


def test_strong_loop_shrinks_with_l():
    radii = [np.max(np.abs(strong_loop(1.5, l, 512).loop_samples)) for l in (0.5, 0.1, 0.02)]
    assert radii[0] > radii[1] > radii[2]
    assert radii[2] < 0.05


def test_support_dispatch():
    assert support_for(0.7, None).regime is Regime.WEAK_ARC
    assert support_for(1.0, None).regime is Regime.SZEGO_CURVE
    assert support_for(2.0, 0.5).regime is Regime.STRONG_LOOP_INTERVAL
    sd = support_for(2.0, 0.0)
    assert sd.regime is Regime.STRONG_DELTA_INTERVAL
    assert sd.point_mass == 0.5
    with pytest.raises(DomainError):
        support_for(-1.0, None)
    with pytest.raises(DomainError):
        support_for(2.0, None)


@pytest.mark.parametrize("t,l", [(0.5, None), (1.5, 0.5), (2.0, 1.0), (4.0, 0.7)])
def test_mass_normalization(t, l):
    masses = support_mass(support_for(t, l, 2048))
    assert abs(masses["total"] - 1) < 1e-4


def test_delta_phase_masses():
    sd = support_for(2.0, 0.0)
    masses = support_mass(sd)
    assert masses["point"] == 0.5
    assert abs(masses["interval"] - 0.5) < 1e-4


def test_filling_fractions_contract():
    ff = filling_fractions(support_for(2.0, 0.5, 2048))
    assert abs(ff.loop_fraction - 0.5) < 1e-4
    assert abs(ff.interval_fraction - 0.5) < 1e-4
    with pytest.raises(DomainError):
        filling_fractions(support_for(0.5, None, 256))


def test_penner_plane_scaling():
    sd = support_for(2.0, 0.5, 512)
    pd = sd.to_penner_plane()
    assert pd.plane == "penner"
    assert abs(pd.a_minus - 2 * sd.a_minus) == 0
    # densities scale by 1/t so masses are invariant
    assert abs(support_mass(pd)["total"] - 1) < 1e-4


def test_coulomb_energy_closed_form_limit():
    assert coulomb_energy_closed(1.0) == 0.0
    assert abs(coulomb_energy_closed(1 + 1e-7)) < 1e-5
    assert abs(coulomb_energy_closed(2.0) - (0.75 - 0.5 * math.log(2))) < 1e-15


def test_coulomb_energy_quadrature_weak():
    e = coulomb_energy(0.5, support_for(0.5, None, 2048))
    assert abs(e - coulomb_energy_closed(0.5)) < 1e-6


def test_coulomb_energy_delta_phase_rejected():
    with pytest.raises(SingularPhase):
        coulomb_energy(2.0, support_for(2.0, 0.0))


def test_effective_potential_l1_gap_vanishes():
    rep = effective_potential_profile(2.0, 1.0, support_for(2.0, 1.0, 2048))
    assert abs(rep.gap) < 1e-4
    assert abs(rep.v_eff_interval - (3 - 2 * math.log(2))) < 1e-4
    assert max(rep.loop_stdev, rep.interval_stdev) < 1e-4


def test_cloud_vs_theory_geometry():
    # synthetic cloud on a known support: distances and piece assignment
    sd = support_for(2.0, 0.5, 1024).to_penner_plane()
    loop_pts = sd.loop_samples[::64]
    interval_pts = np.linspace(sd.interval[0] + 0.1, sd.interval[1] - 0.1, 7) + 0j
    cloud = np.concatenate([loop_pts, interval_pts])
    cc = cloud_vs_theory(cloud, sd)
    assert cc.max_dist < 1e-6
    assert abs(cc.loop_count_fraction - len(loop_pts) / len(cloud)) < 1e-12
    shifted = cloud + 0.03
    cc2 = cloud_vs_theory(shifted, sd)
    assert 0.005 < cc2.max_dist < 0.05


def test_winding_number_synthetic():
    circle = np.exp(2j * np.pi * np.arange(100) / 100)
    assert winding_number(circle) == 1
    assert winding_number(circle[::-1]) == -1
    assert winding_number(circle + 5) == 0


def test_hausdorff_synthetic():
    a = np.array([0 + 0j, 1 + 0j])
    b = np.array([0 + 0.5j, 1 + 0j])
    assert abs(hausdorff_distance(a, b) - 0.5) < 1e-15
