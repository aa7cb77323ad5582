"""Smoke test for the etapair extension module."""

import math

import etapair


def main():
    n, k = 6, 3
    state = etapair.eta_state(n, k)
    assert state.is_normalized()
    assert state.particle_number() == 2 * k
    assert len(state) == math.comb(n, k)

    raw = etapair.eta_power_on_vacuum(n, k)
    assert math.isclose(raw.norm(), math.factorial(k) * math.sqrt(math.comb(n, k)), rel_tol=1e-10)

    corr = etapair.odlro_correlator(state, 0, 4)
    assert abs(corr - etapair.odlro_closed_form(n, k)) < 1e-10

    abc = etapair.two_site_abc(4, 2)
    assert math.isclose(abc.c, 2 / 3)
    assert math.isclose(abc.a + abc.b + abc.c, 1.0)
    assert abc.negativity() > 0 and etapair.is_two_site_entangled(4, 2)
    assert not etapair.is_two_site_entangled(4, 0)
    assert len(abc.matrix()) == 4

    assert etapair.symmetry_defect(4, 2, 2 * math.pi) == 0.0
    assert math.isclose(etapair.symmetry_defect(4, 2, math.pi), 1.0)
    assert etapair.symmetry_defect(4, 0, 1.0) is None
    assert etapair.counter_example_defect(1.3) == 0.0

    flux = etapair.allowed_flux_set("annulus", 1, "natural")
    assert flux.allowed_fluxes == [-1, 0, 1]
    assert math.isclose(flux.flux_quantum, math.pi)
    assert etapair.allowed_flux_set("simply-connected").allowed_fluxes == [0]

    fit = etapair.mass_scan_fit(400, [0.005, 0.01, 0.02, 0.04])
    assert fit.r_squared > 0.99 and 0.125 <= fit.slope <= 0.21

    energy, ground = etapair.hubbard_ground_state(2, 1.0, 8.0)
    assert math.isclose(energy, (8 - math.sqrt(80)) / 2, abs_tol=1e-10)
    assert etapair.spin_correlator(ground, 0, 1)[3] < 0

    e, residual = etapair.eta_eigenstate_residual(4, 1.0, 3.0, 2, math.pi)
    assert math.isclose(e, 6.0) and residual < 1e-10

    try:
        etapair.two_site_abc(3, 7)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("etapair smoke test passed")


if __name__ == "__main__":
    main()
