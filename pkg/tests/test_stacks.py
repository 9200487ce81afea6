import math

import numpy as np
import pytest

from octfield.geometry import relocate, relocate_inverse
from octfield.stacks import QuarterSphereStack, stack_degree_table
from octfield.topology import SECTORS, sector_name


def table_by_name(stack, axis):
    return {sector_name(s): v for s, v in stack_degree_table(stack, axis).items() if v}


def test_radii_are_geometric():
    st = QuarterSphereStack(3, 0.05)
    assert st.radius(0) == 0
    assert st.radius(3) == pytest.approx(0.05)
    assert st.radius(2) / st.radius(1) == pytest.approx(1 / 0.05)


def test_odd_layer_real_ray_stays_real_and_negative():
    st = QuarterSphereStack(1, 0.05)
    vals = st.layer_value(1, np.linspace(0.001, 0.05, 9) + 0j)
    assert np.max(np.abs(vals.imag)) == 0
    assert np.all(vals.real < 0)


def test_layer_modulus_at_outer_seam():
    st = QuarterSphereStack(2, 0.05)
    for m in (1, 2):
        val = st.layer_value(m, st.radius(m) * np.exp(0.3j))
        expected = 1 / math.sqrt(0.05) if m % 2 else st.radius(m - 1) / (
            math.sqrt(0.05) * st.radius(m)
        )
        assert abs(complex(val)) == pytest.approx(expected)


def test_interpolant_matches_neighbors_at_annulus_edges():
    st = QuarterSphereStack(3, 0.05)
    for n in (1, 2):
        u_in = st.radius(n) * np.exp(1j * np.linspace(0.05, 1.5, 7))
        u_out = 2 * st.radius(n) * np.exp(1j * np.linspace(0.05, 1.5, 7))
        np.testing.assert_allclose(
            st.interpolant_value(n, u_in), st.layer_value(n, u_in), rtol=1e-12
        )
        np.testing.assert_allclose(
            st.interpolant_value(n, u_out), st.layer_value(n + 1, u_out), rtol=1e-12
        )


def test_interpolant_real_on_real_axis():
    st = QuarterSphereStack(2, 0.05)
    u = np.linspace(st.radius(1) * 1.01, st.radius(1) * 1.99, 11) + 0j
    vals = st.interpolant_value(1, u)
    assert np.max(np.abs(vals.imag)) < 1e-14


def test_stack_axes_reality():
    st = QuarterSphereStack(3, 0.06)
    t = np.linspace(1e-7, 0.06, 40)
    real_vals = st.evaluate(t + 0j)
    imag_vals = st.evaluate(1j * t)
    assert np.max(np.abs(real_vals.imag)) < 1e-13
    assert np.max(np.abs(imag_vals.real)) < 1e-13


def test_z_stack_table_single_layer():
    st = QuarterSphereStack(1, 0.05)
    assert table_by_name(st, "z") == {"--+": -1, "---": -1}


def test_z_stack_table_counts():
    st = QuarterSphereStack(4, 0.05)
    assert table_by_name(st, "z") == {"--+": -2, "---": -2, "+++": 2, "++-": 2}


def test_x_stack_table_single_layer():
    st = QuarterSphereStack(1, 0.05)
    assert table_by_name(st, "x") == {"+--": -1, "---": -1}


def test_y_stack_table_single_layer():
    st = QuarterSphereStack(1, 0.05)
    assert table_by_name(st, "y") == {"-+-": -1, "---": -1}


def test_x_stack_table_matches_measured_degrees():
    # numerical pin of the relocation convention: a single conformal layer
    # moved to the x vertex covers (+--) and (---) once, negatively
    eps = 0.05
    st = QuarterSphereStack(1, eps)

    from octfield.numerics import degree_differences_by_winding
    from octfield.geometry import sector_centroid_complex
    from octfield.rational import boundary_points

    params = np.linspace(0, 3, 2400, endpoint=False)

    def curve(p):
        u = eps * boundary_points(p)  # boundary of the quarter-disc chart
        return relocate("x", st.evaluate(u))

    targets = [sector_centroid_complex(s) for s in SECTORS]
    ref = sector_centroid_complex((1, 1, 1))
    diffs = degree_differences_by_winding(curve, params, targets, ref, 3.0)
    # conformal single covering of one sector pair: signed degrees sum to +2
    anchor = (2 - sum(diffs)) // 8
    degrees = {sector_name(s): d + anchor for s, d in zip(SECTORS, diffs)}
    measured_w = {name: -d for name, d in degrees.items() if d}
    assert measured_w == {"+--": -1, "---": -1}


def test_case2c_x_variant_table():
    # k = (1,1,3), n = 1: M_x = 2 k_y + 2(k_z - n - 1) = 4, special = 2
    st = QuarterSphereStack(4, 0.05, "case2c_x", special_layers=2)
    ky, n, kz = 1, 1, 3
    expected = {}
    for sz in ("+", "-"):
        expected[f"+-{sz}"] = expected[f"--{sz}"] = -ky + (n - kz + 1)
        expected[f"++{sz}"] = expected[f"-+{sz}"] = n - kz + 1
    # table form: (pm,-,-) -> -k_y + (n-k_z+1); (pm,+,-) -> n-k_z+1; (pm,+,+) -> k_y
    table = table_by_name(st, "x")
    assert table == {
        "+--": -2, "---": -2,
        "++-": -1, "-+-": -1,
        "+++": 1, "-++": 1,
    }


def test_case2c_y_variant_table():
    # k = (1,1,3), n = 1: M_y = 2(n - k_y) + 1 = 1, special = 2(n-kx-ky+1) = 0
    st = QuarterSphereStack(1, 0.05, "case2c_y", special_layers=0)
    assert table_by_name(st, "y") == {"-+-": -1, "---": -1}


def test_case2c_y_special_layers_cover_positively():
    # synthetic instance of the variant degree table with kx = 1 and one
    # special pair: (+,pm,+) and (-,pm,+) gain one positive covering, the
    # standard tail covers (-,pm,-) negatively
    st = QuarterSphereStack(3, 0.05, "case2c_y", special_layers=2)
    table = table_by_name(st, "y")
    assert table == {"+++": 1, "+-+": 1, "-++": 1, "--+": 1, "-+-": -1, "---": -1}


def test_general_sign_flips_move_covered_pairs():
    st = QuarterSphereStack(1, 0.05, conf_flip=-1)
    assert table_by_name(st, "z") == {"+++": -1, "++-": -1}


def test_invalid_stack_parameters():
    with pytest.raises(ValueError):
        QuarterSphereStack(0, 0.05)
    with pytest.raises(ValueError):
        QuarterSphereStack(2, 0.2)
    with pytest.raises(ValueError):
        QuarterSphereStack(2, 0.05, "case2c_x", special_layers=3)
    with pytest.raises(ValueError):
        QuarterSphereStack(2, 0.05, special_layers=2)
