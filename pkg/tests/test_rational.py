import math
import random

import numpy as np
import pytest

from octfield.rational import (
    ConstructionError,
    InvalidSpecError,
    RationalMapSpec,
    evaluate_rational,
    measure_wrapping_rational,
    predict_invariants,
    realize,
)
from octfield.rational import _spread
from octfield.topology import (
    OctantTopology,
    invariants_from_wrapping,
    wrapping_from_invariants,
)


def test_identity_spec_is_identity():
    spec = RationalMapSpec()
    w = 0.3 + 0.2j
    assert evaluate_rational(spec, w) == w


def test_unit_modulus_on_arc():
    spec = RationalMapSpec(
        m=2,
        real_factors=((0.4, 1), (0.52, -1)),
        imag_factors=((0.35, -1),),
    )
    phis = np.linspace(0, math.pi / 2, 100)
    vals = evaluate_rational(spec, np.exp(1j * phis))
    assert np.max(np.abs(np.abs(vals) - 1)) < 1e-10


def test_real_on_real_axis_and_endpoint_sign():
    spec = RationalMapSpec(real_factors=((0.5, 1),))
    t = np.linspace(0, 1, 101)
    vals = evaluate_rational(spec, t + 0j)
    assert np.max(np.abs(vals.imag)) < 1e-12
    assert complex(evaluate_rational(spec, 1.0 + 0j)) in (1 + 0j, -1 + 0j)


def test_imaginary_axis_maps_to_imaginary():
    spec = RationalMapSpec(m=1, imag_factors=((0.3, 1),))
    t = np.linspace(0.01, 0.99, 50)
    vals = evaluate_rational(spec, 1j * t)
    assert np.max(np.abs(vals.real)) < 1e-12


def test_parameter_collision_rejected():
    with pytest.raises(InvalidSpecError):
        RationalMapSpec(real_factors=((0.4, 1), (0.4, -1)))


def test_pole_evaluates_to_infinity():
    spec = RationalMapSpec(real_factors=((0.4, -1),))
    assert np.isinf(evaluate_rational(spec, 0.4 + 0j))


def test_degree_counts_parameters():
    spec = RationalMapSpec(
        m=-2,
        real_factors=((0.3, 1),),
        imag_factors=((0.4, -1), (0.5, 1)),
        complex_factors=((0.3 * np.exp(0.9j), 1),),
    )
    assert spec.degree() == 3 + 2 + 4 + 4


def test_predictor_matches_measurement_on_random_specs():
    rng = random.Random(99)
    for _ in range(60):
        m = rng.randint(-2, 2)
        a = rng.randint(0, 2)
        b = rng.randint(0, 2)
        spec = RationalMapSpec(
            sign=rng.choice((1, -1)),
            m=m,
            real_factors=tuple(zip(_spread(a), (rng.choice((1, -1)) for _ in range(a)))),
            imag_factors=tuple(zip(_spread(b), (rng.choice((1, -1)) for _ in range(b)))),
            orientation=rng.choice(("conformal", "anticonformal")),
        )
        predicted = predict_invariants(spec)
        measured = invariants_from_wrapping(measure_wrapping_rational(spec))
        assert (predicted.e, predicted.k, predicted.omega_units) == (
            measured.e,
            measured.k,
            measured.omega_units,
        )


def test_cubic_power_invariants():
    t = predict_invariants(RationalMapSpec(m=1))
    assert (t.e, t.k, t.omega_units) == ((1, -1, 1), (0, 0, -1), -3)


def test_realize_identity_class():
    spec = realize(OctantTopology((1, 1, 1), (0, 0, 0), -1))
    assert spec.degree() == 1
    assert spec.orientation == "conformal"


def test_realize_bulk_classes_match_wrapping():
    classes = [
        OctantTopology((-1, 1, 1), (1, 0, 0), 5),    # worked-example bulk
        OctantTopology((1, -1, 1), (0, 0, 0), 1),    # special-case bulk
        OctantTopology((1, 1, 1), (1, 1, 1), 11),    # comparison-fixture bulk
        OctantTopology((-1, -1, 1), (0, 0, 1), 3),   # d-template bulk
    ]
    for t in classes:
        spec = realize(t)
        assert measure_wrapping_rational(spec).values == wrapping_from_invariants(t).values


def test_realize_rejects_nonconformal():
    with pytest.raises(ConstructionError):
        realize(OctantTopology((1, 1, 1), (1, 1, 1), 3))
