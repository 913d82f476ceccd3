import numpy as np
import pytest

import kreinindex as ki
from kreinindex.errors import ConfigError

from conftest import PARAMS, PT2, ZERO, make_fd


def test_assemble_h_unit_stencil():
    # X = 2, n = 3 gives h = 1; V = 0, b = c = 1
    g = ki.Grid(half_width=2.0, n_interior=3)
    m = ki.assemble_h(ZERO, PARAMS, g)
    np.testing.assert_allclose(m.diagonal, [3.0, 3.0, 3.0])
    np.testing.assert_allclose(m.off_diagonal, [-1.0, -1.0])


def test_assemble_h_scaled_zero_matches_free():
    g = ki.Grid(half_width=5.0, n_interior=50)
    free = ki.assemble_h(ZERO, PARAMS, g)
    scaled = ki.assemble_h(ki.Scaled(PT2, 0.0), PARAMS, g)
    np.testing.assert_array_equal(free.diagonal, scaled.diagonal)
    np.testing.assert_array_equal(free.off_diagonal, scaled.off_diagonal)


def test_poschl_teller_spectrum_oracle():
    case = make_fd(PT2, n=1999)
    below = case.spectrum.eigenvalues[case.spectrum.eigenvalues < PARAMS.b ** 2]
    assert below.size == 2
    assert below[0] == pytest.approx(-3.0, abs=1e-3)
    assert below[1] == pytest.approx(0.0, abs=1e-3)


def test_free_matrix_positive_definite():
    case = make_fd(ZERO, n=500)
    assert case.spectrum.eigenvalues[0] >= PARAMS.b ** 2 - 1e-12


def test_eigenvalue_refinement_second_order():
    # halving h shrinks the ground-state error by ~4x
    e_exact = -3.0
    err = []
    for n in (1000, 2000):
        case = make_fd(PT2, n=n)
        err.append(abs(case.spectrum.eigenvalues[0] - e_exact))
    ratio = err[0] / err[1]
    assert 3.0 < ratio < 5.0


def test_assemble_d_antisymmetric_exactly():
    g = ki.Grid(half_width=5.0, n_interior=40)
    dense = ki.assemble_d(g).to_dense()
    np.testing.assert_array_equal(dense + dense.T, np.zeros_like(dense))


def test_assemble_d_constant_vector_boundary_residual():
    g = ki.Grid(half_width=5.0, n_interior=40)
    out = ki.assemble_d(g).matvec(np.ones(40))
    h = g.spacing
    assert out[0] == pytest.approx(1.0 / (2 * h))
    assert out[-1] == pytest.approx(-1.0 / (2 * h))
    np.testing.assert_allclose(out[1:-1], 0.0, atol=1e-15)


def test_derivative_consistency_sine():
    errs = []
    for n in (400, 800):
        g = ki.Grid(half_width=10.0, n_interior=n)
        x = g.nodes
        u = np.sin(np.pi * x / 10.0)
        exact = (np.pi / 10.0) * np.cos(np.pi * x / 10.0)
        # interior only: the ghost-zero ends see the sine's nonzero slope
        got = ki.apply_derivative(g, u)
        errs.append(np.max(np.abs(got - exact)[1:-1]))
    assert errs[0] / errs[1] > 3.0


def test_apply_derivative_zero_and_shape():
    g = ki.Grid(half_width=5.0, n_interior=30)
    np.testing.assert_array_equal(ki.apply_derivative(g, np.zeros(30)), np.zeros(30))
    with pytest.raises(ConfigError):
        ki.apply_derivative(g, np.zeros(29))


def test_apply_derivative_gaussian_oracle():
    g = ki.Grid(half_width=8.0, n_interior=1600)
    x = g.nodes
    u = x * np.exp(-(x ** 2))
    exact = (1.0 - 2.0 * x ** 2) * np.exp(-(x ** 2))
    got = ki.apply_derivative(g, u)
    # central difference error ~ h^2/6 |f'''|, |f'''| <= 6 here
    assert np.max(np.abs(got - exact)) < 1.2 * g.spacing ** 2


def test_apply_derivative_parity():
    g = ki.Grid(half_width=6.0, n_interior=101)
    x = g.nodes
    even = np.exp(-(x ** 2))
    out = ki.apply_derivative(g, even)
    np.testing.assert_allclose(out, -out[::-1], atol=1e-14)


def test_derivative_inner_product_antisymmetry():
    rng = np.random.default_rng(3)
    g = ki.Grid(half_width=5.0, n_interior=64)
    d = ki.assemble_d(g)
    for _ in range(5):
        u = rng.standard_normal(64)
        v = rng.standard_normal(64)
        assert np.dot(d.matvec(u), v) == pytest.approx(-np.dot(u, d.matvec(v)), abs=1e-12)


def test_grid_validation():
    with pytest.raises(ConfigError):
        ki.Grid(half_width=-1.0, n_interior=10)
    with pytest.raises(ConfigError):
        ki.Grid(half_width=1.0, n_interior=2)
    g = ki.Grid(half_width=20.0, n_interior=1999)
    assert g.spacing == pytest.approx(0.02)
    assert g.nodes[0] == pytest.approx(-20.0 + g.spacing)
