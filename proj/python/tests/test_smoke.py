import math

import pytest

import errdist


def test_version():
    assert errdist.__version__ == "0.1.0"


def test_kernel_values():
    k = errdist.Kernel("epanechnikov")
    assert k.value(0.0) == pytest.approx(0.75)
    assert k.cdf(1.0) == pytest.approx(1.0)
    with pytest.raises(errdist.ErrdistError):
        errdist.Kernel("gaussian")


def test_bandwidths():
    a, c = errdist.bandwidths(256)
    assert a == pytest.approx(0.25 / math.log(256))
    assert c == pytest.approx(0.25)
    with pytest.raises(errdist.InvalidSize):
        errdist.bandwidths(1)


def test_fit_and_residual_curve():
    err = errdist.ErrorModel("normal", scale=0.5)
    data = errdist.sample_scenario(300, 7, err)
    _, c = errdist.bandwidths(300)
    fit = errdist.LocalPolyFit(data["z"], data["y"], order=2, bandwidth=c)
    res = fit.residuals()
    assert len(res) == 300
    w = fit.smoothing_weights(0.5)
    assert sum(w) / 300 == pytest.approx(1.0, abs=1e-10)
    fstar = errdist.SmoothedEdf(res, errdist.bandwidths(300)[0], "triweight")
    assert 0.0 <= fstar(-0.3) <= fstar(0.0) <= fstar(0.3) <= 1.0
    assert fstar(0.0) == pytest.approx(0.5, abs=0.1)


def test_singular_design_raises():
    fit = errdist.LocalPolyFit([0.5] * 5, [1.0, 2.0, 3.0, 4.0, 5.0], order=1, bandwidth=0.2)
    with pytest.raises(errdist.SingularDesign):
        fit.predict(0.5)


def test_empirical_likelihood():
    e = [-1.0, 0.5, 2.0, -0.3]
    w = errdist.el_weights(e)
    assert sum(w) == pytest.approx(1.0)
    assert sum(p * x for p, x in zip(w, e)) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(errdist.InfeasibleConstraint):
        errdist.el_weights([1.0, 2.0])


def test_variance_formulas():
    n1 = errdist.ErrorModel("normal")
    assert errdist.var_smoothed(n1, 0.0) == pytest.approx(0.25 - 1 / (2 * math.pi))
    assert errdist.variance_gap(n1, 0.3) == pytest.approx(0.0, abs=1e-15)
    u = errdist.ErrorModel("uniform", half_width=1.0)
    assert errdist.var_efficient_meanzero(u, 0.0) == pytest.approx(0.0625)
    with pytest.raises(errdist.InvalidArgument):
        errdist.ErrorModel("student_t", df=4.0)


def test_monte_carlo_is_thread_independent():
    err = errdist.ErrorModel("normal")
    a = errdist.run_monte_carlo(80, 8, err, t_grid=[0.0], threads=1)
    b = errdist.run_monte_carlo(80, 8, err, t_grid=[0.0], threads=3)
    assert a == b
    assert {r["estimator"] for r in a["rows"]} == {
        "oracle_edf", "residual_edf", "smoothed", "meanzero_corrected", "empirical_likelihood"}
