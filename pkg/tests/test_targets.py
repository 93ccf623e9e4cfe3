# tests/test_targets.py
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate
from scipy.stats import multivariate_normal

from src.targets.base import ScaledTarget
from src.targets.checks import hessian_finite_diff_check, score_finite_diff_check
from src.targets.gaussian import GaussianTarget
from src.targets.logistic import LogisticPosterior
from src.targets.mixture import MixtureTarget, three_mode_1d_mixture
from src.targets.rosenbrock import RosenbrockTarget
from src.targets.uci import load_uci_csv
from src.utils.errors import ConfigError, DataError, DomainError, NumericalError

_rng = np.random.default_rng(17)
LOGISTIC = LogisticPosterior(_rng.normal(size=(20, 2)), np.where(_rng.uniform(size=20) < 0.5, -1.0, 1.0))

weights = st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=3, max_size=3)


@pytest.fixture
def logistic_target(rng):
    features = rng.normal(size=(20, 3))
    labels = np.where(rng.uniform(size=20) < 0.5, -1.0, 1.0)
    return LogisticPosterior(features, labels, prior_variance=2.0)


def write_csv(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


#-------------------------------
# Gaussian
#-------------------------------
def test_gaussian_log_density_matches_scipy(illustration_target, rng):
    x = rng.normal(size=(10, 2))
    expected = multivariate_normal(mean=[0.0, 0.0], cov=[[0.8, 0.4], [0.4, 0.8]]).logpdf(x)
    np.testing.assert_allclose(illustration_target.log_density(x), expected, rtol=1e-12, atol=1e-12)


def test_gaussian_single_point_returns_scalar(illustration_target):
    value = illustration_target.log_density(np.array([0.1, 0.2]))
    assert isinstance(value, float)
    assert illustration_target.score(np.array([0.1, 0.2])).shape == (2,)


def test_gaussian_rejects_bad_covariance():
    with pytest.raises(NumericalError):
        GaussianTarget([0.0, 0.0], [[1.0, 0.5], [0.4, 1.0]])
    with pytest.raises(NumericalError):
        GaussianTarget([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])


def test_gaussian_hessian_is_negative_precision(illustration_target):
    hess = illustration_target.hessian(np.zeros((3, 2)))
    assert hess.shape == (3, 2, 2)
    np.testing.assert_allclose(hess[0], -np.linalg.inv([[0.8, 0.4], [0.4, 0.8]]), rtol=1e-12)


#-------------------------------
# score and Hessian finite differences
#-------------------------------
@pytest.mark.parametrize("target", [
    GaussianTarget([0.0, 0.0], [[0.8, 0.4], [0.4, 0.8]]),
    RosenbrockTarget(),
    RosenbrockTarget(a=2.0, b=0.5, mu=-0.5),
    three_mode_1d_mixture(),
    MixtureTarget.from_moments([0.5, 0.5], [[-1.0, 0.0], [1.0, 1.0]], [np.eye(2), [[0.5, 0.1], [0.1, 0.3]]]),
], ids=["gaussian", "rosenbrock", "rosenbrock_ab", "mixture_1d", "mixture_2d"])
def test_score_and_hessian_match_finite_differences(target, rng):
    for _ in range(5):
        point = 0.8 * rng.normal(size=target.dim)
        assert score_finite_diff_check(target, point) < 1e-6
        assert hessian_finite_diff_check(target, point) < 1e-6


def test_logistic_score_and_hessian_match_finite_differences(logistic_target, rng):
    point = 0.5 * rng.normal(size=logistic_target.dim)
    assert score_finite_diff_check(logistic_target, point) < 1e-6
    assert hessian_finite_diff_check(logistic_target, point) < 1e-6


def test_finite_diff_check_rejects_bad_step(illustration_target):
    with pytest.raises(DomainError):
        score_finite_diff_check(illustration_target, [0.0, 0.0], h=0.0)
    with pytest.raises(DomainError):
        score_finite_diff_check(illustration_target, [np.nan, 0.0])


#-------------------------------
# normalizers
#-------------------------------
@pytest.mark.parametrize("a,b,mu", [(1.0, 1.0, 1.0), (2.0, 0.5, -0.5)])
def test_rosenbrock_normalizer_matches_quadrature(a, b, mu):
    target = RosenbrockTarget(a=a, b=b, mu=mu)
    half_width = 8.0 / np.sqrt(a)
    value, _ = integrate.dblquad(
        lambda x2, x1: np.exp(-a * (x1 - mu) ** 2 - b * (x2 - x1 ** 2) ** 2),
        mu - half_width, mu + half_width,
        lambda x1: x1 ** 2 - 8.0 / np.sqrt(b), lambda x1: x1 ** 2 + 8.0 / np.sqrt(b),
        epsabs=1e-12, epsrel=1e-10,
    )
    assert abs(np.log(value) - target.log_normalizer) < 1e-6


def test_rosenbrock_rejects_non_positive_parameters():
    with pytest.raises(DomainError):
        RosenbrockTarget(a=0.0)


def test_three_mode_mixture_integrates_to_one():
    target = three_mode_1d_mixture()
    value, _ = integrate.quad(lambda x: np.exp(target.log_density(np.array([x]))), -20.0, 20.0, limit=200,
                              epsabs=1e-12, epsrel=1e-12)
    assert abs(value - 1.0) < 1e-8


def test_mixture_log_density_stays_finite_far_out():
    target = three_mode_1d_mixture()
    values = target.log_density(np.array([[1e3], [-1e3]]))
    assert np.isfinite(values).all()
    assert np.isfinite(target.score(np.array([[1e3], [-1e3]]))).all()


def test_mixture_weights_must_lie_on_simplex():
    with pytest.raises(DomainError):
        MixtureTarget.from_moments([0.6, 0.6], [[0.0], [1.0]], [[[1.0]], [[1.0]]])
    with pytest.raises(DomainError):
        MixtureTarget.from_moments([1.2, -0.2], [[0.0], [1.0]], [[[1.0]], [[1.0]]])


def test_scaled_target_shifts_log_density_only(illustration_target, rng):
    scaled = ScaledTarget(illustration_target, np.log(3.0))
    x = rng.normal(size=(4, 2))
    np.testing.assert_allclose(scaled.log_density_unnorm(x), illustration_target.log_density_unnorm(x) + np.log(3.0))
    np.testing.assert_array_equal(scaled.score(x), illustration_target.score(x))
    np.testing.assert_allclose(scaled.log_density(x), illustration_target.log_density(x), atol=1e-12)


#-------------------------------
# logistic posterior
#-------------------------------
def test_logistic_posterior_has_no_normalizer(logistic_target):
    assert logistic_target.dim == 4
    with pytest.raises(DomainError):
        logistic_target.log_density(np.zeros(4))


def test_logistic_rejects_bad_inputs(rng):
    with pytest.raises(DataError):
        LogisticPosterior(rng.normal(size=(5, 2)), [0, 1, 1, 0, 1])
    with pytest.raises(DataError):
        LogisticPosterior(rng.normal(size=(5, 2)), [1, -1, 1])
    with pytest.raises(DomainError):
        LogisticPosterior(rng.normal(size=(2, 2)), [1, -1], prior_variance=0.0)


def test_logistic_predict_proba(logistic_target, rng):
    proba = logistic_target.predict_proba(rng.normal(size=(7, 3)), rng.normal(size=(16, 4)))
    assert proba.shape == (7,)
    assert np.all((proba >= 0.0) & (proba <= 1.0))


@given(x=weights, y=weights, t=st.floats(min_value=0.0, max_value=1.0))
def test_logistic_posterior_is_log_concave_along_segments(x, y, t):
    x, y = np.array(x), np.array(y)
    mixed = LOGISTIC.log_density_unnorm(t * x + (1.0 - t) * y)
    chord = t * LOGISTIC.log_density_unnorm(x) + (1.0 - t) * LOGISTIC.log_density_unnorm(y)
    assert mixed >= chord - 1e-9 * (1.0 + abs(chord))


def test_logistic_log_density_is_stable_for_large_margins(logistic_target):
    assert np.isfinite(logistic_target.log_density_unnorm(np.full(4, 1e4)))


#-------------------------------
# dataset loading
#-------------------------------
def _rows(n, rng, constant=True):
    lines = []
    for i in range(n):
        a, b = rng.normal(size=2)
        label = "pos" if i % 2 else "neg"
        lines.append(f"{a:.6f},{b:.6f}," + ("1.0," if constant else "") + label)
    return lines


def test_load_uci_csv_with_header(tmp_path, rng):
    path = write_csv(tmp_path / "toy.csv", ["a,b,c,label"] + _rows(40, rng))
    split = load_uci_csv(path, split_seed=3)
    assert split.label_tokens == ("neg", "pos")
    assert split.dropped_columns == ["c"]
    assert split.warnings
    assert split.feature_names == ["a", "b"]
    assert split.train_features.shape == (32, 2)
    assert split.test_features.shape == (8, 2)
    assert set(np.unique(split.train_labels)) <= {-1.0, 1.0}
    np.testing.assert_allclose(split.train_features.mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(split.train_features.std(axis=0), 1.0, rtol=1e-12)
    assert split.posterior().dim == 3


def test_load_uci_csv_is_deterministic(tmp_path, rng):
    path = write_csv(tmp_path / "toy.csv", _rows(30, rng, constant=False))
    first, second = load_uci_csv(path, split_seed=7), load_uci_csv(path, split_seed=7)
    np.testing.assert_array_equal(first.train_features, second.train_features)
    np.testing.assert_array_equal(first.test_labels, second.test_labels)
    assert first.feature_names == ["x0", "x1"]


def test_load_uci_csv_reports_bad_cell(tmp_path, rng):
    lines = ["a,b,label"] + _rows(10, rng, constant=False)
    lines[4] = "abc,0.5,pos"
    path = write_csv(tmp_path / "bad.csv", lines)
    with pytest.raises(DataError, match="row 5"):
        load_uci_csv(path)


def test_load_uci_csv_needs_two_classes(tmp_path):
    path = write_csv(tmp_path / "three.csv", ["0.1,0.2,a", "0.3,0.4,b", "0.5,0.6,c", "0.7,0.8,a"])
    with pytest.raises(DataError, match="two values"):
        load_uci_csv(path)


def test_load_uci_csv_single_class_training_split(tmp_path):
    path = write_csv(tmp_path / "tiny.csv", ["0.1,0.2,0", "0.3,0.4,1"])
    with pytest.raises(DataError, match="single class"):
        load_uci_csv(path, test_fraction=0.5)


def test_load_uci_csv_rejects_bad_fraction(tmp_path, rng):
    path = write_csv(tmp_path / "toy.csv", _rows(10, rng, constant=False))
    with pytest.raises(ConfigError):
        load_uci_csv(path, test_fraction=1.0)
