# tests/test_families.py
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import multivariate_normal

from src.families import reparameterize
from src.families.diagonal import DiagGaussianParams
from src.families.gaussian import GaussianParams
from src.families.mixture import MixtureParams, init_mixture
from src.families.noise import NoiseBatch, noise_array
from src.families.serialization import dump_params, load_params, params_from_dict
from src.utils.errors import ConfigError, NumericalError
from tests.helpers import random_scale

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


#-------------------------------
# noise
#-------------------------------
def test_noise_is_reproducible_per_stream():
    first = NoiseBatch.draw(7, 3, 16, 2)
    again = NoiseBatch.draw(7, 3, 16, 2)
    other = NoiseBatch.draw(7, 4, 16, 2)
    np.testing.assert_array_equal(first.z, again.z)
    assert not np.array_equal(first.z, other.z)
    assert (first.n_samples, first.dim) == (16, 2)
    assert not first.z.flags.writeable


def test_noise_rejects_bad_arguments():
    with pytest.raises(ValueError):
        NoiseBatch.draw(-1, 0, 4, 2)
    with pytest.raises(ValueError):
        NoiseBatch.draw(0, 0, 0, 2)


def test_noise_array_accepts_raw_arrays():
    assert noise_array([1.0, 2.0]).shape == (1, 2)


#-------------------------------
# full Gaussian
#-------------------------------
@given(seed=seeds)
def test_gaussian_log_density_and_score_match_scipy(seed):
    rng = np.random.default_rng(seed)
    scale = random_scale(rng, 3)
    mean = rng.normal(size=3)
    params = GaussianParams(mean=mean, scale=scale)
    x = rng.normal(size=(5, 3))
    cov = scale @ scale.T
    np.testing.assert_allclose(params.log_density(x), multivariate_normal(mean, cov).logpdf(x), rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(params.score(x), -(x - mean) @ np.linalg.inv(cov), rtol=1e-8, atol=1e-9)
    np.testing.assert_allclose(params.hessian(), -np.linalg.inv(cov), rtol=1e-8, atol=1e-9)


def test_gaussian_sample_is_row_convention(gaussian_params, noise):
    x = gaussian_params.sample(noise)
    np.testing.assert_array_equal(x, gaussian_params.mean + noise.z @ gaussian_params.scale.T)
    np.testing.assert_array_equal(reparameterize(gaussian_params, noise), x)
    np.testing.assert_allclose(gaussian_params.whiten(x), noise.z, atol=1e-12)


def test_gaussian_sample_moments(gaussian_params):
    x = gaussian_params.sample(NoiseBatch.draw(1, 0, 400_000, 2))
    np.testing.assert_allclose(x.mean(axis=0), gaussian_params.mean, atol=0.01)
    np.testing.assert_allclose(np.cov(x, rowvar=False), gaussian_params.covariance, atol=0.015)


def test_gaussian_rejects_singular_and_non_finite():
    with pytest.raises(NumericalError):
        GaussianParams(mean=[0.0, 0.0], scale=[[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(NumericalError):
        GaussianParams(mean=[np.nan, 0.0], scale=np.eye(2))


def test_gaussian_rejects_mismatched_noise(gaussian_params):
    with pytest.raises(ValueError):
        gaussian_params.sample(np.zeros((4, 3)))


def test_gaussian_parameters_are_read_only(gaussian_params):
    with pytest.raises(ValueError):
        gaussian_params.mean[0] = 1.0


#-------------------------------
# diagonal Gaussian
#-------------------------------
def test_diag_matches_scipy(diag_params, rng):
    x = rng.normal(size=(6, 2))
    dist = multivariate_normal(diag_params.mean, np.diag(np.exp(2.0 * diag_params.log_std)))
    np.testing.assert_allclose(diag_params.log_density(x), dist.logpdf(x), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(diag_params.score(x), -(x - diag_params.mean) / np.exp(2.0 * diag_params.log_std))


def test_diag_agrees_with_full_gaussian(diag_params, rng):
    full = GaussianParams(mean=diag_params.mean, scale=diag_params.scale)
    x = rng.normal(size=(6, 2))
    np.testing.assert_allclose(diag_params.log_density(x), full.log_density(x), rtol=1e-12)
    np.testing.assert_allclose(diag_params.sample(x), full.sample(x), rtol=1e-14)


#-------------------------------
# mixture
#-------------------------------
@given(logits=st.lists(st.floats(-30.0, 30.0), min_size=1, max_size=6))
def test_mixture_weights_on_simplex(logits):
    params = MixtureParams(logits=logits, components=tuple(GaussianParams.standard([float(i)]) for i in range(len(logits))))
    assert np.all(params.weights >= 0.0)
    assert abs(params.weights.sum() - 1.0) < 1e-12


def test_mixture_weights_are_shift_invariant():
    comps = (GaussianParams.standard([0.0]), GaussianParams.standard([1.0]))
    base = MixtureParams(logits=[0.5, -0.25], components=comps)
    shifted = MixtureParams(logits=[2.5, 1.75], components=comps)
    np.testing.assert_array_equal(base.weights, shifted.weights)


def test_mixture_log_density_and_score(rng):
    comps = (GaussianParams(mean=[-1.0, 0.0], scale=np.eye(2)),
             GaussianParams(mean=[1.0, 1.0], scale=[[0.7, 0.0], [0.2, 0.5]]))
    params = MixtureParams(logits=[0.3, -0.4], components=comps)
    x = rng.normal(size=(8, 2))
    w = params.weights
    dens = w[0] * np.exp(comps[0].log_density(x)) + w[1] * np.exp(comps[1].log_density(x))
    np.testing.assert_allclose(params.log_density(x), np.log(dens), rtol=1e-12)
    resp = params.responsibilities(x)
    np.testing.assert_allclose(resp.sum(axis=1), 1.0, rtol=1e-12)
    expected = resp[:, :1] * comps[0].score(x) + resp[:, 1:] * comps[1].score(x)
    np.testing.assert_allclose(params.score(x), expected, rtol=1e-12)


def test_component_sample_ignores_weights(noise):
    comps = (GaussianParams.standard([0.0, 0.0]), GaussianParams.standard([3.0, 3.0]))
    light = MixtureParams(logits=[0.0, -20.0], components=comps)
    heavy = MixtureParams(logits=[0.0, 20.0], components=comps)
    np.testing.assert_array_equal(light.component_sample(1, noise), heavy.component_sample(1, noise))
    with pytest.raises(IndexError):
        light.component_sample(2, noise)


def test_mixture_rejects_bad_layouts():
    with pytest.raises(ValueError):
        MixtureParams(logits=[], components=())
    with pytest.raises(ValueError):
        MixtureParams(logits=[0.0, 0.0], components=(GaussianParams.standard([0.0]),))
    with pytest.raises(ValueError):
        MixtureParams(logits=[0.0, 0.0], components=(GaussianParams.standard([0.0]),
                                                     GaussianParams.standard([0.0, 0.0])))


def test_init_mixture_is_deterministic():
    first, second = init_mixture(4, 1, seed=5), init_mixture(4, 1, seed=5)
    for a, b in zip(first.components, second.components):
        np.testing.assert_array_equal(a.mean, b.mean)
    np.testing.assert_allclose(first.weights, 0.25)
    assert isinstance(init_mixture(2, 2, seed=0, diagonal=True).components[0], DiagGaussianParams)


def test_init_mixture_with_given_means_and_scale():
    mixture = init_mixture(2, 2, seed=0, scale=2.0, means=[[-1.0, 1.0], [2.0, 4.0]])
    np.testing.assert_array_equal(mixture.components[1].mean, [2.0, 4.0])
    np.testing.assert_array_equal(mixture.components[0].scale, 2.0 * np.eye(2))
    diag = init_mixture(2, 1, seed=0, diagonal=True, scale=0.5)
    np.testing.assert_allclose(diag.components[0].std, [0.5])
    with pytest.raises(ValueError):
        init_mixture(2, 2, seed=0, scale=0.0)
    with pytest.raises(ValueError):
        init_mixture(2, 2, seed=0, means=[[0.0, 0.0]])


#-------------------------------
# serialization
#-------------------------------
def test_params_survive_json(tmp_path, gaussian_params, diag_params):
    mixture = MixtureParams(logits=[0.1, -0.7], components=(gaussian_params, GaussianParams.standard([1.0, 2.0])))
    for params in (gaussian_params, diag_params, mixture):
        path = tmp_path / "params.json"
        dump_params(params, path)
        loaded = load_params(path)
        assert loaded.to_dict() == params.to_dict()


def test_params_from_dict_rejects_unknown():
    with pytest.raises(ConfigError):
        params_from_dict({"family": "student_t"})
    with pytest.raises(ConfigError):
        params_from_dict({"family": "gaussian", "mean": [0.0]})
