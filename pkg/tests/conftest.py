import numpy as np
import pytest

import spinorlab as sl


def band_limited_spinor(grid, seed, kcut_div=8):
    """Random smooth periodic spinor field: independent Gaussian Fourier
    coefficients on modes |m| <= n/kcut_div per axis, unit norm.  Products
    of two such fields stay below the Nyquist mode, so spectral identities
    hold to roundoff."""
    rng = np.random.default_rng(seed)
    data = np.zeros((2,) + grid.shape, dtype=complex)
    masks = []
    for ax, n in enumerate(grid.n):
        m = np.fft.fftfreq(n) * n
        keep = np.abs(m) <= n // kcut_div
        shape = [1] * grid.dim
        shape[ax] = n
        masks.append(keep.reshape(shape))
    mask = masks[0]
    for extra in masks[1:]:
        mask = mask & extra
    for comp in range(2):
        coef = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
        data[comp] = np.fft.ifftn(coef * mask)
    f = sl.SpinorField(grid, data)
    f.data /= sl.norm(f)
    return f


def plane_wave(grid, kindex, spinor):
    """exp(i k . r) chi with k an exact grid wavenumber (per-axis integer
    mode index), normalized."""
    kindex = np.atleast_1d(kindex)
    mesh = grid.mesh()
    phase = 0.0
    for ax in range(grid.dim):
        k = 2.0 * np.pi * kindex[ax] / grid.extent[ax]
        phase = phase + k * mesh[ax]
    env = np.exp(1j * phase)
    chi = np.asarray(spinor, dtype=complex)
    chi = chi / np.sqrt(np.sum(np.abs(chi) ** 2))
    data = np.stack([chi[0] * env, chi[1] * env])
    f = sl.SpinorField(grid, data)
    f.data /= sl.norm(f)
    return f


def wavenumber(grid, kindex, axis=0):
    return 2.0 * np.pi * kindex / grid.extent[axis]


@pytest.fixture(scope="session")
def grid1d():
    return sl.make_grid(256, 32.0)


@pytest.fixture(scope="session")
def grid2d():
    return sl.make_grid((64, 64), (16.0, 16.0))


@pytest.fixture(scope="session")
def grid3d():
    return sl.make_grid((64, 64, 64), (16.0, 16.0, 16.0))


@pytest.fixture(scope="session")
def grid_magnetic():
    # wide box: keeps packet tails (and the vector-potential ramp they
    # multiply) below roundoff at the periodic seam
    return sl.make_grid((128, 128), (28.0, 28.0))


ALL_PRESETS = (
    ("Zero", {}),
    ("UniformBLandau", {"b0": 1.0}),
    ("UniformBSymmetric", {"b0": 2.0}),
    ("UniformE", {"e0": (0.5, -0.25, 0.75)}),
    ("Harmonic", {"omega0": 1.5, "q": -1.0}),
)


def all_presets():
    return [sl.preset(name, **params) for name, params in ALL_PRESETS]
