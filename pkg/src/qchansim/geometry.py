"""Bloch-sphere images of channels.

Convention: ``rho = (I + v.sigma)/2`` with |H> at the north pole ``+z``.
"""

import numpy as np

from qchansim.channels import Channel, apply
from qchansim.numerics import X, Y, Z

DEFAULT_SAMPLES = 500


def bloch_vector(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(p @ rho).real for p in (X, Y, Z)])


def density_from_bloch(v) -> np.ndarray:
    x, y, z = v
    return 0.5 * (np.eye(2) + x * X + y * Y + z * Z)


def fibonacci_sphere(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one sample")
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    phi = np.pi * (1.0 + 5**0.5) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def image_cloud(ch: Channel, n_samples: int = DEFAULT_SAMPLES) -> tuple[np.ndarray, np.ndarray]:
    """Pure-state inputs on a Fibonacci sphere and their Bloch images under ``ch``.

    Returns ``(inputs, outputs)`` as ``(n, 3)`` arrays in index order.
    """
    inputs = fibonacci_sphere(n_samples)
    outputs = np.array([bloch_vector(apply(ch, density_from_bloch(v))) for v in inputs])
    return inputs, outputs
