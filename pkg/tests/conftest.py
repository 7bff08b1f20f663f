import math

import numpy as np
import pytest
import scipy.linalg

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def rotation_oracle(axis, angle):
    """exp(-i angle/2 n.sigma) by scipy's Pade expm, independent of the package."""
    n = np.asarray(axis, dtype=float)
    gen = n[0] * SX + n[1] * SY + n[2] * SZ
    return scipy.linalg.expm(-0.5j * angle * gen)


def amplitude_oracle(p1, theta_s, axis_a, rate_ratio, omega_s_t=2 * math.pi):
    """<Psi| Us (x) Ua |Psi> with the purification written out by hand."""
    psi = np.zeros(4, dtype=complex)
    psi[0], psi[3] = math.sqrt(p1), math.sqrt(1 - p1)
    us = rotation_oracle((math.sin(theta_s), 0, math.cos(theta_s)), omega_s_t)
    ua = rotation_oracle(axis_a, rate_ratio * omega_s_t)
    out = 0j
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out += np.conj(psi[2 * i + j]) * us[i, k] * ua[j, l] * psi[2 * k + l]
    return out


def random_unitary(rng, n=2):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = z @ z.conj().T
    return rho / np.trace(rho)


def wrap(x):
    return math.remainder(x, 2 * math.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
