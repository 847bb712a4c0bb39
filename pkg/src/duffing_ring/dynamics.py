"""Equations of motion on the ring, in node and eigenmode coordinates.

Node coordinates carry the full dynamics: per-node damping, on-site
stiffness, cubic stiffening, and the nearest-neighbour Laplacian applied
as a circulant stencil. In the linear regime the same dynamics decouple
into independent damped oscillators per eigenmode. The cubic term couples
mode triples under a mod-N selection rule; its mode-space image is
computed by a node-space round trip (transform, cube pointwise,
transform back), never by the O(N^3) triple sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

import numpy as np

from .substrate import RingSubstrate, mode_frequencies

__all__ = [
    "RegimeParams",
    "CouplingTensorView",
    "node_rhs",
    "mode_rhs_linear",
    "mode_drive_gains",
    "selection_rule",
    "reachable_wavenumbers",
    "cubic_mode_force",
    "mode_rhs_duffing",
    "pack_complex_state",
    "unpack_complex_state",
    "ring_energy",
]

REALITY_TOL = 1e-10


@dataclass(frozen=True)
class RegimeParams:
    """The four rates selecting the regime: damping, on-site stiffness,
    cubic coefficient, and nearest-neighbour coupling."""

    gamma: float
    omega0_sq: float
    alpha: float
    k_c: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.omega0_sq < 0:
            raise ValueError("omega0_sq must be >= 0")
        if self.k_c <= 0:
            raise ValueError("k_c must be > 0")

    @property
    def is_linear(self) -> bool:
        return self.alpha == 0.0

    @classmethod
    def linear_working_point(cls) -> "RegimeParams":
        """Linear-regime working values (N = 32 ring)."""
        return cls(gamma=0.5, omega0_sq=0.0, alpha=0.0, k_c=(2.0 * np.pi) ** 2)

    @classmethod
    def duffing_working_point(cls, alpha: float = 1.5) -> "RegimeParams":
        """Duffing-regime working values (N = 64 ring)."""
        return cls(gamma=0.15, omega0_sq=1.0, alpha=alpha, k_c=0.35)


def node_rhs(
    sub: RingSubstrate,
    params: RegimeParams,
    drive: Callable[[float], float],
    drive_node: int = 0,
) -> Callable[[float, np.ndarray], np.ndarray]:
    """Vector field on (x, xdot) of dimension 2N, drive injected at one node.

    The Laplacian acts as the stencil 2*x_i - x_{i-1} - x_{i+1} with
    periodic indices; no dense matrix is formed.
    """
    n = sub.n_nodes
    if not 0 <= drive_node < n:
        raise ValueError(f"drive_node must be in [0, {n}), got {drive_node}")
    gamma, w0sq, alpha, k_c = params.gamma, params.omega0_sq, params.alpha, params.k_c

    def f(t: float, y: np.ndarray) -> np.ndarray:
        x = y[:n]
        v = y[n:]
        acc = -gamma * v - w0sq * x - k_c * (2.0 * x - np.roll(x, 1) - np.roll(x, -1))
        if alpha != 0.0:
            acc -= alpha * x**3
        acc[drive_node] += drive(t)
        return np.concatenate((v, acc))

    return f


def mode_drive_gains(sub: RingSubstrate, drive_node: int = 0) -> np.ndarray:
    """Projection weights of a single-node drive onto each basis column."""
    return sub.eigenbasis[drive_node, :].copy()


def mode_rhs_linear(
    sub: RingSubstrate,
    params: RegimeParams,
    drive: Callable[[float], float],
    drive_node: int = 0,
) -> Callable[[float, np.ndarray], np.ndarray]:
    """Decoupled per-mode fields, stacked as one state (u_0..u_{N-1}, v_0..).

    Each column obeys u'' = gain*s(t) - gamma*u' - omega_n^2*u; the blocks
    never couple, so the stacked system is exactly the N independent
    two-dimensional fields integrated together.
    """
    if params.alpha != 0.0:
        raise ValueError("mode_rhs_linear requires alpha = 0")
    n = sub.n_nodes
    omega_sq = mode_frequencies(sub, params) ** 2
    gains = mode_drive_gains(sub, drive_node)
    gamma = params.gamma

    def f(t: float, y: np.ndarray) -> np.ndarray:
        u = y[:n]
        v = y[n:]
        acc = gains * drive(t) - gamma * v - omega_sq * u
        return np.concatenate((v, acc))

    return f


def selection_rule(n_nodes: int, m1: int, m2: int, m3: int, n: int) -> bool:
    """True iff some sign choice gives +-m1 +-m2 +-m3 = n (mod N)."""
    for idx in (m1, m2, m3, n):
        if not 0 <= idx < n_nodes:
            raise ValueError(f"wavenumber {idx} outside [0, {n_nodes})")
    for s1, s2, s3 in product((1, -1), repeat=3):
        if (s1 * m1 + s2 * m2 + s3 * m3 - n) % n_nodes == 0:
            return True
    return False


def reachable_wavenumbers(n_nodes: int, drive_modes: set[int] | list[int]) -> list[int]:
    """Folded wavenumbers the cubic can populate from the given drive modes.

    Enumerates all sign-resolved triples over the drive set and folds each
    reachable index n to the canonical wavenumber min(n, N - n).
    """
    modes = sorted(set(int(m) for m in drive_modes))
    for m in modes:
        if not 0 <= m < n_nodes:
            raise ValueError(f"drive mode {m} outside [0, {n_nodes})")
    reached: set[int] = set()
    signed = [s * m for m in modes for s in (1, -1)]
    for a, b, c in product(signed, repeat=3):
        n = (a + b + c) % n_nodes
        reached.add(min(n, n_nodes - n))
    return sorted(reached)


class CouplingTensorView:
    """Lazy view of the cubic coupling tensor; never materialised densely.

    In the complex Fourier basis the entry at (n, m1, m2, m3) is 1/N when
    m1 + m2 + m3 = n (mod N) and zero otherwise, so each output mode is
    fed by exactly N^2 ordered triples.
    """

    def __init__(self, n_nodes: int):
        if n_nodes < 1:
            raise ValueError("n_nodes must be positive")
        self.n_nodes = n_nodes

    def entry(self, n: int, m1: int, m2: int, m3: int) -> float:
        if (m1 + m2 + m3 - n) % self.n_nodes == 0:
            return 1.0 / self.n_nodes
        return 0.0

    def nonzero_triples(self, n: int) -> Iterator[tuple[int, int, int]]:
        """Ordered triples (m1, m2, m3) feeding output mode n."""
        nn = self.n_nodes
        for m1 in range(nn):
            for m2 in range(nn):
                yield m1, m2, (n - m1 - m2) % nn

    def count_nonzero(self, n: int) -> int:
        return self.n_nodes**2


def _check_reality(u: np.ndarray) -> None:
    n = u.shape[0]
    partner = np.conj(u[(-np.arange(n)) % n])
    err = np.max(np.abs(u - partner))
    scale = max(1.0, float(np.max(np.abs(u))))
    if err > REALITY_TOL * scale:
        raise ValueError(
            f"mode amplitudes violate the reality condition u[N-m] = conj(u[m]) "
            f"(max deviation {err:.3e})"
        )


def cubic_mode_force(sub: RingSubstrate, u: np.ndarray) -> np.ndarray:
    """Mode-space image of the pointwise cube of the node field.

    Equals (1/N) * sum over triples with m1+m2+m3 = n (mod N) of
    u_m1*u_m2*u_m3, computed via the node-space round trip. Requires the
    reality condition on ``u``.
    """
    n = sub.n_nodes
    u = np.asarray(u, dtype=complex)
    if u.shape != (n,):
        raise ValueError(f"expected {n} complex mode amplitudes")
    _check_reality(u)
    x = np.sqrt(n) * np.fft.ifft(u)
    return np.fft.fft(x.real**3) / np.sqrt(n)


def pack_complex_state(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Flatten complex (u, v) into a real vector [Re u, Im u, Re v, Im v]."""
    return np.concatenate((u.real, u.imag, v.real, v.imag))


def unpack_complex_state(y: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    u = y[:n] + 1j * y[n : 2 * n]
    v = y[2 * n : 3 * n] + 1j * y[3 * n :]
    return u, v


def mode_rhs_duffing(
    sub: RingSubstrate,
    params: RegimeParams,
    drive: Callable[[float], float],
    drive_node: int = 0,
) -> Callable[[float, np.ndarray], np.ndarray]:
    """Full Duffing dynamics in complex mode coordinates, packed as reals.

    State layout is [Re u, Im u, Re u', Im u'] of length 4N. The cubic
    enters through :func:`cubic_mode_force`; the reality condition is
    preserved by the flow, so trajectories stay physical. Exists to pin
    the mode-space formulation against node-space integration.
    """
    n = sub.n_nodes
    m = np.arange(n)
    lam = 4.0 * np.sin(np.pi * m / n) ** 2
    omega_sq = params.omega0_sq + params.k_c * lam
    proj = np.exp(-2j * np.pi * m * drive_node / n) / np.sqrt(n)
    gamma, alpha = params.gamma, params.alpha

    def f(t: float, y: np.ndarray) -> np.ndarray:
        u, v = unpack_complex_state(y, n)
        x = np.sqrt(n) * np.fft.ifft(u)
        force = np.fft.fft(x.real**3) / np.sqrt(n)
        acc = proj * drive(t) - gamma * v - omega_sq * u - alpha * force
        return pack_complex_state(v, acc)

    return f


def ring_energy(sub: RingSubstrate, params: RegimeParams, states: np.ndarray) -> np.ndarray:
    """Total energy per sample: kinetic + on-site + quartic + coupling.

    ``states`` is (n_samples, 2N). The coupling term is
    (k_c/2) * sum_i (x_i - x_{i+1})^2, the quadratic form of the ring
    Laplacian. With zero drive and gamma > 0 this is non-increasing.
    """
    n = sub.n_nodes
    x = states[:, :n]
    v = states[:, n:]
    onsite = 0.5 * params.omega0_sq * x**2 + 0.25 * params.alpha * x**4
    coupling = 0.5 * params.k_c * (x - np.roll(x, -1, axis=1)) ** 2
    return np.sum(0.5 * v**2 + onsite + coupling, axis=1)
