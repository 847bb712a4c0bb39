"""Cycle-graph substrate: Laplacian eigenstructure of the ring.

The ring of N nodes with nearest-neighbour coupling has a circulant
Laplacian whose eigenvectors are the discrete Fourier modes. We keep the
real-valued basis throughout: one uniform column (wavenumber 0), one
alternating Nyquist column (wavenumber N/2, even N only), and a
cosine/sine pair for every wavenumber in between. Columns are unit-norm,
so the basis matrix is orthogonal and node/mode energies match exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RingSubstrate", "build_substrate", "mode_frequencies"]

PARITY_UNIFORM = "uniform"
PARITY_COS = "cos"
PARITY_SIN = "sin"
PARITY_NYQUIST = "nyquist"


@dataclass(frozen=True)
class RingSubstrate:
    """Ring of ``n_nodes`` with its real Fourier eigenbasis.

    Attributes:
        n_nodes: number of nodes N (even, >= 4).
        eigenvalues: per-column Laplacian eigenvalue, 4 sin^2(pi n / N).
        eigenbasis: (N, N) orthogonal matrix; columns are the modes in the
            order [uniform, (cos_1, sin_1), ..., (cos_{N/2-1}, sin_{N/2-1}),
            nyquist].
        mode_wavenumbers: wavenumber n of each column.
        mode_parities: "uniform" | "cos" | "sin" | "nyquist" per column.
    """

    n_nodes: int
    eigenvalues: np.ndarray
    eigenbasis: np.ndarray
    mode_wavenumbers: np.ndarray
    mode_parities: tuple[str, ...]

    def columns_for(self, wavenumber: int) -> list[int]:
        """Column indices carrying the given wavenumber (1 or 2 of them)."""
        return [int(i) for i in np.flatnonzero(self.mode_wavenumbers == wavenumber)]

    @property
    def wavenumber_count(self) -> int:
        """Number of distinct wavenumbers, N/2 + 1."""
        return self.n_nodes // 2 + 1


def build_substrate(n_nodes: int) -> RingSubstrate:
    """Construct the ring substrate with its real eigenbasis.

    Cosine/sine columns are scaled to unit Euclidean norm (amplitude
    sqrt(2/N)); the uniform and Nyquist columns carry amplitude sqrt(1/N).
    Cos columns have a positive entry at node 0, sin columns at node 1.

    Raises:
        ValueError: if ``n_nodes`` is odd or below 4 (the alternating
            Nyquist column requires even N).
    """
    if n_nodes < 4 or n_nodes % 2 != 0:
        raise ValueError(f"n_nodes must be an even integer >= 4, got {n_nodes}")

    n = n_nodes
    j = np.arange(n)
    basis = np.empty((n, n))
    eigenvalues = np.empty(n)
    wavenumbers = np.empty(n, dtype=int)
    parities: list[str] = []

    col = 0
    basis[:, col] = np.sqrt(1.0 / n)
    eigenvalues[col] = 0.0
    wavenumbers[col] = 0
    parities.append(PARITY_UNIFORM)
    col += 1

    for k in range(1, n // 2):
        theta = 2.0 * np.pi * k * j / n
        lam = 4.0 * np.sin(np.pi * k / n) ** 2
        basis[:, col] = np.sqrt(2.0 / n) * np.cos(theta)
        eigenvalues[col] = lam
        wavenumbers[col] = k
        parities.append(PARITY_COS)
        col += 1
        basis[:, col] = np.sqrt(2.0 / n) * np.sin(theta)
        eigenvalues[col] = lam
        wavenumbers[col] = k
        parities.append(PARITY_SIN)
        col += 1

    basis[:, col] = np.sqrt(1.0 / n) * np.where(j % 2 == 0, 1.0, -1.0)
    eigenvalues[col] = 4.0
    wavenumbers[col] = n // 2
    parities.append(PARITY_NYQUIST)

    basis.setflags(write=False)
    eigenvalues.setflags(write=False)
    wavenumbers.setflags(write=False)
    return RingSubstrate(
        n_nodes=n,
        eigenvalues=eigenvalues,
        eigenbasis=basis,
        mode_wavenumbers=wavenumbers,
        mode_parities=tuple(parities),
    )


def mode_frequencies(sub: RingSubstrate, params) -> np.ndarray:
    """Per-column natural frequencies omega_n = sqrt(omega0_sq + k_c * lambda_n).

    With zero on-site stiffness this reduces to the bare ring dispersion
    sqrt(k_c * lambda_n); the uniform mode then has frequency 0.
    """
    if params.k_c <= 0:
        raise ValueError("k_c must be positive")
    if params.omega0_sq < 0:
        raise ValueError("omega0_sq must be non-negative")
    return np.sqrt(params.omega0_sq + params.k_c * sub.eigenvalues)
