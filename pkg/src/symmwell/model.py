"""Tight-binding multi-well Hamiltonians with localised gain and loss.

A chain of ``N >= 2`` deep wells is modelled by a complex tridiagonal matrix:
on-site energy ``eps_k`` plus ``i * gamma_k`` on the diagonal (``gamma > 0``
in-coupling, ``gamma < 0`` out-coupling) and a uniform real hopping ``-J`` on
the first off-diagonals.  All functions are pure; parameter objects are
immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import as_square_matrix


@dataclass(frozen=True)
class WellParameters:
    """On-site energies, gain/loss rates, and hopping rate of a well chain."""

    epsilons: tuple[float, ...]
    gammas: tuple[float, ...]
    coupling: float = 1.0

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        gam = tuple(float(g) for g in self.gammas)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "gammas", gam)
        object.__setattr__(self, "coupling", float(self.coupling))
        if len(eps) < 2:
            raise ValueError("at least two wells are required")
        if len(gam) != len(eps):
            raise ValueError(
                f"gammas length {len(gam)} does not match epsilons length {len(eps)}"
            )
        if not all(math.isfinite(x) for x in eps + gam):
            raise ValueError("well parameters must be finite")
        if not (math.isfinite(self.coupling) and self.coupling > 0.0):
            raise ValueError("coupling must be positive and finite")

    @property
    def wells(self) -> int:
        return len(self.epsilons)


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes per well; occupations are their squared moduli."""

    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "amplitudes", tuple(complex(a) for a in self.amplitudes)
        )

    @property
    def occupations(self) -> np.ndarray:
        return np.abs(np.asarray(self.amplitudes)) ** 2


def build_hamiltonian(p: WellParameters) -> np.ndarray:
    """Complex-symmetric tridiagonal Hamiltonian for the given chain."""
    n = p.wells
    h = np.zeros((n, n), dtype=complex)
    diag = np.asarray(p.epsilons) + 1j * np.asarray(p.gammas)
    h[np.arange(n), np.arange(n)] = diag
    off = np.arange(n - 1)
    h[off, off + 1] = -p.coupling
    h[off + 1, off] = -p.coupling
    return h


def shift_energy(p: WellParameters, c: float) -> WellParameters:
    """Shift every on-site energy by ``c``; the spectrum shifts by exactly ``c``."""
    if not math.isfinite(c):
        raise ValueError("energy shift must be finite")
    return replace(p, epsilons=tuple(e + c for e in p.epsilons))


def parity_matrix(n: int) -> np.ndarray:
    """Exchange (site-reversal) matrix of dimension ``n``."""
    return np.eye(n)[::-1].copy()


def is_pt_symmetric(p: WellParameters, tol: float = 1e-12) -> bool:
    """Symmetric real potential and antisymmetric imaginary potential.

    Checks ``|eps_k - eps_{N+1-k}| <= tol`` and ``|gamma_k + gamma_{N+1-k}|
    <= tol`` for all sites (1-based reversal through the chain centre).
    """
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    eps = np.asarray(p.epsilons)
    gam = np.asarray(p.gammas)
    return bool(
        np.all(np.abs(eps - eps[::-1]) <= tol)
        and np.all(np.abs(gam + gam[::-1]) <= tol)
    )


def is_anti_pt_potential(p: WellParameters, tol: float = 1e-12) -> bool:
    """Antisymmetric real potential and symmetric imaginary potential.

    This is a potential-level predicate.  The full Hamiltonian does not
    anticommute with the parity-conjugation operation because the hopping
    term keeps its sign; see :func:`anti_pt_anticommutator_norm`.
    """
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    eps = np.asarray(p.epsilons)
    gam = np.asarray(p.gammas)
    return bool(
        np.all(np.abs(eps + eps[::-1]) <= tol)
        and np.all(np.abs(gam - gam[::-1]) <= tol)
    )


def anti_pt_anticommutator_norm(p: WellParameters) -> float:
    """Frobenius norm of ``P conj(H) P + H``, the full anticommutator defect.

    For an anti-symmetric real potential with symmetric gain/loss the
    diagonal part cancels exactly, but the hopping contributes
    ``2 J sqrt(2 (N - 1))``.  Exposed for inspection; never asserted zero.
    """
    h = build_hamiltonian(p)
    par = parity_matrix(p.wells)
    return float(np.linalg.norm(par @ h.conj() @ par + h))


def state_balance(state, p: WellParameters) -> float:
    """Net gain/loss rate of a state: ``sum_k gamma_k |psi_k|^2``.

    For any eigenstate of the built Hamiltonian this equals ``Im(E) *
    ||psi||^2``, so real eigenvalues have exactly balanced gain and loss.
    """
    if isinstance(state, StateVector):
        amps = np.asarray(state.amplitudes, dtype=complex)
    else:
        amps = np.asarray(state, dtype=complex)
    if amps.ndim != 1 or amps.shape[0] != p.wells:
        raise ValueError(
            f"state has {amps.shape} amplitudes, expected ({p.wells},)"
        )
    return float(np.sum(np.asarray(p.gammas) * np.abs(amps) ** 2))


__all__ = [
    "WellParameters",
    "StateVector",
    "build_hamiltonian",
    "shift_energy",
    "parity_matrix",
    "is_pt_symmetric",
    "is_anti_pt_potential",
    "anti_pt_anticommutator_norm",
    "state_balance",
    "as_square_matrix",
]
