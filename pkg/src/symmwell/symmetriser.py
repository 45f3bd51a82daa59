"""Symmetrisation operators and closed-form admissibility conditions.

A Hamiltonian ``H`` is *symmetrised from the left* by a Hermitian matrix
``S`` when ``S H = H^dag S``; the mirrored identity ``H S = S H^dag``
defines right symmetrisation.  Full-rank symmetrisation forces the spectrum
to be real or conjugate-paired; a rank-deficient ``S`` whose kernel consists
of eigenvectors still symmetrises the non-kernel subspace and leaves the
kernel eigenvalues as isolated complex resonances (semi-symmetrisation).

The module builds such operators spectrally from bi-orthonormalised
eigenbases, solves the two-mode problem exactly through a real 4x4 nullspace
in the Pauli basis, and evaluates the closed-form conditions under which
two- and three-well gain/loss distributions admit a (semi-)symmetriser.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Spectrum, char_poly
from .model import WellParameters, build_hamiltonian


class SymmetriserError(RuntimeError):
    """Spectral symmetriser construction is not defined for this input."""


# ---------------------------------------------------------------------------
# residual functionals


def symmetrisation_residual(sigma, h, side: str) -> float:
    """Relative defect of the symmetrisation identity.

    ``||S H - H^dag S||_F / (||S||_F ||H||_F)`` for ``side="left"`` and
    ``||H S - S H^dag||_F / (||S||_F ||H||_F)`` for ``side="right"``.
    """
    s = np.asarray(sigma, dtype=complex)
    a = np.asarray(h, dtype=complex)
    if s.shape != a.shape:
        raise ValueError(f"dimension mismatch: {s.shape} vs {a.shape}")
    if side == "left":
        defect = s @ a - a.conj().T @ s
    elif side == "right":
        defect = a @ s - s @ a.conj().T
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    denom = np.linalg.norm(s) * np.linalg.norm(a)
    return float(np.linalg.norm(defect) / denom)


def semi_inverse_residual(sigma_left, sigma_right, kernel_cut: float = 1e-8) -> float:
    """Defect of ``S_L S_R S_L = S_L`` after normalising ``S_R``.

    ``S_R`` is rescaled so that the non-negligible eigenvalues of
    ``S_R S_L`` average to one (eigenvalues below ``kernel_cut`` relative to
    the largest are treated as kernel directions and ignored).  The returned
    value is ``||S_L S_R' S_L - S_L||_F / ||S_L||_F``.
    """
    sl = np.asarray(sigma_left, dtype=complex)
    sr = np.asarray(sigma_right, dtype=complex)
    if sl.shape != sr.shape:
        raise ValueError(f"dimension mismatch: {sl.shape} vs {sr.shape}")
    w = np.linalg.eigvals(sr @ sl)
    top = float(np.max(np.abs(w)))
    if top == 0.0:
        scale = 1.0 + 0.0j
    else:
        live = w[np.abs(w) > kernel_cut * top]
        scale = complex(np.mean(live))
    defect = sl @ (sr / scale) @ sl - sl
    return float(np.linalg.norm(defect) / np.linalg.norm(sl))


def quasi_commutator_residual(sigma_left, sigma_right, h) -> float:
    """Relative norm of ``[S_R S_L, H]``; zero for a consistent pair."""
    sl = np.asarray(sigma_left, dtype=complex)
    sr = np.asarray(sigma_right, dtype=complex)
    a = np.asarray(h, dtype=complex)
    if not (sl.shape == sr.shape == a.shape):
        raise ValueError("dimension mismatch between operators")
    m = sr @ sl
    defect = m @ a - a @ m
    return float(np.linalg.norm(defect) / (np.linalg.norm(m) * np.linalg.norm(a)))


# ---------------------------------------------------------------------------
# spectral construction


@dataclass(frozen=True, eq=False)
class Symmetriser:
    """A Hermitian (semi-)symmetriser with rank/kernel bookkeeping."""

    side: str
    matrix: np.ndarray
    rank: int
    kernel_basis: tuple[np.ndarray, ...]
    residual: float
    coefficients: tuple[complex, ...]


def _rank_and_kernel(sigma: np.ndarray, rel_tol: float = 1e-9):
    """Rank and kernel basis of a Hermitian matrix.

    A direction counts as kernel when ``||sigma v|| <= rel_tol *
    ||sigma||_F``, which for a Hermitian matrix is exactly an eigenvalue
    test.
    """
    w, v = np.linalg.eigh(sigma)
    cut = rel_tol * np.linalg.norm(sigma)
    kernel_cols = [i for i in range(len(w)) if abs(w[i]) <= cut]
    kernel = []
    for i in kernel_cols:
        vec = v[:, i]
        k = int(np.argmax(np.abs(vec)))
        piv = vec[k]
        if piv != 0.0:
            vec = vec * (piv.conjugate() / abs(piv))
        kernel.append(vec)
    rank = len(w) - len(kernel_cols)
    return rank, tuple(kernel)


def build_spectral_symmetriser(
    s: Spectrum,
    side: str,
    real_coeffs=None,
    pair_coeffs=None,
) -> Symmetriser:
    """Assemble a symmetriser from a bi-orthonormalised eigenbasis.

    The left operator is ``sum_n p_n l_n l_n^dag`` over real eigenvalues
    plus ``p_m l_m^- (l_m^+)^dag + conj(p_m) l_m^+ (l_m^-)^dag`` over
    conjugate pairs, where ``+``/``-`` label the pair member with positive /
    negative imaginary part.  The right operator uses right eigenvectors in
    the same pattern.  Eigenvalues classified isolated are omitted, which
    places their opposite-handed eigenvectors in the kernel.

    ``real_coeffs`` must be real (default: all 1); ``pair_coeffs`` may be
    complex (default: all 1) and enter together with their conjugates so the
    result is Hermitian by construction.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if s.normalization != "biorthogonal":
        raise SymmetriserError("spectrum must be bi-orthonormalised first")
    if s.degenerate:
        raise SymmetriserError(
            "spectrum is flagged degenerate (exceptional point); "
            "the spectral construction is not defined there"
        )

    cls = s.classification
    n = s.matrix.shape[0]
    if not cls.real_indices and not cls.conjugate_pairs:
        raise SymmetriserError("no real or conjugate-paired eigenvalues to sum over")

    p_real = np.ones(len(cls.real_indices)) if real_coeffs is None else np.asarray(
        real_coeffs, dtype=float
    )
    if p_real.shape != (len(cls.real_indices),):
        raise ValueError("one real coefficient per real eigenvalue is required")
    p_pair = (
        np.ones(len(cls.conjugate_pairs), dtype=complex)
        if pair_coeffs is None
        else np.asarray(pair_coeffs, dtype=complex)
    )
    if p_pair.shape != (len(cls.conjugate_pairs),):
        raise ValueError("one pair coefficient per conjugate pair is required")

    def vec(i: int) -> np.ndarray:
        return s.pairs[i].left if side == "left" else s.pairs[i].right

    sigma = np.zeros((n, n), dtype=complex)
    for p, i in zip(p_real, cls.real_indices):
        v = vec(i)
        sigma = sigma + p * np.outer(v, v.conj())
    for p, (i, j) in zip(p_pair, cls.conjugate_pairs):
        i_plus, i_minus = (i, j) if s.pairs[i].value.imag > 0 else (j, i)
        vp, vm = vec(i_plus), vec(i_minus)
        sigma = sigma + p * np.outer(vm, vp.conj()) + p.conjugate() * np.outer(vp, vm.conj())

    rank, kernel = _rank_and_kernel(sigma)
    residual = symmetrisation_residual(sigma, s.matrix, side)
    coeffs = tuple(complex(c) for c in p_real) + tuple(complex(c) for c in p_pair)
    return Symmetriser(
        side=side,
        matrix=sigma,
        rank=rank,
        kernel_basis=kernel,
        residual=residual,
        coefficients=coeffs,
    )


# ---------------------------------------------------------------------------
# antilinear companions


def build_antilinear_T(s: Spectrum, side: str) -> np.ndarray:
    """Matrix part of the antilinear pairing operator ``v -> M conj(v)``.

    ``M = sum_m l_m l_m^T`` (left) or ``sum_m r_m r_m^T`` (right), summed
    over the full bi-orthonormalised basis.  For a complex-symmetric matrix
    under complex-orthogonal normalisation the left operator reduces to
    plain conjugation (``M = I``).
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if s.normalization != "biorthogonal":
        raise SymmetriserError("spectrum must be bi-orthonormalised first")
    if s.degenerate:
        raise SymmetriserError("spectrum is flagged degenerate (exceptional point)")
    n = s.matrix.shape[0]
    m = np.zeros((n, n), dtype=complex)
    for p in s.pairs:
        v = p.left if side == "left" else p.right
        m = m + np.outer(v, v)
    return m


def antilinear_T_residual(m, h, side: str) -> float:
    """Relative defect of the antilinear intertwining contract.

    Left: ``||M conj(H) - H^dag M||``; right: ``||H M - M H^T||``, both over
    ``||H||_F ||M||_F``.
    """
    mm = np.asarray(m, dtype=complex)
    a = np.asarray(h, dtype=complex)
    if mm.shape != a.shape:
        raise ValueError(f"dimension mismatch: {mm.shape} vs {a.shape}")
    if side == "left":
        defect = mm @ a.conj() - a.conj().T @ mm
    elif side == "right":
        defect = a @ mm - mm @ a.T
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return float(np.linalg.norm(defect) / (np.linalg.norm(a) * np.linalg.norm(mm)))


def induced_antilinear_symmetry(sigma_left, m_left, cond_limit: float = 1e8) -> np.ndarray:
    """Matrix part ``N`` of the antilinear candidate symmetry ``v -> N conj(v)``.

    Splitting the left symmetriser as (antilinear pairing) x (antilinear
    symmetry) gives ``N = conj(M_L^-1 S_L)``.  Whether ``N`` actually
    commutes with the Hamiltonian in the antilinear sense is a diagnostic;
    evaluate it with :func:`antilinear_symmetry_residual`.  Rank-deficient
    symmetrisers yield an ``N`` that fails the contract.
    """
    sl = np.asarray(sigma_left, dtype=complex)
    ml = np.asarray(m_left, dtype=complex)
    if sl.shape != ml.shape:
        raise ValueError(f"dimension mismatch: {sl.shape} vs {ml.shape}")
    cond = np.linalg.cond(ml)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SymmetriserError(
            f"antilinear pairing matrix is singular or ill-conditioned "
            f"(cond = {cond:.3e}); the system is at best semi-symmetrised"
        )
    return np.linalg.solve(ml, sl).conj()


def antilinear_symmetry_residual(n_mat, h) -> float:
    """Relative defect of ``N conj(H) = H N`` (antilinear commutation)."""
    nn = np.asarray(n_mat, dtype=complex)
    a = np.asarray(h, dtype=complex)
    if nn.shape != a.shape:
        raise ValueError(f"dimension mismatch: {nn.shape} vs {a.shape}")
    defect = nn @ a.conj() - a @ nn
    return float(np.linalg.norm(defect) / (np.linalg.norm(a) * np.linalg.norm(nn)))


# ---------------------------------------------------------------------------
# two-mode closed forms (Pauli basis)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli_matrix(components) -> np.ndarray:
    """Hermitian 2x2 matrix ``sum_n c_n sigma_n`` from four real components."""
    c = np.asarray(components, dtype=float)
    if c.shape != (4,):
        raise ValueError("expected four real Pauli components")
    return sum(cn * pn for cn, pn in zip(c, PAULI))


def pauli_coefficient_matrix(p: WellParameters) -> np.ndarray:
    """Real 4x4 system whose nullspace holds all two-mode symmetrisers.

    Writing ``S = sum_n c_n sigma_n`` with real ``c_n``, the left
    symmetrisation identity for the two-well Hamiltonian is equivalent to
    this matrix annihilating ``(c_0, c_1, c_2, c_3)``.
    """
    if p.wells != 2:
        raise ValueError(f"two wells required, got {p.wells}")
    g1, g2 = p.gammas
    e1, e2 = p.epsilons
    s = g1 + g2
    d = g1 - g2
    de = e1 - e2
    j2 = 2.0 * p.coupling
    return np.array(
        [
            [s, 0.0, 0.0, d],
            [0.0, s, de, 0.0],
            [0.0, -de, s, -j2],
            [d, 0.0, j2, s],
        ]
    )


def pauli_determinant(p: WellParameters) -> float:
    """Determinant of the two-mode coefficient system in closed form.

    ``(g1+g2)^2 [(g1+g2)^2 - (g1-g2)^2 + 4J^2] + (e1-e2)^2 [(g1+g2)^2 -
    (g1-g2)^2]``; a symmetriser exists exactly where this vanishes.
    """
    if p.wells != 2:
        raise ValueError(f"two wells required, got {p.wells}")
    g1, g2 = p.gammas
    e1, e2 = p.epsilons
    s2 = (g1 + g2) ** 2
    d2 = (g1 - g2) ** 2
    de2 = (e1 - e2) ** 2
    return float(s2 * (s2 - d2 + 4.0 * p.coupling**2) + de2 * (s2 - d2))


@dataclass(frozen=True, eq=False)
class PauliSolution:
    """Nullspace of the two-mode symmetrisation system in the Pauli basis."""

    family_dimension: int
    basis: tuple[np.ndarray, ...]
    determinant: float

    def matrices(self) -> tuple[np.ndarray, ...]:
        """The basis vectors mapped to Hermitian 2x2 matrices."""
        return tuple(pauli_matrix(v) for v in self.basis)


def solve_pauli_2mode(p: WellParameters) -> PauliSolution:
    """All Hermitian symmetrisers of a two-well Hamiltonian.

    Computes the nullspace of :func:`pauli_coefficient_matrix` by SVD with
    absolute tolerance ``1e-12 * ||matrix||_F``.  The basis is ordered by
    ascending singular value and sign-fixed so that each vector's first
    nonzero component is positive.
    """
    m = pauli_coefficient_matrix(p)
    _, sv, vt = np.linalg.svd(m)
    cut = 1e-12 * np.linalg.norm(m)
    null_rows = [i for i in range(4) if sv[i] <= cut]
    basis = []
    for i in sorted(null_rows, key=lambda i: sv[i]):
        v = vt[i].copy()
        nz = np.nonzero(np.abs(v) > 1e-12)[0]
        if nz.size and v[nz[0]] < 0:
            v = -v
        basis.append(v)
    return PauliSolution(
        family_dimension=len(basis),
        basis=tuple(basis),
        determinant=pauli_determinant(p),
    )


@dataclass(frozen=True)
class DeltaEpsilonBranches:
    """Both admissible on-site energy differences for fixed gain and loss."""

    plus: float
    minus: float
    boundary: bool


def delta_epsilon_2mode(
    gamma1: float, gamma2: float, coupling: float, boundary_tol: float = 1e-12
) -> DeltaEpsilonBranches | None:
    """On-site energy difference making a two-well system semi-symmetrisable.

    Requires gain and loss of opposite sign with ``-J^2 <= g1 g2 < 0``;
    then ``|delta| = |g1+g2| sqrt(-(1 + J^2/(g1 g2)))`` and both signs are
    returned.  At ``g1 g2 = -J^2`` (within ``boundary_tol`` relative to
    ``J^2``) the degenerate pair ``(0, 0)`` is returned with the boundary
    flag set.  Outside the interval the result is ``None``.
    """
    if coupling <= 0:
        raise ValueError("coupling must be positive")
    j2 = coupling * coupling
    product = gamma1 * gamma2
    if product >= 0.0:
        return None
    if abs(product + j2) <= boundary_tol * j2:
        return DeltaEpsilonBranches(plus=0.0, minus=0.0, boundary=True)
    if product < -j2:
        return None
    radicand = -(1.0 + j2 / product)
    mag = abs(gamma1 + gamma2) * np.sqrt(max(radicand, 0.0))
    return DeltaEpsilonBranches(plus=float(mag), minus=float(-mag), boundary=False)


def eigen2_closed(p: WellParameters) -> tuple[complex, complex]:
    """Closed-form eigenvalues of the two-well Hamiltonian.

    ``mu = ((e1+e2) + i(g1+g2) +/- sqrt(((e1-e2) + i(g1-g2))^2 + 4J^2)) / 2``
    with the principal square root; returned as ``(mu_plus, mu_minus)``.
    """
    if p.wells != 2:
        raise ValueError(f"two wells required, got {p.wells}")
    e1, e2 = p.epsilons
    g1, g2 = p.gammas
    centre = (e1 + e2) + 1j * (g1 + g2)
    root = np.sqrt(complex((e1 - e2) + 1j * (g1 - g2)) ** 2 + 4.0 * p.coupling**2)
    return (complex(centre + root) / 2.0, complex(centre - root) / 2.0)


# ---------------------------------------------------------------------------
# three-mode closed forms


@dataclass(frozen=True)
class Gamma3Solutions:
    """Gain/loss distributions giving a three-well chain a real characteristic
    polynomial.

    ``triples`` holds concrete ``(g1, g2, g3)`` solutions (positive branch
    first in the discrete case).  ``pt_family`` marks the symmetric-potential
    case ``e1 = e3`` where ``g1 = -g3`` is free and ``g2 = 0``; the zero
    triple is used as its representative.  ``hermitian`` marks solutions
    where the concrete triple is identically zero.
    """

    admissible: bool
    gamma0: tuple[float, float] | None
    triples: tuple[tuple[float, float, float], ...]
    pt_family: bool
    hermitian: bool


def _gamma_triple(e1: float, e2: float, e3: float, g0: float):
    return (-(e2 - e3) * g0, (e1 - e3) * g0, -(e1 - e2) * g0)


def reality_conditions_3mode(epsilons, gammas, coupling: float) -> float:
    """Largest violation of the three coefficient-reality equations.

    The imaginary parts of the monic characteristic polynomial of the
    three-well Hamiltonian vanish exactly when

    * ``g1 + g2 + g3 = 0``,
    * ``e1 g2 + g1 e2 + e2 g3 + g2 e3 + e1 g3 + g1 e3 = 0``,
    * ``g1 e2 e3 + e1 g2 e3 + e1 e2 g3 - g1 g2 g3 - J^2 (g1 + g3) = 0``.
    """
    e1, e2, e3 = epsilons
    g1, g2, g3 = gammas
    j2 = coupling * coupling
    r1 = g1 + g2 + g3
    r2 = e1 * g2 + g1 * e2 + e2 * g3 + g2 * e3 + e1 * g3 + g1 * e3
    r3 = g1 * e2 * e3 + e1 * g2 * e3 + e1 * e2 * g3 - g1 * g2 * g3 - j2 * (g1 + g3)
    return float(max(abs(r1), abs(r2), abs(r3)))


def solve_3mode_gammas(
    eps1: float, eps2: float, eps3: float, coupling: float
) -> Gamma3Solutions:
    """Gain/loss triples that symmetrise a three-well chain with the given
    on-site energies.

    For pairwise distinct energies with ``0 < (e1-e2)(e2-e3) <= J^2`` the two
    discrete solutions ``g_k = (sign-pattern) * g0`` with ``g0^2 =
    J^2/((e1-e2)(e2-e3)) - 1`` are returned.  A symmetric potential
    (``e1 = e3``) admits the free family ``g1 = -g3``, ``g2 = 0``; equal
    energies additionally include the trivial Hermitian solution.  Any other
    configuration admits no solution at all.
    """
    if coupling <= 0:
        raise ValueError("coupling must be positive")
    e1, e2, e3 = float(eps1), float(eps2), float(eps3)
    if e1 == e3:
        return Gamma3Solutions(
            admissible=True,
            gamma0=None,
            triples=((0.0, 0.0, 0.0),),
            pt_family=True,
            hermitian=True,
        )
    if e1 == e2 or e2 == e3:
        return Gamma3Solutions(
            admissible=False, gamma0=None, triples=(), pt_family=False, hermitian=False
        )
    d12 = e1 - e2
    d23 = e2 - e3
    product = d12 * d23
    j2 = coupling * coupling
    if product <= 0.0 or product > j2:
        return Gamma3Solutions(
            admissible=False, gamma0=None, triples=(), pt_family=False, hermitian=False
        )
    g0 = float(np.sqrt(j2 / product - 1.0))
    if g0 == 0.0:
        return Gamma3Solutions(
            admissible=True,
            gamma0=(0.0, 0.0),
            triples=((0.0, 0.0, 0.0),),
            pt_family=False,
            hermitian=True,
        )
    return Gamma3Solutions(
        admissible=True,
        gamma0=(g0, -g0),
        triples=(_gamma_triple(e1, e2, e3, g0), _gamma_triple(e1, e2, e3, -g0)),
        pt_family=False,
        hermitian=False,
    )


def anti_pt_parameters(
    eps1: float, coupling: float, gamma0_sign: int = +1
) -> WellParameters | None:
    """Three-well chain with antisymmetric energies ``(e, 0, -e)`` and the
    matching symmetric gain/loss distribution, or ``None`` when ``|e| > J``.

    At ``e = 0`` the construction degenerates to the Hermitian chain.
    """
    sol = solve_3mode_gammas(eps1, 0.0, -eps1, coupling)
    if not sol.admissible:
        return None
    triple = sol.triples[0] if gamma0_sign >= 0 or len(sol.triples) == 1 else sol.triples[1]
    return WellParameters(
        epsilons=(eps1, 0.0, -eps1), gammas=triple, coupling=coupling
    )


def charpoly_reality_residual(h) -> float:
    """Scaled imaginary content of the characteristic polynomial.

    ``max_k |Im c_k| / (1 + max_k |c_k|)``; vanishes exactly when the
    spectrum is forced to be real or conjugate-paired.
    """
    c = char_poly(h)
    return float(np.max(np.abs(c.imag)) / (1.0 + np.max(np.abs(c))))


def semi_symmetrised_parameters(
    gamma1: float,
    gamma2: float,
    coupling: float,
    sign: int = +1,
    base_energy: float = 0.0,
) -> WellParameters | None:
    """Two-well chain with the energy difference tuned so one eigenvalue is
    real, centred so that ``e1 = -e2`` (up to ``base_energy``).

    ``sign >= 0`` selects the branch with ``e1 > e2``.  Returns ``None``
    outside the admissible gain/loss region.
    """
    branches = delta_epsilon_2mode(gamma1, gamma2, coupling)
    if branches is None:
        return None
    delta = branches.plus if sign >= 0 else branches.minus
    return WellParameters(
        epsilons=(base_energy + delta / 2.0, base_energy - delta / 2.0),
        gammas=(gamma1, gamma2),
        coupling=coupling,
    )


__all__ = [
    "SymmetriserError",
    "Symmetriser",
    "symmetrisation_residual",
    "semi_inverse_residual",
    "quasi_commutator_residual",
    "build_spectral_symmetriser",
    "build_antilinear_T",
    "antilinear_T_residual",
    "induced_antilinear_symmetry",
    "antilinear_symmetry_residual",
    "PAULI",
    "pauli_matrix",
    "pauli_coefficient_matrix",
    "pauli_determinant",
    "PauliSolution",
    "solve_pauli_2mode",
    "DeltaEpsilonBranches",
    "delta_epsilon_2mode",
    "eigen2_closed",
    "Gamma3Solutions",
    "reality_conditions_3mode",
    "solve_3mode_gammas",
    "anti_pt_parameters",
    "charpoly_reality_residual",
    "semi_symmetrised_parameters",
]
