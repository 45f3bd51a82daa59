"""Dense complex linear algebra for small non-Hermitian matrices.

Everything here operates on plain square ``numpy`` arrays of complex dtype
(dimension 2 to 16).  The module provides characteristic polynomials,
low-degree discriminants, a full left/right eigendecomposition with residual
bookkeeping, bi-orthogonal normalisation, and a deterministic classification
of eigenvalues into real values, complex-conjugate pairs, and isolated
complex values.

Conventions
-----------
* Characteristic polynomials are monic, ``p(x) = x^n + c[n-1] x^(n-1) + ...
  + c[0]``; only the trailing coefficients ``c[0..n-1]`` are returned, in
  ascending order.
* Right eigenvectors satisfy ``H r = lam r``; left eigenvectors satisfy the
  adjoint problem ``H^dag l = conj(lam) l`` (equivalently ``l^dag H = lam
  l^dag``).
* Residuals are relative: ``||H r - lam r|| / (||H||_F ||r||)`` and the
  mirrored left-hand expression, so they stay meaningful after rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

MAX_DIM = 16

#: Default relative tolerance for deciding whether an eigenvalue is real or
#: part of a conjugate pair.  One order of magnitude above the eigensolver
#: residual contract.
DEFAULT_PAIRING_TOL = 1e-9

#: Below this value of |r^T r| / (r^dag r) an eigenvector counts as
#: self-orthogonal, i.e. the spectrum sits too close to an exceptional point
#: for bi-orthogonal constructions.
SELF_ORTHOGONALITY_CUTOFF = 1e-8


class EigenSolveError(RuntimeError):
    """Eigendecomposition failed to converge."""


class BiorthogonalizationError(RuntimeError):
    """Bi-orthogonal normalisation is impossible (self-orthogonal pair)."""


def as_square_matrix(m) -> np.ndarray:
    """Coerce input to a finite square complex array of dimension 2..16."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if not 2 <= n <= MAX_DIM:
        raise ValueError(f"matrix dimension must be in 2..{MAX_DIM}, got {n}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def is_complex_symmetric(m) -> bool:
    """True iff the matrix equals its plain transpose exactly.

    Exact comparison is intentional: complex-symmetric matrices in this
    package are constructed entry by entry, never measured.
    """
    a = as_square_matrix(m)
    return bool(np.array_equal(a, a.T))


def char_poly(m) -> np.ndarray:
    """Monic characteristic polynomial of ``det(x I - M)``.

    Uses the Faddeev-LeVerrier trace recursion, which involves no
    eigendecomposition and therefore serves as an independent route to the
    spectrum-derived quantities.  Returns the coefficients ``c[0..n-1]`` in
    ascending order (the leading coefficient 1 is implied).
    """
    a = as_square_matrix(m)
    n = a.shape[0]
    desc = np.empty(n + 1, dtype=complex)  # coefficient of x^(n-k) at index k
    desc[0] = 1.0
    mk = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + desc[k - 1] * eye
        desc[k] = -np.trace(a @ mk) / k
    return desc[1:][::-1].copy()


def discriminant(coeffs) -> complex:
    """Discriminant of a monic quadratic or cubic given ascending coefficients.

    Zero exactly when the polynomial has a repeated root.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1:
        raise ValueError("coefficients must be a 1-d sequence")
    if c.shape[0] == 2:
        c0, c1 = c
        return complex(c1 * c1 - 4.0 * c0)
    if c.shape[0] == 3:
        c0, c1, c2 = c
        return complex(
            18.0 * c2 * c1 * c0
            - 4.0 * c2**3 * c0
            + c2**2 * c1**2
            - 4.0 * c1**3
            - 27.0 * c0**2
        )
    raise ValueError(f"discriminant supports degree 2 or 3, got degree {c.shape[0]}")


@dataclass(frozen=True)
class PairingClassification:
    """Partition of eigenvalue indices into real / conjugate-paired / isolated."""

    real_indices: tuple[int, ...]
    conjugate_pairs: tuple[tuple[int, int], ...]
    isolated_indices: tuple[int, ...]
    tolerance: float

    def all_indices(self) -> tuple[int, ...]:
        paired = [i for pair in self.conjugate_pairs for i in pair]
        return tuple(sorted((*self.real_indices, *paired, *self.isolated_indices)))


def classify_pairing(values, tol: float = DEFAULT_PAIRING_TOL) -> PairingClassification:
    """Greedy deterministic split of a value list into reals, conjugate pairs
    and isolated complex values.

    A value with ``|Im| <= tol * (1 + |v|)`` is real.  The remaining values
    are processed in ascending index order; each one is matched to the
    unused partner minimising ``|v_i - conj(v_j)|`` provided that distance
    stays within ``tol * (1 + |v_i|)``, otherwise it is isolated.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    vals = [complex(v) for v in values]
    real_idx: list[int] = []
    rest: list[int] = []
    for i, v in enumerate(vals):
        if abs(v.imag) <= tol * (1.0 + abs(v)):
            real_idx.append(i)
        else:
            rest.append(i)

    pairs: list[tuple[int, int]] = []
    isolated: list[int] = []
    used: set[int] = set()
    for i in rest:
        if i in used:
            continue
        best_j = -1
        best_d = np.inf
        for j in rest:
            if j == i or j in used:
                continue
            d = abs(vals[i] - vals[j].conjugate())
            if d < best_d:
                best_d, best_j = d, j
        if best_j >= 0 and best_d <= tol * (1.0 + abs(vals[i])):
            pairs.append((i, best_j))
            used.update((i, best_j))
        else:
            isolated.append(i)
            used.add(i)
    return PairingClassification(
        real_indices=tuple(real_idx),
        conjugate_pairs=tuple(pairs),
        isolated_indices=tuple(isolated),
        tolerance=float(tol),
    )


@dataclass(frozen=True, eq=False)
class EigenPair:
    """One eigenvalue with its right and left eigenvectors and diagnostics.

    ``self_orthogonality`` is ``|r^T r| / (r^dag r)``; it vanishes when the
    eigenvector becomes self-orthogonal at an exceptional point.
    """

    value: complex
    right: np.ndarray
    left: np.ndarray
    right_residual: float
    left_residual: float
    self_orthogonality: float


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Full eigendecomposition of a small complex matrix.

    ``normalization`` is ``"hermitian"`` (each vector has unit 2-norm) after
    :func:`eig` and ``"biorthogonal"`` (``l_i^dag r_j = delta_ij``) after
    :func:`biorthonormalize`.  ``degenerate`` flags spectra whose minimum
    self-orthogonality falls below :data:`SELF_ORTHOGONALITY_CUTOFF`.
    """

    matrix: np.ndarray
    pairs: tuple[EigenPair, ...]
    normalization: str
    classification: PairingClassification
    degenerate: bool

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs], dtype=complex)

    @property
    def right_matrix(self) -> np.ndarray:
        """Right eigenvectors as columns, in eigenvalue order."""
        return np.column_stack([p.right for p in self.pairs])

    @property
    def left_matrix(self) -> np.ndarray:
        """Left eigenvectors as columns, in eigenvalue order."""
        return np.column_stack([p.left for p in self.pairs])


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    """Scale a vector to unit norm with its largest entry real and positive."""
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        return v
    w = v / nrm
    k = int(np.argmax(np.abs(w)))
    piv = w[k]
    if piv != 0.0:
        w = w * (piv.conjugate() / abs(piv))
    return w


def eig(m, pairing_tol: float = DEFAULT_PAIRING_TOL) -> Spectrum:
    """Eigendecomposition with right and left eigenvectors.

    Parameters
    ----------
    m : array_like
        Square complex matrix, dimension 2..16.
    pairing_tol : float
        Relative tolerance handed to :func:`classify_pairing`.

    Returns
    -------
    Spectrum
        Eigenvalues sorted ascending by (real, imaginary) part, each with a
        unit-norm right vector, the left vector of the adjoint problem, both
        relative residuals, and the self-orthogonality measure.  Spectra
        within :data:`SELF_ORTHOGONALITY_CUTOFF` of an exceptional point are
        returned successfully but carry ``degenerate=True``.

    Raises
    ------
    EigenSolveError
        If the underlying QR iteration fails to converge.
    """
    a = as_square_matrix(m)
    try:
        w, vl, vr = scipy.linalg.eig(a, left=True, right=True)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenSolveError(f"eigendecomposition did not converge: {exc}") from exc

    order = np.lexsort((w.imag, w.real))
    hnorm = np.linalg.norm(a)
    denom = hnorm if hnorm > 0.0 else 1.0

    pairs = []
    for i in order:
        lam = complex(w[i])
        r = _canonical_phase(vr[:, i])
        l = _canonical_phase(vl[:, i])
        r_res = float(np.linalg.norm(a @ r - lam * r) / denom)
        l_res = float(np.linalg.norm(l.conj() @ a - lam * l.conj()) / denom)
        rtr = r @ r
        rdr = float(np.real(r.conj() @ r))
        so = float(abs(rtr) / rdr) if rdr > 0.0 else 0.0
        pairs.append(
            EigenPair(
                value=lam,
                right=r,
                left=l,
                right_residual=r_res,
                left_residual=l_res,
                self_orthogonality=so,
            )
        )

    classification = classify_pairing([p.value for p in pairs], pairing_tol)
    degenerate = any(p.self_orthogonality < SELF_ORTHOGONALITY_CUTOFF for p in pairs)
    return Spectrum(
        matrix=a,
        pairs=tuple(pairs),
        normalization="hermitian",
        classification=classification,
        degenerate=degenerate,
    )


def biorthonormalize(s: Spectrum, check_tol: float = 1e-9) -> Spectrum:
    """Rescale left eigenvectors so that ``l_i^dag r_j = delta_ij``.

    Right vectors are kept at unit norm; each left vector is divided by the
    conjugated overlap with its right partner.  Fails loudly when an overlap
    is numerically self-orthogonal (exceptional-point vicinity) or when the
    resulting Gram matrix misses the identity by more than ``check_tol``.
    """
    new_pairs = []
    for p in s.pairs:
        overlap = complex(p.left.conj() @ p.right)
        scale = np.linalg.norm(p.left) * np.linalg.norm(p.right)
        if abs(overlap) < SELF_ORTHOGONALITY_CUTOFF * scale:
            raise BiorthogonalizationError(
                f"self-orthogonal eigenvector at eigenvalue {p.value}: "
                f"|l^dag r| = {abs(overlap):.3e}"
            )
        new_pairs.append(replace(p, left=p.left / overlap.conjugate()))

    lmat = np.column_stack([p.left for p in new_pairs])
    rmat = np.column_stack([p.right for p in new_pairs])
    gram = lmat.conj().T @ rmat
    dev = float(np.max(np.abs(gram - np.eye(len(new_pairs)))))
    if dev > check_tol:
        raise BiorthogonalizationError(
            f"bi-orthogonal Gram matrix deviates from identity by {dev:.3e}"
        )
    return Spectrum(
        matrix=s.matrix,
        pairs=tuple(new_pairs),
        normalization="biorthogonal",
        classification=s.classification,
        degenerate=s.degenerate,
    )
