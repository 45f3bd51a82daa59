"""Parameter-space sweeps, region classification, and exceptional points.

Sweeps and maps emit plain row/sample records in a deterministic order
(ascending parameter, row-major grids) so that downstream serialisation is
bit-stable.  Grid evaluations are independent per sample; when the
``SYMMWELL_THREADS`` environment variable is set above 1 they run on a
thread pool, with results reassembled in index order.

Region class labels
-------------------
``notAdmissible``  no symmetrising parameters exist at this point
``ptLine``         symmetric potential with antisymmetric gain/loss
``boundary``       two-mode gain/loss product sits exactly at -J^2
``semiOneReal``    two-mode semi-symmetrised point (one real eigenvalue)
``fullThreeReal``  three-mode symmetrised point, all eigenvalues real
``fullOneReal``    three-mode symmetrised point, one real + conjugate pair
``hermitian``      the selected gain/loss triple is identically zero
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.optimize

from .linalg import char_poly, discriminant, eig
from .model import WellParameters, build_hamiltonian
from .symmetriser import (
    anti_pt_parameters,
    delta_epsilon_2mode,
    eigen2_closed,
    solve_3mode_gammas,
)

#: Absolute tolerance on Im(eigenvalue) when counting real eigenvalues in
#: region classification, matched to the eigensolver residual contract.
REAL_CLASS_TOL = 1e-8

_NAN = float("nan")


def _thread_cap() -> int:
    raw = os.environ.get("SYMMWELL_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    cap = _thread_cap()
    if cap > 1:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------------------
# gain/loss parametrisations of the two-mode family


@dataclass(frozen=True)
class Parametrisation:
    """One-parameter slice through the two-mode gain/loss plane.

    Kinds: ``pt`` (g, -g), ``rotated`` (2g, -g/2), ``shifted`` (g + 1/2,
    -g + 1/2), ``lunt_trap`` (the symmetric-trap family, swept in ``a`` with
    ``|a| < 1``), or ``custom`` with an explicit ``mapping(t, J) -> (g1,
    g2)``.
    """

    kind: str
    mapping: Callable[[float, float], tuple[float, float]] | None = None

    _KINDS = ("pt", "rotated", "shifted", "lunt_trap", "custom")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown parametrisation kind {self.kind!r}")
        if self.kind == "custom" and self.mapping is None:
            raise ValueError("custom parametrisation needs a mapping")

    def gammas(self, t: float, coupling: float) -> tuple[float, float]:
        if self.kind == "pt":
            return (t, -t)
        if self.kind == "rotated":
            return (2.0 * t, -t / 2.0)
        if self.kind == "shifted":
            return (t + 0.5, -t + 0.5)
        if self.kind == "lunt_trap":
            if not abs(t) < 1.0:
                raise ValueError(f"lunt_trap parameter must satisfy |a| < 1, got {t}")
            return (
                coupling * np.sqrt((1.0 + t) / (1.0 - t)),
                -coupling * np.sqrt((1.0 - t) / (1.0 + t)),
            )
        return self.mapping(t, coupling)

    @property
    def fixes_energies_to_zero(self) -> bool:
        """True for the kinds that keep both on-site energies at zero."""
        return self.kind in ("pt", "lunt_trap")


#: Short CLI aliases for the four named slices.
PARAMETRISATION_ALIASES = {
    "a": "pt",
    "b": "rotated",
    "c": "shifted",
    "d": "lunt_trap",
}


@dataclass(frozen=True)
class SweepRow:
    """One sample of a two-mode sweep."""

    parameter: float
    gamma1: float
    gamma2: float
    eps1: float
    eps2: float
    admissible: bool
    boundary: bool
    mu_plus: complex
    mu_minus: complex
    #: For the ``shifted`` slice only: whether the sample also satisfies the
    #: narrower |gamma| <= J bound; None for the other kinds.
    prose_admissible: bool | None = None


def sweep_2mode(
    par: Parametrisation | str,
    gamma_min: float,
    gamma_max: float,
    steps: int,
    coupling: float = 1.0,
    sign: int = +1,
) -> list[SweepRow]:
    """Sweep a one-parameter gain/loss slice and record both eigenvalues.

    For the ``rotated`` and ``shifted`` kinds the on-site energies are set
    to ``e1 = -e2 = delta/2`` with ``delta`` the admissible energy
    difference of the requested ``sign`` (positive sign means ``e1 > e2``);
    samples without an admissible ``delta`` carry NaN energies and
    eigenvalues.  The ``pt`` and ``lunt_trap`` kinds keep both energies at
    zero.  Rows are emitted in ascending parameter order.
    """
    if isinstance(par, str):
        par = Parametrisation(PARAMETRISATION_ALIASES.get(par, par))
    if steps < 2:
        raise ValueError("at least two sweep steps are required")
    if not gamma_min < gamma_max:
        raise ValueError("empty sweep range")

    def one(t: float) -> SweepRow:
        g1, g2 = par.gammas(float(t), coupling)
        prose = abs(t) <= coupling if par.kind == "shifted" else None
        if par.fixes_energies_to_zero:
            p = WellParameters((0.0, 0.0), (g1, g2), coupling)
            mu_p, mu_m = eigen2_closed(p)
            return SweepRow(
                parameter=float(t),
                gamma1=g1,
                gamma2=g2,
                eps1=0.0,
                eps2=0.0,
                admissible=True,
                boundary=(par.kind == "lunt_trap"),
                mu_plus=mu_p,
                mu_minus=mu_m,
                prose_admissible=prose,
            )
        branches = delta_epsilon_2mode(g1, g2, coupling)
        if branches is None:
            return SweepRow(
                parameter=float(t),
                gamma1=g1,
                gamma2=g2,
                eps1=_NAN,
                eps2=_NAN,
                admissible=False,
                boundary=False,
                mu_plus=complex(_NAN, _NAN),
                mu_minus=complex(_NAN, _NAN),
                prose_admissible=prose,
            )
        delta = branches.plus if sign >= 0 else branches.minus
        p = WellParameters((delta / 2.0, -delta / 2.0), (g1, g2), coupling)
        mu_p, mu_m = eigen2_closed(p)
        return SweepRow(
            parameter=float(t),
            gamma1=g1,
            gamma2=g2,
            eps1=delta / 2.0,
            eps2=-delta / 2.0,
            admissible=True,
            boundary=branches.boundary,
            mu_plus=mu_p,
            mu_minus=mu_m,
            prose_admissible=prose,
        )

    return _ordered_map(one, np.linspace(gamma_min, gamma_max, steps))


# ---------------------------------------------------------------------------
# region maps


@dataclass(frozen=True)
class Region2Sample:
    """One grid point of the two-mode gain/loss plane."""

    i: int
    j: int
    gamma1: float
    gamma2: float
    klass: str
    eigenvalues: tuple[complex, ...]
    delta_eps: float


def map_2mode_region(
    gamma1_range: tuple[float, float],
    gamma2_range: tuple[float, float],
    resolution: int,
    coupling: float = 1.0,
    sign: int = +1,
    grid_tol: float = 1e-12,
) -> list[Region2Sample]:
    """Classify a grid of the (gamma1, gamma2) plane.

    A point is admissible when ``-J^2 <= g1 g2 < 0``.  Classes, in decision
    order: ``notAdmissible``, ``ptLine`` (``g1 + g2 = 0`` within grid
    tolerance), ``boundary`` (``g1 g2 = -J^2`` within grid tolerance), and
    ``semiOneReal`` with the energy difference of the requested sign.
    Output is row-major: gamma1 index outer, gamma2 index inner.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2 per axis")
    g1s = np.linspace(gamma1_range[0], gamma1_range[1], resolution)
    g2s = np.linspace(gamma2_range[0], gamma2_range[1], resolution)
    j2 = coupling * coupling

    def one(idx: tuple[int, int]) -> Region2Sample:
        i, j = idx
        g1 = float(g1s[i])
        g2 = float(g2s[j])
        product = g1 * g2
        admissible = (product < 0.0) and (product + j2 >= -grid_tol * (j2 + abs(product)))
        if not admissible:
            return Region2Sample(i, j, g1, g2, "notAdmissible", (), _NAN)
        on_pt_line = abs(g1 + g2) <= grid_tol * (1.0 + abs(g1) + abs(g2))
        on_boundary = abs(product + j2) <= grid_tol * (j2 + abs(product))
        if on_pt_line:
            klass = "ptLine"
            delta = 0.0
        elif on_boundary:
            klass = "boundary"
            delta = 0.0
        else:
            klass = "semiOneReal"
            branches = delta_epsilon_2mode(g1, g2, coupling)
            delta = branches.plus if sign >= 0 else branches.minus
        p = WellParameters((delta / 2.0, -delta / 2.0), (g1, g2), coupling)
        mu_p, mu_m = eigen2_closed(p)
        return Region2Sample(i, j, g1, g2, klass, (mu_p, mu_m), delta)

    grid = [(i, j) for i in range(resolution) for j in range(resolution)]
    return _ordered_map(one, grid)


@dataclass(frozen=True)
class PlaneSpec:
    """Axis-aligned plane in the three-well energy space.

    ``fixed_axis`` is 0, 1 or 2; the remaining two axes are swept in
    ascending index order (first swept axis = grid rows).
    """

    fixed_axis: int
    fixed_value: float
    u_range: tuple[float, float]
    v_range: tuple[float, float]

    def __post_init__(self):
        if self.fixed_axis not in (0, 1, 2):
            raise ValueError("fixed_axis must be 0, 1 or 2")

    @property
    def swept_axes(self) -> tuple[int, int]:
        rest = [k for k in (0, 1, 2) if k != self.fixed_axis]
        return (rest[0], rest[1])

    def epsilons(self, u: float, v: float) -> tuple[float, float, float]:
        out = [0.0, 0.0, 0.0]
        out[self.fixed_axis] = self.fixed_value
        a, b = self.swept_axes
        out[a] = u
        out[b] = v
        return (out[0], out[1], out[2])


@dataclass(frozen=True)
class Region3Sample:
    """One grid point of a three-well energy plane."""

    i: int
    j: int
    epsilons: tuple[float, float, float]
    klass: str
    gammas: tuple[float, float, float] | None
    eigenvalues: tuple[complex, ...]


def _classify_3mode(eps, coupling: float, gamma0_sign: int = +1):
    sol = solve_3mode_gammas(eps[0], eps[1], eps[2], coupling)
    if not sol.admissible:
        return "notAdmissible", None, ()
    triple = (
        sol.triples[0]
        if gamma0_sign >= 0 or len(sol.triples) == 1
        else sol.triples[1]
    )
    if sol.pt_family:
        klass = "ptLine"
    elif sol.hermitian:
        klass = "hermitian"
    else:
        klass = ""
    p = WellParameters(eps, triple, coupling)
    vals = np.linalg.eigvals(build_hamiltonian(p))
    vals = vals[np.lexsort((vals.imag, vals.real))]
    if not klass:
        n_real = int(np.sum(np.abs(vals.imag) <= REAL_CLASS_TOL))
        klass = "fullThreeReal" if n_real == 3 else "fullOneReal"
    return klass, triple, tuple(complex(v) for v in vals)


def map_3mode_region(
    plane: PlaneSpec, resolution: int, coupling: float = 1.0
) -> list[Region3Sample]:
    """Classify a grid of a three-well energy plane.

    Each admissible point is evaluated with the positive-branch gain/loss
    triple; ``fullThreeReal`` requires all three eigenvalues real within
    :data:`REAL_CLASS_TOL`, otherwise the point is ``fullOneReal``.  The
    symmetric-potential family is tagged ``ptLine`` and a vanishing triple
    ``hermitian``.  Output is row-major over (first swept axis, second swept
    axis).
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2 per axis")
    us = np.linspace(plane.u_range[0], plane.u_range[1], resolution)
    vs = np.linspace(plane.v_range[0], plane.v_range[1], resolution)

    def one(idx: tuple[int, int]) -> Region3Sample:
        i, j = idx
        eps = plane.epsilons(float(us[i]), float(vs[j]))
        klass, triple, vals = _classify_3mode(eps, coupling)
        return Region3Sample(i, j, eps, klass, triple, vals)

    grid = [(i, j) for i in range(resolution) for j in range(resolution)]
    return _ordered_map(one, grid)


@dataclass(frozen=True)
class Sweep3Row:
    """One sample of the antisymmetric-energy three-well sweep."""

    eps1: float
    gamma1: float
    gamma2: float
    gamma3: float
    klass: str
    eigenvalues: tuple[complex, ...]


def sweep_3mode_antipt(
    eps_min: float,
    eps_max: float,
    steps: int,
    coupling: float = 1.0,
    gamma0_sign: int = +1,
) -> list[Sweep3Row]:
    """Sweep the antisymmetric-energy family ``(e, 0, -e)``.

    Admissible exactly for ``|e| <= J``; the matching symmetric gain/loss
    triple of the requested branch is used.  Rows are emitted in ascending
    ``e`` order; non-admissible rows carry NaN gains and no eigenvalues.
    """
    if steps < 2:
        raise ValueError("at least two sweep steps are required")
    if not eps_min < eps_max:
        raise ValueError("empty sweep range")

    def one(e: float) -> Sweep3Row:
        e = float(e)
        klass, triple, vals = _classify_3mode((e, 0.0, -e), coupling, gamma0_sign)
        if triple is None:
            return Sweep3Row(e, _NAN, _NAN, _NAN, klass, ())
        return Sweep3Row(e, triple[0], triple[1], triple[2], klass, vals)

    return _ordered_map(one, np.linspace(eps_min, eps_max, steps))


# ---------------------------------------------------------------------------
# exceptional-point location


@dataclass(frozen=True)
class EPResult:
    """A located exceptional point on a one-parameter family."""

    location: float
    order: int
    discriminant_residual: float
    eigenvalue: complex
    self_orthogonality: float
    bracket: tuple[float, float]


class RealityPreconditionError(ValueError):
    """The characteristic polynomial is not real along the scanned family."""


def _real_charpoly(p: WellParameters, reality_tol: float):
    c = char_poly(build_hamiltonian(p))
    scale = 1.0 + float(np.max(np.abs(c)))
    worst = float(np.max(np.abs(c.imag)))
    if worst > reality_tol * scale:
        raise RealityPreconditionError(
            f"characteristic polynomial is not real along the path "
            f"(imaginary content {worst:.3e} at parameters {p})"
        )
    return c.real


def _disc_tolerance(coeffs: np.ndarray) -> float:
    return 1e-10 * (1.0 + float(np.max(np.abs(coeffs))) ** 3)


def _triple_root(coeffs: np.ndarray) -> bool:
    """Whether a real monic cubic with vanishing discriminant has a triple root.

    The derivative ``3 x^2 + 2 c2 x + c1`` has a double root (coincident
    critical points) exactly for a triple root; its discriminant is computed
    directly from the coefficients, so no cube-root noise amplification
    enters.
    """
    c0, c1, c2 = (float(x) for x in coeffs)
    deriv_disc = (2.0 * c2 / 3.0) ** 2 - 4.0 * c1 / 3.0
    scale = 1.0 + max(abs(c0), abs(c1), abs(c2))
    return abs(deriv_disc) <= 1e-8 * scale * scale


def find_ep(
    path: Callable[[float], WellParameters | None],
    lo: float,
    hi: float,
    grid: int = 512,
    order_hint: int | None = None,
    reality_tol: float = 1e-8,
) -> list[EPResult]:
    """Locate eigenvalue coalescences along a one-parameter family.

    ``path`` maps the scan parameter to well parameters, or ``None`` where
    the family is not defined.  The real discriminant of the characteristic
    polynomial (degree 2 or 3) is scanned at ``grid`` subintervals; sign
    changes are refined by bisection far below the guaranteed ``1e-10``
    bracket width, and sign-preserving local minima are refined by bounded
    scalar minimisation and accepted only if the discriminant becomes
    numerically zero.

    Order determination: a repeated root is third order exactly when the
    critical points of the cubic coincide as well, i.e. when the
    discriminant of the derivative polynomial also vanishes.  That test is
    evaluated at coefficient level (threshold ``1e-8 * (1 + max|c|)^2``)
    because the root-space distance between members of a defective triple
    cannot drop below the cube root of the coefficient noise in double
    precision.  ``order_hint`` is advisory and never overrides the
    determined order.

    Raises :class:`RealityPreconditionError` when the characteristic
    polynomial has imaginary content beyond ``reality_tol`` anywhere on the
    defined part of the family.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 subintervals")
    if not lo < hi:
        raise ValueError("empty search interval")

    ts = np.linspace(lo, hi, grid + 1)
    disc_vals: list[float | None] = []
    for t in ts:
        p = path(float(t))
        if p is None:
            disc_vals.append(None)
            continue
        c = _real_charpoly(p, reality_tol)
        disc_vals.append(float(discriminant(c).real))

    def disc_at(t: float) -> float:
        p = path(float(t))
        if p is None:
            raise ValueError(f"path undefined inside bracket at t={t}")
        return float(discriminant(_real_charpoly(p, reality_tol)).real)

    found: list[tuple[float, tuple[float, float]]] = []

    def push(loc: float, bracket: tuple[float, float]):
        min_sep = (hi - lo) / (2.0 * grid)
        for k, (other, _) in enumerate(found):
            if abs(other - loc) < min_sep:
                return
        found.append((loc, bracket))

    # exact zeros and sign changes on the scan grid
    for k in range(grid + 1):
        d = disc_vals[k]
        if d is None:
            continue
        if d == 0.0:
            push(float(ts[k]), (float(ts[k]), float(ts[k])))
    for k in range(grid):
        d0, d1 = disc_vals[k], disc_vals[k + 1]
        if d0 is None or d1 is None or d0 == 0.0 or d1 == 0.0:
            continue
        if d0 * d1 < 0.0:
            a, b = float(ts[k]), float(ts[k + 1])
            fa = d0
            while b - a > 1e-14 * (1.0 + abs(a) + abs(b)):
                mid = 0.5 * (a + b)
                fm = disc_at(mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0.0:
                    b = mid
                else:
                    a, fa = mid, fm
            push(0.5 * (a + b), (a, b))

    # sign-preserving local minima of |disc|
    for k in range(1, grid):
        d_prev, d0, d_next = disc_vals[k - 1], disc_vals[k], disc_vals[k + 1]
        if None in (d_prev, d0, d_next) or 0.0 in (d_prev, d0, d_next):
            continue
        if not (abs(d0) < abs(d_prev) and abs(d0) <= abs(d_next)):
            continue
        if d_prev * d0 < 0.0 or d0 * d_next < 0.0:
            continue  # handled by bisection
        res = scipy.optimize.minimize_scalar(
            lambda t: abs(disc_at(t)),
            bounds=(float(ts[k - 1]), float(ts[k + 1])),
            method="bounded",
            options={"xatol": 1e-12},
        )
        loc = float(res.x)
        p = path(loc)
        if p is None:
            continue
        c = _real_charpoly(p, reality_tol)
        if abs(float(res.fun)) <= _disc_tolerance(c):
            push(loc, (loc - 1e-12, loc + 1e-12))

    results = []
    for loc, bracket in sorted(found):
        p = path(loc)
        c = _real_charpoly(p, reality_tol)
        disc_res = abs(float(discriminant(c).real))
        if disc_res > _disc_tolerance(c):
            continue
        spectrum = eig(build_hamiltonian(p))
        vals = spectrum.values
        n = len(vals)
        gaps = [
            (abs(vals[a] - vals[b]), a, b) for a in range(n) for b in range(a + 1, n)
        ]
        gaps.sort(key=lambda g: g[0])
        _, a, b = gaps[0]
        if n == 3 and _triple_root(c):
            order = 3
            ep_value = complex(np.mean(vals))
        else:
            order = 2
            ep_value = complex((vals[a] + vals[b]) / 2.0)
        self_orth = min(pair.self_orthogonality for pair in spectrum.pairs)
        results.append(
            EPResult(
                location=loc,
                order=order,
                discriminant_residual=disc_res,
                eigenvalue=ep_value,
                self_orthogonality=self_orth,
                bracket=bracket,
            )
        )
    return results


def pt_dimer_path(coupling: float = 1.0) -> Callable[[float], WellParameters]:
    """Gain/loss sweep of the balanced dimer, for EP searches."""

    def path(g: float) -> WellParameters:
        return WellParameters((0.0, 0.0), (g, -g), coupling)

    return path


def anti_pt_triple_path(
    coupling: float = 1.0, gamma0_sign: int = +1
) -> Callable[[float], WellParameters | None]:
    """Energy sweep of the antisymmetric three-well family, for EP searches."""

    def path(e: float) -> WellParameters | None:
        if e == 0.0:
            return None  # family representative is discontinuous at e = 0
        return anti_pt_parameters(e, coupling, gamma0_sign)

    return path


__all__ = [
    "REAL_CLASS_TOL",
    "Parametrisation",
    "PARAMETRISATION_ALIASES",
    "SweepRow",
    "sweep_2mode",
    "Region2Sample",
    "map_2mode_region",
    "PlaneSpec",
    "Region3Sample",
    "map_3mode_region",
    "Sweep3Row",
    "sweep_3mode_antipt",
    "EPResult",
    "RealityPreconditionError",
    "find_ep",
    "pt_dimer_path",
    "anti_pt_triple_path",
]
