"""Command-line front end with bit-stable CSV/JSON emission.

Subcommands
-----------
eigs        spectrum + pairing classification (JSON)
check       reality residual, symmetry predicates, per-state balance (JSON)
symmetrise  spectral symmetriser pair with all residuals (JSON)
solve2      two-mode Pauli nullspace + energy-difference branches (JSON)
solve3      three-mode gain/loss triples or family descriptor (JSON)
sweep2      one-parameter two-mode sweep (CSV)
sweep3      antisymmetric-energy three-mode sweep (CSV)
map2        two-mode gain/loss region map (CSV)
map3        three-mode energy-plane region map (CSV)
ep          exceptional points on a named family (JSON)

Exit codes: 0 success, 2 invalid configuration, 3 requested point not
admissible, 4 numerical failure.  Diagnostics go to stderr; data goes to
``--output`` or stdout.  Floats are serialised with 17 significant digits so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import explorer, linalg, model, symmetriser

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_ADMISSIBLE = 3
EXIT_NUMERICAL = 4


class ConfigError(ValueError):
    """Configuration document or flag set violates the schema."""


class NotAdmissibleError(RuntimeError):
    """The requested parameter point admits no solution."""


# ---------------------------------------------------------------------------
# deterministic serialisation


def format_float(x: float) -> str:
    """17-significant-digit decimal form (round-trip exact for doubles)."""
    return format(float(x), ".17g")


def dumps_json(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    out: list[str] = []
    _emit_json(obj, out)
    out.append("\n")
    return "".join(out)


def _emit_json(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for k, v in obj.items():
            if out[-1] != "{":
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _emit_json(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for v in obj:
            if out[-1] != "[":
                out.append(", ")
            _emit_json(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialise {type(obj)!r}")


def _complex_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _vector_json(v: np.ndarray) -> dict:
    return {"re": [float(x) for x in v.real], "im": [float(x) for x in v.imag]}


def _matrix_json(m: np.ndarray) -> dict:
    return {
        "re": [[float(x) for x in row] for row in m.real],
        "im": [[float(x) for x in row] for row in m.imag],
    }


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for x in row:
            if isinstance(x, bool):
                cells.append("1" if x else "0")
            elif isinstance(x, (int, np.integer)):
                cells.append(str(int(x)))
            elif isinstance(x, float):
                cells.append(format_float(x))
            else:
                cells.append(str(x))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# configuration


_BLOCK_SCHEMAS = {
    "sweep2": {"par", "gamma_min", "gamma_max", "steps", "sign"},
    "sweep3": {"eps_min", "eps_max", "steps", "gamma0_sign"},
    "map2": {"gamma1_min", "gamma1_max", "gamma2_min", "gamma2_max", "resolution", "sign"},
    "map3": {"fixed_axis", "fixed_value", "u_min", "u_max", "v_min", "v_max", "resolution"},
    "ep": {"path", "lo", "hi", "grid"},
    "symmetrise": {"side"},
}

_TOP_KEYS = {"wells", "epsilons", "gammas", "coupling", "tolerance", *_BLOCK_SCHEMAS}


@dataclass
class Config:
    """Validated run configuration (document fields + flag overrides)."""

    wells: int | None = None
    epsilons: tuple[float, ...] | None = None
    gammas: tuple[float, ...] | None = None
    coupling: float = 1.0
    tolerance: float = 1e-9
    blocks: dict = field(default_factory=dict)

    def block(self, name: str) -> dict:
        return dict(self.blocks.get(name, {}))


def _require_number(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"key {key!r} must be finite, got {value!r}")
    return float(value)


def _require_number_list(value, key: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise ConfigError(f"key {key!r} must be a list of numbers")
    return tuple(_require_number(v, key) for v in value)


def parse_config(text: str) -> Config:
    """Parse and validate a JSON configuration document.

    Unknown keys are rejected; list lengths must match ``wells``; the
    coupling must be positive.  Errors name the offending key.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed configuration document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("configuration document must be a JSON object")

    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration key {sorted(unknown)[0]!r}")

    cfg = Config()
    if "wells" in doc:
        if isinstance(doc["wells"], bool) or not isinstance(doc["wells"], int):
            raise ConfigError("key 'wells' must be an integer")
        if doc["wells"] < 2:
            raise ConfigError("key 'wells' must be at least 2")
        cfg.wells = doc["wells"]
    if "epsilons" in doc:
        cfg.epsilons = _require_number_list(doc["epsilons"], "epsilons")
    if "gammas" in doc:
        cfg.gammas = _require_number_list(doc["gammas"], "gammas")
    if "coupling" in doc:
        cfg.coupling = _require_number(doc["coupling"], "coupling")
        if cfg.coupling <= 0:
            raise ConfigError("key 'coupling' must be positive")
    if "tolerance" in doc:
        cfg.tolerance = _require_number(doc["tolerance"], "tolerance")
        if cfg.tolerance <= 0:
            raise ConfigError("key 'tolerance' must be positive")

    for name, allowed in _BLOCK_SCHEMAS.items():
        if name not in doc:
            continue
        block = doc[name]
        if not isinstance(block, dict):
            raise ConfigError(f"key {name!r} must be an object")
        bad = set(block) - allowed
        if bad:
            raise ConfigError(f"unknown key {sorted(bad)[0]!r} in block {name!r}")
        cfg.blocks[name] = dict(block)

    _check_lengths(cfg)
    return cfg


def _check_lengths(cfg: Config) -> None:
    n = cfg.wells
    if n is None and cfg.epsilons is not None:
        n = len(cfg.epsilons)
    if n is None and cfg.gammas is not None:
        n = len(cfg.gammas)
    cfg.wells = n
    if cfg.epsilons is not None and n is not None and len(cfg.epsilons) != n:
        raise ConfigError(f"epsilons length {len(cfg.epsilons)} != wells {n}")
    if cfg.gammas is not None and n is not None and len(cfg.gammas) != n:
        raise ConfigError(f"gammas length {len(cfg.gammas)} != wells {n}")


def _well_parameters(cfg: Config) -> model.WellParameters:
    if cfg.epsilons is None or cfg.gammas is None:
        raise ConfigError("this command requires 'epsilons' and 'gammas'")
    try:
        return model.WellParameters(cfg.epsilons, cfg.gammas, cfg.coupling)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# command handlers; each returns (exit_code, text)


def _cmd_eigs(cfg: Config):
    p = _well_parameters(cfg)
    s = linalg.eig(model.build_hamiltonian(p), pairing_tol=cfg.tolerance)
    payload = {
        "command": "eigs",
        "wells": p.wells,
        "coupling": p.coupling,
        "epsilons": list(p.epsilons),
        "gammas": list(p.gammas),
        "normalization": s.normalization,
        "degenerate": s.degenerate,
        "eigenvalues": [
            {
                **_complex_json(q.value),
                "right": _vector_json(q.right),
                "left": _vector_json(q.left),
                "right_residual": q.right_residual,
                "left_residual": q.left_residual,
                "self_orthogonality": q.self_orthogonality,
            }
            for q in s.pairs
        ],
        "classification": {
            "real": list(s.classification.real_indices),
            "pairs": [list(x) for x in s.classification.conjugate_pairs],
            "isolated": list(s.classification.isolated_indices),
            "tolerance": s.classification.tolerance,
        },
    }
    return EXIT_OK, dumps_json(payload)


def _cmd_check(cfg: Config):
    p = _well_parameters(cfg)
    h = model.build_hamiltonian(p)
    s = linalg.eig(h, pairing_tol=cfg.tolerance)
    balances = [model.state_balance(q.right, p) for q in s.pairs]
    payload = {
        "command": "check",
        "wells": p.wells,
        "coupling": p.coupling,
        "epsilons": list(p.epsilons),
        "gammas": list(p.gammas),
        "charpoly_reality_residual": symmetriser.charpoly_reality_residual(h),
        "pt_symmetric": model.is_pt_symmetric(p, cfg.tolerance),
        "anti_pt_potential": model.is_anti_pt_potential(p, cfg.tolerance),
        "anti_pt_anticommutator_norm": model.anti_pt_anticommutator_norm(p),
        "eigenvalues": [_complex_json(q.value) for q in s.pairs],
        "state_balance": balances,
    }
    return EXIT_OK, dumps_json(payload)


def _symmetriser_json(sym: symmetriser.Symmetriser) -> dict:
    return {
        "side": sym.side,
        "matrix": _matrix_json(sym.matrix),
        "rank": sym.rank,
        "kernel": [_vector_json(v) for v in sym.kernel_basis],
        "residual": sym.residual,
    }


def _cmd_symmetrise(cfg: Config):
    p = _well_parameters(cfg)
    h = model.build_hamiltonian(p)
    side = cfg.block("symmetrise").get("side", "both")
    if side not in ("left", "right", "both"):
        raise ConfigError(f"symmetrise side must be left/right/both, got {side!r}")
    s = linalg.biorthonormalize(linalg.eig(h, pairing_tol=cfg.tolerance))
    payload: dict = {
        "command": "symmetrise",
        "wells": p.wells,
        "coupling": p.coupling,
        "epsilons": list(p.epsilons),
        "gammas": list(p.gammas),
    }
    left = right = None
    if side in ("left", "both"):
        left = symmetriser.build_spectral_symmetriser(s, "left")
        payload["left"] = _symmetriser_json(left)
    if side in ("right", "both"):
        right = symmetriser.build_spectral_symmetriser(s, "right")
        payload["right"] = _symmetriser_json(right)
    if left is not None and right is not None:
        payload["quasi_commutator_residual"] = symmetriser.quasi_commutator_residual(
            left.matrix, right.matrix, h
        )
        payload["semi_inverse_residual"] = symmetriser.semi_inverse_residual(
            left.matrix, right.matrix
        )
    m_left = symmetriser.build_antilinear_T(s, "left")
    m_right = symmetriser.build_antilinear_T(s, "right")
    payload["antilinear_t_left_residual"] = symmetriser.antilinear_T_residual(
        m_left, h, "left"
    )
    payload["antilinear_t_right_residual"] = symmetriser.antilinear_T_residual(
        m_right, h, "right"
    )
    if left is not None:
        try:
            n_mat = symmetriser.induced_antilinear_symmetry(left.matrix, m_left)
            payload["antilinear_symmetry_residual"] = (
                symmetriser.antilinear_symmetry_residual(n_mat, h)
            )
        except symmetriser.SymmetriserError:
            payload["antilinear_symmetry_residual"] = None
    return EXIT_OK, dumps_json(payload)


def _cmd_solve2(cfg: Config):
    p = _well_parameters(cfg)
    if p.wells != 2:
        raise ConfigError(f"solve2 requires 2 wells, got {p.wells}")
    sol = symmetriser.solve_pauli_2mode(p)
    branches = symmetriser.delta_epsilon_2mode(p.gammas[0], p.gammas[1], p.coupling)
    payload = {
        "command": "solve2",
        "coupling": p.coupling,
        "epsilons": list(p.epsilons),
        "gammas": list(p.gammas),
        "family_dimension": sol.family_dimension,
        "determinant": sol.determinant,
        "basis": [[float(x) for x in v] for v in sol.basis],
        "sigma_matrices": [_matrix_json(m) for m in sol.matrices()],
        "delta_epsilon": (
            None
            if branches is None
            else {
                "plus": branches.plus,
                "minus": branches.minus,
                "boundary": branches.boundary,
            }
        ),
    }
    code = EXIT_OK if sol.family_dimension > 0 else EXIT_NOT_ADMISSIBLE
    return code, dumps_json(payload)


def _cmd_solve3(cfg: Config):
    if cfg.epsilons is None or len(cfg.epsilons) != 3:
        raise ConfigError("solve3 requires 'epsilons' of length 3")
    e1, e2, e3 = cfg.epsilons
    sol = symmetriser.solve_3mode_gammas(e1, e2, e3, cfg.coupling)
    payload = {
        "command": "solve3",
        "coupling": cfg.coupling,
        "epsilons": [e1, e2, e3],
        "admissible": sol.admissible,
        "gamma0": None if sol.gamma0 is None else list(sol.gamma0),
        "triples": [list(t) for t in sol.triples],
        "pt_family": sol.pt_family,
        "hermitian": sol.hermitian,
    }
    code = EXIT_OK if sol.admissible else EXIT_NOT_ADMISSIBLE
    return code, dumps_json(payload)


def _cmd_sweep2(cfg: Config):
    block = cfg.block("sweep2")
    par = block.get("par")
    if par is None:
        raise ConfigError("sweep2 requires 'par' (a/b/c/d or a kind name)")
    rows = explorer.sweep_2mode(
        par,
        float(block.get("gamma_min", 0.0)),
        float(block.get("gamma_max", 1.0)),
        int(block.get("steps", 101)),
        coupling=cfg.coupling,
        sign=+1 if block.get("sign", "+") == "+" else -1,
    )
    header = [
        "gamma", "gamma1", "gamma2", "eps1", "eps2", "admissible",
        "re_mu_plus", "im_mu_plus", "re_mu_minus", "im_mu_minus",
    ]
    table = [
        [
            r.parameter, r.gamma1, r.gamma2, r.eps1, r.eps2, r.admissible,
            r.mu_plus.real, r.mu_plus.imag, r.mu_minus.real, r.mu_minus.imag,
        ]
        for r in rows
    ]
    return EXIT_OK, _csv(header, table)


def _cmd_sweep3(cfg: Config):
    block = cfg.block("sweep3")
    rows = explorer.sweep_3mode_antipt(
        float(block.get("eps_min", -1.2)),
        float(block.get("eps_max", 1.2)),
        int(block.get("steps", 240)),
        coupling=cfg.coupling,
        gamma0_sign=+1 if block.get("gamma0_sign", "+") == "+" else -1,
    )
    header = [
        "eps1", "gamma1", "gamma2", "gamma3", "class",
        "re_l1", "im_l1", "re_l2", "im_l2", "re_l3", "im_l3",
    ]
    table = []
    for r in rows:
        vals = list(r.eigenvalues) + [complex(float("nan"), float("nan"))] * (
            3 - len(r.eigenvalues)
        )
        table.append(
            [r.eps1, r.gamma1, r.gamma2, r.gamma3, r.klass]
            + [x for v in vals for x in (v.real, v.imag)]
        )
    return EXIT_OK, _csv(header, table)


def _cmd_map2(cfg: Config):
    block = cfg.block("map2")
    samples = explorer.map_2mode_region(
        (float(block.get("gamma1_min", -2.0)), float(block.get("gamma1_max", 2.0))),
        (float(block.get("gamma2_min", -2.0)), float(block.get("gamma2_max", 2.0))),
        int(block.get("resolution", 101)),
        coupling=cfg.coupling,
        sign=+1 if block.get("sign", "+") == "+" else -1,
    )
    header = [
        "i", "j", "gamma1", "gamma2", "class", "delta_eps",
        "re_mu_plus", "im_mu_plus", "re_mu_minus", "im_mu_minus",
    ]
    nanc = complex(float("nan"), float("nan"))
    table = []
    for s in samples:
        mus = list(s.eigenvalues) + [nanc] * (2 - len(s.eigenvalues))
        table.append(
            [s.i, s.j, s.gamma1, s.gamma2, s.klass, s.delta_eps]
            + [x for v in mus for x in (v.real, v.imag)]
        )
    return EXIT_OK, _csv(header, table)


def _cmd_map3(cfg: Config):
    block = cfg.block("map3")
    axis = int(block.get("fixed_axis", 3))
    if axis not in (1, 2, 3):
        raise ConfigError("map3 fixed_axis must be 1, 2 or 3")
    plane = explorer.PlaneSpec(
        fixed_axis=axis - 1,
        fixed_value=float(block.get("fixed_value", 0.0)),
        u_range=(float(block.get("u_min", -1.5)), float(block.get("u_max", 1.5))),
        v_range=(float(block.get("v_min", -1.5)), float(block.get("v_max", 1.5))),
    )
    samples = explorer.map_3mode_region(
        plane, int(block.get("resolution", 101)), coupling=cfg.coupling
    )
    header = [
        "i", "j", "eps1", "eps2", "eps3", "class", "gamma1", "gamma2", "gamma3",
        "re_l1", "im_l1", "re_l2", "im_l2", "re_l3", "im_l3",
    ]
    nan = float("nan")
    nanc = complex(nan, nan)
    table = []
    for s in samples:
        tr = s.gammas if s.gammas is not None else (nan, nan, nan)
        vals = list(s.eigenvalues) + [nanc] * (3 - len(s.eigenvalues))
        table.append(
            [s.i, s.j, *s.epsilons, s.klass, *tr]
            + [x for v in vals for x in (v.real, v.imag)]
        )
    return EXIT_OK, _csv(header, table)


_EP_PATHS = ("a", "pt", "b", "rotated", "c", "shifted", "d", "lunt_trap", "antipt3")


def _ep_path(name: str, coupling: float):
    if name in ("a", "pt"):
        return explorer.pt_dimer_path(coupling)
    if name == "antipt3":
        return explorer.anti_pt_triple_path(coupling)
    if name in ("b", "rotated", "c", "shifted", "d", "lunt_trap"):
        par = explorer.Parametrisation(explorer.PARAMETRISATION_ALIASES.get(name, name))

        def path(t: float):
            g1, g2 = par.gammas(t, coupling)
            if par.fixes_energies_to_zero:
                return model.WellParameters((0.0, 0.0), (g1, g2), coupling)
            return symmetriser.semi_symmetrised_parameters(g1, g2, coupling)

        return path
    raise ConfigError(f"ep path must be one of {_EP_PATHS}, got {name!r}")


def _cmd_ep(cfg: Config):
    block = cfg.block("ep")
    name = block.get("path")
    if name is None:
        raise ConfigError("ep requires 'path'")
    path = _ep_path(str(name), cfg.coupling)
    results = explorer.find_ep(
        path,
        float(block.get("lo", 0.0)),
        float(block.get("hi", 2.0)),
        grid=int(block.get("grid", 512)),
    )
    payload = {
        "command": "ep",
        "path": str(name),
        "coupling": cfg.coupling,
        "results": [
            {
                "location": r.location,
                "order": r.order,
                "discriminant_residual": r.discriminant_residual,
                "eigenvalue": _complex_json(r.eigenvalue),
                "self_orthogonality": r.self_orthogonality,
                "bracket": [r.bracket[0], r.bracket[1]],
            }
            for r in results
        ],
    }
    return EXIT_OK, dumps_json(payload)


_HANDLERS = {
    "eigs": _cmd_eigs,
    "check": _cmd_check,
    "symmetrise": _cmd_symmetrise,
    "solve2": _cmd_solve2,
    "solve3": _cmd_solve3,
    "sweep2": _cmd_sweep2,
    "sweep3": _cmd_sweep3,
    "map2": _cmd_map2,
    "map3": _cmd_map3,
    "ep": _cmd_ep,
}


def run(command: str, cfg: Config, output: str | None) -> int:
    """Execute a subcommand against a validated configuration."""
    handler = _HANDLERS.get(command)
    if handler is None:
        print(f"symmwell: unknown command {command!r}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code, text = handler(cfg)
    except ConfigError as exc:
        print(f"symmwell: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotAdmissibleError as exc:
        print(f"symmwell: not admissible: {exc}", file=sys.stderr)
        return EXIT_NOT_ADMISSIBLE
    except (
        linalg.EigenSolveError,
        linalg.BiorthogonalizationError,
        symmetriser.SymmetriserError,
        explorer.RealityPreconditionError,
    ) as exc:
        print(f"symmwell: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"symmwell: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if code == EXIT_NOT_ADMISSIBLE:
        print("symmwell: requested point is not admissible", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symmwell",
        description="Analyse symmetrisation of few-well gain/loss Hamiltonians.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON configuration document")
        sp.add_argument("-o", "--output", help="output file (default stdout)")
        sp.add_argument("-J", "--coupling", type=float, help="hopping rate J > 0")
        sp.add_argument("--tolerance", type=float, help="classification tolerance")
        sp.add_argument("--eps", type=float, nargs="+", help="on-site energies")
        sp.add_argument("--gamma", type=float, nargs="+", help="gain/loss rates")

    for name in ("eigs", "check"):
        common(sub.add_parser(name))

    sp = sub.add_parser("symmetrise")
    common(sp)
    sp.add_argument("--side", choices=["left", "right", "both"])

    for name in ("solve2", "solve3"):
        common(sub.add_parser(name))

    sp = sub.add_parser("sweep2")
    common(sp)
    sp.add_argument("--par", help="parametrisation: a/b/c/d or kind name")
    sp.add_argument("--gamma-min", type=float)
    sp.add_argument("--gamma-max", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--sign", choices=["+", "-"])

    sp = sub.add_parser("sweep3")
    common(sp)
    sp.add_argument("--eps-min", type=float)
    sp.add_argument("--eps-max", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--gamma0-sign", choices=["+", "-"])

    sp = sub.add_parser("map2")
    common(sp)
    sp.add_argument("--gamma1-min", type=float)
    sp.add_argument("--gamma1-max", type=float)
    sp.add_argument("--gamma2-min", type=float)
    sp.add_argument("--gamma2-max", type=float)
    sp.add_argument("--resolution", type=int)
    sp.add_argument("--sign", choices=["+", "-"])

    sp = sub.add_parser("map3")
    common(sp)
    sp.add_argument("--fixed-axis", type=int, choices=[1, 2, 3])
    sp.add_argument("--fixed-value", type=float)
    sp.add_argument("--u-min", type=float)
    sp.add_argument("--u-max", type=float)
    sp.add_argument("--v-min", type=float)
    sp.add_argument("--v-max", type=float)
    sp.add_argument("--resolution", type=int)

    sp = sub.add_parser("ep")
    common(sp)
    sp.add_argument("--path", help="family: a/pt, b, c, d, antipt3")
    sp.add_argument("--lo", type=float)
    sp.add_argument("--hi", type=float)
    sp.add_argument("--grid", type=int)

    return parser


_FLAG_TO_BLOCK = {
    "sweep2": ("par", "gamma_min", "gamma_max", "steps", "sign"),
    "sweep3": ("eps_min", "eps_max", "steps", "gamma0_sign"),
    "map2": ("gamma1_min", "gamma1_max", "gamma2_min", "gamma2_max", "resolution", "sign"),
    "map3": ("fixed_axis", "fixed_value", "u_min", "u_max", "v_min", "v_max", "resolution"),
    "ep": ("path", "lo", "hi", "grid"),
    "symmetrise": ("side",),
}


def _merge_flags(cfg: Config, args: argparse.Namespace) -> Config:
    if args.coupling is not None:
        if args.coupling <= 0:
            raise ConfigError("flag -J/--coupling must be positive")
        cfg.coupling = args.coupling
    if args.tolerance is not None:
        if args.tolerance <= 0:
            raise ConfigError("flag --tolerance must be positive")
        cfg.tolerance = args.tolerance
    if args.eps is not None:
        cfg.epsilons = tuple(args.eps)
    if args.gamma is not None:
        cfg.gammas = tuple(args.gamma)
    if args.eps is not None or args.gamma is not None:
        cfg.wells = None  # re-derive from overridden lists
    _check_lengths(cfg)

    block_keys = _FLAG_TO_BLOCK.get(args.command, ())
    if block_keys:
        block = cfg.blocks.setdefault(args.command, {})
        for key in block_keys:
            value = getattr(args, key, None)
            if value is not None:
                block[key] = value
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.config is not None:
            with open(args.config, encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        else:
            cfg = Config()
        cfg = _merge_flags(cfg, args)
    except (ConfigError, OSError) as exc:
        print(f"symmwell: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(args.command, cfg, args.output)


def console_main() -> None:
    sys.exit(main())


__all__ = [
    "Config",
    "ConfigError",
    "parse_config",
    "run",
    "main",
    "console_main",
    "dumps_json",
    "format_float",
]
