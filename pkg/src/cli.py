"""
Linea de comandos: constants, local-density, reduce, census, verify.

Codigos de salida: 0 si todo cuadra, 1 si hubo anomalias o identidades
fallidas, 2 ante errores de uso.
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from src.archimedean.constants import constant_Cfin, constant_Cinf
from src.archimedean.slices import slice_sum
from src.archimedean.volume import volume_table
from src.census.census import census, sweep_frame
from src.census.cross_check import cross_check_direct
from src.config import Caps, RunConfig
from src.exactmath.poly import MonicPoly
from src.exactmath.rings import QQ, ZZ
from src.exceptions import OrbitCountError, UsageError
from src.local.densities import euler_factor_identity, full_lambda_integral, local_lambda_integral
from src.local.euler import interval_str
from src.local.families import FamilySpec
from src.local.orbits import orbit_count_graded, orbit_count_local
from src.local.verify import (
    euler_identity_table,
    family_routes,
    jacobian_verify,
    section_check,
    transitivity_check,
)
from src.reduction.canonical import canonical_form_Z
from src.reduction.field import reduce_over_field, reduce_stable
from src.representation.invariants import valid_root_counts
from src.representation.matrices import SymMatrix

logger = logging.getLogger(__name__)


def _fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _coeffs(raw: str) -> list[int]:
    try:
        return [int(c) for c in raw.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"coeficientes no validos: '{raw}' (ejemplo: --f 0,9,0)")


def _load_family(path: Optional[Path]) -> FamilySpec:
    return FamilySpec.load(path) if path else FamilySpec.full()


def _write_json(payload, path: Optional[Path]) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=str)
    logger.info(f"JSON escrito en {path}")


def _banner(title: str) -> None:
    print("=" * 60)
    print(title)
    print("=" * 60)


# =============================================================================
# SUBCOMANDOS
# =============================================================================
def cmd_constants(args: argparse.Namespace, config: RunConfig) -> bool:
    cfin = constant_Cfin(args.n, args.pmax, args.tail)
    sliced = slice_sum(args.n, args.slice_trunc)
    table = volume_table(args.n, args.samples, args.seed, config.threads)
    strata = [args.r] if args.r is not None else valid_root_counts(args.n)
    payload = {
        "n": args.n,
        "Cfin": interval_str(cfin),
        "tail_model": args.tail,
        "slice_sum": {"m_trunc": args.slice_trunc, "total": interval_str(sliced.total)},
        "Cinf": {str(r): {"interval": interval_str(constant_Cinf(args.n, r, table[r])), "volume": table[r].to_json()}
                 for r in strata},
        "config_hash": config.config_hash(),
    }
    overlap = cfin[0] <= sliced.total[1] and sliced.total[0] <= cfin[1]
    payload["status"] = "success" if overlap else "error"
    _write_json(payload, args.out)

    _banner(f"CONSTANTES n={args.n}")
    print(f"C_fin (Euler):  {payload['Cfin']}")
    print(f"C_fin (cortes): {payload['slice_sum']['total']}")
    for r, item in payload["Cinf"].items():
        print(f"C_inf r={r}:     {item['interval']}")
    return overlap


def cmd_local_density(args: argparse.Namespace, config: RunConfig) -> bool:
    family = _load_family(args.family)
    identity = euler_factor_identity(args.n, args.p)
    factor = local_lambda_integral(args.n, args.p, family, config.caps)
    payload = {
        "n": args.n,
        "p": args.p,
        "family": family.name,
        "full_integral": _fraction(full_lambda_integral(args.n, args.p)),
        "family_integral": factor.to_json(),
        "euler_identity": {"lhs": _fraction(identity.lhs), "rhs": _fraction(identity.rhs), "equal": identity.equal},
    }
    if args.f:
        coeffs = _coeffs(args.f)
        if len(coeffs) != args.n:
            raise UsageError(f"--f tiene grado {len(coeffs)}, se esperaba n={args.n}")
        f = MonicPoly.of(coeffs, ZZ)
        payload["c_p"] = orbit_count_local(f, args.p, family, config.caps)
        payload["graded"] = {str(k): v for k, v in orbit_count_graded(f, args.p, family, config.caps).items()}
    payload["status"] = "success" if identity.equal else "error"
    _write_json(payload, args.out)

    _banner(f"DENSIDAD LOCAL n={args.n}, p={args.p}")
    print(f"Integral completa: {payload['full_integral']}")
    print(f"Integral familia:  {payload['family_integral']['value']}")
    print(f"Identidad Euler:   {identity.equal}")
    if "c_p" in payload:
        print(f"c_p(f):            {payload['c_p']}  {payload['graded']}")
    return identity.equal


def _matrix_rows(source: str) -> list[list]:
    """--matrix: lista de filas o SymMatrix JSON {"n", "ring", "entries"}."""
    try:
        text = source if source.lstrip().startswith(("[", "{")) else Path(source).read_text()
        raw = json.loads(text)
    except OSError as e:
        raise UsageError(f"--matrix: no se puede leer {source}: {e}")
    except json.JSONDecodeError as e:
        raise UsageError(f"--matrix debe ser JSON: {e}")
    if isinstance(raw, dict):
        try:
            return [list(row) for row in SymMatrix.from_json(raw).rows]
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"SymMatrix JSON no valido: {e}")
    if not isinstance(raw, list) or not all(isinstance(row, list) for row in raw):
        raise UsageError("--matrix debe ser una lista de filas o un objeto SymMatrix")
    return raw


def cmd_reduce(args: argparse.Namespace, config: RunConfig) -> bool:
    raw = _matrix_rows(args.matrix)
    if args.ring == "Z":
        B = SymMatrix.from_rows([[int(x) for x in row] for row in raw], ZZ)
        payload = canonical_form_Z(B).to_json()
    elif args.p is not None:
        B = SymMatrix.from_rows([[int(x) for x in row] for row in raw], ZZ)
        payload = reduce_stable(B, args.p, args.k).to_json()
    else:
        B = SymMatrix.from_rows([[Fraction(str(x)) for x in row] for row in raw], QQ)
        payload = reduce_over_field(B).to_json()
    payload["status"] = "success"
    _write_json(payload, args.out)

    _banner(f"REDUCCION sobre {args.ring if args.p is None else f'Z/{args.p}^{args.k}'}")
    print(json.dumps(payload, indent=2, default=str))
    return True


def cmd_census(args: argparse.Namespace, config: RunConfig) -> bool:
    family = _load_family(args.family)
    xs = config.x_sweep or [config.x]
    reports = []
    checks = []
    for X in xs:
        report = census(
            args.n, args.r, X, family=family, caps=config.caps, threads=config.threads,
            samples=config.samples, seed=config.seed or 0, m_cutoff=args.m_cutoff,
            predict=not args.no_predict, run_config=config,
        )
        reports.append(report)
        if args.cross_check:
            checks.append(cross_check_direct(args.n, X, args.r, config.caps))
    payload = {"reports": [rep.to_json() for rep in reports], "cross_checks": checks}
    _write_json(payload, args.out)
    frame = sweep_frame(reports)
    if args.csv:
        args.csv.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(args.csv, index=False)
        logger.info(f"CSV escrito en {args.csv}")

    _banner(f"CENSO n={args.n}, r={'todos' if args.r is None else args.r}, familia '{family.name}'")
    print(frame.to_string(index=False))
    for check in checks:
        print(f"Verificacion directa X={check['X']}: {check.get('direct')} vs {check.get('census')} [{check['status']}]")
    return all(not rep.anomalies for rep in reports) and all(c["status"] == "success" for c in checks)


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> bool:
    kind = args.check
    if kind == "euler":
        frame = euler_identity_table(args.n, args.pmax)
        if args.csv:
            args.csv.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(args.csv, index=False)
        ok = bool(frame["equal"].all())
        _write_json({"n": args.n, "primes": len(frame), "status": "success" if ok else "error"}, args.out)
        _banner(f"IDENTIDAD DE EULER n={args.n}, p <= {args.pmax}")
        print(frame.to_string(index=False))
        return ok
    if kind == "jacobian":
        check = jacobian_verify(args.n, args.p, args.m, config.caps)
        payload = {**check.model_dump(mode="json"), "status": "success" if check.ok else "error"}
        _write_json(payload, args.out)
        _banner(f"JACOBIANO n={args.n}, p={args.p}")
        print(f"medido {check.measured}, esperado {check.expected}, orbitas {check.orbits}")
        return check.ok
    if kind == "section":
        result = section_check(args.n, args.trials, args.seed or 0)
    elif kind == "transitivity":
        result = transitivity_check(args.n, args.p, config.caps)
    else:
        family = _load_family(args.family)
        routes = [family_routes(args.n, p, family, config.caps) for p in family.conditioned_primes()]
        failures = [{"status": "error", **r.model_dump(mode="json")} for r in routes if not r.equal]
        result = {"routes": [r.model_dump(mode="json") for r in routes], "failures": failures}
    result["status"] = "error" if result["failures"] else "success"
    _write_json(result, args.out)
    _banner(f"VERIFICACION {kind} n={args.n}")
    print(f"fallos: {len(result['failures'])}")
    return not result["failures"]


COMMANDS = {
    "constants": cmd_constants,
    "local-density": cmd_local_density,
    "reduce": cmd_reduce,
    "census": cmd_census,
    "verify": cmd_verify,
}


# =============================================================================
# ARGUMENTOS
# =============================================================================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitcount", description="Conteo de orbitas reducibles de SO_n")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, n_required: bool = True) -> None:
        p.add_argument("--n", type=int, required=n_required, help="grado n >= 3")
        p.add_argument("--out", type=Path, help="ruta del JSON de salida")
        p.add_argument("--threads", type=int, help="procesos (por defecto CENSUS_THREADS)")
        p.add_argument("--fiber-cap", type=int, help="tope de enumeracion en anillos finitos")
        p.add_argument("--box-cap", type=int, help="tope de enumeracion en cajas")

    p = sub.add_parser("constants", help="C_fin, C_inf y comprobacion por cortes")
    common(p)
    p.add_argument("--r", type=int)
    p.add_argument("--pmax", type=int, default=10_000)
    p.add_argument("--tail", choices=["zeta", "bound"], default="zeta")
    p.add_argument("--slice-trunc", type=int, default=200)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("local-density", help="factor local y c_p(f)")
    common(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--family", type=Path)
    p.add_argument("--f", help="coeficientes f_1,...,f_n")

    p = sub.add_parser("reduce", help="forma reducida de una matriz")
    common(p, n_required=False)
    p.add_argument("--matrix", required=True, help="filas o SymMatrix en JSON, o ruta a un fichero")
    p.add_argument("--ring", choices=["Q", "Z"], default="Q")
    p.add_argument("--p", type=int, help="reducir sobre Z/p^k")
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("census", help="censo global con prediccion")
    common(p)
    p.add_argument("--r", type=int)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--x", type=int)
    group.add_argument("--x-sweep", type=lambda s: [int(x) for x in s.split(",")])
    p.add_argument("--family", type=Path)
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--m-cutoff", type=int, default=10)
    p.add_argument("--no-predict", action="store_true")
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--csv", type=Path)

    p = sub.add_parser("verify", help="comprobaciones exactas")
    p.add_argument("check", choices=["euler", "jacobian", "section", "transitivity", "families"])
    common(p)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--pmax", type=int, default=100)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--family", type=Path)
    p.add_argument("--csv", type=Path)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    caps = {k: v for k, v in {"fiber_cap": args.fiber_cap, "box_cap": args.box_cap}.items() if v is not None}
    data = {
        "subcommand": args.subcommand,
        "n": args.n,
        "r": getattr(args, "r", None),
        "x": getattr(args, "x", None),
        "x_sweep": getattr(args, "x_sweep", None) or [],
        "family_path": getattr(args, "family", None),
        "seed": getattr(args, "seed", None),
        "p_max": getattr(args, "pmax", None) or 100_000,
        "caps": Caps(**caps),
        "out": args.out,
        "csv": getattr(args, "csv", None),
    }
    if getattr(args, "samples", None) is not None:
        data["samples"] = args.samples
    if args.threads is not None:
        data["threads"] = args.threads
    return RunConfig(**data)


def _needs_p(args: argparse.Namespace) -> None:
    if args.subcommand == "verify" and args.check in ("jacobian", "transitivity") and args.p is None:
        raise UsageError(f"verify {args.check} requiere --p")


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        _needs_p(args)
        config = _config(args)
    except (UsageError, ValidationError) as e:
        print(f"Error de uso: {e}", file=sys.stderr)
        return 2

    try:
        ok = COMMANDS[args.subcommand](args, config)
    except UsageError as e:
        print(f"Error de uso: {e}", file=sys.stderr)
        return 2
    except (OrbitCountError, ValueError) as e:
        logger.error(f"{args.subcommand}: {type(e).__name__}: {e}")
        return 1
    return 0 if ok else 1


def main() -> None:
    logging.basicConfig(level=logging.INFO)
    sys.exit(run())


if __name__ == "__main__":
    main()
