"""affine-cybe: run certification stages on JSON inputs.

Exit status: 0 when every certification passes, 1 when one fails (the
report carries the witness), 2 for unreadable or invalid input, including
structure constants that violate the Jacobi identity.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from . import fixtures
from . import serialization as ser
from .lie_core import AlgebraError
from .pipeline import STAGES, ExactnessError, Inputs, Settings, run_all, run_stage

CONFIG_ENV = "AFFINE_CYBE_CONFIG"
COMMANDS = tuple(STAGES) + ("all",)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    algebra: str
    r_file: str | None = None
    omega_file: str | None = None
    mode: str = "float-where-needed"
    tol: float = 1e-9
    rank_threshold: float = 1e-8
    K: int = 25
    seed: int = 0
    samples: int = 20
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.mode not in ("exact", "float-where-needed"):
            raise ValueError(f"unknown arithmetic mode {self.mode!r}")
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown output format {self.format!r}")
        self.settings()  # tolerance, K and sample count checks

    def settings(self) -> Settings:
        return Settings(tol=self.tol, rank_threshold=self.rank_threshold, K=self.K, seed=self.seed,
                        samples=self.samples, exact_only=self.mode == "exact")

    def recorded(self) -> dict:
        """The parts of the config that affect results; paths reduced to file names."""
        out = asdict(self)
        del out["output"], out["format"]
        for key in ("algebra", "r_file", "omega_file"):
            if out[key] is not None:
                out[key] = Path(out[key]).name
        return out


def resolve(name: str) -> Path:
    """A path as given, else a file of that name among the bundled fixtures."""
    p = Path(name)
    if p.exists():
        return p
    for candidate in (fixtures.path(name), fixtures.path(f"{name}.json")):
        if candidate.exists():
            return candidate
    raise ser.InputError(f"{name}: no such file")


def _defaults_from_env() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    obj = ser.load_json(path)
    if not isinstance(obj, dict):
        raise ser.InputError(f"{path}: config must be a JSON object")
    allowed = {"mode", "tol", "rank_threshold", "K", "seed", "samples", "format"}
    unknown = set(obj) - allowed
    if unknown:
        raise ser.InputError(f"{path}: unknown config keys {sorted(unknown)}")
    return obj


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="affine-cybe", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--algebra", required=True, help="algebra JSON (path or bundled fixture name)")
    p.add_argument("--r-file", help="bivector JSON {'r': matrix of r_sharp}")
    p.add_argument("--omega-file", help="symplectic form JSON {'omega': matrix}")
    p.add_argument("--mode", choices=("exact", "float-where-needed"))
    p.add_argument("--tol", type=float, help="residual tolerance for float checks")
    p.add_argument("--rank-threshold", type=float, help="relative singular value cut-off")
    p.add_argument("-K", type=int, help="truncation order of exponential series")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help="sample points per randomised check")
    p.add_argument("--format", choices=("json", "text"))
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    return p


def config_from_args(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    merged = _defaults_from_env()
    merged.update({k: v for k, v in args.items() if v is not None})
    return RunConfig(**merged)


def load_inputs(cfg: RunConfig) -> tuple[Inputs | None, dict, dict | None]:
    """Returns (inputs, input hashes, jacobi failure report or None)."""
    paths = {"algebra": resolve(cfg.algebra)}
    if cfg.r_file:
        paths["r_file"] = resolve(cfg.r_file)
    if cfg.omega_file:
        paths["omega_file"] = resolve(cfg.omega_file)
    hashes = {k: ser.file_sha256(p) for k, p in paths.items()}
    L = ser.algebra_from_json(ser.load_json(paths["algebra"]), paths["algebra"].name)
    if not L.jacobi.ok:
        return None, hashes, L.jacobi.as_dict()
    r = omega = None
    if "r_file" in paths:
        r = ser.bivector_from_json(ser.load_json(paths["r_file"]), paths["r_file"].name)
        if r.dim != L.dim:
            raise ser.InputError(f"{paths['r_file'].name}: bivector has dim {r.dim}, algebra has dim {L.dim}")
    if "omega_file" in paths:
        omega = ser.omega_from_json(ser.load_json(paths["omega_file"]), paths["omega_file"].name)
        if omega.dim != L.dim:
            raise ser.InputError(f"{paths['omega_file'].name}: form has dim {omega.dim}, algebra has dim {L.dim}")
        if not omega.nondegenerate:
            raise ser.InputError(f"{paths['omega_file'].name}: form is degenerate")
        from .rmatrix import omega_closed_witness
        if (wit := omega_closed_witness(L, omega)) is not None:
            raise ser.InputError(f"{paths['omega_file'].name}: form is not closed on basis triple {list(wit)}")
    return Inputs(L, r, omega), hashes, None


def run(cfg: RunConfig) -> tuple[int, dict]:
    report = {"schema_version": ser.SCHEMA_VERSION, "library_version": __version__,
              "config": cfg.recorded()}
    try:
        inp, hashes, jac_fail = load_inputs(cfg)
    except (ser.InputError, AlgebraError) as exc:
        report.update(status="input_error", error=str(exc))
        return EXIT_INPUT, report
    report["input_sha256"] = hashes
    if jac_fail is not None:
        report.update(status="input_error", error="Jacobi identity fails", stages={"jacobi": {"ok": False, **jac_fail}})
        return EXIT_INPUT, report
    settings = cfg.settings()
    try:
        results = run_all(inp, settings) if cfg.command == "all" else [run_stage(cfg.command, inp, settings)]
    except ExactnessError as exc:
        report.update(status="input_error", error=str(exc))
        return EXIT_INPUT, report
    stages = {res.name: res.as_dict() for res in results}
    failed = [res.name for res in results if not res.ok]
    if cfg.command != "all" and results[0].skipped:
        report.update(status="input_error", error=results[0].skipped, stages=stages)
        return EXIT_INPUT, report
    report.update(stages=stages, failed=failed, status="fail" if failed else "pass")
    return (EXIT_FAIL if failed else EXIT_OK), report


def render_text(report: dict) -> str:
    lines = [f"status: {report['status']}"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    for name, st in report.get("stages", {}).items():
        if "skipped" in st:
            verdict = f"skipped ({st['skipped']})"
        else:
            verdict = "pass" if st["ok"] else "FAIL"
        extra = ""
        if name == "completeness" and "traces" in st:
            extra = f"  complete={st.get('complete')} traces=[{', '.join(st['traces'])}]"
        if name == "jacobi" and st.get("witness"):
            extra = f"  witness={st['witness']}"
        lines.append(f"{name:14s} {verdict}{extra}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ser.InputError as exc:
        print(f"affine-cybe: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"affine-cybe: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, report = run(cfg)
    text = ser.dumps(report) if cfg.format == "json" else render_text(report)
    if cfg.output:
        try:
            Path(cfg.output).write_text(text)
        except OSError as exc:
            print(f"affine-cybe: cannot write {cfg.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    if code == EXIT_INPUT and "error" in report:
        print(f"affine-cybe: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
