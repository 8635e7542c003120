from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from rslab import __version__
from rslab.config import RunConfig, default_config, load_config
from rslab.errors import AccuracyError, ConfigError, OutputError, RslabError
from rslab.fujita import dichotomy_sweep, initial_data
from rslab.fujita.sweep import TRACKING_INDICES
from rslab.mild import duhamel_evolve, duhamel_evolve_system, estimate_blowup_time
from rslab.relaxation import (
	check_complete_monotonicity,
	check_decay_bound,
	contour_curve,
	solve_volterra,
	volterra_identity_residual,
)
from rslab.reporting import (
	build_payload,
	decay_frame,
	evolution_frame,
	relaxation_frame,
	snapshot_name,
	sweep_frame,
	write_csv,
	write_field_binary,
	write_json,
	write_provenance,
)
from rslab.spectral import initial_profile, lp_norm, measure_decay_exponent

logger = logging.getLogger("rslab.cli")

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_ACCURACY = 3
EXIT_INCONCLUSIVE = 4


def _finish(out_dir: Path, config: RunConfig, outputs: List[Path]) -> None:
	sidecar = write_provenance(out_dir, config, outputs)
	for path in outputs:
		print(f"Wrote {path}")
	if sidecar is not None:
		print(f"Wrote provenance to: {sidecar}")


def _relax_config(args: argparse.Namespace) -> RunConfig:
	return default_config(
		mode="relax",
		frac_alpha=args.alpha,
		frac_k=args.k,
		relax_mu=list(args.mu),
		mesh_tmax=args.tmax,
		mesh_nodes=args.nodes,
		relax_method=args.method,
	).with_overrides(args.set or [])


def _load(args: argparse.Namespace, mode: str) -> RunConfig:
	base = load_config(Path(args.config)) if args.config else default_config()
	return base.with_overrides([f"mode={mode}"] + list(args.set or []))


def command_relax(config: RunConfig, out_dir: Path) -> int:
	params = config.frac_params()
	mesh = config.mesh()
	method = config["relax.method"]
	curves = []
	summary = []
	for mu in config["relax.mu"]:
		entry = {"mu": mu}
		volterra = contour = None
		if method in ("volterra", "both"):
			volterra = solve_volterra(mu, params, mesh)
			curves.append(volterra)
			entry["identity_residual"] = volterra_identity_residual(volterra, params)
			entry["monotone"] = check_complete_monotonicity(volterra).ok
			bound = check_decay_bound(volterra, params)
			entry["c_obs"] = bound.c_obs if bound.applicable else None
		if method in ("contour", "both"):
			contour = contour_curve(mu, params, mesh)
			curves.append(contour)
		if volterra is not None and contour is not None:
			entry["max_method_gap"] = float(abs(volterra.values - contour.values).max())
		summary.append(entry)
		print(f"mu={mu:g}: s(tmax)={curves[-1].values[-1]:.6g}")
	outputs = [
		write_csv(out_dir / "relax.csv", relaxation_frame(curves), config.digest()),
		write_json(out_dir / "relax.json", build_payload("relax", {"curves": summary}, config)),
	]
	_finish(out_dir, config, outputs)
	return EXIT_OK


def command_decay(config: RunConfig, out_dir: Path) -> int:
	params = config.frac_params()
	grid = config.grid()
	r = config["norm.r"] or TRACKING_INDICES[0]
	p = config["norm.p"] or TRACKING_INDICES[1]
	profile = config["evolve.profile"]
	amplitude = config["evolve.amplitude"]
	u0 = initial_profile(grid, profile, 1.0 if amplitude == "radius" else amplitude, config["evolve.width"], r=r)
	fit = measure_decay_exponent(u0, params, r, p, config["decay.times"])
	print(f"Decay slope: {fit.slope:.4f} | predicted: {fit.predicted:.4f}")
	for msg in fit.warnings:
		print(f"[warning] {msg}")
	body = {
		"r": r,
		"p": p,
		"slope": fit.slope,
		"predicted": fit.predicted,
		"relative_error": abs(fit.slope - fit.predicted) / abs(fit.predicted),
		"sup_ratio": fit.sup_ratio,
		"warnings": fit.warnings,
	}
	outputs = [
		write_csv(out_dir / "decay.csv", decay_frame(fit, lp_norm(u0, r)), config.digest()),
		write_json(out_dir / "decay.json", build_payload("decay", body, config)),
	]
	_finish(out_dir, config, outputs)
	return EXIT_OK


def command_evolve(config: RunConfig, out_dir: Path) -> int:
	nl = config.nonlinearity()
	u0, data_meta = initial_data(config, nl)
	r = config["norm.r"] or TRACKING_INDICES[0]
	p = config["norm.p"] or TRACKING_INDICES[1]
	common = dict(threshold_factor=config["evolve.blow_threshold"], snapshot_times=config["evolve.snapshots"])
	params = config.frac_params()
	mesh = config.mesh()
	if nl.is_system:
		record = duhamel_evolve_system(u0, u0, params, nl, mesh, u0.grid, r, p, **common)
	else:
		record = duhamel_evolve(u0, params, nl, mesh, u0.grid, r, p, **common)
	t_blow = estimate_blowup_time(record)
	print(f"Status: {record.status} | final ratio: {record.final_ratio:.4g}" + (f" | t_blow ~ {t_blow:.4g}" if t_blow else ""))
	outputs = [write_csv(out_dir / "evolve.csv", evolution_frame(record), config.digest())]
	for t, fields in sorted(record.snapshots.items()):
		for c, snap in enumerate(fields):
			outputs.append(write_field_binary(out_dir / snapshot_name(t, c), snap))
	body = {
		"status": record.status,
		"t_blow": t_blow,
		"final_ratio": record.final_ratio,
		"warnings": record.warnings,
		"data": data_meta,
	}
	outputs.append(write_json(out_dir / "evolve.json", build_payload("evolve", body, config)))
	_finish(out_dir, config, outputs)
	return EXIT_OK


def command_sweep(config: RunConfig, out_dir: Path) -> int:
	report = dichotomy_sweep(config)
	print(f"rho_c = {report.rho_c:.6g}")
	for row in report.rows():
		side = "above" if row["supercritical"] else "at/below"
		print(f"- {row['axis']:g} ({side} critical {row['critical']:.6g}): {row['status']}")
	outputs = [
		write_csv(out_dir / "sweep.csv", sweep_frame(report), config.digest()),
		write_json(out_dir / "sweep.json", build_payload("sweep", report.to_dict(), config)),
	]
	_finish(out_dir, config, outputs)
	if report.inconclusive_only:
		print("Every sweep point is Inconclusive")
		return EXIT_INCONCLUSIVE
	return EXIT_OK


def command_verify(config: RunConfig, out_dir: Path) -> int:
	from rslab.cli.checks import run_checks

	results = run_checks(config)
	for res in results:
		print(f"- {res.name}: {'ok' if res.ok else 'FAILED'}")
	passed = all(res.ok for res in results)
	body = {"passed": passed, "checks": [res.as_dict() for res in results]}
	outputs = [write_json(out_dir / "verify.json", build_payload("verify", body, config))]
	_finish(out_dir, config, outputs)
	return EXIT_OK if passed else EXIT_ACCURACY


def build_parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(prog="rslab", description="Fractional Rayleigh-Stokes relaxation and Fujita-exponent lab")
	parser.add_argument("--version", action="version", version=f"rslab {__version__}")
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("--out", default=".", help="Directory for output files (default: current directory)")
	common.add_argument("--set", action="append", metavar="KEY=VALUE", help="Override one config key (repeatable)")
	level = common.add_mutually_exclusive_group()
	level.add_argument("--verbose", action="store_true", help="Debug logging")
	level.add_argument("--quiet", action="store_true", help="Warnings only")
	sub = parser.add_subparsers(dest="command", required=True)

	p_rel = sub.add_parser("relax", parents=[common], help="Relaxation curves s(t, mu)")
	p_rel.add_argument("--alpha", type=float, required=True, help="Fractional order in (0, 1)")
	p_rel.add_argument("--k", type=float, required=True, help="Memory coefficient k >= 0")
	p_rel.add_argument("--mu", type=float, nargs="+", required=True, help="One or more eigenvalues mu >= 0")
	p_rel.add_argument("--tmax", type=float, required=True, help="Final time")
	p_rel.add_argument("--nodes", type=int, required=True, help="Number of mesh nodes")
	p_rel.add_argument("--method", choices=["volterra", "contour", "both"], default="both")

	for name, text in (
		("decay", "Measured L^r -> L^p decay of the solution operator"),
		("evolve", "One mild-solution run"),
		("sweep", "Blow-up / global classification over an exponent axis"),
		("verify", "Run numerical check families and report pass/fail"),
	):
		p = sub.add_parser(name, parents=[common], help=text)
		p.add_argument("--config", help="Path to a key = value config file")
	return parser


COMMANDS = {
	"relax": command_relax,
	"decay": command_decay,
	"evolve": command_evolve,
	"sweep": command_sweep,
	"verify": command_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
	argv = list(sys.argv[1:] if argv is None else argv)
	args = build_parser().parse_args(argv)
	load_dotenv()
	level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
	logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

	out_dir = Path(args.out)
	try:
		config = _relax_config(args) if args.command == "relax" else _load(args, args.command)
		logger.debug("config %s", config.digest())
		return COMMANDS[args.command](config, out_dir)
	except ConfigError as exc:
		print(f"Config error: {exc}", file=sys.stderr)
		return EXIT_CONFIG
	except AccuracyError as exc:
		print(f"Accuracy error: {exc}", file=sys.stderr)
		return EXIT_ACCURACY
	except OutputError as exc:
		print(f"I/O error: {exc}", file=sys.stderr)
		return EXIT_IO
	except OSError as exc:
		print(f"I/O error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
		return EXIT_IO
	except RslabError as exc:
		print(f"Error: {exc}", file=sys.stderr)
		return EXIT_IO


if __name__ == "__main__":
	sys.exit(main())
