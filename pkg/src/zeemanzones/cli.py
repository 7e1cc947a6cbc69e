"""Batch front end: tables, kernel grids, traces, zeta values, verification.

One command per process.  Configuration comes from a single JSON file
(--config); command-line flags override config fields; no environment
variables are consulted.  Output files are written atomically (temp file
+ rename) so a crashed run never leaves a truncated artifact.  CSV floats
use repr(), i.e. the shortest decimal that round-trips binary64, so golden
files are stable across platforms.

Exit codes: 0 success / all checks pass, 1 verification FAIL present,
2 usage or config error, 3 numeric ERROR present.
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import pathint, thermo, verify
from .kernels import SingularTimeError, check_df_time, zonal_kernel_closed
from .quadrature import QuadratureError
from .params import HamiltonianVariant, MagneticParams
from .spectrum import spectrum_table, spectrum_table_csv, spectrum_table_json


class ConfigError(Exception):
    pass


DEFAULTS = {
    "params": [{"lambda": 1.0, "k": 2}],
    "variant": "H_Z",
    "c_f": None,
    "c_f_mode": "block",
    "quad_degree": 40,
    "threads": 1,
    "sigma": "wk",
    "zone": 0,
    "times": [0.2, 0.5, 1.0],
    "points": [[[0.3, -0.2], [0.1, 0.4]]],
    "s_values": [2.0, 2.5, 3.0, 4.0],
    "total_time": 0.5,
    "n_slices": [1, 2, 3, 4],
    "max_p": 6,
    "max_zone": 2,
    "suite": "all",
    "format": "csv",
    "out": None,
}


def load_config(path):
    """Read and validate a JSON config; report the offending field."""
    cfg = dict(DEFAULTS)
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {path} at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    for key, value in raw.items():
        if key not in DEFAULTS:
            raise ConfigError(f"config {path}: unknown field {key!r}")
        cfg[key] = value
    return cfg


def build_params(cfg) -> MagneticParams:
    blocks = cfg["params"]
    if not isinstance(blocks, list) or not blocks:
        raise ConfigError("config field 'params': need a non-empty list "
                          "of {lambda, k} blocks")
    pairs = []
    for i, b in enumerate(blocks):
        if not isinstance(b, dict) or set(b) != {"lambda", "k"}:
            raise ConfigError(f"config field 'params[{i}]': expected keys "
                              "'lambda' and 'k'")
        pairs.append((float(b["lambda"]), int(b["k"])))
    try:
        return MagneticParams.make(pairs)
    except ValueError as exc:
        raise ConfigError(f"config field 'params': {exc}") from exc


def build_variant(cfg) -> HamiltonianVariant:
    try:
        return HamiltonianVariant(
            cfg["variant"],
            None if cfg["c_f"] is None else float(cfg["c_f"]),
            cfg["c_f_mode"])
    except ValueError as exc:
        raise ConfigError(f"config field 'variant'/'c_f_mode': {exc}") from exc


def _check_sigma(cfg):
    if cfg["sigma"] not in ("wk", "df"):
        raise ConfigError("config field 'sigma': must be 'wk' or 'df'")
    return cfg["sigma"]


def write_out(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(cfg):
    entries = spectrum_table(build_params(cfg), build_variant(cfg),
                             int(cfg["max_p"]), int(cfg["max_zone"]))
    if cfg["format"] == "json":
        write_out(spectrum_table_json(entries) + "\n", cfg["out"])
    else:
        write_out(spectrum_table_csv(entries), cfg["out"])
    return 0


def _point_pairs(cfg, k):
    pts = cfg["points"]
    out = []
    for i, pair in enumerate(pts):
        if len(pair) != 2 or len(pair[0]) != k or len(pair[1]) != k:
            raise ConfigError(f"config field 'points[{i}]': expected a pair "
                              f"of length-{k} coordinate lists")
        out.append((np.asarray(pair[0], dtype=float),
                    np.asarray(pair[1], dtype=float)))
    return out


def cmd_kernel(cfg):
    params = build_params(cfg)
    sigma = _check_sigma(cfg)
    a = int(cfg["zone"])
    pairs = _point_pairs(cfg, params.k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = (["t"] + [f"x{i+1}" for i in range(params.k)]
            + [f"y{i+1}" for i in range(params.k)]
            + ["re", "im", "dominant_re", "dominant_im",
               "longterm_re", "longterm_im"])
    w.writerow(head)
    had_error = False
    for t in cfg["times"]:
        for X, Y in pairs:
            coords = [repr(float(v)) for v in (*X, *Y)]
            try:
                # the zonal closed forms are entire in t, but the caustic
                # times of the underlying evolution are flagged anyway so
                # grids never silently straddle them
                if sigma == "df":
                    check_df_time(float(t), params)
                kv = zonal_kernel_closed(sigma, a, float(t), X, Y, params)
            except SingularTimeError:
                had_error = True
                w.writerow([repr(float(t))] + coords + ["ERROR"] * 6)
                continue
            vals = (kv.value, kv.dominant, kv.long_term)
            w.writerow([repr(float(t))] + coords
                       + [repr(float(f(v))) for v in vals
                          for f in (np.real, np.imag)])
    write_out(buf.getvalue(), cfg["out"])
    return 3 if had_error else 0


def cmd_partition(cfg):
    params = build_params(cfg)
    variant = build_variant(cfg)
    sigma = _check_sigma(cfg)
    a = int(cfg["zone"])
    deg = int(cfg["quad_degree"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "closed_re", "closed_im", "trace_re", "trace_im",
                "residual"])
    had_error = False
    for t in cfg["times"]:
        try:
            z = thermo.partition(sigma, a, float(t), params, variant)
            ztr = thermo.partition_by_trace(sigma, a, float(t), params,
                                            quad_degree=deg, variant=variant)
        except (SingularTimeError, QuadratureError):
            had_error = True
            w.writerow([repr(float(t))] + ["ERROR"] * 5)
            continue
        w.writerow([repr(float(t))]
                   + [repr(float(v)) for v in (z.real, z.imag, ztr.real,
                                               ztr.imag, abs(z - ztr))])
    write_out(buf.getvalue(), cfg["out"])
    return 3 if had_error else 0


def cmd_zeta(cfg):
    params = build_params(cfg)
    variant = build_variant(cfg)
    a = int(cfg["zone"])
    rows = []
    for s in cfg["s_values"]:
        zz = thermo.zeta_zonal(a, float(s), params, variant=variant)
        ref = (1 - 2.0 ** (-float(s))) * thermo.riemann_zeta(float(s))
        rows.append({"s": float(s),
                     "zeta_zonal_re": zz.real, "zeta_zonal_im": zz.imag,
                     "riemann_reference": ref.real,
                     "riemann_residual": abs(zz - ref)})
    write_out(json.dumps({"zone": a, "values": rows}, indent=2) + "\n",
              cfg["out"])
    return 0


def cmd_pathint(cfg):
    params = build_params(cfg)
    sigma = _check_sigma(cfg)
    a = int(cfg["zone"])
    deg = int(cfg["quad_degree"])
    T = float(cfg["total_time"])
    X, Y = _point_pairs(cfg, params.k)[0]
    ref = zonal_kernel_closed(sigma, a, T, X, Y, params).value
    rows = []
    for n in cfg["n_slices"]:
        val = pathint.cylinder_value(sigma, a, pathint.TimeSlicing(T, int(n)),
                                     None, X, Y, params, quad_degree=deg)
        rows.append({"sigma": sigma, "zone": a, "T": T, "n": int(n),
                     "value_re": val.real, "value_im": val.imag,
                     "reference_re": ref.real, "reference_im": ref.imag,
                     "residual": abs(val - ref)})
    write_out(json.dumps({"convergence": rows}, indent=2) + "\n", cfg["out"])
    return 0


def cmd_verify(cfg):
    results = verify.run_suite(cfg["suite"],
                               {"quad_degree": int(cfg["quad_degree"]),
                                "threads": int(cfg["threads"])})
    write_out(verify.report_json(results) + "\n", cfg["out"])
    statuses = {r.status for r in results}
    if "ERROR" in statuses:
        return 3
    return 1 if "FAIL" in statuses else 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _float_list(text):
    return [float(v) for v in text.split(",") if v]


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def build_parser():
    p = argparse.ArgumentParser(
        prog="zeemanzones",
        description="zonal Zeeman spectra, kernels, traces and verification")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--quad-degree", type=int, dest="quad_degree")
        sp.add_argument("--threads", type=int)
        return sp

    sp = common(sub.add_parser("spectrum", help="eigenvalue table by zone"))
    sp.add_argument("--max-p", type=int, dest="max_p")
    sp.add_argument("--max-zone", type=int, dest="max_zone")

    sp = common(sub.add_parser("kernel", help="zonal kernel values on a grid"))
    sp.add_argument("--sigma", choices=("wk", "df"))
    sp.add_argument("--zone", type=int)
    sp.add_argument("--times", type=_float_list)

    sp = common(sub.add_parser("partition",
                               help="partition function, closed vs trace"))
    sp.add_argument("--sigma", choices=("wk", "df"))
    sp.add_argument("--zone", type=int)
    sp.add_argument("--times", type=_float_list)

    sp = common(sub.add_parser("zeta", help="zonal zeta values"))
    sp.add_argument("--zone", type=int)
    sp.add_argument("--s-values", type=_float_list, dest="s_values")

    sp = common(sub.add_parser("pathint",
                               help="cylinder-value convergence report"))
    sp.add_argument("--sigma", choices=("wk", "df"))
    sp.add_argument("--zone", type=int)
    sp.add_argument("--total-time", type=float, dest="total_time")
    sp.add_argument("--n-slices", type=_int_list, dest="n_slices")

    sp = common(sub.add_parser("verify", help="run the verification harness"))
    sp.add_argument("--suite")
    return p


COMMANDS = {
    "spectrum": cmd_spectrum,
    "kernel": cmd_kernel,
    "partition": cmd_partition,
    "zeta": cmd_zeta,
    "pathint": cmd_pathint,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        for key, value in vars(args).items():
            if key in DEFAULTS and value is not None:
                cfg[key] = value
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
