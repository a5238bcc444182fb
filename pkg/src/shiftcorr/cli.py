"""Command-line front end.

Settings come from an optional INI file (sections ``[form]``, ``[zeros]``,
``[run]``, ``[output]``) and are overridden by flags.  Every subcommand
writes CSV files whose first line is a comment carrying the tool version and
a hash of the effective settings; nothing time-dependent goes into them, so
reruns on the same data are byte-identical.

Grids accept ``a,b,c``, ``lo:hi:n`` (linear, inclusive) or ``log:lo:hi:n``.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import (
    pair_corr_constants,
    psi_main_term,
    thm11_main_term,
    thm12_prediction,
)
from .correlation import (
    BIN_WIDTH,
    PAIR_BUDGET,
    double_zero_sum,
    f_lambda,
    lg_main_term,
    nearest_integer,
    single_zero_sum,
)
from .errors import ConfigError, PairBudgetExceeded, ShiftCorrError
from .estimators import ConventionSelector
from .lfunction_dirichlet import build_von_mangoldt, psi_L_lambda
from .newform_coeffs import NewformSpec, build_coeff_table, raw_coefficients, write_coeff_file
from .sato_tate import angle_report, distribution_report, sample_st_angles
from .svg import write_line_plot
from .zero_data import URL_ENV, bundled_zeros, build_lambda_zeros, fetch_zeros, load_zeros

KNOWN_FORMS = {
    "delta": NewformSpec.delta,
    "11.a2": lambda: NewformSpec.elliptic_curve((0, -1, 1, -10, -20), 11, "11.a2"),
}
DEFAULT_FORM = {"figure3": "delta"}
ADJUDICATION_WINDOW = (0.1, 0.2)


# -- configuration --------------------------------------------------------------


def parse_grid(text: str) -> tuple[float, ...]:
    """``1,2,3`` / ``lo:hi:n`` / ``log:lo:hi:n``; the result must be ascending."""
    text = str(text).strip()
    try:
        if text.startswith("log:"):
            lo, hi, n = text[4:].split(":")
            vals = np.geomspace(float(lo), float(hi), int(n))
        elif ":" in text:
            lo, hi, n = text.split(":")
            vals = np.linspace(float(lo), float(hi), int(n))
        else:
            vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from None
    vals = tuple(float(v) for v in vals)
    if not vals:
        raise ConfigError(f"grid {text!r} is empty")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(f"grid {text!r} is not strictly ascending")
    return vals


@dataclass(frozen=True)
class RunConfig:
    label: str = "11.a2"
    curve: tuple[int, ...] | None = None
    level: int | None = None
    coeff_file: str | None = None
    n_max: int | None = None
    zeros_path: str | None = None
    zero_url: str | None = None
    cache_dir: str = "zero_cache"
    timeout: float = 30.0
    retries: int = 2
    lambdas: tuple[float, ...] | None = None
    Ts: tuple[float, ...] | None = None
    alpha: tuple[float, ...] | None = None
    x: tuple[float, ...] | None = None
    method: str = "direct"
    bin_width: float = BIN_WIDTH
    pair_budget: int = PAIR_BUDGET
    include_diagonal: bool = True
    convention: str = "paper"
    threads: int = 1
    seed: int = 0
    out_dir: str = "."

    def digest(self) -> str:
        d = dataclasses.asdict(self)
        d.pop("out_dir")
        blob = json.dumps(d, sort_keys=True, default=list)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def spec(self) -> NewformSpec:
        if self.coeff_file:
            return NewformSpec.from_file(self.coeff_file)
        if self.curve is not None:
            if self.level is None:
                raise ConfigError("a curve needs its conductor (form.level)")
            return NewformSpec.elliptic_curve(self.curve, self.level, self.label)
        try:
            return KNOWN_FORMS[self.label]()
        except KeyError:
            raise ConfigError(
                f"unknown form {self.label!r}; give form.curve and form.level, or form.coeff_file"
            ) from None


# INI key -> (RunConfig field, converter)
_INI = {
    ("form", "label"): ("label", str),
    ("form", "curve"): ("curve", lambda s: tuple(int(v) for v in s.split(","))),
    ("form", "level"): ("level", int),
    ("form", "coeff_file"): ("coeff_file", str),
    ("form", "n_max"): ("n_max", int),
    ("zeros", "path"): ("zeros_path", str),
    ("zeros", "url"): ("zero_url", str),
    ("zeros", "cache_dir"): ("cache_dir", str),
    ("zeros", "timeout"): ("timeout", float),
    ("zeros", "retries"): ("retries", int),
    ("run", "lambda"): ("lambdas", parse_grid),
    ("run", "t"): ("Ts", parse_grid),
    ("run", "alpha"): ("alpha", parse_grid),
    ("run", "x"): ("x", parse_grid),
    ("run", "method"): ("method", str),
    ("run", "bin_width"): ("bin_width", float),
    ("run", "pair_budget"): ("pair_budget", lambda s: int(float(s))),
    ("run", "include_diagonal"): ("include_diagonal", None),
    ("run", "convention"): ("convention", str),
    ("run", "threads"): ("threads", int),
    ("run", "seed"): ("seed", int),
    ("output", "dir"): ("out_dir", str),
}


def read_config(path) -> dict:
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    for section in cp.sections():
        for key in cp[section]:
            try:
                name, conv = _INI[(section, key)]
            except KeyError:
                raise ConfigError(f"unknown config key [{section}] {key}") from None
            try:
                out[name] = cp[section].getboolean(key) if conv is None else conv(cp[section][key])
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
    return out


_FLAGS = {
    "form": "label", "zeros": "zeros_path", "zero_url": "zero_url", "cache_dir": "cache_dir",
    "lam": "lambdas", "T": "Ts", "alpha": "alpha", "x": "x", "method": "method",
    "bin_width": "bin_width", "pair_budget": "pair_budget", "n_max": "n_max",
    "convention": "convention", "threads": "threads", "seed": "seed", "out_dir": "out_dir",
}


def build_config(args) -> RunConfig:
    config = getattr(args, "config", None)
    values = read_config(config) if config else {}
    for flag, name in _FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    if getattr(args, "no_diagonal", False):
        values["include_diagonal"] = False
    if "label" not in values and not values.get("coeff_file"):
        values["label"] = DEFAULT_FORM.get(getattr(args, "command", None), "11.a2")
    cfg = RunConfig(**values)
    if cfg.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if cfg.method not in ("direct", "binned", "integral_oracle"):
        raise ConfigError(f"unknown method {cfg.method!r}")
    out = Path(cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    return cfg


# -- helpers ----------------------------------------------------------------------


def _num(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(cfg: RunConfig, command: str, name: str, header, rows) -> Path:
    path = Path(cfg.out_dir) / name
    with open(path, "w", newline="") as fh:
        fh.write(f"# shiftcorr {__version__} config={cfg.digest()} command={command}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(v) for v in row])
    print(path)
    return path


def _need(value, what: str, default=None):
    if value is None:
        if default is None:
            raise ConfigError(f"{what} is required")
        return default
    return value


def _positive_lambdas(cfg: RunConfig, default=(1.0,)):
    lams = _need(cfg.lambdas, "--lambda", default)
    if any(lam <= 0 for lam in lams):
        raise ConfigError("lambda must be positive")
    return lams


def load_zero_list(cfg: RunConfig, spec: NewformSpec, height: float):
    """Zero list from a file, the fetch cache, or the bundled data (in that order)."""
    if cfg.zeros_path:
        return load_zeros(cfg.zeros_path, spec=spec)
    if cfg.zero_url or os.environ.get(URL_ENV):
        return fetch_zeros(
            cfg.label, height, cfg.cache_dir, spec=spec, base_url=cfg.zero_url,
            timeout=cfg.timeout, retries=cfg.retries,
        )
    return bundled_zeros(cfg.label, spec=spec)


def batched_double_sum(zeros, xs, cfg: RunConfig):
    """Direct double sums with ``xs`` split so each call stays inside the pair budget."""
    n = len(zeros.ordinates)
    pairs = n * n
    if cfg.method == "direct" and pairs > cfg.pair_budget:
        raise PairBudgetExceeded(f"{pairs} pairs exceed the budget {cfg.pair_budget} even for one x")
    step = max(1, cfg.pair_budget // max(pairs, 1))
    xs = np.asarray(xs, dtype=float)
    out = [
        np.atleast_1d(double_zero_sum(
            zeros, xs[i:i + step], method=cfg.method, include_diagonal=cfg.include_diagonal,
            workers=cfg.threads, pair_budget=cfg.pair_budget,
        ))
        for i in range(0, xs.size, step)
    ]
    return np.concatenate(out)


# -- subcommands --------------------------------------------------------------------


def cmd_coeffs(cfg: RunConfig):
    spec = cfg.spec()
    n_max = _need(cfg.n_max, "--n-max", 1000)
    path = Path(cfg.out_dir) / f"coeffs_{cfg.label}.txt"
    write_coeff_file(path, spec.weight, spec.level, cfg.label, raw_coefficients(spec, n_max))
    print(path)
    return [path]


def cmd_psi(cfg: RunConfig):
    spec = cfg.spec()
    xs = _need(cfg.x, "--x", (1e4, 1e5, 1e6))
    lams = _need(cfg.lambdas, "--lambda", (1.0,))
    vm = build_von_mangoldt(build_coeff_table(spec, int(math.floor(max(xs)))))
    rows = []
    for lam in lams:
        for x in xs:
            p = psi_L_lambda(vm, x, lam)
            main = psi_main_term(x, lam)
            rows.append((x, lam, p.value, p.psi1, p.psi2, p.remainder, main, p.value / main))
    header = ("x", "lambda", "psi", "psi1", "psi2", "remainder", "main_term", "ratio")
    return [write_csv(cfg, "psi", "psi.csv", header, rows)]


def cmd_predict(cfg: RunConfig):
    alpha = _need(cfg.alpha, "--alpha-grid", tuple(np.linspace(0.0, 0.5, 51)))
    lams = _positive_lambdas(cfg)
    T = _need(cfg.Ts, "--T", (1000.0,))
    if len(T) != 1 or len(lams) != 1:
        raise ConfigError("predict takes a single lambda and a single T")
    lam, T = lams[0], T[0]
    c = pair_corr_constants(lam)
    pp = thm12_prediction(np.array(alpha), T, lam, "paper")
    pd = thm12_prediction(np.array(alpha), T, lam, "derivation")
    rows = [(a, p, d, c.amplitude, c.phase) for a, p, d in zip(alpha, pp, pd)]
    header = ("alpha", "prediction_paper", "prediction_derivation", "A_lambda", "theta_lambda")
    path = write_csv(cfg, "predict", "predict.csv", header, rows)
    svg = Path(cfg.out_dir) / "predict.svg"
    write_line_plot(svg, [("paper", alpha, pp), ("derivation", alpha, pd)],
                    title=f"prediction, lambda={lam:g}, T={T:g} ({cfg.convention} first)",
                    xlabel="alpha", ylabel="F")
    return [path, svg]


def cmd_sato_tate(cfg: RunConfig):
    spec = cfg.spec()
    xs = _need(cfg.x, "--x", (1e4, 1e5, 1e6))
    table = build_coeff_table(spec, int(math.floor(max(xs))))
    rng = np.random.default_rng(cfg.seed)
    hist_rows, summary = [], []
    for x in xs:
        rep = distribution_report(table, x)
        base = angle_report(sample_st_angles(rep.n_primes, rng), np.zeros(rep.n_primes), x, rep.error_band)
        summary.append((x, rep.n_primes, rep.sup_discrepancy, base.sup_discrepancy,
                        rep.second_moment_ratio, rep.error_band))
        for lo, hi, e, s in zip(rep.edges[:-1], rep.edges[1:], rep.empirical_mass, rep.st_mass):
            hist_rows.append((x, lo, hi, e, s))
    paths = [
        write_csv(cfg, "sato-tate", "sato_tate_hist.csv",
                  ("x", "bin_lo", "bin_hi", "empirical", "sato_tate"), hist_rows),
        write_csv(cfg, "sato-tate", "sato_tate.csv",
                  ("x", "n_primes", "sup_discrepancy", "baseline_discrepancy",
                   "second_moment_ratio", "error_band"), summary),
    ]
    # density overlay at the largest cutoff, on 64 coarse bins
    rep = distribution_report(table, xs[-1], n_bins=64)
    mids = 0.5 * (rep.edges[:-1] + rep.edges[1:])
    width = rep.edges[1] - rep.edges[0]
    svg = Path(cfg.out_dir) / "sato_tate.svg"
    write_line_plot(svg, [("empirical", mids, rep.empirical_mass / width),
                          ("(2/pi) sin^2", mids, rep.st_mass / width)],
                    title=f"{cfg.label}: angles of a_p, p <= {xs[-1]:g}", xlabel="theta", ylabel="density")
    return paths + [svg]


def cmd_lg_compare(cfg: RunConfig):
    spec = cfg.spec()
    lam = _positive_lambdas(cfg)[0]
    T = _need(cfg.Ts, "--T", (2000.0,))[0]
    xs = np.array(_need(cfg.x, "--x", tuple(np.round(np.linspace(1.5, 10.5, 901), 10))))
    zl = load_zero_list(cfg, spec, T + lam / 2)
    zs = build_lambda_zeros(zl, lam, T)
    vm = build_von_mangoldt(build_coeff_table(spec, nearest_integer(float(xs.max())) + 1))
    lhs = single_zero_sum(zs, xs)
    rows = [(x, nearest_integer(x), v.real, v.imag, abs(v), lg_main_term(vm, x, lam, T))
            for x, v in zip(xs.tolist(), lhs)]
    path = write_csv(cfg, "lg-compare", "lg_compare.csv",
                     ("x", "n_x", "sum_re", "sum_im", "sum_abs", "main"), rows)
    svg = Path(cfg.out_dir) / "lg_compare.svg"
    write_line_plot(svg, [("|sum x^rho|", xs, np.abs(lhs))],
                    title=f"{cfg.label}: single zero sum, lambda={lam:g}, T={T:g}", xlabel="x", ylabel="abs")
    return [path, svg]


def _figure1_rows(cfg: RunConfig, spec, lams, Ts):
    zl = load_zero_list(cfg, spec, max(Ts) + max(lams) / 2)
    rows = []
    for lam in lams:
        for T in Ts:
            xs = cfg.x if cfg.x is not None else tuple(T ** e for e in (0.2, 0.3, 0.4, 0.5))
            zs = build_lambda_zeros(zl, lam, T)
            vals = batched_double_sum(zs, xs, cfg)
            main = thm11_main_term(np.array(xs), T, lam)
            rows += [(lam, T, x, v.real, m, v.real / m) for x, v, m in zip(xs, vals, main)]
    return rows


def cmd_double_sum(cfg: RunConfig):
    spec = cfg.spec()
    lams = _positive_lambdas(cfg)
    Ts = _need(cfg.Ts, "--T", (2000.0,))
    zl = load_zero_list(cfg, spec, max(Ts) + max(lams) / 2)
    rows = []
    for lam in lams:
        for T in Ts:
            xs = cfg.x if cfg.x is not None else tuple(np.geomspace(T**0.2, T**0.5, 40))
            zs = build_lambda_zeros(zl, lam, T)
            vals = batched_double_sum(zs, xs, cfg)
            main = thm11_main_term(np.array(xs), T, lam)
            rows += [(lam, T, x, v.real, v.imag, m, v.real / m, cfg.method)
                     for x, v, m in zip(xs, vals, main)]
    header = ("lambda", "T", "x", "re", "im", "main", "ratio", "method")
    return [write_csv(cfg, "double-sum", "double_sum.csv", header, rows)]


def _f_curve(cfg: RunConfig, zl, lam, T, alpha):
    zs = build_lambda_zeros(zl, lam, T)
    vals, info = f_lambda(zs, alpha, T=T, method=cfg.method, bin_width=cfg.bin_width,
                          workers=cfg.threads, pair_budget=cfg.pair_budget, return_info=True)
    return vals, info


def cmd_pair_correlation(cfg: RunConfig):
    spec = cfg.spec()
    lams = _positive_lambdas(cfg)
    Ts = _need(cfg.Ts, "--T", (2000.0,))
    alpha = np.array(_need(cfg.alpha, "--alpha-grid", tuple(np.linspace(0.0, 0.5, 51))))
    zl = load_zero_list(cfg, spec, max(Ts) + max(lams) / 2)
    rows = []
    for lam in lams:
        for T in Ts:
            vals, info = _f_curve(cfg, zl, lam, T, alpha)
            pp = thm12_prediction(alpha, T, lam, "paper")
            pd = thm12_prediction(alpha, T, lam, "derivation")
            rows += [(lam, T, a, f, p, d, info["method"]) for a, f, p, d in zip(alpha, vals, pp, pd)]
    header = ("lambda", "T", "alpha", "f_empirical", "pred_paper", "pred_derivation", "method")
    return [write_csv(cfg, "pair-correlation", "pair_correlation.csv", header, rows)]


def cmd_figure1(cfg: RunConfig):
    spec = cfg.spec()
    lams = _positive_lambdas(cfg, tuple(np.linspace(0.5, 3.0, 6)))
    Ts = _need(cfg.Ts, "--T", (500.0, 1000.0, 1500.0, 2000.0))
    rows = _figure1_rows(cfg, spec, lams, Ts)
    path = write_csv(cfg, "figure1", "figure1.csv", ("lambda", "T", "x", "lhs_re", "main", "ratio"), rows)
    top = max(Ts)
    series = [(f"lambda={lam:g}", [r[2] for r in rows if r[0] == lam and r[1] == top],
               [r[5] for r in rows if r[0] == lam and r[1] == top]) for lam in lams]
    svg = Path(cfg.out_dir) / "figure1.svg"
    write_line_plot(svg, series, title=f"{cfg.label}: double sum / main term, T={top:g}",
                    xlabel="x", ylabel="ratio", logx=True)
    return [path, svg]


def _pair_figure(cfg: RunConfig, command: str, stem: str, default_T: float):
    spec = cfg.spec()
    if cfg.lambdas is not None and any(lam <= 0 for lam in cfg.lambdas):
        raise ConfigError("lambda must be positive; the shifted product needs lambda > 0")
    lams = _positive_lambdas(cfg)
    Ts = _need(cfg.Ts, "--T", (default_T,))
    if len(lams) != 1 or len(Ts) != 1:
        raise ConfigError(f"{command} takes a single lambda and a single T")
    lam, T = lams[0], Ts[0]
    alpha = np.array(_need(cfg.alpha, "--alpha-grid", tuple(np.round(np.linspace(0.0, 0.5, 51), 12))))
    zl = load_zero_list(cfg, spec, T + lam / 2)
    vals, info = _f_curve(cfg, zl, lam, T, alpha)
    pp = thm12_prediction(alpha, T, lam, "paper")
    pd = thm12_prediction(alpha, T, lam, "derivation")
    path = write_csv(cfg, command, f"{stem}.csv",
                     ("alpha", "f_empirical", "pred_paper", "pred_derivation"),
                     zip(alpha, vals, pp, pd))

    lo, hi = ADJUDICATION_WINDOW
    sel = (alpha >= lo - 1e-12) & (alpha <= hi + 1e-12)
    if not sel.any():
        sel = np.ones_like(alpha, dtype=bool)
    judge = ConventionSelector(lam=lam, T=T).fit(alpha[sel], vals[sel])
    summary = write_csv(
        cfg, command, f"{stem}_winner.csv",
        ("lambda", "T", "alpha_lo", "alpha_hi", "n_alpha", "rms_paper", "rms_derivation",
         "winner", "decisive", "method"),
        [(lam, T, float(alpha[sel].min()), float(alpha[sel].max()), int(sel.sum()),
          judge.rms_["paper"], judge.rms_["derivation"], judge.winner_,
          "yes" if judge.decisive_ else "no", info["method"])],
    )
    print(f"winner: {judge.winner_} ({'decisive' if judge.decisive_ else 'not decisive'})")
    svg = Path(cfg.out_dir) / f"{stem}.svg"
    write_line_plot(svg, [("empirical", alpha, vals), ("2a(1+A cos)", alpha, pp), ("a(1+A cos)", alpha, pd)],
                    title=f"{cfg.label}: F, lambda={lam:g}, T={T:g}", xlabel="alpha", ylabel="F")
    return [path, summary, svg]


def cmd_figure2(cfg: RunConfig):
    return _pair_figure(cfg, "figure2", "figure2", 2000.0)


def cmd_figure3(cfg: RunConfig):
    return _pair_figure(cfg, "figure3", "figure3", 5000.0)


def cmd_fetch(cfg: RunConfig):
    spec = cfg.spec()
    lams = cfg.lambdas or (0.0,)
    T = _need(cfg.Ts, "--T", None)
    height = max(T) + max(lams) / 2
    zl = fetch_zeros(cfg.label, height, cfg.cache_dir, spec=spec, base_url=cfg.zero_url,
                     timeout=cfg.timeout, retries=cfg.retries)
    print(f"{cfg.label}: {len(zl)} ordinates up to {zl.coverage:g} cached in {cfg.cache_dir}")
    return []


COMMANDS = {
    "coeffs": (cmd_coeffs, "write raw coefficients c_n as 'k N label' + 'n c_n' lines"),
    "psi": (cmd_psi, "CSV: x, lambda, psi, psi1, psi2, remainder, main_term, ratio"),
    "predict": (cmd_predict, "CSV: alpha, prediction_paper, prediction_derivation, A_lambda, theta_lambda"),
    "sato-tate": (cmd_sato_tate, "CSV: angle histogram per cutoff and a summary; SVG density overlay"),
    "lg-compare": (cmd_lg_compare, "CSV: x, n_x, sum_re, sum_im, sum_abs, main (single zero sum vs main term)"),
    "double-sum": (cmd_double_sum, "CSV: lambda, T, x, re, im, main, ratio, method"),
    "pair-correlation": (cmd_pair_correlation,
                         "CSV: lambda, T, alpha, f_empirical, pred_paper, pred_derivation, method"),
    "figure1": (cmd_figure1, "CSV: lambda, T, x, lhs_re, main, ratio (11.a2 by default)"),
    "figure2": (cmd_figure2, "CSV: alpha, f_empirical, pred_paper, pred_derivation; plus winner CSV"),
    "figure3": (cmd_figure3, "as figure2, for delta at T = 5000 by default"),
    "fetch": (cmd_fetch, "download zeros covering max T + max lambda / 2 into the cache"),
}


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subparser from resetting flags given before the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("global")
    g.add_argument("--config", help="INI file with [form] [zeros] [run] [output] sections")
    g.add_argument("--out-dir", dest="out_dir")
    g.add_argument("--threads", type=int)
    g.add_argument("--seed", type=int)
    r = common.add_argument_group("run")
    r.add_argument("--form", help="form label: 11.a2, delta, or a label with [form] curve/level")
    r.add_argument("--zeros", help="zero file to use instead of bundled or fetched data")
    r.add_argument("--zero-url", dest="zero_url", help=f"URL template (default ${URL_ENV})")
    r.add_argument("--cache-dir", dest="cache_dir")
    r.add_argument("--lambda", dest="lam", type=parse_grid)
    r.add_argument("--T", type=parse_grid)
    r.add_argument("--alpha-grid", dest="alpha", type=parse_grid)
    r.add_argument("--x", type=parse_grid)
    r.add_argument("--method", choices=("direct", "binned", "integral_oracle"))
    r.add_argument("--bin-width", dest="bin_width", type=float)
    r.add_argument("--pair-budget", dest="pair_budget", type=lambda s: int(float(s)))
    r.add_argument("--n-max", dest="n_max", type=int)
    r.add_argument("--no-diagonal", dest="no_diagonal", action="store_true",
                   help="leave out the rho = rho' terms of the double sum")

    ap = argparse.ArgumentParser(prog="shiftcorr", description=__doc__.split("\n\n")[0],
                                 parents=[common])
    ap.add_argument("--version", action="version", version=f"shiftcorr {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, text) in COMMANDS.items():
        p = sub.add_parser(name, help=text, description=text, parents=[common])
        if name == "predict":
            p.add_argument("--convention", choices=("paper", "derivation"), default=argparse.SUPPRESS)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        COMMANDS[args.command][0](cfg)
    except ShiftCorrError as exc:
        print(f"shiftcorr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
