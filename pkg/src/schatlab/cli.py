"""Command-line front end: kernel analysis, traces, power/summability studies.

Subcommands: analyze | trace | powers | su2 | weyl | carleman.  Every
command emits one JSON report (stdout or --out), an optional two-column
CSV of its primary series (--csv), and an optional rendered figure
(--plot).  Reports are deterministic for fixed flags and seed; the
timestamp is suppressed under --reproducible so runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone


def _configure_threads() -> None:
    cap = os.environ.get("SCHATLAB_THREADS")
    if cap:
        for var in (
            "OMP_NUM_THREADS",
            "OPENBLAS_NUM_THREADS",
            "MKL_NUM_THREADS",
            "NUMEXPR_NUM_THREADS",
        ):
            os.environ.setdefault(var, cap)


_configure_threads()  # must run before numpy loads its BLAS thread pool

import numpy as np  # noqa: E402

from . import __version__  # noqa: E402
from . import diag_avg, kernels, powers, sobolev, spectral, su2, torus_fourier  # noqa: E402

DEFAULT_CUTOFF = {1: 1024, 2: 24}
DEFAULT_DENSE_CUTOFF = 256  # kernels that need a dense SVD
DEFAULT_START_2D = 64
TRACE_LEVEL = 18
TRACE_GRID = 2048

KERNEL_CHOICES = (
    "conv-power",
    "conv-table",
    "mode-sum",
    "product-random",
    "rank-one",
    "carleman",
    "diag-corrupt",
)

CARLEMAN_NOTE = (
    "continuity of the kernel is evidenced numerically (bounded partial-sum "
    "sup norms), not proven by this computation"
)


# ---------------------------------------------------------------------------
# config files and report plumbing


def _read_config_tokens(path: str) -> list[str]:
    """key=value lines ('#' comments) as flag tokens; flags given on the
    command line come later and therefore override these."""
    tokens: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            if value.lower() in ("true", "yes", "on"):
                tokens.append(f"--{key}")
            elif value.lower() in ("false", "no", "off"):
                continue
            else:
                tokens.extend([f"--{key}", value])
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    config_tokens: list[str] = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg == "--config" and i + 1 < len(argv):
            config_tokens.extend(_read_config_tokens(argv[i + 1]))
            i += 2
        elif arg.startswith("--config="):
            config_tokens.extend(_read_config_tokens(arg.split("=", 1)[1]))
            i += 1
        else:
            i += 1
    if not config_tokens:
        return argv
    # insert right after the subcommand so explicit flags parse later and win
    at = 1 if argv and not argv[0].startswith("-") else 0
    return argv[:at] + config_tokens + argv[at:]


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.complexfloating):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def _classifier_dict(res: powers.ClassifierResult) -> dict:
    return {
        "verdict": res.verdict,
        "cutoffs": [int(c) for c in res.cutoffs],
        "partial_sums": [float(s) for s in res.partial_sums],
        "ratios": [float(r) for r in res.ratios],
        "growth_exponent": float(res.growth_exponent),
    }


def _write_csv(path: str, xs, ys) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for x, y in zip(xs, ys):
            fh.write(f"{float(x)!r},{float(y)!r}\n")


# ---------------------------------------------------------------------------
# kernel construction from flags


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from exc


def _parse_modes(text: str, n: int) -> tuple:
    modes = []
    for group in text.split(";"):
        group = group.strip()
        if not group:
            continue
        vals = _parse_floats(group)
        head = 2 * n
        if len(vals) not in (head + 1, head + 2):
            raise ValueError(
                f"each mode needs {head} indices plus re[,im], got {group!r}"
            )
        value = complex(vals[head], vals[head + 1] if len(vals) > head + 1 else 0.0)
        if n == 1:
            modes.append((int(vals[0]), int(vals[1]), value))
        else:
            modes.append(((int(vals[0]), int(vals[1])), (int(vals[2]), int(vals[3])), value))
    if not modes:
        raise ValueError("mode list is empty")
    return tuple(modes)


def _kernel_from_args(args, name: str | None = None) -> kernels.KernelSpec:
    name = args.kernel if name is None else name
    n = args.n
    if name == "conv-power":
        return kernels.ConvPower(a=args.a, dim=n)
    if name == "conv-table":
        return kernels.ConvTable(kappa_hat=tuple(_parse_floats(args.table)))
    if name == "rank-one":
        return kernels.RankOne(dim=n)
    if name == "carleman":
        plist = _parse_floats(args.p) if isinstance(args.p, str) else [float(args.p)]
        demo = next((p for p in plist if 0 < p < 2), 1.0)
        return kernels.Carleman(p_demo=demo)
    if name == "product-random":
        return kernels.ProductRandom(a=args.a, b=args.b, seed=args.seed, dim=n)
    if name == "mode-sum":
        if not args.modes:
            raise ValueError("--modes is required for mode-sum kernels")
        return kernels.ModeSum(modes=_parse_modes(args.modes, n), dim=n)
    if name == "diag-corrupt":
        if args.base == "diag-corrupt":
            raise ValueError("diag-corrupt cannot wrap itself")
        base = _kernel_from_args(args, args.base)
        return kernels.DiagCorrupt(base=base, value=args.value)
    raise ValueError(f"unknown kernel {name!r}")


def _default_cutoff(spec: kernels.KernelSpec) -> int:
    if isinstance(spec, kernels.DiagCorrupt):
        return _default_cutoff(spec.base)
    if isinstance(spec, kernels.ConvTable):
        return max(1, spec.table_cutoff)
    if isinstance(spec, kernels.ModeSum):
        return _mode_cutoff(spec)
    if kernels.is_convolution(spec):
        return DEFAULT_CUTOFF[spec.dim]
    return DEFAULT_DENSE_CUTOFF if spec.dim == 1 else DEFAULT_CUTOFF[2]


def _mode_cutoff(spec: kernels.ModeSum) -> int:
    span = 0
    for k, l, _ in spec.modes:
        for idx in (k, l):
            coords = (idx,) if spec.dim == 1 else idx
            span = max(span, max(abs(int(c)) for c in coords))
    return max(1, span)


# ---------------------------------------------------------------------------
# analyze


def _conv_symbol_data(base: kernels.KernelSpec, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Symbol values and Laplace eigenvalues along the anti-diagonal pairs."""
    if base.dim == 1:
        sym = kernels.symbol_values(base, N)
        k = np.arange(-N, N + 1, dtype=np.float64)
        return sym, k * k
    lattice = torus_fourier.build_lattice(2, N)
    lam = lattice.eigenvalues().astype(np.float64)
    if isinstance(base, kernels.ConvPower):
        sym = ((1.0 + np.sqrt(lam)) ** (-base.a)).astype(complex)
    elif isinstance(base, kernels.RankOne):
        sym = np.zeros(len(lam), dtype=complex)
        sym[lattice.position((0, 0))] = 1.0
    else:
        raise ValueError(f"no planar symbol for {type(base).__name__}")
    return sym, lam


def _shell_schatten_verdict(base: kernels.KernelSpec, r: float) -> str:
    """Classifier for sum |kappa_hat|^r over Z^2 lattice shells."""
    radii = powers.geometric_cutoffs(DEFAULT_START_2D, 6, 2)
    r2, counts = powers.torus_shells(2, int(radii[-1]))
    if isinstance(base, kernels.RankOne):
        mags = (r2 == 0).astype(np.float64)
    else:
        mags = (1.0 + np.sqrt(r2.astype(np.float64))) ** (-base.a)
    partial = np.cumsum(counts * mags**r)
    edges = np.searchsorted(r2, radii * radii, side="right")
    sums = np.where(edges > 0, partial[np.maximum(edges - 1, 0)], 0.0)
    return powers.classify_partial_sums(radii, sums).verdict


def _observed_verdict(spec: kernels.KernelSpec, p: float, summary: spectral.SpectralSummary) -> tuple[str, str]:
    """(verdict, evidence-kind) for Schatten-p membership of the kernel."""
    base = kernels.base_spec(spec)
    if kernels.is_convolution(base):
        if base.dim == 1:
            return spectral.symbol_schatten_classify(base, p).verdict, "symbol-sums"
        return _shell_schatten_verdict(base, p), "symbol-sums"
    if isinstance(base, kernels.ModeSum):
        return powers.CONVERGENT, "finite-rank"
    beta = summary.tail_beta
    if beta is None:
        return powers.INCONCLUSIVE, "tail-fit"
    if beta * p > 1.1:
        return powers.CONVERGENT, "tail-fit"
    if beta * p < 0.9:
        return powers.DIVERGENT, "tail-fit"
    return powers.INCONCLUSIVE, "tail-fit"


def cmd_analyze(args):
    spec = _kernel_from_args(args)
    base = kernels.base_spec(spec)
    n = spec.dim
    N = args.cutoff if args.cutoff is not None else _default_cutoff(spec)
    order = sobolev.SobolevOrder(mu1=args.mu1, mu2=args.mu2)
    plist = _parse_floats(args.p)
    notes = []

    if kernels.is_convolution(base):
        sym, lam = _conv_symbol_data(base, N)
        mags2 = np.abs(sym) ** 2
        mixed = float(np.sum((1.0 + lam) ** order.total * mags2))
        iso = float(np.sum((1.0 + 2.0 * lam) ** order.total * mags2))
        s = np.sort(np.abs(sym))[::-1]
        try:
            beta, halfwidth = spectral.tail_exponent(s)
        except ValueError:
            beta, halfwidth = None, None
        summary = spectral.SpectralSummary(
            cutoff=N,
            singular_values=s,
            trace_eigensum=complex(np.sum(sym)),
            tail_beta=beta,
            tail_halfwidth=halfwidth,
        )
    else:
        C = kernels.coefficients(base, N)
        mixed = sobolev.mixed_norm(C, order)
        iso = sobolev.isotropic_norm(C, order.total)
        summary = spectral.summarize(C)

    try:
        finiteness = _classifier_dict(sobolev.classify_mixed_finiteness(base, order))
    except ValueError:
        finiteness = None

    prediction = spectral.predict_membership(n, args.mu1, args.mu2, trace_class_query=True)

    if n == 1:
        quad = spectral.trace_quadrature(spec, TRACE_GRID, series_cutoff=N)
        averaged = diag_avg.trace_averaged(spec, TRACE_LEVEL, TRACE_GRID, series_cutoff=N)
    else:
        quad = spectral.trace_quadrature(spec, 4 * N + 2, series_cutoff=N)
        averaged = None

    verdicts = []
    for p in plist:
        predicted = prediction.verdict(p)
        observed, evidence = _observed_verdict(spec, p, summary)
        verdicts.append(
            {
                "p": p,
                "predicted": predicted,
                "observed": observed,
                "evidence": evidence,
                "consistent": not (predicted == "guaranteed" and observed == powers.DIVERGENT),
            }
        )

    if isinstance(base, kernels.Carleman):
        notes.append(CARLEMAN_NOTE)
    if isinstance(spec, kernels.DiagCorrupt):
        notes.append(
            "diagonal corruption lives on a measure-zero set: coefficients, "
            "norms, and spectra are those of the base kernel; only the naive "
            "quadrature trace sees the corrupted value"
        )

    head = min(16, len(summary.singular_values))
    report = {
        "inputs": _input_echo(args),
        "sobolev": {
            "order": {"mu1": args.mu1, "mu2": args.mu2},
            "mixed_norm_sq": mixed,
            "isotropic_norm_sq": iso,
            "finiteness": finiteness,
        },
        "prediction": {
            "n": prediction.n,
            "mu1": prediction.mu1,
            "mu2": prediction.mu2,
            "r_star": prediction.r_star,
            "trace_class": prediction.trace_class,
        },
        "spectrum": {
            "cutoff": summary.cutoff,
            "count": int(len(summary.singular_values)),
            "singular_values_head": [float(v) for v in summary.singular_values[:head]],
            "tail_beta": summary.tail_beta,
            "tail_halfwidth": summary.tail_halfwidth,
            "schatten_norms": {f"{p:g}": float(summary.schatten(p)) for p in plist},
        },
        "traces": {
            "eigensum": complex(summary.trace_eigensum),
            "quadrature": complex(quad),
            "averaged": None if averaged is None else complex(averaged),
        },
        "verdicts": verdicts,
        "notes": notes,
    }
    series = (np.arange(1, len(summary.singular_values) + 1), summary.singular_values)

    def plot_fn(path, _summary=summary, _label=args.kernel):
        from . import figures

        return figures.spectral_figure(_summary, path, label=_label)

    return report, series, plot_fn


# ---------------------------------------------------------------------------
# trace


def cmd_trace(args):
    spec = _kernel_from_args(args)
    base = kernels.base_spec(spec)
    n = spec.dim
    N = args.cutoff if args.cutoff is not None else _default_cutoff(spec)

    if kernels.is_convolution(base) and n == 1:
        eigensum = complex(np.sum(kernels.symbol_values(base, N)))
    else:
        C = kernels.coefficients(base, N)
        eigensum = complex(spectral.trace_eigensum(spectral.operator_matrix(C)))
    naive = complex(spectral.trace_quadrature(spec, args.grid, series_cutoff=N))
    if n == 1:
        averaged = complex(diag_avg.trace_averaged(spec, args.level, args.grid, series_cutoff=N))
    else:
        averaged = None

    report = {
        "inputs": _input_echo(args),
        "eigensum": eigensum,
        "quadrature": naive,
        "averaged": averaged,
        "agreement": {
            "eigensum_vs_quadrature": abs(eigensum - naive),
            "eigensum_vs_averaged": None if averaged is None else abs(eigensum - averaged),
        },
    }

    series = None
    plot_fn = None
    if n == 1:
        levels = np.arange(4, args.level + 1, dtype=np.int64)
        per_level = np.array(
            [diag_avg.trace_averaged(spec, int(j), args.grid, series_cutoff=N).real for j in levels]
        )
        series = (levels, per_level)

        def plot_fn(path, _lv=levels, _tr=per_level, _eig=eigensum.real):
            from . import figures

            return figures.trace_figure(_lv, _tr, _eig, path)

    return report, series, plot_fn


# ---------------------------------------------------------------------------
# powers / weyl


def _sequence_from_args(args) -> powers.TorusSequence:
    if args.model == "torus-laplacian":
        return powers.torus_laplacian_sequence(args.n)
    if args.model == "torus-bilaplacian":
        return powers.torus_bilaplacian_sequence(args.n)
    raise ValueError(f"unknown model {args.model!r}")


def cmd_powers(args):
    seq = _sequence_from_args(args)
    kwargs = {}
    if args.start is not None:
        kwargs["start"] = args.start
    if args.doublings is not None:
        kwargs["doublings"] = args.doublings
    report = {"inputs": _input_echo(args), "sequence": _sequence_dict(seq)}
    if args.q is not None:
        res = powers.summability_classify(seq, args.q, **kwargs)
        report["summability"] = {
            "q": args.q,
            "critical_q": seq.dim / seq.order,
            "classification": _classifier_dict(res),
        }
    else:
        pw = powers.power_schatten(seq, args.alpha, args.p, **kwargs)
        res = pw.classification
        report["power_schatten"] = {
            "alpha": pw.alpha,
            "p": pw.p,
            "q": pw.q,
            "threshold_alpha": pw.threshold_alpha,
            "predicted_member": pw.predicted_member,
            "classification": _classifier_dict(res),
            "partial_norms": [float(v) for v in pw.partial_norms],
        }
    series = (res.cutoffs, res.partial_sums)

    def plot_fn(path, _res=res, _label=args.model):
        from . import figures

        return figures.classifier_figure(_res, path, title=_label)

    return report, series, plot_fn


def _sequence_dict(seq: powers.TorusSequence) -> dict:
    return {"label": seq.label, "dim": seq.dim, "order": seq.order}


def cmd_weyl(args):
    seq = _sequence_from_args(args)
    check = powers.weyl_check(seq, args.lam)
    trend = powers.weyl_bound_trend(seq, args.lam)
    report = {
        "inputs": _input_echo(args),
        "sequence": _sequence_dict(seq),
        "count": int(check.count),
        "bound_constant": float(check.bound_constant),
        "trend": {
            "slope": float(trend.slope),
            "lam_grid": [float(v) for v in trend.lam_grid],
            "running_max": [float(v) for v in trend.running_max],
        },
    }
    series = (trend.lam_grid, trend.running_max)

    def plot_fn(path, _trend=trend, _label=args.model):
        from . import figures

        return figures.weyl_figure(_trend, path, label=_label)

    return report, series, plot_fn


# ---------------------------------------------------------------------------
# su2


def cmd_su2(args):
    gamma = args.gamma if args.op == "hgamma" else None
    res = su2.invariant_power_schatten(
        args.op,
        args.alpha,
        args.p,
        group=args.group,
        gamma=gamma,
        l_max=args.l_max,
        z_sign=args.z_sign,
    )
    report = {
        "inputs": _input_echo(args),
        "power_schatten": {
            "operator": res.operator,
            "group": res.group,
            "alpha": res.alpha,
            "p": res.p,
            "gamma": res.gamma,
            "alpha_p": res.alpha * res.p,
            "threshold": su2.SCHATTEN_THRESHOLD,
            "predicted_member": res.predicted_member,
            "classification": _classifier_dict(res.classification),
        },
    }
    if args.mu1 is not None or args.mu2 is not None:
        thresholds = su2.kernel_membership_threshold_group(
            3, args.mu1 or 0.0, args.mu2 or 0.0
        )
        report["kernel_thresholds"] = {
            "general": thresholds.general,
            "refined": thresholds.refined,
            "sharper": thresholds.sharper,
        }
    if args.hypo_c is not None:
        hypo = su2.hypoellipticity_check(args.hypo_c, args.l_max)
        report["hypoellipticity"] = {
            "c": args.hypo_c,
            "passed": hypo.passed,
            "witness": None if hypo.witness is None else list(hypo.witness),
            "certified": hypo.certified,
        }
    cls = res.classification
    series = (cls.cutoffs, cls.partial_sums)

    def plot_fn(path, _res=cls, _label=f"{args.op} on {args.group}"):
        from . import figures

        return figures.classifier_figure(_res, path, title=_label)

    return report, series, plot_fn


# ---------------------------------------------------------------------------
# carleman


CARLEMAN_SUP_CUTOFFS = (1_000, 10_000, 100_000, 1_000_000)


def cmd_carleman(args):
    p = args.p
    sup_cutoffs = np.array(CARLEMAN_SUP_CUTOFFS, dtype=np.int64)
    sups = kernels.carleman_sup_norms(sup_cutoffs, resolution=args.resolution)
    fit_cutoffs = np.unique(np.round(np.geomspace(1e3, 1e6, 13)).astype(np.int64))
    ell1 = kernels.carleman_power_sums(fit_cutoffs, 1.0)
    ell2 = kernels.carleman_power_sums(np.array([1_000, 1_000_000]), 2.0)
    psums = kernels.carleman_power_sums(fit_cutoffs, p)
    slope = float(np.polyfit(np.log(fit_cutoffs), np.log(ell1), 1)[0])
    cls = powers.classify_partial_sums(fit_cutoffs[-6:], psums[-6:])
    report = {
        "inputs": _input_echo(args),
        "ell2": {
            "sum_at_1e3": float(ell2[0]),
            "sum_at_1e6": float(ell2[1]),
            "difference": float(abs(ell2[1] - ell2[0])),
        },
        "ell1": {
            "cutoffs": [int(c) for c in fit_cutoffs],
            "sums": [float(v) for v in ell1],
            "fitted_exponent": slope,
        },
        "sup_norms": {
            "cutoffs": [int(c) for c in sup_cutoffs],
            "values": [float(v) for v in sups],
            "ratio_1e5_over_1e4": float(sups[2] / sups[1]),
        },
        "power_sums": {
            "p": p,
            "cutoffs": [int(c) for c in fit_cutoffs],
            "sums": [float(v) for v in psums],
            "verdict": cls.verdict,
        },
        "notes": [CARLEMAN_NOTE],
    }
    series = (sup_cutoffs, sups)

    def plot_fn(path, _c=fit_cutoffs, _ps=psums, _p=p, _res=args.resolution):
        from . import figures

        sup_on_fit = kernels.carleman_sup_norms(_c, resolution=_res)
        return figures.carleman_figure(_c, sup_on_fit, _ps, _p, path)

    return report, series, plot_fn


# ---------------------------------------------------------------------------
# parser and entry points


def _input_echo(args) -> dict:
    skip = {"handler", "out", "csv", "plot"}
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or callable(value):
            continue
        echo[key] = value
    return echo


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schatlab",
        description="Schatten-class diagnostics for integral kernels on tori and SU(2)/SO(3)",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="write the primary series as two-column CSV")
    common.add_argument("--plot", help="render the report figure to this file")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized kernels")
    common.add_argument(
        "--reproducible",
        action="store_true",
        help="omit the timestamp so identical runs are byte-identical",
    )
    common.add_argument("--config", help="key=value file of defaults; flags override")

    kernel = argparse.ArgumentParser(add_help=False)
    kernel.add_argument("--kernel", required=True, choices=KERNEL_CHOICES)
    kernel.add_argument("--n", type=int, default=1, choices=(1, 2), help="torus dimension")
    kernel.add_argument("--a", type=float, default=1.0, help="row symbol decay exponent")
    kernel.add_argument("--b", type=float, default=1.0, help="column decay (product-random)")
    kernel.add_argument("--cutoff", type=int, default=None, help="frequency cutoff N")
    kernel.add_argument("--table", default="0.5,1,0.5", help="symbol table (conv-table)")
    kernel.add_argument("--modes", default=None, help="k,l,re[,im];... (mode-sum)")
    kernel.add_argument("--value", type=float, default=99.0, help="diagonal value (diag-corrupt)")
    kernel.add_argument(
        "--base",
        default="conv-table",
        choices=[c for c in KERNEL_CHOICES if c != "diag-corrupt"],
        help="base kernel wrapped by diag-corrupt",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser(
        "analyze",
        parents=[common, kernel],
        help="norms, membership prediction, spectrum, traces, verdicts",
    )
    p_an.add_argument("--mu1", type=float, default=0.0)
    p_an.add_argument("--mu2", type=float, default=0.0)
    p_an.add_argument("--p", default="1,2", help="comma-separated Schatten exponents")
    p_an.set_defaults(handler=cmd_analyze)

    p_tr = sub.add_parser(
        "trace",
        parents=[common, kernel],
        help="eigenvalue sum vs naive quadrature vs dyadically averaged trace",
    )
    p_tr.add_argument("--level", type=int, default=TRACE_LEVEL, help="dyadic averaging level")
    p_tr.add_argument("--grid", type=int, default=TRACE_GRID, help="quadrature grid size")
    p_tr.set_defaults(handler=cmd_trace)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument(
        "--model",
        default="torus-laplacian",
        choices=("torus-laplacian", "torus-bilaplacian"),
    )
    model.add_argument("--n", type=int, default=1, choices=(1, 2), help="torus dimension")
    model.add_argument("--start", type=int, default=None, help="first classifier cutoff")
    model.add_argument("--doublings", type=int, default=None, help="cutoff doublings")

    p_pw = sub.add_parser(
        "powers",
        parents=[common, model],
        help="Schatten classification of inverse elliptic powers",
    )
    p_pw.add_argument("--alpha", type=float, default=1.0)
    p_pw.add_argument("--p", type=float, default=2.0)
    p_pw.add_argument("--q", type=float, default=None, help="classify the q-summability sum directly")
    p_pw.set_defaults(handler=cmd_powers)

    p_wl = sub.add_parser(
        "weyl",
        parents=[common, model],
        help="eigenvalue counting and multiplicity bound trend",
    )
    p_wl.add_argument("--lambda", dest="lam", type=float, default=100.0, help="threshold")
    p_wl.set_defaults(handler=cmd_weyl)

    p_su = sub.add_parser(
        "su2",
        parents=[common],
        help="invariant operators on SU(2)/SO(3): Schatten sums, thresholds, hypoellipticity",
    )
    p_su.add_argument("--op", default="sublaplacian", choices=("sublaplacian", "hgamma"))
    p_su.add_argument("--alpha", type=float, default=2.0)
    p_su.add_argument("--p", type=float, default=3.0)
    p_su.add_argument("--group", default="su2", choices=su2.GROUPS)
    p_su.add_argument("--gamma", type=float, default=2.0, help="hgamma coefficient (> 1)")
    p_su.add_argument("--l-max", type=int, default=512)
    p_su.add_argument("--z-sign", type=int, default=-1, choices=(-1, 1))
    p_su.add_argument("--mu1", type=float, default=None, help="report kernel thresholds at n=3")
    p_su.add_argument("--mu2", type=float, default=None)
    p_su.add_argument("--hypo-c", default=None, help="shift c for the hypoellipticity set check")
    p_su.set_defaults(handler=cmd_su2)

    p_ca = sub.add_parser(
        "carleman",
        parents=[common],
        help="counterexample coefficients: sup norms, power sums, growth fits",
    )
    p_ca.add_argument("--p", type=float, default=1.0, help="demonstration exponent in (0, 2)")
    p_ca.add_argument("--resolution", type=int, default=4096, help="sup-norm sampling grid")
    p_ca.set_defaults(handler=cmd_carleman)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits: 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        report, series, plot_fn = args.handler(args)
        report["schema"] = 1
        report["command"] = args.command
        provenance = {"version": __version__, "seed": args.seed}
        if not args.reproducible:
            provenance["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        report["provenance"] = provenance
        text = json.dumps(report, indent=2, sort_keys=True, default=_jsonable) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if args.csv and series is not None:
            _write_csv(args.csv, series[0], series[1])
        if args.plot and plot_fn is not None:
            plot_fn(args.plot)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (spectral.NumericalFailure, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
