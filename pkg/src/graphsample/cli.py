"""Command-line surface: generate inputs, run samplers, estimate densities
and profiles, run invariance tests, and diagnose input-size stabilization.

Exit codes: 0 success / test pass, 1 test failure, 2 usage error,
3 I/O error.  Every output file starts with a ``# seed=<u64>`` comment so
any run can be replayed exactly.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io as gio
from . import models
from .estimate import (
    degree_profile,
    estimate_prefix_density,
    lln_trace,
    multiplicity_profile,
    prefix_density_vector,
)
from .invariance import (
    test_equivalence,
    test_exchangeability,
    test_idempotence,
    test_involution_invariance,
)
from .rng import RandomStream
from .sampling import (
    ALGORITHMS,
    EDGE,
    P_SAMPLE,
    PARTITION,
    SEQUENCE,
    SamplerSpec,
    diagnose_limit,
    make_sampler,
)
from .structures import Partition, key_for

GENERATORS = ("y4", "star", "star_edges", "matching", "half_multiplicity",
              "alternating", "singletons", "cycle", "complete", "graphon",
              "paintbox")

_SEQUENCE_ALGOS = {SEQUENCE, PARTITION}
_EDGE_ALGOS = {EDGE}


def _parse_schedule(text: str):
    return tuple(int(x) for x in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="graphsample",
                                  description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, k_flag=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--n", type=int, default=None)
        if k_flag:
            p.add_argument("--k", type=int, default=None)

    gen = sub.add_parser("generate", help="write a synthetic input structure")
    gen.add_argument("name", choices=GENERATORS)
    common(gen)
    gen.add_argument("--file", default=None, help="step-graphon file (graphon)")
    gen.add_argument("--atoms", default=None,
                     help="comma-separated paintbox atom masses")
    gen.add_argument("--dust", type=float, default=0.0)

    smp = sub.add_parser("sample", help="run one sampler, write the output")
    smp.add_argument("--algo", choices=ALGORITHMS, required=True)
    smp.add_argument("--in", dest="infile", required=True)
    common(smp)
    smp.add_argument("--p", type=float, default=None)
    smp.add_argument("--rho", type=float, default=None)

    est = sub.add_parser("estimate", help="prefix densities, profiles, LLN traces")
    est.add_argument("--what", choices=("vector", "density", "degrees",
                                        "multiplicity", "lln", "misspec"),
                     required=True)
    est.add_argument("--algo", choices=ALGORITHMS, default=None)
    est.add_argument("--in", dest="infile", default=None)
    common(est)
    est.add_argument("--reps", type=int, default=10_000)
    est.add_argument("--p", type=float, default=None)
    est.add_argument("--rho", type=float, default=None)
    est.add_argument("--pattern", default=None, help="pattern file (density)")
    est.add_argument("--schedule", default=None, help="comma-separated sizes")
    est.add_argument("--j", type=int, default=1, help="restriction size for lln")
    est.add_argument("--label", type=int, default=1,
                     help="label whose first-entry indicator lln traces")
    est.add_argument("--misspec-k", type=int, default=None)
    est.add_argument("--misspec-j", type=int, default=None)
    est.add_argument("--threads", type=int, default=None)

    tst = sub.add_parser("test", help="invariance / idempotence / equivalence tests")
    tst.add_argument("--test", choices=("exchangeability", "idempotence",
                                        "equivalence", "involution"),
                     required=True)
    tst.add_argument("--algo", choices=ALGORITHMS, default=None)
    tst.add_argument("--in", dest="infile", required=True)
    common(tst)
    tst.add_argument("--in2", default=None, help="second input (equivalence)")
    tst.add_argument("--m", type=int, default=None, help="middle size (idempotence)")
    tst.add_argument("--k-max", type=int, default=3)
    tst.add_argument("--radius", type=int, default=1)
    tst.add_argument("--root", default="uniform",
                     help='"uniform" or a fixed root vertex (involution)')
    tst.add_argument("--reps", type=int, default=10_000)
    tst.add_argument("--p", type=float, default=None)
    tst.add_argument("--rho", type=float, default=None)
    tst.add_argument("--threads", type=int, default=None)

    dia = sub.add_parser("diagnose", help="limit-in-input-size stabilization trace")
    dia.add_argument("--algo", choices=ALGORITHMS, required=True)
    dia.add_argument("--in", dest="infile", required=True)
    common(dia, k_flag=True)
    dia.add_argument("--schedule", required=True)
    dia.add_argument("--reps", type=int, default=10_000)
    dia.add_argument("--tol", type=float, default=0.02)
    dia.add_argument("--p", type=float, default=None)
    dia.add_argument("--rho", type=float, default=None)
    dia.add_argument("--threads", type=int, default=None)

    return top


def _spec_from_args(args) -> SamplerSpec:
    kwargs = {}
    if args.algo == P_SAMPLE:
        kwargs["p"] = args.p
    elif args.algo == "sparsified":
        kwargs["rho"] = args.rho
    return SamplerSpec(args.algo, **kwargs)


def _load_input(args):
    if args.algo in _SEQUENCE_ALGOS:
        seq = gio.read_label_seq(args.infile)
        return Partition(seq) if args.algo == PARTITION else seq
    if args.algo in _EDGE_ALGOS:
        return gio.read_edge_seq(args.infile)
    return gio.read_vertex_graph(args.infile)


def _emit(args, text: str):
    if args.out:
        gio.write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    t = getattr(args, "threads", None)
    return t if t else (os.cpu_count() or 1)


def _cmd_generate(args) -> int:
    rng = RandomStream(args.seed)
    name = args.name
    if name == "y4":
        x = models.y4()
    elif name == "star":
        x = models.star_vertex(_require(args.n, "--n"))
    elif name == "star_edges":
        x = models.star_edgeseq(_require(args.n, "--n"))
    elif name == "matching":
        x = models.matching_edgeseq(_require(args.n, "--n"))
    elif name == "half_multiplicity":
        x = models.half_multiplicity(_require(args.n, "--n"))
    elif name == "alternating":
        x = models.alternating_seq(_require(args.n, "--n"))
    elif name == "singletons":
        x = models.all_singletons_seq(_require(args.n, "--n"))
    elif name == "cycle":
        x = models.cycle_vertex(_require(args.n, "--n"))
    elif name == "complete":
        x = models.complete_vertex(_require(args.n, "--n"))
    elif name == "graphon":
        w = gio.read_step_graphon(_require(args.file, "--file"))
        x = models.graphon_draw(w, _require(args.k, "--k"), rng)
    elif name == "paintbox":
        masses = [float(v) for v in _require(args.atoms, "--atoms").split(",")]
        pb = models.Paintbox(tuple((i + 1, m) for i, m in enumerate(masses)),
                             dust=args.dust)
        x = models.paintbox_draw(pb, _require(args.n, "--n"), rng).labels
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(name)
    text = "".join(l + "\n" for l in [f"# seed={args.seed}"]) + gio.render_structure(x)
    _emit(args, text)
    return 0


def _require(value, flag):
    if value is None:
        raise UsageError(f"missing required flag {flag}")
    return value


class UsageError(Exception):
    pass


def _cmd_sample(args) -> int:
    spec = _spec_from_args(args)
    y = _load_input(args)
    sampler = make_sampler(spec)
    n = _require(args.n, "--n")
    k = args.k if args.k is not None else 1
    if spec.algorithm != P_SAMPLE and args.k is None:
        raise UsageError("missing required flag --k")
    rng = RandomStream(args.seed)
    out = sampler(y, n, k, rng)
    text = f"# seed={args.seed}\n" + gio.render_structure(out)
    _emit(args, text)
    return 0


def _cmd_estimate(args) -> int:
    if args.what == "misspec":
        k = _require(args.misspec_k, "--misspec-k")
        j = _require(args.misspec_j, "--misspec-j")
        _emit(args, gio.render_fraction(models.misspec_table(k, j)) + "\n")
        return 0
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    rng = RandomStream(args.seed)
    if args.what in ("vector", "density", "lln"):
        _require(args.algo, "--algo")
        _require(args.infile, "--in")
        spec = _spec_from_args(args)
        y = _load_input(args)
        n = _require(args.n, "--n")
        if args.what == "vector":
            k = _require(args.k, "--k")
            tally = prefix_density_vector(spec, y, n, k, args.reps, rng,
                                          threads=_threads(args))
            _emit(args, gio.render_tally_csv(tally, seed=args.seed))
            return 0
        if args.what == "density":
            pattern = _load_pattern(args)
            est, err = estimate_prefix_density(spec, y, n, pattern, args.reps, rng,
                                               threads=_threads(args))
            _emit(args, f"# seed={args.seed}\npattern_key,count,density,stderr\n"
                        f"{key_for(pattern).hex()},"
                        f"{round(est * args.reps)},{est:.10g},{err:.10g}\n")
            return 0
        if args.algo not in _SEQUENCE_ALGOS:
            raise UsageError("--what lln supports sequence/partition inputs; "
                             "use --what density for graph functionals")
        schedule = _parse_schedule(_require(args.schedule, "--schedule"))
        label = args.label

        def f(x):  # indicator that the restriction starts with the label
            entries = x.labels if isinstance(x, Partition) else x
            return 1.0 if entries[0] == label else 0.0

        trace = lln_trace(spec, y, n, f, args.j, schedule, args.reps, rng)
        _emit(args, gio.render_lln_csv(trace, seed=args.seed))
        return 0
    if args.what == "degrees":
        g = gio.read_edge_seq(_require(args.infile, "--in"))
        schedule = _parse_schedule(_require(args.schedule, "--schedule"))
        prof = degree_profile(g, schedule)
        _emit(args, gio.render_degree_profile_csv(prof, seed=args.seed))
        return 0
    if args.what == "multiplicity":
        g = gio.read_edge_seq(_require(args.infile, "--in"))
        schedule = _parse_schedule(_require(args.schedule, "--schedule"))
        prof = multiplicity_profile(g, schedule)
        _emit(args, gio.render_multiplicity_profile_csv(prof, seed=args.seed))
        return 0
    raise AssertionError(args.what)  # pragma: no cover


def _load_pattern(args):
    path = _require(args.pattern, "--pattern")
    if args.algo in _SEQUENCE_ALGOS:
        seq = gio.read_label_seq(path)
        return Partition(seq) if args.algo == PARTITION else seq
    if args.algo in _EDGE_ALGOS:
        return gio.read_edge_seq(path)
    return gio.read_vertex_graph(path)


def _cmd_test(args) -> int:
    rng = RandomStream(args.seed)
    n = _require(args.n, "--n")
    if args.test == "involution":
        y = gio.read_vertex_graph(args.infile)
        root_law = "uniform" if args.root == "uniform" else {int(args.root): 1.0}
        report = test_involution_invariance(root_law, y, n, args.radius,
                                            args.reps, rng)
    else:
        _require(args.algo, "--algo")
        spec = _spec_from_args(args)
        y = _load_input(args)
        if args.test == "exchangeability":
            report = test_exchangeability(spec, y, n, _require(args.k, "--k"),
                                          args.reps, rng, threads=_threads(args))
        elif args.test == "idempotence":
            report = test_idempotence(spec, y, n, _require(args.m, "--m"),
                                      _require(args.k, "--k"), args.reps, rng,
                                      threads=_threads(args))
        else:
            args2 = argparse.Namespace(**vars(args))
            args2.infile = _require(args.in2, "--in2")
            y2 = _load_input(args2)
            report = test_equivalence(spec, y, y2, n, args.k_max, args.reps, rng,
                                      threads=_threads(args))
    text = report.summary() + "\n"
    if args.out:
        text += gio.render_tally_csv(report.tally_a, seed=args.seed,
                                     extra={"operand": "a"})
        text += gio.render_tally_csv(report.tally_b, seed=args.seed,
                                     extra={"operand": "b"})
    _emit(args, text)
    return 0 if report.passed else 1


def _cmd_diagnose(args) -> int:
    spec = _spec_from_args(args)
    y = _load_input(args)
    k = _require(args.k, "--k")
    schedule = _parse_schedule(args.schedule)
    rng = RandomStream(args.seed)
    result = diagnose_limit(spec, y, k, schedule, args.reps, rng,
                            tolerance=args.tol, threads=_threads(args))
    _emit(args, gio.render_diagnose_csv(result, seed=args.seed))
    sys.stderr.write(f"verdict: {result.verdict}\n")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"generate": _cmd_generate, "sample": _cmd_sample,
                "estimate": _cmd_estimate, "test": _cmd_test,
                "diagnose": _cmd_diagnose}
    try:
        code = handlers[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return 3
    except (ValueError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
