"""Command-line laboratory tying the modules together.

Every run is a pure function of (flags, input files, seed): identical
invocations produce byte-identical output.  Domain errors exit with status
1 and a machine-readable JSON record on stderr; usage errors exit with 2.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import sys

import click

from . import coding, conflict, deplen, distributions, infotheory, rate, ring
from .errors import InputParseError, OrdlabError
from .infotheory import CostTransducer, IDENTITY


def _emit(text, output):
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def domain_errors(fn):
    """Turn OrdlabError into exit status 1 with a stable error record."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except OrdlabError as exc:
            record = {"error": exc.code, "message": str(exc)}
            click.echo(json.dumps(record), err=True)
            sys.exit(1)

    return wrapper


def _parse_transducer(spec):
    if spec == "identity":
        return IDENTITY
    if spec == "square":
        return CostTransducer("power", (2,))
    if spec.startswith("exp:"):
        base = float(spec.split(":", 1)[1])
        if base <= 1:
            raise InputParseError("exp base must be > 1")
        return CostTransducer("exponential", (math.log(base),))
    raise InputParseError(f"unknown transducer spec {spec!r}")


def ingest_corpus(path, tokenization="whitespace"):
    """Read a UTF-8 text file into a deterministic token list."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise InputParseError(f"{path}: not valid UTF-8 ({exc})") from None
    if tokenization == "character":
        return [c for c in text if not c.isspace()]
    return text.split()


@click.group()
def main():
    """Information-theoretic word order laboratory."""


# ---------------------------------------------------------------------------
# placement


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--target", default=None, help="Target role (defaults to the model's).")
@click.option("--order", default=None, help="Comma-separated context role order.")
@click.option("--objective", type=click.Choice(["uncertainty", "predictability"]),
              default="uncertainty", show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def placement(model_path, target, order, objective, output):
    """Per-context-size entropies and the optimal placement set."""
    model = distributions.load_model(model_path)
    resolved = infotheory._resolve_target(model, target)
    if order is None:
        context = tuple(r for r in model.roles if r != resolved)
    else:
        context = tuple(order.split(","))
    h = infotheory.uncertainty_profile(model, context, resolved)
    i_prof = infotheory.predictability_profile(model, context, resolved)
    optimal = infotheory.optimal_target_placement(model, context, objective, resolved)
    rows = [
        (i, repr(h[i]), repr(i_prof[i]), int(i in optimal))
        for i in range(len(context) + 1)
    ]
    text = _csv_text(("i", "H_bits", "I_bits", "in_optimal_set"), rows)
    text += f"optimal_set,{';'.join(str(i) for i in sorted(optimal))}\n"
    _emit(text, output)


# ---------------------------------------------------------------------------
# deplen


@main.command("deplen")
@click.option("--m", "m", required=True, type=int)
@click.option("--g", "g_spec", default="identity", show_default=True,
              help="Edge cost: identity|square|exp:<base>")
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def deplen_cmd(m, g_spec, output):
    """Dependency cost per head position with min/max summary."""
    transducer = _parse_transducer(g_spec)
    land = deplen.landscape(m, transducer)
    rows = [(p, repr(c)) for p, c in zip(range(1, m + 1), land.costs)]
    text = _csv_text(("head_pos", "cost"), rows)
    text += (
        f"min,{repr(min(land.costs))},"
        f"{';'.join(str(p) for p in sorted(land.min_positions()))}\n"
    )
    text += (
        f"max,{repr(max(land.costs))},"
        f"{';'.join(str(p) for p in sorted(land.max_positions()))}\n"
    )
    _emit(text, output)


# ---------------------------------------------------------------------------
# conflict


@main.command("conflict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--target", default=None)
@click.option("--order", default=None, help="Comma-separated dependent order.")
@click.option("--lambdas", default="0,0.25,0.5,0.75,1", show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def conflict_cmd(model_path, target, order, lambdas, output):
    """Dependency cost vs head uncertainty per position, with Pareto front."""
    model = distributions.load_model(model_path)
    resolved = infotheory._resolve_target(model, target)
    if order is None:
        context = tuple(r for r in model.roles if r != resolved)
    else:
        context = tuple(order.split(","))
    report = conflict.conflict_report(model, context, resolved)
    front = conflict.pareto_front(report)
    grid = [float(s) for s in lambdas.split(",")]
    optima = {lam: conflict.weighted_optimum(report, lam) for lam in grid}
    header = ["head_pos", "dep_cost", "H_bits", "pareto"] + [
        f"weighted_opt_at_{lam:g}" for lam in grid
    ]
    rows = []
    for p in report.positions():
        dep, unc = report.row(p)
        rows.append(
            (p, repr(dep), repr(unc), int(p in front))
            + tuple(int(p in optima[lam]) for lam in grid)
        )
    _emit(_csv_text(header, rows), output)


# ---------------------------------------------------------------------------
# ring


@main.group("ring")
def ring_group():
    """Permutation-ring operations over the six S/V/O orders."""


@ring_group.command("distance")
@click.argument("a")
@click.argument("b")
@domain_errors
def ring_distance_cmd(a, b):
    click.echo(str(ring.ring_distance(a, b)))


@ring_group.command("neighbors")
@click.argument("order")
@domain_errors
def ring_neighbors_cmd(order):
    nbrs = ring.neighbors(order)
    click.echo(",".join(str(o) for o in ring.ORDERS if o in nbrs))


@ring_group.command("predict")
@click.option("--from", "source", required=True)
@click.option("--ring/--no-ring", "use_ring", default=False)
@click.option("--filter", "filter_name", default=None,
              type=click.Choice(sorted(ring.FILTER_SETS)))
@domain_errors
def ring_predict_cmd(source, use_ring, filter_name):
    dests = ring.predicted_destinations(source, use_ring, filter_name)
    click.echo(",".join(str(o) for o in dests))


def _kernel_from_config(cfg):
    decay = cfg.get("decay", {"kind": "exponential", "beta": 1.0})
    kind = decay.get("kind", "exponential")
    if kind == "exponential":
        param = decay.get("beta", 1.0)
    elif kind == "inverse_power":
        param = decay.get("alpha", 1.0)
    else:
        param = {int(k): v for k, v in decay.get("weights", {}).items()}
    return ring.RingKernel(
        decay_kind=kind,
        decay_param=param,
        filters=cfg.get("filters", {}),
        self_weight=cfg.get("self_weight", 0.0),
    )


@ring_group.command("simulate")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def ring_simulate_cmd(config_path, output):
    """Evolve an ensemble per the JSON config; emit per-step distributions."""
    try:
        with open(config_path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"{config_path}: {exc}") from None
    kernel = _kernel_from_config(cfg)
    trajectory = ring.evolve(
        kernel,
        cfg.get("start", "SOV"),
        int(cfg.get("steps", 1)),
        int(cfg.get("ensemble_size", 1000)),
        int(cfg.get("seed", 0)),
    )
    header = ["step"] + [str(o) for o in ring.ORDERS]
    rows = [
        (step, *(repr(float(f)) for f in freq))
        for step, freq in enumerate(trajectory.frequencies)
    ]
    _emit(_csv_text(header, rows), output)


@ring_group.command("compare")
@click.option("--dist", required=True,
              help="Distribution, e.g. SOV=0.4,SVO=0.4,VSO=0.1,...")
@domain_errors
def ring_compare_cmd(dist):
    try:
        parsed = {}
        for part in dist.split(","):
            name, value = part.split("=")
            parsed[ring.as_order(name.strip())] = float(value)
    except (ValueError, KeyError) as exc:
        raise InputParseError(f"bad distribution spec: {exc}") from None
    tv, agreements = ring.compare_to_reference(parsed)
    click.echo(f"total_variation,{repr(tv)}")
    for (a, b), ok in agreements:
        click.echo(f"rank_agreement,{a},{b},{int(ok)}")


# ---------------------------------------------------------------------------
# rate


@main.group("rate")
def rate_group():
    """Entropy-rate estimation and diagnostics on token sequences."""


def _profile_from_file(path, chars, max_order, cyclic, coverage_cap):
    tokens = ingest_corpus(path, "character" if chars else "whitespace")
    table = rate.ngram_counts(tokens, max_order, cyclic=cyclic)
    cap = None if coverage_cap <= 0 else coverage_cap
    return rate.conditional_entropy_profile(table, coverage_cap=cap)


_rate_input_options = [
    click.argument("corpus", type=click.Path(exists=True)),
    click.option("--chars", is_flag=True, help="Character-level tokenization."),
    click.option("--max-order", default=4, show_default=True, type=int),
    click.option("--cyclic", is_flag=True, help="Wrap-around windows."),
    click.option("--coverage-cap", default=0.2, show_default=True, type=float,
                 help="Truncate once distinct blocks exceed this share of windows;"
                      " 0 disables."),
]


def _with_rate_input(fn):
    for option in reversed(_rate_input_options):
        fn = option(fn)
    return fn


@rate_group.command("profile")
@_with_rate_input
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def rate_profile_cmd(corpus, chars, max_order, cyclic, coverage_cap, output):
    profile = _profile_from_file(corpus, chars, max_order, cyclic, coverage_cap)
    rows = [(i + 1, repr(v)) for i, v in enumerate(profile.values)]
    _emit(_csv_text(("i", "H_bits"), rows), output)


@rate_group.command("cer")
@_with_rate_input
@click.option("--tolerance", default=0.05, show_default=True, type=float)
@domain_errors
def rate_cer_cmd(corpus, chars, max_order, cyclic, coverage_cap, tolerance):
    profile = _profile_from_file(corpus, chars, max_order, cyclic, coverage_cap)
    verdict = rate.cer_diagnostic(profile, tolerance)
    record = {
        "flat": verdict.flat,
        "spread": verdict.spread,
        "max_drop": verdict.max_drop,
        "max_drop_position": verdict.max_drop_position,
    }
    click.echo(json.dumps(record))


@rate_group.command("uid")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--text", "text_path", default=None, type=click.Path(exists=True),
              help="Also report the spread of this whitespace-tokenized sequence.")
@domain_errors
def rate_uid_cmd(model_path, text_path):
    model = distributions.load_model(model_path)
    result = rate.uid_classify(model)
    record = {"verdict": result.verdict, "worst_spread": result.worst_spread}
    if result.offending_sequence is not None:
        record["offending_sequence"] = list(result.offending_sequence)
    if text_path is not None:
        tokens = ingest_corpus(text_path)
        record["sequence_spread"] = rate.uid_spread(tokens, model)
    click.echo(json.dumps(record))


@rate_group.command("hilberg")
@_with_rate_input
@click.option("--variant", type=click.Choice(["pure", "relaxed"]),
              default="relaxed", show_default=True)
@domain_errors
def rate_hilberg_cmd(corpus, chars, max_order, cyclic, coverage_cap, variant):
    profile = _profile_from_file(corpus, chars, max_order, cyclic, coverage_cap)
    fit = rate.hilberg_fit(profile, variant)
    record = {
        "a": fit.a,
        "gamma": fit.gamma,
        "b": fit.b,
        "variant": fit.variant,
        "rms_residual": fit.rms_residual,
    }
    click.echo(json.dumps(record))


@rate_group.command("peak")
@_with_rate_input
@domain_errors
def rate_peak_cmd(corpus, chars, max_order, cyclic, coverage_cap):
    profile = _profile_from_file(corpus, chars, max_order, cyclic, coverage_cap)
    value, index = rate.peak_cost(profile)
    click.echo(json.dumps({"peak_bits": value, "argmax_index": index}))


# ---------------------------------------------------------------------------
# coding


@main.command("coding")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="CSV with columns type,probability[,length][,ctx1..ctxN].")
@click.option("--allow-full-reduction", is_flag=True)
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def coding_cmd(input_path, allow_full_reduction, output):
    """Assign optimal lengths and report L, L_n(y), M_n(y), tau, verdict."""
    with open(input_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise InputParseError("empty coding table")
        context_cols = sorted(
            (c for c in reader.fieldnames if c.startswith("ctx")),
            key=lambda c: int(c[3:]),
        )
        has_length = "length" in reader.fieldnames
        rows = list(reader)
    if not rows:
        raise InputParseError("coding table has no rows")
    try:
        probs = [float(r["probability"]) for r in rows]
        types = [r["type"] for r in rows]
        contexts = [tuple(r[c] for c in context_cols) for r in rows]
        given = [int(r["length"]) for r in rows] if has_length else None
    except (KeyError, ValueError) as exc:
        raise InputParseError(f"bad coding table: {exc}") from None
    lengths = given or list(coding.optimal_lengths(probs, allow_full_reduction))
    out_rows = [
        (",".join(ctx) if ctx else "", t, repr(p), l, repr(-math.log2(p)))
        for ctx, t, p, l in zip(contexts, types, probs, lengths)
    ]
    text = _csv_text(("context", "type", "probability", "length", "ideal_length"),
                     out_rows)
    if context_cols:
        table = coding.ContextTable(
            {
                (ctx, t): (p, l)
                for ctx, t, p, l in zip(contexts, types, probs, lengths)
            },
            context_order=len(context_cols),
        )
        text += f"L_n,{repr(coding.contextual_mean_length(table))}\n"
        for y in table.targets():
            text += f"L_n_y,{y},{repr(coding.per_target_length(table, y))}\n"
            text += f"M_n_y,{y},{repr(coding.renormalized_length(table, y))}\n"
        verdict = coding.abbreviation_check(table)
    else:
        table = coding.TypeTable(probs, lengths, allow_full_reduction)
        text += f"L,{repr(coding.mean_length(table))}\n"
        verdict = coding.abbreviation_check(table)
    tau_repr = "undefined" if verdict.tau is None else repr(verdict.tau)
    text += f"tau,{tau_repr}\n"
    text += f"abbreviation_holds,{int(verdict.holds)}\n"
    _emit(text, output)


# ---------------------------------------------------------------------------
# sequence generation


def _parse_dist(spec):
    try:
        return {
            k.strip(): float(v)
            for k, v in (part.split(":") for part in spec.split(","))
        }
    except ValueError as exc:
        raise InputParseError(f"bad distribution spec {spec!r}: {exc}") from None


def _parse_transition(spec):
    # "a>a:0.9,a>b:0.1;b>b:0.8,b>a:0.2" or flat comma form
    table: dict[str, dict[str, float]] = {}
    try:
        for part in spec.replace(";", ",").split(","):
            arrow, value = part.split(":")
            src, dst = arrow.split(">")
            table.setdefault(src.strip(), {})[dst.strip()] = float(value)
    except ValueError as exc:
        raise InputParseError(f"bad transition spec {spec!r}: {exc}") from None
    return table


@main.command("gen")
@click.option("--kind", required=True,
              type=click.Choice(list(distributions.SequenceSource.KINDS)))
@click.option("--marginal", default=None, help='iid marginal, e.g. "a:0.5,b:0.5"')
@click.option("--initial", default=None, help='markov initial, e.g. "a:1"')
@click.option("--transition", default=None, help='markov rows, e.g. "a>b:1,b>a:1"')
@click.option("--block", default=None, help='periodic block, e.g. "a,b,c"')
@click.option("--symbol", default=None, help="homogeneous symbol")
@click.option("--tokens-file", default=None, type=click.Path(exists=True),
              help="empirical token source")
@click.option("--length", required=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def gen_cmd(kind, marginal, initial, transition, block, symbol, tokens_file,
            length, seed, output):
    """Emit a whitespace-joined token sequence from a seeded source."""
    kwargs = {"kind": kind, "seed": seed}
    if kind == "iid":
        if marginal is None:
            raise InputParseError("iid source needs --marginal")
        kwargs["marginal"] = _parse_dist(marginal)
    elif kind == "markov":
        if initial is None or transition is None:
            raise InputParseError("markov source needs --initial and --transition")
        kwargs["initial"] = _parse_dist(initial)
        kwargs["transition"] = _parse_transition(transition)
    elif kind == "periodic":
        if block is None:
            raise InputParseError("periodic source needs --block")
        kwargs["block"] = tuple(s.strip() for s in block.split(","))
    elif kind == "homogeneous":
        if symbol is None:
            raise InputParseError("homogeneous source needs --symbol")
        kwargs["symbol"] = symbol
    else:
        if tokens_file is None:
            raise InputParseError("empirical source needs --tokens-file")
        kwargs["tokens"] = tuple(ingest_corpus(tokens_file))
    source = distributions.SequenceSource(**kwargs)
    tokens = distributions.generate(source, length, seed)
    _emit(" ".join(tokens) + "\n", output)


@main.command("scramble")
@click.argument("corpus", type=click.Path(exists=True))
@click.option("--chars", is_flag=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("-o", "--output", type=click.Path(), default=None)
@domain_errors
def scramble_cmd(corpus, chars, seed, output):
    """Uniformly permute the tokens of a corpus."""
    tokens = ingest_corpus(corpus, "character" if chars else "whitespace")
    _emit(" ".join(distributions.scramble(tokens, seed)) + "\n", output)


if __name__ == "__main__":
    main()
