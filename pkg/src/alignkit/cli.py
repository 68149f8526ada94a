"""Command-line entry point.

Subcommands: train, align, symmetrize, embed-align, evaluate, project and
analyze (subset | length | bootstrap).  Data flows through plain files;
stdout is the primary data channel and diagnostics go to stderr.  Every run
prepends a one-line ``# alignkit <version> seed=<n> config=<hash>``
provenance comment to its primary output, and all alignment/tag/model
parsers skip such leading comments.

Exit codes: 2 for flag or usage errors, 1 for data errors.  Outputs are
deterministic given flags plus seed; ``--workers`` changes wall time only.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    bootstrap_aer,
    ibm_alignment_method,
    length_analysis,
    subset_analysis,
)
from .corpus import (
    ParseError,
    parse_bitext,
    parse_conll,
    parse_embeddings,
    parse_pharaoh,
    serialize_conll,
    serialize_pharaoh,
)
from .embed import EmbeddingAligner
from .ibm import (
    Direction,
    ModelKind,
    TrainConfig,
    decode,
    load_model,
    serialize_model,
    train,
)
from .metrics import evaluate
from .projection import ProjectionConfig, project
from .symmetrize import Heuristic, symmetrize_corpus


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {raw!r}")


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(_read(path).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        values[key.strip()] = value.strip()
    return values


def _resolve(args: argparse.Namespace, defaults: dict[str, tuple]) -> dict:
    """Merge CLI flags, --config file values, and built-in defaults.

    Precedence: explicit flag > config file > default.  Returns the
    resolved mapping used for the provenance hash.
    """
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
    unknown = set(file_values) - set(defaults)
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    resolved = {}
    for key, (conv, default) in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            if key in file_values:
                try:
                    value = conv(file_values[key])
                except (TypeError, ValueError) as exc:
                    raise UsageError(f"config key {key}: {exc}") from None
            else:
                value = default
        setattr(args, key, value)
        resolved[key] = value
    return resolved


def _provenance(command: str, resolved: dict, seed: int) -> str:
    blob = command + "".join(f";{k}={resolved[k]!r}" for k in sorted(resolved))
    digest = hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]
    return f"# alignkit {__version__} seed={seed} config={digest}\n"


def _emit(text: str, out_path: str | None, provenance: str) -> None:
    payload = provenance + text
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _train_config(args: argparse.Namespace) -> TrainConfig:
    try:
        return TrainConfig(
            iterations=args.iters,
            smoothing_alpha=args.alpha,
            initial_lambda=args.initial_lambda,
            p0=args.p0,
            lambda_search=args.lambda_search,
            seed=args.seed,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_TRAIN_DEFAULTS = {
    "model": (str, "diag"),
    "direction": (str, "both"),
    "iters": (int, 5),
    "alpha": (float, 0.01),
    "p0": (float, 0.08),
    "initial_lambda": (float, 4.0),
    "lambda_search": (_parse_bool, True),
    "seed": (int, 0),
    "workers": (int, 1),
}


def _cmd_train(args: argparse.Namespace) -> None:
    resolved = _resolve(args, _TRAIN_DEFAULTS)
    config = _train_config(args)
    kind = ModelKind(args.model)
    provenance = _provenance("train", resolved, args.seed)
    corpus = parse_bitext(_read(args.bitext))
    directions = (
        [Direction.FORWARD, Direction.REVERSE]
        if args.direction == "both"
        else [Direction(args.direction)]
    )
    for direction in directions:
        table, params, ll = train(corpus, direction, config, kind)
        suffix = f".{direction.value}" if args.direction == "both" else ""
        path = args.out + suffix
        Path(path).write_text(provenance + serialize_model(table, params), encoding="utf-8")
        print(
            f"{direction.value}: {table.n_entries} entries, "
            f"final log-likelihood {ll[-1]:.4f}, lambda {params.lam:.4f} -> {path}",
            file=sys.stderr,
        )
    sys.stdout.write(provenance)


_ALIGN_DEFAULTS = {
    "direction": (str, "both"),
    "seed": (int, 0),
}


def _cmd_align(args: argparse.Namespace) -> None:
    resolved = _resolve(args, _ALIGN_DEFAULTS)
    provenance = _provenance("align", resolved, args.seed)
    corpus = parse_bitext(_read(args.bitext))
    if args.direction == "both":
        if not args.out:
            raise UsageError("--direction both requires --out (writes .fwd/.rev files)")
        for direction in (Direction.FORWARD, Direction.REVERSE):
            table, params = load_model(args.model + f".{direction.value}")
            alignment = decode(corpus, table, params, direction)
            _emit(serialize_pharaoh(alignment), args.out + f".{direction.value}", provenance)
    else:
        direction = Direction(args.direction)
        table, params = load_model(args.model)
        alignment = decode(corpus, table, params, direction)
        _emit(serialize_pharaoh(alignment), args.out, provenance)


_SYMM_DEFAULTS = {
    "heuristic": (str, "grow-diag-final"),
    "one_based": (_parse_bool, False),
    "seed": (int, 0),
}


def _cmd_symmetrize(args: argparse.Namespace) -> None:
    resolved = _resolve(args, _SYMM_DEFAULTS)
    provenance = _provenance("symmetrize", resolved, args.seed)
    try:
        heuristic = Heuristic(args.heuristic)
    except ValueError:
        raise UsageError(f"unknown heuristic {args.heuristic!r}") from None
    corpus = parse_bitext(_read(args.bitext)) if args.bitext else None
    fwd = parse_pharaoh(_read(args.fwd), corpus=corpus, one_based=args.one_based)
    rev = parse_pharaoh(_read(args.rev), corpus=corpus, one_based=args.one_based)
    merged = symmetrize_corpus(fwd, rev, heuristic, corpus=corpus)
    _emit(serialize_pharaoh(merged), args.out, provenance)


_EVAL_DEFAULTS = {
    "one_based": (_parse_bool, False),
    "seed": (int, 0),
}


def _cmd_evaluate(args: argparse.Namespace) -> None:
    resolved = _resolve(args, _EVAL_DEFAULTS)
    provenance = _provenance("evaluate", resolved, args.seed)
    corpus = parse_bitext(_read(args.bitext)) if args.bitext else None
    pred = parse_pharaoh(_read(args.pred), corpus=corpus, one_based=args.one_based)
    gold = parse_pharaoh(_read(args.gold), corpus=corpus, one_based=args.one_based)
    report = evaluate(pred, gold)
    _emit(report.to_tsv(), None, provenance)
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")


_EMBED_DEFAULTS = {
    "threshold": (float, 0.001),
    "temperature": (float, 1.0),
    "aggregation": (str, "any"),
    "layer": (int, None),
    "seed": (int, 0),
}


def _cmd_embed_align(args: argparse.Namespace) -> None:
    resolved = _resolve(args, _EMBED_DEFAULTS)
    provenance = _provenance("embed-align", resolved, args.seed)
    try:
        aligner = EmbeddingAligner(
            threshold=args.threshold,
            temperature=args.temperature,
            aggregation=args.aggregation,
            expected_layer=args.layer,
        ).fit()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pairs = parse_embeddings(_read(args.embeddings))
    alignment = aligner.predict(pairs)
    _emit(serialize_pharaoh(alignment), args.out, provenance)


_PROJECT_DEFAULTS = {
    "task": (str, "pos"),
    "beta": (float, 0.3),
    "rho": (float, 0.8),
    "fallback_tag": (str, None),
    "one_based": (_parse_bool, False),
    "seed": (int, 0),
}


def _cmd_project(args: argparse.Namespace) -> None:
    resolved = _resolve(args, _PROJECT_DEFAULTS)
    provenance = _provenance("project", resolved, args.seed)
    try:
        config = ProjectionConfig(
            task=args.task,
            type_threshold=args.beta,
            min_coverage=args.rho,
            fallback_tag=args.fallback_tag,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    corpus = parse_bitext(_read(args.bitext))
    src_tags = parse_conll(_read(args.src_tags), task=args.task)
    for k, (sent, pair) in enumerate(zip(src_tags, corpus)):
        if sent.tokens != pair.src:
            raise ValueError(
                f"pair {k}: source-side tokens in {args.src_tags} do not match the bitext"
            )
    alignment = parse_pharaoh(_read(args.alignment), corpus=corpus, one_based=args.one_based)
    projected, stats = project(src_tags, alignment, corpus, config)
    _emit(serialize_conll(projected), args.out, provenance)
    if args.stats_out:
        Path(args.stats_out).write_text(stats.to_json() + "\n", encoding="utf-8")
    print(
        f"kept {stats.sentences_kept}/{stats.sentences_kept + stats.sentences_dropped} "
        f"sentences, token coverage {stats.token_coverage:.3f}",
        file=sys.stderr,
    )


_ANALYZE_COMMON = {
    "models": (str, "diag"),
    "heuristic": (str, "union"),
    "iters": (int, 5),
    "alpha": (float, 0.01),
    "p0": (float, 0.08),
    "initial_lambda": (float, 4.0),
    "lambda_search": (_parse_bool, True),
    "include_eval": (_parse_bool, True),
    "one_based": (_parse_bool, False),
    "seed": (int, 0),
    "workers": (int, 1),
}


def _analysis_methods(args: argparse.Namespace):
    eval_corpus = parse_bitext(_read(args.eval_bitext))
    gold = parse_pharaoh(_read(args.gold), corpus=eval_corpus, one_based=args.one_based)
    config = _train_config(args)
    try:
        heuristic = Heuristic(args.heuristic)
    except ValueError:
        raise UsageError(f"unknown heuristic {args.heuristic!r}") from None
    methods = {}
    for name in args.models.split(","):
        name = name.strip()
        try:
            kind = ModelKind(name)
        except ValueError:
            raise UsageError(f"unknown model {name!r} (expected ibm1 or diag)") from None
        methods[name] = ibm_alignment_method(
            eval_corpus,
            kind=kind,
            config=config,
            heuristic=heuristic,
            include_eval=args.include_eval,
        )
    return eval_corpus, gold, methods


def _cmd_analyze_subset(args: argparse.Namespace) -> None:
    resolved = _resolve(args, {**_ANALYZE_COMMON, "sizes": (str, None)})
    if not args.sizes:
        raise UsageError("--sizes is required (comma-separated ascending integers)")
    provenance = _provenance("analyze-subset", resolved, args.seed)
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise UsageError(f"bad --sizes value {args.sizes!r}") from None
    corpus = parse_bitext(_read(args.bitext))
    _, gold, methods = _analysis_methods(args)
    report = subset_analysis(corpus, gold, sizes, methods, seed=args.seed)
    _emit(report.to_tsv(), args.out, provenance)
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")


def _cmd_analyze_length(args: argparse.Namespace) -> None:
    resolved = _resolve(args, {**_ANALYZE_COMMON, "group_size": (int, 7508)})
    provenance = _provenance("analyze-length", resolved, args.seed)
    corpus = parse_bitext(_read(args.bitext))
    _, gold, methods = _analysis_methods(args)
    if args.group_size < 1:
        raise UsageError("--group-size must be >= 1")
    report = length_analysis(corpus, gold, args.group_size, methods)
    _emit(report.to_tsv(), args.out, provenance)
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")


_BOOTSTRAP_DEFAULTS = {
    "n_samples": (int, 100),
    "sample_size": (int, 50),
    "one_based": (_parse_bool, False),
    "seed": (int, 0),
}


def _cmd_analyze_bootstrap(args: argparse.Namespace) -> None:
    resolved = _resolve(args, _BOOTSTRAP_DEFAULTS)
    provenance = _provenance("analyze-bootstrap", resolved, args.seed)
    if args.n_samples < 1 or args.sample_size < 1:
        raise UsageError("--n-samples and --sample-size must be >= 1")
    corpus = parse_bitext(_read(args.bitext)) if args.bitext else None
    pred = parse_pharaoh(_read(args.pred), corpus=corpus, one_based=args.one_based)
    gold = parse_pharaoh(_read(args.gold), corpus=corpus, one_based=args.one_based)
    report = bootstrap_aer(
        pred, gold, n_samples=args.n_samples, sample_size=args.sample_size, seed=args.seed
    )
    _emit(report.to_tsv(), args.out, provenance)
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# Parser assembly


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value defaults file; flags override it")
    parser.add_argument("--seed", type=int, help="random seed recorded in provenance (default 0)")


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--iters", type=int, help="EM iterations (default 5)")
    parser.add_argument("--alpha", type=float, help="add-alpha smoothing (default 0.01)")
    parser.add_argument("--p0", type=float, help="NULL link probability (default 0.08)")
    parser.add_argument(
        "--lambda", dest="initial_lambda", type=float,
        help="initial diagonal tension (default 4.0)",
    )
    parser.add_argument(
        "--no-lambda-search", dest="lambda_search", action="store_const", const=False,
        help="keep the tension fixed instead of re-fitting it each iteration",
    )
    parser.add_argument("--workers", type=int, help="parallel workers; never changes outputs (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alignkit",
        description="Word alignment toolkit: train, align, symmetrize, evaluate, project, analyze.",
    )
    parser.add_argument("--version", action="version", version=f"alignkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="EM-train translation models from bitext")
    p.add_argument("bitext", help="training bitext (src ||| tgt per line)")
    p.add_argument("--model", choices=["ibm1", "diag"], help="model kind (default diag)")
    p.add_argument(
        "--direction", choices=["fwd", "rev", "both"],
        help="training direction; 'both' writes <out>.fwd and <out>.rev (default both)",
    )
    p.add_argument("--out", required=True, help="output model path (or prefix for both)")
    _add_train_flags(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("align", help="decode alignments with a trained model")
    p.add_argument("bitext")
    p.add_argument("--model", required=True, help="model path (prefix when --direction both)")
    p.add_argument(
        "--direction", choices=["fwd", "rev", "both"],
        help="decode direction; 'both' writes <out>.fwd and <out>.rev (default both)",
    )
    p.add_argument("--out", help="output Pharaoh path (default stdout; prefix for both)")
    _add_common(p)
    p.set_defaults(handler=_cmd_align)

    p = sub.add_parser("symmetrize", help="combine forward and reverse alignments")
    p.add_argument("fwd", help="forward Pharaoh file")
    p.add_argument("rev", help="reverse Pharaoh file (already in source-target orientation)")
    p.add_argument(
        "--heuristic",
        choices=[h.value for h in Heuristic],
        help="combination heuristic (default grow-diag-final)",
    )
    p.add_argument("--bitext", help="optional bitext for bounds checking")
    p.add_argument("--one-based", dest="one_based", action="store_const", const=True,
                   help="treat input link indices as 1-based")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(handler=_cmd_symmetrize)

    p = sub.add_parser("embed-align", help="extract alignments from an EMB1 embedding dump")
    p.add_argument("embeddings", help="EMB1 file")
    p.add_argument("--threshold", type=float, help="link probability threshold (default 0.001)")
    p.add_argument("--temperature", type=float, help="softmax temperature (default 1.0)")
    p.add_argument("--aggregation", choices=["any", "all"],
                   help="subword-to-word rule (default any)")
    p.add_argument("--layer", type=int, help="require embeddings from this layer")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(handler=_cmd_embed_align)

    p = sub.add_parser("evaluate", help="score predicted alignments against gold")
    p.add_argument("--pred", required=True, help="predicted Pharaoh file")
    p.add_argument("--gold", required=True, help="gold Pharaoh file (sure and possible links)")
    p.add_argument("--bitext", help="optional bitext for bounds checking")
    p.add_argument("--one-based", dest="one_based", action="store_const", const=True,
                   help="treat input link indices as 1-based")
    p.add_argument("--json", help="also write a JSON report with raw counts to this path")
    _add_common(p)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("project", help="project source tags across an alignment")
    p.add_argument("--bitext", required=True)
    p.add_argument("--src-tags", dest="src_tags", required=True, help="source-side CoNLL file")
    p.add_argument("--alignment", required=True, help="Pharaoh alignment file")
    p.add_argument("--task", choices=["pos", "ner"], help="annotation task (default pos)")
    p.add_argument("--beta", type=float, help="type-dictionary threshold (default 0.3)")
    p.add_argument("--rho", type=float, help="minimum aligned-token fraction (default 0.8)")
    p.add_argument("--fallback-tag", dest="fallback_tag",
                   help="tag for unaligned tokens (default NOUN for pos, O for ner)")
    p.add_argument("--one-based", dest="one_based", action="store_const", const=True,
                   help="treat input link indices as 1-based")
    p.add_argument("--out", help="projected CoNLL output (default stdout)")
    p.add_argument("--stats-out", dest="stats_out", help="write coverage stats JSON here")
    _add_common(p)
    p.set_defaults(handler=_cmd_project)

    p = sub.add_parser("analyze", help="subset, length, and bootstrap analyses")
    asub = p.add_subparsers(dest="analysis", required=True)

    def add_method_flags(ap: argparse.ArgumentParser) -> None:
        ap.add_argument("--bitext", required=True, help="training pool bitext")
        ap.add_argument("--eval-bitext", dest="eval_bitext", required=True,
                        help="bitext of the gold-aligned evaluation pairs")
        ap.add_argument("--gold", required=True, help="gold Pharaoh file for the evaluation pairs")
        ap.add_argument("--models", help="comma-separated model kinds: ibm1,diag (default diag)")
        ap.add_argument("--heuristic", choices=[h.value for h in Heuristic],
                        help="symmetrization for each method (default union)")
        ap.add_argument("--no-include-eval", dest="include_eval", action="store_const",
                        const=False,
                        help="do not append the evaluation bitext to each training set")
        ap.add_argument("--one-based", dest="one_based", action="store_const", const=True)
        ap.add_argument("--out")
        ap.add_argument("--json", help="also write the report as JSON to this path")
        _add_train_flags(ap)
        _add_common(ap)

    ap = asub.add_parser("subset", help="AER as a function of training-set size")
    ap.add_argument("--sizes", help="comma-separated ascending sizes, e.g. 50,100,200")
    add_method_flags(ap)
    ap.set_defaults(handler=_cmd_analyze_subset)

    ap = asub.add_parser("length", help="AER per ascending-length group")
    ap.add_argument("--group-size", dest="group_size", type=int,
                    help="examples per group (default 7508)")
    add_method_flags(ap)
    ap.set_defaults(handler=_cmd_analyze_length)

    ap = asub.add_parser("bootstrap", help="subsample AER distribution")
    ap.add_argument("--pred", required=True)
    ap.add_argument("--gold", required=True)
    ap.add_argument("--bitext", help="optional bitext for bounds checking")
    ap.add_argument("--n-samples", dest="n_samples", type=int, help="number of samples (default 100)")
    ap.add_argument("--sample-size", dest="sample_size", type=int, help="pairs per sample (default 50)")
    ap.add_argument("--one-based", dest="one_based", action="store_const", const=True)
    ap.add_argument("--out")
    ap.add_argument("--json", help="also write the report as JSON to this path")
    _add_common(ap)
    ap.set_defaults(handler=_cmd_analyze_bootstrap)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.handler(args)
    except UsageError as exc:
        print(f"alignkit: usage error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValueError, OSError) as exc:
        print(f"alignkit: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
