import argparse
import asyncio
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from scalar.cache.result_cache import ResultCache
from scalar.config.config import ResourceConfig, config
from scalar.dataset import ingest, read_dataset, seed_dataset_path, tag_counts
from scalar.errors import DatasetError, ScalarError
from scalar.lexical.tokenizer import split
from scalar.model.gbt import Hyperparameters, LabeledExample, cross_validate, fit, predict_proba, stratified_split
from scalar.model.metrics import MetricReport, evaluate
from scalar.model.model_io import load_model, model_version, save_model
from scalar.services.pipeline import classify_preamble_candidate, map_ptb_to_scalar
from scalar.services.resources import TaggerResources, load_resources
from scalar.services.tagging_service import TaggingService
from scalar.tagset import TAG_ORDER, IdentifierContext
from scalar.utils import format_duration, setup_logging

logger = logging.getLogger(__name__)


def _resource_config(args: argparse.Namespace) -> ResourceConfig:
    return replace(
        config.resources,
        dictionary=args.dictionary or config.resources.dictionary,
        user_words=args.user_words or config.resources.user_words,
        abbreviations=args.abbreviations or config.resources.abbreviations,
        embeddings=args.embeddings or config.resources.embeddings,
    )


def _hyperparameters(args: argparse.Namespace) -> Hyperparameters:
    return Hyperparameters(
        n_rounds=args.rounds,
        learning_rate=args.learning_rate,
        max_depth=args.max_depth,
        min_samples_leaf=args.min_samples_leaf,
        seed=args.seed,
    )


def _load_examples(path: str, resources: TaggerResources) -> list[LabeledExample]:
    examples = ingest(path, resources)
    identifiers = sum(1 for e in examples if e.position == 0)
    print(f'Dataset: {identifiers} identifiers, {len(examples)} words')
    return examples


def score_examples(model, examples: list[LabeledExample]) -> MetricReport:
    """Tag every example and report word-level metrics, timing the tagging itself."""
    if not examples:
        raise DatasetError('No examples to evaluate')
    X = np.stack([e.features for e in examples])
    started = time.perf_counter()
    probabilities = predict_proba(model, X)
    predicted = [model.classes[int(i)] for i in np.argmax(probabilities, axis=1)]
    elapsed = time.perf_counter() - started
    return evaluate([(e.label, p) for e, p in zip(examples, predicted)], elapsed=elapsed, labels=TAG_ORDER)


def score_baseline(examples: list[LabeledExample], resources: TaggerResources) -> MetricReport:
    """Score the general-English baseline tags, mapped to the identifier tagset, on the same words."""
    if not examples:
        raise DatasetError('No examples to evaluate')
    if any(not e.words for e in examples):
        raise DatasetError('Baseline scoring needs the identifier words of every example')

    started = time.perf_counter()
    tagged: dict[tuple[str, ...], list[str]] = {}
    predicted = []
    for e in examples:
        if e.words not in tagged:
            tagged[e.words] = [map_ptb_to_scalar(tag).value for tag in resources.baseline.tag(e.words)]
        predicted.append(tagged[e.words][e.position])
    elapsed = time.perf_counter() - started
    return evaluate([(e.label, p) for e, p in zip(examples, predicted)], elapsed=elapsed, labels=TAG_ORDER)


def _print_comparison(report: MetricReport, baseline: MetricReport):
    print(report.to_table())
    print()
    print('Baseline (general-English tagger mapped to the tagset):')
    print(baseline.to_table())
    print()
    print(f'Accuracy: model {report.accuracy:.4f}, baseline {baseline.accuracy:.4f}')


def _write_report(report: dict, path: str | None):
    if path:
        Path(path).write_text(json.dumps(report, indent=2) + '\n', encoding='utf-8')
        print(f'Report written to {path}')


def train_command(args: argparse.Namespace) -> int:
    hp = _hyperparameters(args)
    resources = load_resources(_resource_config(args))
    examples = _load_examples(args.dataset, resources)

    train, test = stratified_split(examples, args.train_fraction, hp.seed)
    print(f'Split: train {len(train)} words, test {len(test)} words')

    report: dict = {'split': {'train': len(train), 'test': len(test)}}
    if args.folds:
        started = time.perf_counter()
        cv = cross_validate(train, hp, args.folds, classes=TAG_ORDER)
        print(
            f'{args.folds}-fold CV: mean accuracy {cv.mean_accuracy:.4f}, '
            f'mean balanced accuracy {cv.mean_balanced_accuracy:.4f} '
            f'({format_duration(time.perf_counter() - started)})'
        )
        report['cross_validation'] = cv.to_dict()

    model = fit(train, hp, classes=TAG_ORDER)
    version = save_model(model, args.output)
    print(f'Model {version} written to {args.output}')

    held_out = score_examples(model, test)
    baseline = score_baseline(test, resources)
    _print_comparison(held_out, baseline)
    report['test'] = held_out.to_dict()
    report['baseline'] = baseline.to_dict()
    _write_report(report, args.report_json)
    return 0


def evaluate_command(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    resources = load_resources(_resource_config(args))
    examples = _load_examples(args.dataset, resources)

    report = score_examples(model, examples)
    baseline = score_baseline(examples, resources)
    _print_comparison(report, baseline)
    document = report.to_dict()
    document['baseline'] = baseline.to_dict()
    _write_report(document, args.report_json)
    return 0


def tag_command(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    resources = load_resources(_resource_config(args))
    service = TaggingService(model, resources, ResultCache(None, model_version(model)))

    output = service.tag(args.identifier, args.context).to_dict()
    if args.explain:
        words = split(args.identifier)
        context = IdentifierContext.parse(args.context)
        output['preamble_candidates'] = [
            w for w in words if classify_preamble_candidate(w, words, context, resources)
        ]
    print(json.dumps(output, indent=2))
    return 0


def ingest_check_command(args: argparse.Namespace) -> int:
    result = read_dataset(args.dataset)
    print(f'{len(result.rows)} identifiers accepted, {len(result.rejected)} rejected')
    for line_no, message in result.rejected:
        print(f'  line {line_no}: {message}')
    counts = tag_counts(result.rows)
    for tag in TAG_ORDER:
        print(f'  {tag:<4}{counts.get(tag, 0):>6}')
    return 1 if result.rejected else 0


def serve_command(args: argparse.Namespace) -> int:
    from scalar.main import main

    server_config = replace(
        config.server,
        host=args.host or config.server.host,
        port=args.port or config.server.port,
        cache_file=args.cache_file or config.server.cache_file,
    )
    asyncio.run(main(model_path=args.model, resource_config=_resource_config(args), server_config=server_config))
    return 0


def build_parser() -> argparse.ArgumentParser:
    resource_flags = argparse.ArgumentParser(add_help=False)
    resource_flags.add_argument('--dictionary', help='Dictionary word list (default: packaged list)')
    resource_flags.add_argument('--user-words', help='User-accepted word list')
    resource_flags.add_argument('--abbreviations', help='User abbreviation list')
    resource_flags.add_argument('--embeddings', help='Plain-text word vector file')
    resource_flags.add_argument('--log-level', default=config.app.log_level, help='Logging level')

    model_flag = argparse.ArgumentParser(add_help=False)
    model_flag.add_argument(
        '--model', default=config.model.model_path, help=f'Model file (default: {config.model.model_path})'
    )

    parser = argparse.ArgumentParser(prog='scalar', description='Part-of-speech tagging for source code identifiers')
    commands = parser.add_subparsers(dest='command', required=True)

    train = commands.add_parser('train', parents=[resource_flags], help='Train a model on a TSV dataset')
    train.add_argument('dataset', nargs='?', default=str(seed_dataset_path()), help='Dataset (default: seed dataset)')
    train.add_argument('--output', default=config.model.model_path, help='Where to write the model')
    train.add_argument('--seed', type=int, default=config.model.seed)
    train.add_argument('--rounds', type=int, default=config.model.rounds)
    train.add_argument('--learning-rate', type=float, default=config.model.learning_rate)
    train.add_argument('--max-depth', type=int, default=config.model.max_depth)
    train.add_argument('--min-samples-leaf', type=int, default=config.model.min_samples_leaf)
    train.add_argument('--folds', type=int, default=config.model.folds, help='Cross-validation folds, 0 to skip')
    train.add_argument('--train-fraction', type=float, default=config.model.train_fraction)
    train.add_argument('--report-json', help='Also write the report as JSON')
    train.set_defaults(handler=train_command)

    evaluate_parser = commands.add_parser(
        'evaluate', parents=[resource_flags, model_flag], help='Score a model on a TSV dataset'
    )
    evaluate_parser.add_argument('dataset', help='Dataset to evaluate on')
    evaluate_parser.add_argument('--report-json', help='Also write the report as JSON')
    evaluate_parser.set_defaults(handler=evaluate_command)

    tag = commands.add_parser('tag', parents=[resource_flags, model_flag], help='Tag one identifier')
    tag.add_argument('identifier')
    tag.add_argument('context', choices=[c.value for c in IdentifierContext])
    tag.add_argument('--explain', action='store_true', help='List preamble candidates too')
    tag.set_defaults(handler=tag_command)

    serve = commands.add_parser('serve', parents=[resource_flags, model_flag], help='Run the HTTP service')
    serve.add_argument('--host', help=f'Listen address (default: {config.server.host})')
    serve.add_argument('--port', type=int, help=f'Listen port (default: {config.server.port})')
    serve.add_argument('--cache-file', help=f'Result cache file (default: {config.server.cache_file})')
    serve.set_defaults(handler=serve_command)

    check = commands.add_parser('ingest-check', help='Validate a TSV dataset')
    check.add_argument('dataset')
    check.add_argument('--log-level', default=config.app.log_level, help='Logging level')
    check.set_defaults(handler=ingest_check_command)

    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, config.app.log_dir)

    try:
        return args.handler(args)
    except ScalarError as e:
        logger.error(f'{args.command} failed: {e}')
        print(f'Error: {e}', file=sys.stderr)
        return 1
    except ValueError as e:
        logger.error(f'{args.command} failed: {e}')
        print(f'Error: {e}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(run())
