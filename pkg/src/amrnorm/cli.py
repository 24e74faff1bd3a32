"""Command-line interface.

    amrnorm normalize [-I] [-A] [-R | -D] [-S] CORPUS [-o OUT]
    amrnorm score [-I] [-A] [-R | -D] [-S] TEST GOLD [--seed N] [--restarts N]
    amrnorm stats CORPUS
    amrnorm check CORPUS

Exit status is 0 on success, 1 on invalid input, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import __version__
from .corpus import AlignmentError, CorpusError, align, read_corpus, write_corpus
from .normalize import NormalizeOptions, normalize
from .penman import PenmanError, validate
from .reification import TABLE_ENV_VAR, TableError, load_table
from .smatch import DEFAULT_EXACT_BOUND, DEFAULT_RESTARTS, InvalidGraphError, score_corpus
from .stats import corpus_stats, format_kv, format_table

logger = logging.getLogger('amrnorm')

EXIT_OK, EXIT_INPUT, EXIT_USAGE = 0, 1, 2


def _add_input_options(p: argparse.ArgumentParser) -> None:
    p.add_argument('--skip-invalid', action='store_true',
                   help='skip graphs that fail to parse or validate, with a warning')
    p.add_argument('--allow-cycles', action='store_true',
                   help='accept graphs with directed cycles')


def _add_norm_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group('normalization')
    g.add_argument('-I', '--canonicalize-roles', action='store_true',
                   help='canonicalize role inversions')
    g.add_argument('-A', '--reify-attributes', action='store_true',
                   help='reify constants into nodes')
    ex = g.add_mutually_exclusive_group()
    ex.add_argument('-R', '--reify-relations', action='store_true',
                    help='reify relations using the reification table')
    ex.add_argument('-D', '--dereify-relations', action='store_true',
                    help='collapse reified nodes into relations')
    g.add_argument('-S', '--preserve-structure', action='store_true',
                   help='add :TOP relations recording node definition sites')
    g.add_argument('--table', metavar='PATH',
                   help=f'reification table (default: ${TABLE_ENV_VAR} or the bundled table)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='amrnorm', description='Normalize and score AMR corpora.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('normalize', help='write a normalized corpus')
    p.add_argument('corpus')
    p.add_argument('-o', '--output', metavar='PATH', help='output file (default: stdout)')
    p.add_argument('--compact', action='store_true', help='one graph per line')
    _add_norm_options(p)
    _add_input_options(p)

    p = sub.add_parser('score', help='Smatch score a test corpus against a gold corpus')
    p.add_argument('test')
    p.add_argument('gold')
    p.add_argument('--restarts', type=int, default=DEFAULT_RESTARTS, metavar='N')
    p.add_argument('--seed', type=int, default=0, metavar='N')
    p.add_argument('--exact', action='store_true',
                   help='use exhaustive search for graphs within --exact-bound')
    p.add_argument('--exact-bound', type=int, default=DEFAULT_EXACT_BOUND, metavar='N')
    p.add_argument('--strict', action='store_true',
                   help='fail on constant-sourced relations instead of dropping them')
    p.add_argument('--report', metavar='PATH',
                   help="write a key=value report with per-pair counts ('-' for stdout)")
    p.add_argument('-j', '--jobs', type=int, default=1, metavar='N',
                   help='score pairs in N processes')
    _add_norm_options(p)
    _add_input_options(p)

    p = sub.add_parser('stats', help='corpus size and normalization statistics')
    p.add_argument('corpus')
    p.add_argument('--format', choices=('table', 'kv'), default='table')
    p.add_argument('--table', metavar='PATH', help='reification table')
    _add_input_options(p)

    p = sub.add_parser('check', help='report structural problems in a corpus')
    p.add_argument('corpus')
    return parser


def _options(args) -> NormalizeOptions:
    return NormalizeOptions(
        canonicalize_roles=args.canonicalize_roles,
        reify_relations=args.reify_relations,
        dereify_relations=args.dereify_relations,
        reify_attributes=args.reify_attributes,
        preserve_structure=args.preserve_structure,
    )


def run_normalize(args) -> int:
    entries = read_corpus(args.corpus, skip_invalid=args.skip_invalid,
                          allow_cycles=args.allow_cycles)
    table = load_table(args.table)
    options = _options(args)
    counts: dict[str, int] = {}
    kept = [e for e in entries if e.valid]
    graphs = [normalize(e.graph, options, table, counts=counts) for e in kept]
    write_corpus(kept, args.output, graphs=graphs, indent=None if args.compact else 3)
    out = sys.stdout if args.output else sys.stderr
    for key, value in counts.items():
        print(f'{key.replace("_", " ")}: {value}', file=out)
    if len(kept) != len(entries):
        print(f'skipped: {len(entries) - len(kept)}', file=out)
    return EXIT_OK


def format_report(report, pairs, args) -> str:
    """Key/value text report: one ``key=value`` per line."""
    lines = [f'seed={report.seed}', f'restarts={args.restarts}',
             f'exact={str(args.exact).lower()}', f'pairs={len(report.pairs)}',
             f'skipped={report.skipped}']
    for n, ((t, g), r) in enumerate(zip(pairs, report.pairs), 1):
        ident = g.id or t.id or str(n)
        lines += [f'pair.{n}.id={ident}', f'pair.{n}.matched={r.matched}',
                  f'pair.{n}.test={r.test_total}', f'pair.{n}.gold={r.gold_total}',
                  f'pair.{n}.f={r.f_score:.4f}']
    lines += [f'matched={report.matched}', f'test={report.test_total}',
              f'gold={report.gold_total}', f'precision={report.precision:.4f}',
              f'recall={report.recall:.4f}', f'f={report.f_score:.4f}']
    return '\n'.join(lines) + '\n'


def run_score(args) -> int:
    kw = dict(skip_invalid=args.skip_invalid, allow_cycles=args.allow_cycles)
    test = read_corpus(args.test, **kw)
    gold = read_corpus(args.gold, **kw)
    pairs = align(test, gold)
    table = load_table(args.table)
    options = _options(args)
    valid = [(t, g) for t, g in pairs if t.valid and g.valid]
    skipped = len(pairs) - len(valid)
    # identical normalization on both sides
    graph_pairs = [(normalize(t.graph, options, table), normalize(g.graph, options, table))
                   for t, g in valid]
    score_args = dict(restarts=args.restarts, seed=args.seed, exact=args.exact,
                      bound=args.exact_bound, strict=args.strict)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            report = score_corpus(graph_pairs, executor=ex, **score_args)
    else:
        report = score_corpus(graph_pairs, **score_args)
    report.skipped = skipped
    print(report.line())
    if skipped:
        print(f'skipped pairs: {skipped}', file=sys.stderr)
    if args.report:
        text = format_report(report, valid, args)
        if args.report == '-':
            sys.stdout.write(text)
        else:
            with open(args.report, 'w', encoding='utf-8') as f:
                f.write(text)
    return EXIT_OK


def run_stats(args) -> int:
    entries = read_corpus(args.corpus, skip_invalid=args.skip_invalid,
                          allow_cycles=args.allow_cycles)
    stats = corpus_stats((e.graph for e in entries if e.valid), load_table(args.table))
    if args.format == 'kv':
        sys.stdout.write(format_kv(stats))
    else:
        sys.stdout.write(format_table(stats, name=args.corpus))
    return EXIT_OK


def run_check(args) -> int:
    entries = read_corpus(args.corpus, skip_invalid=True, allow_cycles=True)
    errors = warnings = 0
    for e in entries:
        if e.error:
            diagnostics = [('error', 'syntax', e.error)]
        else:
            diagnostics = validate(e.tree)
        for severity, code, message in diagnostics:
            if severity == 'error':
                errors += 1
            else:
                warnings += 1
            print(f'{args.corpus}:{e.line}: {e.label()}: {severity}: [{code}] {message}',
                  file=sys.stderr)
    print(f'{len(entries)} entries, {errors} errors, {warnings} warnings')
    return EXIT_INPUT if errors else EXIT_OK


COMMANDS = {'normalize': run_normalize, 'score': run_score,
            'stats': run_stats, 'check': run_check}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format='%(levelname)s: %(message)s')
    try:
        return COMMANDS[args.command](args)
    except (CorpusError, AlignmentError, PenmanError, TableError,
            InvalidGraphError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
