"""Reading, writing and aligning AMR corpus files.

A corpus file holds PENMAN graphs separated by blank lines.  Each graph may
be preceded by comment lines; ``# ::key value`` pairs become the entry's
metadata (several pairs may share one line).
"""

from __future__ import annotations

import logging
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from .penman import (
    Graph, Layout, PenmanError, PenmanSyntaxError, Tree, graph_to_tree, parse,
    serialize, tree_to_graph,
)

__all__ = ['CorpusEntry', 'CorpusError', 'AlignmentError', 'read_corpus',
           'iter_corpus', 'write_corpus', 'format_entry', 'align']

logger = logging.getLogger(__name__)

_META_RE = re.compile(r'::(\S+)(?:[ \t]+((?:(?!\s::\S).)*))?')


class CorpusError(Exception):
    """A corpus entry failed to parse; carries entry index and line number."""

    def __init__(self, message: str, index: int, line: int, path=None):
        self.index = index
        self.line = line
        self.path = path
        where = f'{path}:' if path else 'line '
        super().__init__(f'{where}{line}: entry {index + 1}: {message}')


class AlignmentError(ValueError):
    pass


@dataclass
class CorpusEntry:
    metadata: list[tuple[str, str]] = field(default_factory=list)
    tree: Optional[Tree] = None
    graph: Optional[Graph] = None
    layout: Optional[Layout] = None
    index: int = 0
    line: int = 0
    error: Optional[str] = None
    text: str = ''

    @property
    def id(self) -> Optional[str]:
        for key, value in self.metadata:
            if key == 'id':
                return value
        return None

    @property
    def valid(self) -> bool:
        return self.error is None and self.graph is not None

    def label(self) -> str:
        ident = self.id
        return f'entry {self.index + 1}' + (f' ({ident})' if ident else '')


def parse_metadata(line: str) -> list[tuple[str, str]]:
    """Key/value pairs from one comment line (without interpreting keys)."""
    body = line.lstrip('#').strip()
    if '::' not in body:
        return [('', body)]
    return [(m.group(1), (m.group(2) or '').strip()) for m in _META_RE.finditer(body)]


def _blocks(lines: Sequence[str]) -> Iterator[tuple[int, list[str], list[str], int]]:
    """Yield (start_line, comment_lines, graph_lines, graph_start_line)."""
    i, n = 0, len(lines)
    while i < n:
        while i < n and not lines[i].strip():
            i += 1
        if i >= n:
            return
        start = i
        comments, body = [], []
        while i < n and lines[i].strip():
            if not body and lines[i].lstrip().startswith('#'):
                comments.append(lines[i])
            else:
                body.append(lines[i])
            i += 1
        yield start + 1, comments, body, start + len(comments) + 1


def iter_corpus(text: str, *, skip_invalid: bool = False, allow_cycles: bool = False,
                path=None) -> Iterator[CorpusEntry]:
    """Parse corpus *text* entry by entry.

    Blocks with comments but no graph (e.g. a file header) are ignored.
    With *skip_invalid*, entries that fail to parse are yielded with
    ``error`` set and no graph instead of raising.
    """
    index = 0
    for start, comments, body, body_line in _blocks(text.splitlines()):
        if not body:
            continue
        metadata = [kv for c in comments for kv in parse_metadata(c)]
        amr = '\n'.join(body)
        entry = CorpusEntry(metadata, index=index, line=body_line, text=amr)
        try:
            entry.tree = parse(amr)
            entry.graph, entry.layout = tree_to_graph(entry.tree, allow_cycles=allow_cycles)
        except PenmanError as exc:
            line = body_line + (exc.line - 1 if isinstance(exc, PenmanSyntaxError) else 0)
            if not skip_invalid:
                raise CorpusError(getattr(exc, 'reason', str(exc)), index, line, path) from exc
            entry.error = str(exc)
            entry.tree = entry.graph = entry.layout = None
            logger.warning('%s:%d: skipping %s: %s', path or '<corpus>', line,
                           entry.label(), exc)
        yield entry
        index += 1


def read_corpus(path: Union[str, Path], *, skip_invalid: bool = False,
                allow_cycles: bool = False) -> list[CorpusEntry]:
    """Read every entry of a corpus file.

    Raises:
        CorpusError: on the first invalid entry, unless *skip_invalid*.
    """
    text = Path(path).read_text(encoding='utf-8')
    return list(iter_corpus(text, skip_invalid=skip_invalid, allow_cycles=allow_cycles,
                            path=path))


def format_entry(entry: CorpusEntry, graph: Optional[Graph] = None,
                 indent: Optional[int] = 3) -> str:
    lines = []
    for key, value in entry.metadata:
        if key:
            lines.append(f'# ::{key} {value}'.rstrip())
        else:
            lines.append(f'# {value}'.rstrip())
    graph = graph if graph is not None else entry.graph
    if graph is None:
        lines.append(entry.text)
    else:
        lines.append(serialize(graph_to_tree(graph), indent=indent))
    return '\n'.join(lines)


def write_corpus(entries: Iterable[CorpusEntry], path: Union[str, Path, None] = None,
                 graphs: Optional[Iterable[Graph]] = None, indent: Optional[int] = 3,
                 stream=None) -> None:
    """Write entries as a corpus file (or to *stream*).

    If *graphs* is given, those graphs are written in place of the entries'
    own graphs, keeping each entry's metadata.  Invalid entries are skipped.
    """
    entries = list(entries)
    graph_list = list(graphs) if graphs is not None else [e.graph for e in entries]
    chunks = [format_entry(e, g, indent) for e, g in zip(entries, graph_list)
              if g is not None]
    text = '\n\n'.join(chunks) + ('\n' if chunks else '')
    if path is not None:
        Path(path).write_text(text, encoding='utf-8')
    else:
        (stream or sys.stdout).write(text)


def align(test: Sequence[CorpusEntry], gold: Sequence[CorpusEntry]
          ) -> list[tuple[CorpusEntry, CorpusEntry]]:
    """Pair test entries with gold entries.

    Pairs by ``id`` metadata when every entry on both sides has one,
    otherwise by position.

    Raises:
        AlignmentError: on duplicate or unmatched ids, or a length mismatch
            under positional alignment.
    """
    if test and gold and all(e.id for e in test) and all(e.id for e in gold):
        by_id = {}
        for side, entries in (('test', test), ('gold', gold)):
            seen = {}
            for e in entries:
                if e.id in seen:
                    raise AlignmentError(f'duplicate id {e.id!r} in {side} corpus')
                seen[e.id] = e
            by_id[side] = seen
        missing_test = [i for i in by_id['gold'] if i not in by_id['test']]
        missing_gold = [i for i in by_id['test'] if i not in by_id['gold']]
        if missing_test or missing_gold:
            parts = []
            if missing_test:
                parts.append('missing from test: ' + ', '.join(missing_test))
            if missing_gold:
                parts.append('missing from gold: ' + ', '.join(missing_gold))
            raise AlignmentError('; '.join(parts))
        return [(by_id['test'][e.id], e) for e in gold]
    if len(test) != len(gold):
        raise AlignmentError(
            f'corpora differ in length ({len(test)} test vs {len(gold)} gold entries)')
    return list(zip(test, gold))
