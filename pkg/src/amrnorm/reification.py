"""Role/concept reification table."""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

__all__ = ['ReificationEntry', 'ReificationTable', 'load_table', 'default_table',
           'TABLE_ENV_VAR']

TABLE_ENV_VAR = 'AMRNORM_TABLE'

_TRUE = {'yes', 'y', 'true', '1', '+', 'x'}
_FALSE = {'no', 'n', 'false', '0', '-', ''}


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class ReificationEntry:
    role: str
    concept: str
    source_role: str
    target_role: str
    reifies: bool = True
    dereifies: bool = True
    shortcut: bool = False

    def __post_init__(self):
        if self.dereifies and not self.reifies:
            raise TableError(f'{self.role}/{self.concept}: dereifies without reifies')
        if self.shortcut and self.dereifies:
            raise TableError(f'{self.role}/{self.concept}: shortcut rows cannot dereify')


class ReificationTable:
    """Lookup structure over a list of :class:`ReificationEntry` rows.

    A role reifies only when it has exactly one row and that row has the
    reifies flag; roles with competing rows (``:poss``, ``:beneficiary``)
    are inert.  When several dereifiable rows share a concept (``:mod`` and
    ``:domain`` both map to ``have-mod-91``), the row with the lowest
    ``(source_role, target_role)`` is used, which picks ``:mod``.
    """

    def __init__(self, entries: Iterable[ReificationEntry]):
        self.entries = tuple(entries)
        by_role: dict[str, list[ReificationEntry]] = {}
        for e in self.entries:
            by_role.setdefault(e.role, []).append(e)
        self._reify = {role: rows[0] for role, rows in by_role.items()
                       if len(rows) == 1 and rows[0].reifies}
        by_concept: dict[str, list[ReificationEntry]] = {}
        for e in self.entries:
            if e.dereifies and self._reify.get(e.role) is e:
                by_concept.setdefault(e.concept, []).append(e)
        self._dereify = {
            concept: min(rows, key=lambda e: (e.source_role, e.target_role))
            for concept, rows in by_concept.items()
        }

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def reification(self, role: str) -> Optional[ReificationEntry]:
        return self._reify.get(role)

    def dereification(self, concept: str) -> Optional[ReificationEntry]:
        return self._dereify.get(concept)

    @property
    def reifiable_roles(self) -> frozenset[str]:
        return frozenset(self._reify)

    @property
    def dereifiable_concepts(self) -> frozenset[str]:
        return frozenset(self._dereify)

    @property
    def reified_concepts(self) -> frozenset[str]:
        return frozenset(e.concept for e in self.entries)


def _flag(value: str, path, lineno: int) -> bool:
    v = value.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise TableError(f'{path}:{lineno}: bad flag value {value!r}')


def parse_table(text: str, path: Union[str, Path] = '<string>') -> ReificationTable:
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        cols = line.rstrip('\n').split('\t')
        if len(cols) < 4:
            raise TableError(f'{path}:{lineno}: expected at least 4 tab-separated columns')
        cols += [''] * (7 - len(cols))
        role, concept, src, tgt = (c.strip() for c in cols[:4])
        flags = cols[4:7]
        # missing flag columns default to a plain reifiable, dereifiable row
        reifies = _flag(flags[0], path, lineno) if flags[0].strip() else True
        dereifies = _flag(flags[1], path, lineno) if flags[1].strip() else reifies
        shortcut = _flag(flags[2], path, lineno)
        try:
            entries.append(ReificationEntry(role, concept, src, tgt,
                                            reifies, dereifies, shortcut))
        except TableError as exc:
            raise TableError(f'{path}:{lineno}: {exc}') from None
    return ReificationTable(entries)


def load_table(path: Union[str, Path, None] = None) -> ReificationTable:
    """Load a reification table.

    With no *path*, the file named by the ``AMRNORM_TABLE`` environment
    variable is used, falling back to the bundled table.
    """
    if path is None:
        path = os.environ.get(TABLE_ENV_VAR) or None
    if path is None:
        return default_table()
    path = Path(path)
    return parse_table(path.read_text(encoding='utf-8'), path)


_DEFAULT: Optional[ReificationTable] = None


def default_table() -> ReificationTable:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files('amrnorm').joinpath('data/reifications.tsv').read_text('utf-8')
        _DEFAULT = parse_table(text, 'reifications.tsv')
    return _DEFAULT
