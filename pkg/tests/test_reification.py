import pytest

from amrnorm import ReificationEntry, TableError, default_table, load_table
from amrnorm.reification import TABLE_ENV_VAR, parse_table


def test_default_table_shape():
    table = default_table()
    assert len(table) == 38
    assert table.reification(':manner').concept == 'have-manner-91'
    assert table.reification(':poss') is None
    assert table.reification(':beneficiary') is None
    assert table.dereification('have-mod-91').role == ':mod'
    assert table.dereification('cause-01') is None
    assert 'include-91' in table.reified_concepts


def test_entry_invariants():
    with pytest.raises(ValueError):
        ReificationEntry(':x', 'x-91', ':ARG1', ':ARG2', False, True)
    with pytest.raises(ValueError):
        ReificationEntry(':x', 'x-91', ':ARG1', ':ARG2', True, True, shortcut=True)


def test_parse_errors():
    with pytest.raises(TableError):
        parse_table(':a\tb-91\t:ARG1\n')
    with pytest.raises(TableError):
        parse_table(':a\tb-91\t:ARG1\t:ARG2\tmaybe\tno\tno\n')


def test_load_from_env(tmp_path, monkeypatch):
    path = tmp_path / 't.tsv'
    path.write_text('# role concept source target reifies dereifies shortcut\n'
                    ':manner\thave-manner-91\t:ARG1\t:ARG2\tyes\tyes\tno\n')
    monkeypatch.setenv(TABLE_ENV_VAR, str(path))
    assert len(load_table()) == 1
    assert len(load_table(path)) == 1
    monkeypatch.delenv(TABLE_ENV_VAR)
    assert len(load_table()) == 38
