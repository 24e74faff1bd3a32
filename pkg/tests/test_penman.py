from collections import Counter

import pytest

from amrnorm import (
    Graph, GraphError, PenmanSyntaxError, graph_to_tree, parse, serialize, to_triples,
    tree_to_graph, validate,
)
from amrnorm.penman import (
    Layout, LayoutBranch, default_layout, deinvert_role, invert_role, is_inverted,
)

DRIVE = '''
(d / drive-01
   :ARG0 (h / he)
   :manner (c / care-04
      :polarity -))
'''

ABC = '''
(n1 / A
   :attr "value"
   :edge1 (n2 / B)
   :edge2-of (n3 / C
      :edge3 n2))
'''

ABC_ROTATED = '''
(n1 / A
   :edge1 (n2 / B
      :edge3-of (n3 / C
         :edge2 n1))
   :attr "value")
'''


def triples(text):
    return Counter(to_triples(Graph.from_string(text)))


def test_drive_triples():
    assert set(to_triples(Graph.from_string(DRIVE))) == {
        ('d', ':instance', 'drive-01'), ('h', ':instance', 'he'),
        ('c', ':instance', 'care-04'), ('top', ':TOP', 'd'),
        ('d', ':ARG0', 'h'), ('d', ':manner', 'c'), ('c', ':polarity', '-'),
    }


def test_rotation_preserves_triples():
    assert triples(ABC) == triples(ABC_ROTATED)


def test_inverted_edge_is_deinverted():
    g = Graph.from_string(ABC)
    assert ('n3', ':edge2', 'n1') in g.edges
    assert ('n1', ':attr', '"value"') in g.attributes


@pytest.mark.parametrize('role, inverted', [
    (':ARG0-of', True), (':ARG0', False), (':consist-of', False),
    (':prep-out-of', False), (':consist-of-of', True), (':domain-of', True),
])
def test_is_inverted(role, inverted):
    assert is_inverted(role) is inverted


def test_invert_roundtrip():
    assert invert_role(':ARG0') == ':ARG0-of'
    assert invert_role(':consist-of') == ':consist-of-of'
    assert deinvert_role(':consist-of-of') == ':consist-of'


def test_string_constants_keep_quotes():
    g = Graph.from_string('(n / name :op1 "New York")')
    assert g.attributes == (('n', ':op1', '"New York"'),)


def test_undefined_token_is_constant():
    g = Graph.from_string('(a / apple :mod x)')
    assert g.attributes == (('a', ':mod', 'x'),)
    assert g.edges == ()


def test_reference_before_definition():
    g = Graph.from_string('(b / bite-01 :ARG0 d :ARG1 (x / boy :ARG0-of (d / dog)))')
    assert ('b', ':ARG0', 'd') in g.edges


def test_duplicate_definition_raises():
    with pytest.raises(GraphError):
        Graph.from_string('(b / bite-01 :ARG1 (b / boy))')


def test_cycle_raises_unless_allowed():
    text = '(a / a :ARG0 (b / b :ARG1 a))'
    with pytest.raises(GraphError):
        Graph.from_string(text)
    assert len(Graph.from_string(text, allow_cycles=True).edges) == 2


@pytest.mark.parametrize('text', [
    '(a / apple', '(a / apple))', '(a apple)', '(/ apple)', 'a / apple', '',
    '(a / apple :mod)',
])
def test_syntax_errors(text):
    with pytest.raises(PenmanSyntaxError):
        parse(text)


def test_syntax_error_position():
    with pytest.raises(PenmanSyntaxError) as info:
        parse('(a / apple\n   :mod (b / big)\n   :quant')
    assert info.value.line == 3


def test_serialize_indent_and_compact():
    tree = parse(DRIVE)
    assert serialize(tree) == DRIVE.strip()
    assert serialize(tree, indent=None) == \
        '(d / drive-01 :ARG0 (h / he) :manner (c / care-04 :polarity -))'


def test_layout_records_spelling_and_definitions():
    graph, layout = tree_to_graph(parse(ABC))
    assert layout.top == 'n1'
    assert layout.branches['n1'][2] == LayoutBranch(':edge2-of', 'n3', True)
    assert layout.definition_site == {'n2': 'n1', 'n3': 'n1'}
    assert layout.branch_order['n3'] == [':edge3']
    assert graph.layout == layout


def test_graph_to_tree_uses_stored_layout():
    g = Graph.from_string(ABC_ROTATED)
    assert serialize(graph_to_tree(g)) == ABC_ROTATED.strip()


def test_default_layout_reaches_every_node():
    g = Graph.from_string(ABC).with_(layout=None)
    layout = default_layout(g)
    tree = graph_to_tree(g, layout)
    assert sorted(tree.variables()) == ['n1', 'n2', 'n3']
    assert Counter(to_triples(tree_to_graph(tree)[0])) == Counter(to_triples(g))


def test_graph_equality_ignores_layout():
    a = Graph.from_string(ABC)
    assert a == a.with_(layout=None)


def test_constant_sourced_relation_kept_out_of_triples():
    g = Graph.from_string('(a / apple :mod-of "x")')
    assert g.constant_sourced == (('"x"', ':mod', 'a'),)
    assert len(to_triples(g)) == 2


def codes(obj):
    return {d.code for d in validate(obj)}


def test_validate_clean():
    assert validate(DRIVE) == []


def test_validate_reports():
    assert 'constant-source' in codes('(a / apple :mod-of "x")')
    assert 'non-canonical-role' in codes('(a / apple :domain-of (b / big))')
    assert 'duplicate-definition' in codes('(b / bite-01 :ARG1 (b / boy))')
    assert 'cycle' in codes('(a / a :ARG0 (b / b :ARG1 a))')
    assert 'syntax' in codes('(a / apple')


def test_validate_graph_level():
    g = Graph(top='a', instances={'a': 'x', 'b': 'y'}, edges=((('a', ':ARG0', 'c')),))
    found = codes(g)
    assert 'disconnected' in found
    assert 'undefined-variable' in found


def test_non_canonical_is_warning():
    (d,) = validate('(a / apple :mod-of (b / big))')
    assert d.severity == 'warning'


def test_layout_replace():
    layout = Layout('a', {'a': (LayoutBranch(':ARG0', 'b', True),)})
    new = layout.replace('a', ())
    assert new.branches['a'] == () and layout.branches['a']
