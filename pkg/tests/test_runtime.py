import datetime
import textwrap

import pytest

from gridscript.runtime import (
    BudgetExceeded,
    ExecutionLimits,
    Interpreter,
    ScriptError,
    ScriptSyntaxError,
    parse_script,
)
from gridscript.values import ErrorKind, ErrorValue


def run(source, section="PRE_CONSTANTS", limits=None, data_root=None):
    interp = Interpreter(limits or ExecutionLimits(), data_root)
    stmts = parse_script(textwrap.dedent(source))
    interp.set_section(section)
    interp.exec_statements(stmts, interp.globals)
    return interp


def var(interp, name):
    return interp.globals.lookup(name)


def result(expr, prelude=""):
    interp = run(prelude + f"\nout = {expr}\n")
    return var(interp, "out")


# --- expressions and operators ---

def test_arithmetic_keeps_integers():
    assert result("2 + 3") == 5
    assert isinstance(result("2 + 3"), int)
    assert isinstance(result("2 * 3 - 1"), int)
    assert result("7 / 2") == 3.5  # division always yields a Number
    assert isinstance(result("6 / 3"), float)


def test_mixed_arithmetic_is_float():
    assert result("2 + 1.5") == 3.5
    assert isinstance(result("2 * 1.0"), float)


def test_empty_coerces_to_zero_in_arithmetic():
    assert result("EMPTY + 5") == 5
    assert result("3 - EMPTY") == 3
    assert result("EMPTY * 10") == 0


def test_type_mismatch_is_an_error_value():
    out = result('"x" * 2')
    assert out == ErrorValue.of("TYPE")
    assert result("True + 1") == ErrorValue.of("TYPE")


def test_division_by_zero():
    assert result("1 / 0") == ErrorValue.of("DIV0")
    assert result("1.0 / 0") == ErrorValue.of("DIV0")
    assert result("0 ** -1") == ErrorValue.of("DIV0")


def test_error_values_flow_left_to_right():
    assert result('(1 / 0) + ("x" * 2)') == ErrorValue.of("DIV0")
    assert result('("x" * 2) + (1 / 0)') == ErrorValue.of("TYPE")


def test_exponent_guards():
    assert result("2 ** 10") == 1024
    assert result("4 ** 0.5") == 2.0
    assert result("(-4) ** 0.5") == ErrorValue.of("VALUE")  # complex results have no place here
    assert result("2 ** 2000000") == ErrorValue.of("VALUE")  # refuses astronomically large integers
    assert result("1 ** 2000000") == 1
    assert result("2.0 ** 2000") == ErrorValue.of("VALUE")  # float overflow


def test_list_concatenation_is_allowed():
    assert result("[1, 2] + [3]") == [1, 2, 3]


def test_comparisons_are_same_class_only():
    assert result("1 < 2") is True
    assert result("1.5 >= 1.5") is True
    assert result('"a" < "b"') is True
    assert result("1 == 1.0") is True
    assert result('1 == "1"') == ErrorValue.of("TYPE")
    assert result('1 < "2"') == ErrorValue.of("TYPE")
    assert result("True == True") is True
    assert result("True < True") == ErrorValue.of("TYPE")  # booleans have no order
    assert result("True == 1") == ErrorValue.of("TYPE")


def test_empty_equality():
    assert result("EMPTY == EMPTY") is True
    assert result("EMPTY == 0") == ErrorValue.of("TYPE")
    assert result("EMPTY != 0") == ErrorValue.of("TYPE")


def test_date_comparisons():
    prelude = 'a = Date("2020-01-01")\nb = Date("2021-01-01")\n'
    interp = run(prelude + "lt = a < b\neq = a == a\n")
    assert var(interp, "lt") is True
    assert var(interp, "eq") is True


def test_unary_minus():
    assert result("-5") == -5
    assert result("-EMPTY") == 0
    assert result('-"x"') == ErrorValue.of("TYPE")
    assert result("-(1 / 0)") == ErrorValue.of("DIV0")


def test_boolean_operators_short_circuit():
    interp = run(
        """
        hits = []
        def bump():
            hits = hits + [1]
            return True
        a = False and bump()
        b = True or bump()
        """
    )
    assert var(interp, "a") is False
    assert var(interp, "b") is True
    assert var(interp, "hits") == []


def test_boolean_operators_require_booleans():
    with pytest.raises(ScriptError) as exc:
        run("x = 1 and True\n")
    assert exc.value.kind == "TYPE"
    with pytest.raises(ScriptError):
        run("x = not 5\n")


def test_string_literals_and_escapes():
    assert result('"a\\"b\\n"') == 'a"b\n'


def test_list_and_map_literals():
    interp = run('xs = [1, "two", True]\nm = {"a": 1, 2: "b"}\n')
    assert var(interp, "xs") == [1, "two", True]
    assert var(interp, "m") == {"a": 1, 2: "b"}


def test_indexing():
    assert result("[10, 20][1]") == 20
    assert result("[10, 20][-1]") == 20
    assert result('{"k": 5}["k"]') == 5


def test_index_faults_raise():
    with pytest.raises(ScriptError) as exc:
        run("x = [10][5]\n")
    assert exc.value.kind == "REF"
    with pytest.raises(ScriptError) as exc:
        run('x = {"a": 1}["b"]\n')
    assert exc.value.kind == "REF"
    with pytest.raises(ScriptError) as exc:
        run("x = 5[0]\n")
    assert exc.value.kind == "TYPE"


def test_unknown_name_raises():
    with pytest.raises(ScriptError) as exc:
        run("x = nope\n")
    assert exc.value.kind == "NAME"


def test_list_element_assignment():
    interp = run("xs = [1, 2, 3]\nxs[1] = 9\n")
    assert var(interp, "xs") == [1, 9, 3]
    with pytest.raises(ScriptError):
        run("xs = [1]\nxs[4] = 9\n")


def test_map_entry_assignment():
    interp = run('m = {}\nm["k"] = 1\n')
    assert var(interp, "m") == {"k": 1}


# --- statements and control flow ---

def test_if_elif_else():
    interp = run(
        """
        x = 7
        if x > 10:
            kind = "big"
        elif x > 5:
            kind = "mid"
        else:
            kind = "small"
        """
    )
    assert var(interp, "kind") == "mid"


def test_condition_must_be_boolean():
    with pytest.raises(ScriptError) as exc:
        run("if 1:\n    pass\n")
    assert exc.value.kind == "TYPE"


def test_error_condition_raises_its_own_kind():
    with pytest.raises(ScriptError) as exc:
        run("if 1 / 0 > 1:\n    pass\n")
    assert exc.value.kind == "DIV0"


def test_while_loop():
    interp = run("n = 0\nwhile n < 5:\n    n = n + 1\n")
    assert var(interp, "n") == 5


def test_for_iterates_lists_only():
    interp = run("total = 0\nfor x in [1, 2, 3]:\n    total = total + x\n")
    assert var(interp, "total") == 6
    with pytest.raises(ScriptError) as exc:
        run('for x in "abc":\n    pass\n')
    assert exc.value.kind == "TYPE"


def test_for_iterates_a_snapshot():
    interp = run(
        """
        xs = [1, 2]
        seen = []
        for x in xs:
            seen = seen + [x]
            xs = xs + [99]
        """
    )
    assert var(interp, "seen") == [1, 2]


def test_functions_and_returns():
    interp = run(
        """
        def withVAT(net):
            return net * 1.175
        out = withVAT(100)
        """
    )
    assert var(interp, "out") == 117.5


def test_keyword_arguments_bind_by_name():
    interp = run(
        """
        def scale(v, by):
            return v * by
        a = scale(5, 10)
        b = scale(5, by=2)
        """
    )
    assert var(interp, "a") == 50
    assert var(interp, "b") == 10


def test_function_without_return_yields_empty():
    assert result("noop()", prelude="def noop():\n    pass\n") is None


def test_functions_read_globals_but_write_locally():
    interp = run(
        """
        base = 10
        def f():
            base = 99
            return base
        out = f()
        """
    )
    assert var(interp, "out") == 99
    assert var(interp, "base") == 10


def test_recursion_has_a_depth_limit():
    with pytest.raises(ScriptError) as exc:
        run("def f(n):\n    return f(n + 1)\nf(0)\n")
    assert exc.value.kind == "VALUE"


def test_wrong_arity_is_a_value_error():
    with pytest.raises(ScriptError) as exc:
        run("def f(a):\n    return a\nf(1, 2)\n")
    assert exc.value.kind == "VALUE"


def test_script_errors_carry_stack():
    with pytest.raises(ScriptError) as exc:
        run(
            """
            def inner():
                return nope
            def outer():
                return inner()
            outer()
            """,
            section="PRE_FORMULAE",
        )
    frames = exc.value.stack
    assert [f.function for f in frames] == ["<top>", "outer", "inner"]
    assert all(f.section == "PRE_FORMULAE" for f in frames)
    assert frames[-1].line == 3  # the dedented source starts with a blank line


def test_syntax_errors_report_lines():
    with pytest.raises(ScriptSyntaxError) as exc:
        parse_script("x = 1\ny = (\n")
    assert exc.value.line == 2


def test_tab_indentation_rejected():
    with pytest.raises(ScriptSyntaxError):
        parse_script("if True:\n\tx = 1\n")


# --- budgets ---

def test_step_budget_stops_runaway_loops():
    with pytest.raises(BudgetExceeded):
        run("while True:\n    pass\n", limits=ExecutionLimits(step_budget=10_000))


def test_clock_budget_stops_runaway_loops():
    import time

    t0 = time.monotonic()
    with pytest.raises(BudgetExceeded):
        run("while True:\n    pass\n", limits=ExecutionLimits(clock_budget=0.2))
    assert time.monotonic() - t0 < 2.0


# --- builtin functions ---

def test_sum_and_friends():
    assert result("SUM(1, 2, 3)") == 6
    assert isinstance(result("SUM(1, 2)"), int)
    assert result("SUM([1, [2, 3]], 4)") == 10
    assert result('SUM(1, "x", True, EMPTY, 2)') == 3  # non-numbers are passed over
    assert result("AVERAGE(1, 2, 3)") == 2.0
    assert result('AVERAGE("only text")') == ErrorValue.of("DIV0")
    assert result("MIN(4, 2, 9)") == 2
    assert result("MAX(4, 2, 9)") == 9
    assert result('MIN("no numbers here")') == 0
    assert result('COUNT(1, "x", 2.5, True)') == 2


def test_aggregates_propagate_errors():
    assert result("SUM(1, 1 / 0, 3)") == ErrorValue.of("DIV0")
    assert result('COUNT([1, "x" * 2])') == ErrorValue.of("TYPE")


def test_countif_comparisons():
    xs = 'xs = [1, 5, 10, "5", True, EMPTY, 5.0]\n'
    assert result('COUNTIF(xs, ">=5")', xs) == 3
    assert result('COUNTIF(xs, 5)', xs) == 2
    assert result('COUNTIF(xs, "5")', xs) == 2  # numeric criteria match numbers
    assert result('COUNTIF(xs, "<>5")', xs) == 4  # everything else, even other classes
    assert result('COUNTIF(xs, "TRUE")', xs) == 1
    assert result('COUNTIF(["a", "b", "a"], "a")') == 2


def test_countif_needs_a_list():
    with pytest.raises(ScriptError) as exc:
        run('x = COUNTIF(5, ">1")\n')
    assert exc.value.kind == "TYPE"


def test_if_function_is_eager_and_strict():
    assert result("IF(True, 1, 2)") == 1
    assert result("IF(False, 1, 2)") == 2
    assert result("IF(1 > 2, 1, 1 / 0)") == ErrorValue.of("DIV0")  # both branches evaluate
    with pytest.raises(ScriptError) as exc:
        run("x = IF(7, 1, 2)\n")
    assert exc.value.kind == "TYPE"


def test_abs_round_len():
    assert result("ABS(-4)") == 4
    assert result("ABS(EMPTY)") == 0
    assert result("ROUND(2.5)") == 3.0  # halves round away from the banker
    assert result("ROUND(3.14159, 2)") == 3.14
    assert result("ROUND(2.675, 2)") == 2.68
    assert result("ROUND(1234, -2)") == 1200
    assert isinstance(result("ROUND(1234, -2)"), int)
    assert result("ROUND(7, 2)") == 7
    assert result('LEN("abc")') == 3
    assert result("LEN([1, 2])") == 2
    with pytest.raises(ScriptError):
        run('x = ROUND("x")\n')
    with pytest.raises(ScriptError):
        run("x = ROUND(1.5, 0.5)\n")
    with pytest.raises(ScriptError):
        run("x = LEN(5)\n")


def test_concat_renders_scalars():
    assert result('CONCAT("a", 1, True)') == "a1TRUE"
    assert result('CONCAT(2.0, " items")') == "2 items"
    assert result("CONCAT(1 / 0, 2)") == ErrorValue.of("DIV0")
    with pytest.raises(ScriptError):
        run("x = CONCAT([1], 2)\n")


def test_error_and_date_constructors():
    assert result('Error("CYCLE")') == ErrorValue.of("CYCLE")
    assert result('Date("2020-02-29")') == datetime.date(2020, 2, 29)
    with pytest.raises(ScriptError):
        run('x = Error("BOGUS")\n')
    with pytest.raises(ScriptError):
        run('x = Date("not a date")\n')


def test_builtin_names_are_case_insensitive_at_lookup():
    assert result("sum(1, 2)") == 3
    assert result("Sum(1, 2)") == 3


def test_builtins_reject_keyword_arguments():
    with pytest.raises(ScriptError):
        run("x = SUM(total=1)\n")


def test_print_collects_output():
    interp = run('print("hello", 2.0)\nprint(EMPTY)\n')
    assert interp.output == ["hello 2\n", "\n"]


# --- workbook protocol ---

def test_workbook_cells_and_values():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.value = 5
        out = workbook["S"].A1.value
        empty = workbook["S"].Z9.value
        """
    )
    assert var(interp, "out") == 5
    assert var(interp, "empty") is None


def test_unknown_sheet_is_a_name_error():
    with pytest.raises(ScriptError) as exc:
        run('workbook = Workbook("T")\nx = workbook["Missing"].A1.value\n')
    assert exc.value.kind == "NAME"


def test_assigning_empty_clears_a_cell():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.value = 5
        workbook["S"].A1.value = EMPTY
        cells = bounds_union(workbook["S"])
        """
    )
    assert var(interp, "cells") == []


def test_range_is_row_major_and_normalised():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.value = 1
        workbook["S"].B1.value = 2
        workbook["S"].A2.value = 3
        workbook["S"].B2.value = 4
        fwd = workbook["S"].range("A1", "B2")
        rev = workbook["S"].range("B2", "A1")
        """
    )
    assert var(interp, "fwd") == [1, 2, 3, 4]
    assert var(interp, "rev") == [1, 2, 3, 4]


def test_column_and_row_follow_current_bounds():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.value = 1
        workbook["S"].A3.value = 3
        workbook["S"].C1.value = 9
        col = workbook["S"].column("A")
        row = workbook["S"].row(1)
        """
    )
    assert var(interp, "col") == [1, None, 3]
    assert var(interp, "row") == [1, None, 9]


def test_bounds_union_lists_addresses():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("A")
        workbook.add_sheet("B")
        workbook["A"].B2.value = 1
        workbook["B"].C1.value = 2
        cells = bounds_union(workbook["A"], workbook["B"])
        names = sheet_names(workbook)
        """
    )
    assert var(interp, "cells") == ["B1", "C1", "B2", "C2"]
    assert var(interp, "names") == ["A", "B"]


def test_enforced_type_attribute_coerces_writes():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.enforced_type = "INTEGER"
        workbook["S"].A1.value = 42.0
        out = workbook["S"].A1.value
        """
    )
    assert var(interp, "out") == 42
    assert isinstance(var(interp, "out"), int)


def test_nonconforming_write_stores_type_error():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.enforced_type = "NUMBER"
        workbook["S"].A1.value = "seven"
        out = workbook["S"].A1.value
        """
    )
    assert var(interp, "out") == ErrorValue.of("TYPE")


def test_constants_section_marks_constant_cells():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.value = 5
        """,
        section="CONSTANTS",
    )
    sheet = interp.workbook.sheets["S"]
    assert sheet.constant_cells == {(1, 1)}
    assert sheet.overridden == set()


def test_post_formulae_writes_to_constants_mark_overrides():
    interp = Interpreter(ExecutionLimits(), None)
    for section, src in (
        ("CONSTANTS", 'workbook = Workbook("T")\nworkbook.add_sheet("S")\nworkbook["S"].A1.value = 5\n'),
        ("FORMULAE", 'workbook["S"].B1.value = workbook["S"].A1.value * 2\n'),
        ("POST_FORMULAE", 'workbook["S"].A1.value = 42\nworkbook["S"].B1.value = 0\n'),
    ):
        interp.set_section(section)
        interp.exec_statements(parse_script(src), interp.globals)
    sheet = interp.workbook.sheets["S"]
    assert sheet.values[(1, 1)] == 42
    assert sheet.overridden == {(1, 1)}  # only the constant cell counts as overridden


def test_cell_handles_do_not_join_arithmetic():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        x = workbook["S"].A1 + 1
        """
    )
    assert var(interp, "x") == ErrorValue.of("TYPE")


def test_format_attribute_round_trips():
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].A1.value = 1
        workbook["S"].A1.format = "bold;align=right"
        out = workbook["S"].A1.format
        """
    )
    assert var(interp, "out") == "bold;align=right"


# --- CSV loading ---

def test_load_csv_with_header(tmp_path):
    (tmp_path / "sales.csv").write_text("region,amount\nnorth,100\nsouth,50.5\n")
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].load_csv("sales.csv", header=True)
        a1 = workbook["S"].A1.value
        b2 = workbook["S"].B2.value
        b3 = workbook["S"].B3.value
        """,
        data_root=str(tmp_path),
    )
    assert var(interp, "a1") == "region"  # header row text stays verbatim
    assert var(interp, "b2") == 100.0
    assert var(interp, "b3") == 50.5


def test_load_csv_infers_and_skips_blanks(tmp_path):
    (tmp_path / "d.csv").write_text("1,TRUE,2020-01-02\n,x,\n")
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].load_csv("d.csv")
        a1 = workbook["S"].A1.value
        b1 = workbook["S"].B1.value
        c1 = workbook["S"].C1.value
        a2 = workbook["S"].A2.value
        b2 = workbook["S"].B2.value
        """,
        data_root=str(tmp_path),
    )
    assert var(interp, "a1") == 1.0
    assert var(interp, "b1") is True
    assert var(interp, "c1") == datetime.date(2020, 1, 2)
    assert var(interp, "a2") is None  # empty fields stay absent
    assert var(interp, "b2") == "x"


def test_load_csv_missing_file_is_ref(tmp_path):
    with pytest.raises(ScriptError) as exc:
        run(
            'workbook = Workbook("T")\nworkbook.add_sheet("S")\nworkbook["S"].load_csv("gone.csv")\n',
            data_root=str(tmp_path),
        )
    assert exc.value.kind == "REF"


def test_load_csv_cannot_escape_data_root(tmp_path):
    inner = tmp_path / "inner"
    inner.mkdir()
    (tmp_path / "secret.csv").write_text("1\n")
    for path in ("../secret.csv", "/etc/passwd"):
        with pytest.raises(ScriptError) as exc:
            run(
                f'workbook = Workbook("T")\nworkbook.add_sheet("S")\nworkbook["S"].load_csv("{path}")\n',
                data_root=str(inner),
            )
        assert exc.value.kind == "REF"


def test_load_csv_replaces_prior_grid(tmp_path):
    (tmp_path / "d.csv").write_text("7\n")
    interp = run(
        """
        workbook = Workbook("T")
        workbook.add_sheet("S")
        workbook["S"].Z9.value = 1
        workbook["S"].load_csv("d.csv")
        cells = bounds_union(workbook["S"])
        """,
        data_root=str(tmp_path),
    )
    assert var(interp, "cells") == ["A1"]
