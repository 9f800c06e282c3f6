from gradual_sensitivity.cli.repl import HELP, Repl
from gradual_sensitivity.io.settings import GsensSettings


def session():
    return Repl(GsensSettings())


def test_expression_is_evaluated():
    assert session().execute("1 + 2") == "3 : Number  (monitored: ∅)"


def test_declarations_persist():
    repl = session()
    assert repl.execute("let res r = 3") is None
    assert repl.execute("def double(res n: Number): Number[2n] = n + n;") is None
    assert repl.execute("double(r)") == "6 : Number[2r]  (monitored: 2r)"
    assert len(repl.declarations) == 2


def test_type_command_accepts_open_resources():
    result = session().execute(":type fn (x: Number[1r]) => x + x")
    assert result == "Number[r] -> Number[2r]"


def test_trace_command():
    lines = session().execute(":trace 1 + 2").splitlines()
    assert lines[0].startswith("#")
    assert any(" r-op " in line for line in lines)
    assert lines[-1] == "3 : Number  (monitored: ∅)"


def test_errors_are_printed_not_raised():
    repl = session()
    assert "unbound variable 'z'" in repl.execute("z + 1")
    assert repl.execute("let y = true + 1").startswith("1:")
    assert repl.declarations == []
    repl.execute("let res r = 1")
    failure = repl.execute("((r + r) :: Number[?r]) :: Number[1r]")
    assert failure.startswith("runtime error SensitivityViolation")


def test_commands():
    repl = session()
    assert repl.execute(":help") == HELP
    assert "unknown command" in repl.execute(":nope")
    assert repl.execute("") is None
    assert repl.execute(":quit") is None
    assert repl.finished


def test_loop_stops_at_end_of_input():
    lines = iter(["1 + 1", "let x = 2;", "x * x"])
    written = []

    def read(prompt):
        try:
            return next(lines)
        except StopIteration:
            raise EOFError from None

    session().loop(read=read, write=written.append)
    assert written == ["2 : Number  (monitored: ∅)", "4 : Number  (monitored: ∅)"]
