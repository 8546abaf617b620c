import pytest

from propsearch.evaluators import build_e2_table, build_e3_table, make_evaluator

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def e2_table():
    return build_e2_table(10)


@pytest.fixture(scope="session")
def e3_table():
    return build_e3_table(11)


@pytest.fixture(scope="session")
def evaluators(e2_table, e3_table):
    from propsearch.evaluators import Evaluator, EvaluatorTag

    return {
        "e1": make_evaluator("e1"),
        "e2": Evaluator(EvaluatorTag.E2, e2_table),
        "e3": Evaluator(EvaluatorTag.E3, e3_table),
        "exact": make_evaluator("exact"),
    }


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
