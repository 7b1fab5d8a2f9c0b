import pytest

from tcpalgebra import Alphabet, Fix, Star, Tensor, builtin_wire, load_model

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def abc():
    return Alphabet(("tau", "l", "u"))


@pytest.fixture(scope="session")
def dinphil():
    return load_model("dinphil.tcp")


@pytest.fixture(scope="session")
def ph(dinphil):
    """ph(i) is the philosopher in state i."""
    base = dinphil["Ph"]
    return lambda i: Fix(i, base.bindings)


@pytest.fixture(scope="session")
def fk(dinphil):
    base = dinphil["Fk"]
    return lambda i: Fix(i, base.bindings)


@pytest.fixture(scope="session")
def ring(abc):
    """ring(a, b, c, d): the two-philosopher ring with the given components."""

    def build(a, b, c, d):
        chain = Star(Star(a, b), Star(c, d))
        eta, ident, eps = (builtin_wire(n, abc) for n in ("eta", "id", "eps"))
        return Star(Star(eta, Tensor(chain, ident)), eps)

    return build


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
