import pytest

from spinvertex.models import make_model

# the model set used throughout the identity tests
MODEL_SPECS = (
    [("potts", dict(n=n)) for n in (2, 3, 4, 5)]
    + [("at", dict(xi=0.3, q=0.15)), ("at_iso", dict(xi=0.4))]
    + [("fz", dict(n=n)) for n in (2, 3, 4, 5)]
    + [("km", dict(n=n, q=0.2)) for n in (2, 3, 4)]
)


def spec_id(spec):
    name, kw = spec
    return name + "-" + "-".join(f"{k}{v}" for k, v in kw.items())


@pytest.fixture(params=MODEL_SPECS, ids=[spec_id(s) for s in MODEL_SPECS])
def model(request):
    name, kw = request.param
    return make_model(name, **kw)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record ``(number, title, ok, detail)`` for the acceptance summary."""
    def record(number, title, ok, detail):
        _ACCEPTANCE[number] = (title, ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} [{detail}]")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number}. {title} [{detail}]")
