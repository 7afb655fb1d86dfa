"""Property tests over randomly drawn inputs."""
import json
import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from spinvertex import checks
from spinvertex.errors import PoleError
from spinvertex.models import make_model
from spinvertex.report import Report, dumps_report
from spinvertex.checks import CheckResult
from spinvertex.sampling import SplitMix64
from spinvertex.special import potts_f, potts_gamma, theta_eval
from spinvertex.vertex import permutator

small = st.floats(-0.12, 0.12, allow_nan=False)
rapidity = st.builds(complex, small, small)
nomes = st.floats(0.0, 0.6)
MODELS = {
    "potts3": make_model("potts", n=3),
    "potts5": make_model("potts", n=5),
    "at": make_model("at", xi=0.3, q=0.15),
    "at_iso": make_model("at_iso", xi=0.4),
    "fz4": make_model("fz", n=4),
    "km3": make_model("km", n=3, q=0.2),
}
model_names = st.sampled_from(sorted(MODELS))


@given(st.builds(complex, st.floats(-2, 2), st.floats(-0.5, 0.5)), nomes)
def test_theta_parity(z, q):
    assert abs(theta_eval(1, -z, q) + theta_eval(1, z, q)) < 1e-12
    for kind in (2, 3, 4):
        assert abs(theta_eval(kind, -z, q) - theta_eval(kind, z, q)) < 1e-12


@given(st.integers(2, 9))
def test_potts_f_symmetric_point(n):
    assert abs(potts_f(n, potts_gamma(n) / 2) - 1) < 1e-12


@given(st.integers(2, 5), st.data())
def test_permutator_swaps(n, data):
    vec = st.lists(st.floats(-10, 10), min_size=n, max_size=n)
    u, v = np.array(data.draw(vec)), np.array(data.draw(vec))
    assert np.allclose(permutator(n) @ np.kron(u, v), np.kron(v, u))


def _safe(model, *pts):
    for p in pts:
        if np.min(np.abs(model.denominators(p))) < 1e-6:
            return False
        if np.min(np.abs(model.horizontal(p))) < 1e-6:
            return False
    return True


@settings(max_examples=40, deadline=None)
@given(model_names, rapidity, rapidity, rapidity)
def test_identities_hold(name, x, y, z):
    m = MODELS[name]
    pts = (x, y, z, -x, -y, x - y, y - x, x - z, y - z, z - x, z - y)
    try:
        assume(_safe(m, *pts))
    except PoleError:
        assume(False)
    assert checks.check_star_triangle(m, x, y).residual < 1e-9
    assert checks.check_inversion(m, x).residual < 1e-9
    assert checks.check_unitarity(m, x, y).residual < 1e-9
    assert checks.check_ybe(m, x, y, z).residual < 1e-9
    assert checks.check_ybe_reduced(m, x, y, z).residual < 1e-9


@settings(max_examples=20, deadline=None)
@given(model_names, rapidity, rapidity)
def test_transfer_matrices_commute(name, x, y):
    m = MODELS[name]
    L = 2 if m.n >= 4 else 3
    assert checks.check_transfer_commutation(m, x, y, L).residual < 1e-9


@given(st.integers(0, 2**64 - 1))
def test_splitmix_uniform_in_unit_interval(seed):
    rng = SplitMix64(seed)
    u = [rng.uniform() for _ in range(8)]
    assert all(0 <= v < 1 for v in u)


@given(st.floats(allow_nan=False, allow_infinity=False), st.floats(allow_nan=False, allow_infinity=False))
def test_complex_serialization_round_trip(re, im):
    rep = Report(config={}, records=[CheckResult("c", "m", {"x": complex(re, im)}, 0.0, 1.0)])
    back = json.loads(dumps_report(rep))["records"][0]["inputs"][0]["value"]
    assert complex(*back) == complex(re, im)
