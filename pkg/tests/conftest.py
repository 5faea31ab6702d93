import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ksnorms.measures import VectorMeasure, build_family
from ksnorms.spaces import NormTag, Provenance, SpaceDesc, build_candidates

settings.register_profile(
    "ksnorms", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ksnorms")

# Dyadic rationals in [-4, 4] keep sums exactly representable.
dyadic = st.integers(-32, 32).map(lambda k: k / 8.0)
tags = st.sampled_from(list(NormTag))


@st.composite
def spaces(draw, max_dim=4):
    return SpaceDesc(draw(st.integers(1, max_dim)), draw(tags))


@st.composite
def measures(draw, min_atoms=1, max_atoms=6, max_dim=4):
    space = draw(spaces(max_dim))
    m = draw(st.integers(min_atoms, max_atoms))
    vals = draw(st.lists(st.lists(dyadic, min_size=space.dim, max_size=space.dim),
                         min_size=m, max_size=m))
    return VectorMeasure(space, tuple(f"a{i}" for i in range(m)), np.array(vals))


@st.composite
def subsets(draw, m):
    return draw(st.integers(0, (1 << m) - 1))


@st.composite
def functions(draw, m):
    return np.array(draw(st.lists(dyadic, min_size=m, max_size=m)))


@st.composite
def instances(draw, max_atoms=6):
    """``(mu, fam, D, f, g)`` with a full all-subsets family and extreme-point candidates."""
    mu = draw(measures(min_atoms=1, max_atoms=max_atoms))
    kind = draw(st.sampled_from(["all_subsets", "dyadic"]))
    fam = build_family(mu, kind, check=False)
    D = build_candidates(mu.space, Provenance.EXTREME_POINTS, 16, draw(st.integers(0, 99)))
    return mu, fam, D, draw(functions(mu.m)), draw(functions(mu.m))


exponents = st.one_of(st.sampled_from([1.0, 2.0, 3.0, np.inf]), st.floats(1.0, 12.0))


# ---- acceptance summary: one PASS/FAIL line per criterion

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, ok, detail)``; lines are printed in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(criterion: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}" + (f"  ({detail})" if detail else "")
        lines.append((criterion, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
