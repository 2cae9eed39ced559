import random
import sys
import textwrap
from dataclasses import replace

import pytest

from codeplan import LinkProfile, Placement, Scenario, ServiceProfile

MS = 1e-3


def make_scenario(local_c, host_c=None, b_l=4, b_h=4, s=2, a=0.0, link=(0.0, 0.0),
                  skip_link=(0.0, 0.0), n_f=100):
    local = ServiceProfile.from_costs("local", [(a, c) for c in local_c], b_l, 0.9)
    host = None
    if host_c is not None:
        host = ServiceProfile.from_costs("host", [(a, c) for c in host_c], b_h)
    return Scenario(
        local=local,
        host=host,
        entry_link=LinkProfile(*link),
        exit_link=LinkProfile(*link),
        skip_link=LinkProfile(*skip_link, placement=Placement.ON_LOCAL),
        offload_count_s=s,
        n_f=n_f,
    )


def random_scenario(rng: random.Random, n_local=None, n_host=None, cheap_links=True):
    """Random scenario whose admissible set is never empty.

    Skip links are cheap relative to every block, so skipping any middle
    block always beats the original model.
    """
    n_l = n_local or rng.randint(3, 6)
    n_h = n_host if n_host is not None else rng.randint(1, 6)
    b_l = rng.randint(2, 48)
    s = rng.randint(1, b_l)
    local = [(rng.uniform(0, 0.2) * MS, rng.uniform(0.01, 0.1) * MS) for _ in range(n_l)]
    host = [(rng.uniform(0, 0.2) * MS, rng.uniform(0.001, 0.1) * MS) for _ in range(n_h)]
    link_scale = 1e-5 if cheap_links else 1.0
    lk = lambda: LinkProfile(rng.uniform(0, 0.05) * MS * link_scale, rng.uniform(0, 0.01) * MS * link_scale)
    return Scenario(
        local=ServiceProfile.from_costs("local", local, b_l, rng.uniform(0.6, 0.95)),
        host=ServiceProfile.from_costs("host", host, rng.randint(1, 48)) if n_h else None,
        entry_link=lk(),
        exit_link=lk(),
        skip_link=LinkProfile(0.0, rng.uniform(0, 1e-4) * MS, Placement.ON_LOCAL),
        offload_count_s=s,
        scenario_id=f"rand{rng.random():.6f}",
    )


def scale_times(sc: Scenario, f: float) -> Scenario:
    """Same scenario with every block and link cost multiplied by f."""

    def svc(s):
        if s is None:
            return None
        blocks = tuple(
            replace(b, fixed_cost_a=b.fixed_cost_a * f, per_sample_cost_c=b.per_sample_cost_c * f)
            for b in s.blocks
        )
        return replace(s, blocks=blocks)

    def link(lk):
        return replace(lk, fixed_cost_a=lk.fixed_cost_a * f, per_sample_cost_c=lk.per_sample_cost_c * f)

    return replace(
        sc,
        local=svc(sc.local),
        host=svc(sc.host),
        entry_link=link(sc.entry_link),
        exit_link=link(sc.exit_link),
        skip_link=link(sc.skip_link),
        skip_overrides={k: link(v) for k, v in sc.skip_overrides.items()},
    )


@pytest.fixture
def stub_script(tmp_path):
    """Write a small Python oracle stub and return its command line."""

    def _make(body: str):
        fname = tmp_path / "stub.py"
        fname.write_text(textwrap.dedent(body))
        return [sys.executable, str(fname)]

    return _make


# one summary line per acceptance criterion, aggregated over its checks
_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test checks")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    n, title = marks
    entry = _criteria.setdefault(n, {"title": title, "failed": [], "checks": 0})
    entry["checks"] += 1
    if report.failed:
        entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {n}: {status}  {e['title']} ({e['checks']} checks)"
        if e["failed"]:
            line += "  failing: " + ", ".join(e["failed"])
        terminalreporter.write_line(line)
