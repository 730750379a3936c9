import os

import hypothesis
import pytest

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False, help="run hours-scale rows")


def pytest_configure(config):
    config.addinivalue_line("markers", "extended: hours-scale runs, enabled by --extended")
    config.addinivalue_line("markers", "slow: minutes-scale pipeline runs")
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="needs --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session", autouse=True)
def _cache_root(tmp_path_factory):
    # keep the on-disk caches of a test session apart from the user's
    root = tmp_path_factory.mktemp("cache")
    old = os.environ.get("CRITPOLY_CACHE_DIR")
    os.environ["CRITPOLY_CACHE_DIR"] = str(root)
    yield root
    if old is None:
        os.environ.pop("CRITPOLY_CACHE_DIR", None)
    else:
        os.environ["CRITPOLY_CACHE_DIR"] = old


_RUNS = {}


@pytest.fixture(scope="session")
def critical():
    """critical(label, algorithm="dense") -> CriticalPolynomial, computed once per session."""
    from critpoly import PipelineConfig, compute_critical, load_curve

    def get(label, algorithm="dense"):
        key = (label, algorithm)
        if key not in _RUNS:
            _RUNS[key] = compute_critical(load_curve(label), PipelineConfig(algorithm=algorithm))
        return _RUNS[key]

    return get


# -- one summary line per acceptance criterion ------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_collection_finish(session):
    for item in session.items:
        mark = item.get_closest_marker("criterion")
        if mark:
            n, title = mark.args
            _CRITERIA.setdefault(n, {"title": title, "outcomes": {}})["outcomes"][item.nodeid] = None


def pytest_runtest_logreport(report):
    for entry in _CRITERIA.values():
        if report.nodeid not in entry["outcomes"]:
            continue
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            entry["outcomes"][report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        outs = list(entry["outcomes"].values())
        if any(o == "failed" for o in outs):
            status = "FAIL"
        elif outs and all(o == "skipped" for o in outs):
            status = "SKIP"
        elif all(o in ("passed", "skipped") for o in outs):
            status = "PASS"
        else:
            status = "NOT RUN"
        done = sum(o == "passed" for o in outs)
        terminalreporter.write_line(f"criterion {n}: {status} ({done}/{len(outs)} tests) {entry['title']}")
